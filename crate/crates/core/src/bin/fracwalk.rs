use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracwalk::cli::{self, Command, Settings, VerifyTarget};

#[derive(Parser)]
#[command(name = "fracwalk", version, about = "Continuous-time random walks and their fractional diffusion limits")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// key=value settings file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Extra setting, repeatable: --set key=value
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate a walker ensemble
    Simulate {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        jump: Option<String>,
        #[arg(long)]
        wait: Option<String>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        n_walkers: Option<u64>,
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Tabulate the limit density and distribution function
    Solve {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Check transform asymptotics, the Montroll-Weiss limit, or an ensemble
    Verify {
        /// lemma1, lemma2, mw or ks
        target: String,
        #[arg(long)]
        jump: Option<String>,
        #[arg(long)]
        wait: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// KS distance to the limit law over a sequence of scales
    Converge {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        jump: Option<String>,
        #[arg(long)]
        wait: Option<String>,
        #[arg(long)]
        n_walkers: Option<u64>,
    },
    /// Draw from one law and estimate its tail index
    Sample {
        #[arg(long)]
        jump: Option<String>,
        #[arg(long)]
        wait: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
}

fn put<T: ToString>(s: &mut Settings, key: &str, v: Option<T>) {
    if let Some(v) = v {
        s.set(key, v.to_string());
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args) {
        Ok(manifest) => {
            for f in &manifest.outputs {
                println!("{f}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fracwalk: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}

fn run(args: Cli) -> fracwalk::Result<cli::RunManifest> {
    let g = args.global;
    let mut s = match &g.config {
        Some(p) => Settings::load(p)?,
        None => Settings::default(),
    };
    for kv in &g.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| fracwalk::Error::Usage(format!("--set expects key=value, got '{kv}'")))?;
        s.set(k.trim(), v.trim());
    }
    put(&mut s, "seed", g.seed);
    let command = match args.command {
        Cmd::Simulate { preset, jump, wait, h, n_walkers, t_max } => {
            put(&mut s, "preset", preset);
            put(&mut s, "jump", jump);
            put(&mut s, "wait", wait);
            put(&mut s, "h", h);
            put(&mut s, "n_walkers", n_walkers);
            put(&mut s, "t_max", t_max);
            Command::Simulate
        }
        Cmd::Solve { alpha, beta, t } => {
            put(&mut s, "alpha", alpha);
            put(&mut s, "beta", beta);
            put(&mut s, "t", t);
            Command::Solve
        }
        Cmd::Verify { target, jump, wait, input } => {
            put(&mut s, "jump", jump);
            put(&mut s, "wait", wait);
            put(&mut s, "input", input.map(|p| p.display().to_string()));
            Command::Verify(target.parse::<VerifyTarget>()?)
        }
        Cmd::Converge { preset, jump, wait, n_walkers } => {
            put(&mut s, "preset", preset);
            put(&mut s, "jump", jump);
            put(&mut s, "wait", wait);
            put(&mut s, "n_walkers", n_walkers);
            Command::Converge
        }
        Cmd::Sample { jump, wait, n } => {
            put(&mut s, "jump", jump);
            put(&mut s, "wait", wait);
            put(&mut s, "n", n);
            Command::Sample
        }
    };
    cli::run(command, s, &g.out)
}
