//! Run orchestration behind the `fracwalk` binary: flat `key=value`
//! settings, the five commands, and the run manifest.
//!
//! Each run writes its artifacts and one `manifest.json` into the output
//! directory. Apart from `wall_time`, reruns with equal settings produce
//! byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::asymptotics::{self, LemmaConstants, LemmaReport, ScalingPair};
use crate::ctrw::{self, WalkConfig};
use crate::error::{Error, Result};
use crate::greenfn::{self, CdfTable, GreenFunction};
use crate::laws::{JumpLaw, WaitingLaw};
use crate::rng::WalkerStream;
use crate::specfun::{OrderBeta, StabilityAlpha};
use crate::stats::{self, SampleSet};

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numerical { .. } => 3,
        _ => 2,
    }
}

/// Flat `key=value` settings; later assignments win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parse `key=value` lines; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Self::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("config line {}: expected key=value, got '{line}'", no + 1)))?;
            s.set(k.trim(), v.trim());
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Usage(format!("invalid value for '{key}': '{v}'")))
            })
            .transpose()
    }

    fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| Error::Usage(format!("missing required setting '{key}'")))
    }

    fn list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Usage(format!("invalid number '{x}' in '{key}'")))
                })
                .collect(),
        }
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Usage(format!("unknown setting '{k}'"))),
            None => Ok(()),
        }
    }

    fn jump(&self) -> Result<JumpLaw> {
        self.require::<String>("jump")?.parse()
    }

    fn wait(&self) -> Result<WaitingLaw> {
        self.require::<String>("wait")?.parse()
    }

    fn orders(&self) -> Result<(StabilityAlpha, OrderBeta)> {
        let usage = |e: Error| Error::Usage(e.to_string());
        let a = StabilityAlpha::new(self.require("alpha")?).map_err(usage)?;
        let b = OrderBeta::new(self.require("beta")?).map_err(usage)?;
        Ok((a, b))
    }
}

/// Scenario presets for the four diffusion regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Figure1,
    Figure2,
    Figure3,
    Figure4,
}

impl Preset {
    pub const NOTE: &'static str =
        "preset orders and scales are artifact choices; only the regimes are prescribed";

    pub fn laws(self) -> (&'static str, &'static str) {
        match self {
            Preset::Figure1 => ("gauss", "exp"),
            Preset::Figure2 => ("gauss", "cpow:0.5"),
            Preset::Figure3 => ("cpow:1.5", "exp"),
            Preset::Figure4 => ("cpow:1.5", "cpow:0.5"),
        }
    }

    /// Fill in preset values for keys not already set.
    fn apply(self, s: &mut Settings) {
        let (jump, wait) = self.laws();
        for (k, v) in [
            ("jump", jump),
            ("wait", wait),
            ("h", "0.05"),
            ("t_max", "1"),
            ("n_walkers", "1000"),
            ("trajectories", "1"),
        ] {
            if !s.contains(k) {
                s.set(k, v);
            }
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "figure1" => Ok(Preset::Figure1),
            "figure2" => Ok(Preset::Figure2),
            "figure3" => Ok(Preset::Figure3),
            "figure4" => Ok(Preset::Figure4),
            _ => Err(Error::Usage(format!("unknown preset '{s}'"))),
        }
    }
}

/// Record of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_echo: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
    pub wall_time: f64,
}

/// What `verify` checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyTarget {
    Lemma1,
    Lemma2,
    Mw,
    Ks,
}

impl FromStr for VerifyTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma1" => Ok(Self::Lemma1),
            "lemma2" => Ok(Self::Lemma2),
            "mw" => Ok(Self::Mw),
            "ks" => Ok(Self::Ks),
            _ => Err(Error::Usage(format!("unknown verify target '{s}'"))),
        }
    }
}

/// A command with its resolved settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Solve,
    Verify(VerifyTarget),
    Converge,
    Sample,
}

impl Command {
    fn name(self) -> String {
        match self {
            Command::Simulate => "simulate".into(),
            Command::Solve => "solve".into(),
            Command::Verify(t) => format!(
                "verify {}",
                match t {
                    VerifyTarget::Lemma1 => "lemma1",
                    VerifyTarget::Lemma2 => "lemma2",
                    VerifyTarget::Mw => "mw",
                    VerifyTarget::Ks => "ks",
                }
            ),
            Command::Converge => "converge".into(),
            Command::Sample => "sample".into(),
        }
    }
}

struct Outputs<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl<'a> Outputs<'a> {
    fn create(&mut self, name: &str) -> Result<BufWriter<fs::File>> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(fs::File::create(self.dir.join(name))?))
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

/// Run `command` with `settings`, writing artifacts into `out_dir`.
pub fn run(command: Command, mut settings: Settings, out_dir: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    let mut notes = Vec::new();
    if let Some(p) = settings.get::<String>("preset")? {
        p.parse::<Preset>()?.apply(&mut settings);
        notes.push(Preset::NOTE.to_string());
    }
    // validate before touching the filesystem
    let plan = Plan::new(command, &settings)?;
    fs::create_dir_all(out_dir)?;
    let mut out = Outputs {
        dir: out_dir,
        files: Vec::new(),
    };
    plan.execute(&mut out, &mut notes)?;
    let mut manifest = RunManifest {
        command: command.name(),
        config_echo: settings.values.clone(),
        seed: settings.get("seed")?,
        outputs: out.files.clone(),
        notes,
        wall_time: 0.0,
    };
    manifest.outputs.push("manifest.json".into());
    manifest.wall_time = started.elapsed().as_secs_f64();
    let mut w = BufWriter::new(fs::File::create(out_dir.join("manifest.json"))?);
    serde_json::to_writer_pretty(&mut w, &manifest)?;
    writeln!(w)?;
    w.flush()?;
    Ok(manifest)
}

const WALK_KEYS: &[&str] = &[
    "preset", "jump", "wait", "h", "tau", "t_max", "n_walkers", "seed", "times", "trajectories",
];

/// Settings checked and laws parsed, ready to run.
enum Plan {
    Simulate { config: WalkConfig, times: Vec<f64>, trajectories: u64 },
    Solve { alpha: StabilityAlpha, beta: OrderBeta, t: f64, x_max: f64, n_points: usize },
    Lemma1(JumpLaw),
    Lemma2(WaitingLaw),
    Mw { jump: JumpLaw, wait: WaitingLaw, kappa: f64, s: f64, hs: Vec<f64> },
    Ks { input: PathBuf, t: Option<f64>, alpha: StabilityAlpha, beta: OrderBeta },
    Converge { jump: JumpLaw, wait: WaitingLaw, hs: Vec<f64>, t: f64, n_walkers: u64, seed: u64 },
    SampleJump { law: JumpLaw, n: usize, k: Option<usize>, seed: u64 },
    SampleWait { law: WaitingLaw, n: usize, k: Option<usize>, seed: u64 },
}

fn scaled_pair(jump: &JumpLaw, wait: &WaitingLaw, h: f64, tau: Option<f64>) -> Result<ScalingPair> {
    match tau {
        Some(tau) => ScalingPair::new(h, tau),
        None => {
            let lc = LemmaConstants::for_laws(jump, wait)?;
            asymptotics::scaling_tau(h, &lc, jump.alpha(), wait.beta())
        }
    }
}

fn as_usage(e: Error) -> Error {
    match e {
        Error::Domain(m) => Error::Usage(m),
        other => other,
    }
}

impl Plan {
    fn new(command: Command, s: &Settings) -> Result<Self> {
        Self::build(command, s).map_err(as_usage)
    }

    fn build(command: Command, s: &Settings) -> Result<Self> {
        match command {
            Command::Simulate => {
                s.reject_unknown(WALK_KEYS)?;
                let jump = s.jump()?;
                let wait = s.wait()?;
                let pair = scaled_pair(&jump, &wait, s.require("h")?, s.get("tau")?)?;
                let config = WalkConfig::new(
                    jump,
                    wait,
                    pair,
                    s.get_or("t_max", 1.0)?,
                    s.get_or("n_walkers", 1000)?,
                    s.get_or("seed", 0)?,
                )?;
                let times = s.list("times", &[config.t_max.min(1.0)])?;
                Ok(Plan::Simulate {
                    config,
                    times,
                    trajectories: s.get_or("trajectories", 1)?,
                })
            }
            Command::Solve => {
                s.reject_unknown(&["alpha", "beta", "t", "x_max", "n_points", "seed"])?;
                let (alpha, beta) = s.orders()?;
                Ok(Plan::Solve {
                    alpha,
                    beta,
                    t: s.get_or("t", 1.0)?,
                    x_max: s.get_or("x_max", 10.0)?,
                    n_points: s.get_or("n_points", 201)?,
                })
            }
            Command::Verify(VerifyTarget::Lemma1) => {
                s.reject_unknown(&["jump", "seed"])?;
                Ok(Plan::Lemma1(s.jump()?))
            }
            Command::Verify(VerifyTarget::Lemma2) => {
                s.reject_unknown(&["wait", "seed"])?;
                Ok(Plan::Lemma2(s.wait()?))
            }
            Command::Verify(VerifyTarget::Mw) => {
                s.reject_unknown(&["jump", "wait", "kappa", "s", "h_list", "seed"])?;
                Ok(Plan::Mw {
                    jump: s.jump()?,
                    wait: s.wait()?,
                    kappa: s.get_or("kappa", 1.0)?,
                    s: s.get_or("s", 1.0)?,
                    hs: s.list("h_list", &[1e-1, 1e-2, 1e-3])?,
                })
            }
            Command::Verify(VerifyTarget::Ks) => {
                s.reject_unknown(&["input", "t", "alpha", "beta", "jump", "wait", "seed"])?;
                let (alpha, beta) = if s.contains("alpha") || s.contains("beta") {
                    s.orders()?
                } else {
                    (s.jump()?.alpha(), s.wait()?.beta())
                };
                Ok(Plan::Ks {
                    input: s.require::<String>("input")?.into(),
                    t: s.get("t")?,
                    alpha,
                    beta,
                })
            }
            Command::Converge => {
                s.reject_unknown(&["preset", "jump", "wait", "h_list", "t", "n_walkers", "seed"])?;
                Ok(Plan::Converge {
                    jump: s.jump()?,
                    wait: s.wait()?,
                    hs: s.list("h_list", &[0.5, 0.2, 0.1])?,
                    t: s.get_or("t", 1.0)?,
                    n_walkers: s.get_or("n_walkers", 100_000)?,
                    seed: s.get_or("seed", 0)?,
                })
            }
            Command::Sample => {
                s.reject_unknown(&["jump", "wait", "n", "k", "seed"])?;
                let n = s.get_or("n", 100_000)?;
                let k = s.get("k")?;
                let seed = s.get_or("seed", 0)?;
                match (s.contains("jump"), s.contains("wait")) {
                    (true, false) => Ok(Plan::SampleJump { law: s.jump()?, n, k, seed }),
                    (false, true) => Ok(Plan::SampleWait { law: s.wait()?, n, k, seed }),
                    _ => Err(Error::Usage("sample needs exactly one of 'jump' or 'wait'".into())),
                }
            }
        }
    }

    fn execute(&self, out: &mut Outputs, notes: &mut Vec<String>) -> Result<()> {
        match self {
            Plan::Simulate {
                config,
                times,
                trajectories,
            } => {
                let snaps = ctrw::ensemble_snapshots(config, times)?;
                let mut w = out.create("ensemble.csv")?;
                ctrw::write_ensemble_csv(&mut w, times, &snaps)?;
                w.flush()?;
                for id in 0..(*trajectories).min(config.n_walkers) {
                    let traj = ctrw::simulate_walk(config, id)?;
                    let mut w = out.create(&format!("trajectory_{id}.csv"))?;
                    writeln!(w, "t,x")?;
                    for (t, x) in ctrw::trajectory_csv(&traj) {
                        writeln!(w, "{t},{x}")?;
                    }
                    w.flush()?;
                }
                notes.push(format!("tau = {}", config.scale.tau));
            }
            Plan::Solve {
                alpha,
                beta,
                t,
                x_max,
                n_points,
            } => {
                let grid = greenfn::build_grid(*alpha, *beta, *t, *x_max, *n_points).map_err(as_usage)?;
                let mut w = out.create("green.csv")?;
                grid.write_csv(&mut w)?;
                w.flush()?;
                out.json("green.json", &grid.metadata())?;
            }
            Plan::Lemma1(jump) => {
                let lc = LemmaConstants {
                    mu: LemmaConstants::mu_of(jump)?,
                    lambda: 1.0,
                };
                let rep = asymptotics::verify_lemma1(jump, &lc, jump.alpha())?;
                write_report(out, "lemma1", &rep, serde_json::json!({ "jump": jump.to_string(), "mu": lc.mu }))?;
            }
            Plan::Lemma2(wait) => {
                let lc = LemmaConstants {
                    mu: 1.0,
                    lambda: LemmaConstants::lambda_of(wait)?,
                };
                let rep = asymptotics::verify_lemma2(wait, &lc, wait.beta())?;
                write_report(out, "lemma2", &rep, serde_json::json!({ "wait": wait.to_string(), "lambda": lc.lambda }))?;
            }
            Plan::Mw {
                jump,
                wait,
                kappa,
                s: lap,
                hs,
            } => {
                let limit = asymptotics::mw_limit(jump.alpha(), wait.beta(), *kappa, *lap);
                let mut w = out.create("mw.csv")?;
                writeln!(w, "h,tau,value,limit,error")?;
                let mut errors = Vec::new();
                for &h in hs {
                    let pair = scaled_pair(jump, wait, h, None)?;
                    let v = asymptotics::mw_rescaled(jump, wait, &pair, *kappa, *lap)?;
                    let e = (v - limit).abs();
                    writeln!(w, "{h},{},{v},{limit},{e}", pair.tau)?;
                    errors.push(e);
                }
                w.flush()?;
                let decreasing = errors.windows(2).all(|p| p[1] < p[0]);
                out.json(
                    "mw.json",
                    &serde_json::json!({
                        "jump": jump.to_string(),
                        "wait": wait.to_string(),
                        "kappa": kappa,
                        "s": lap,
                        "limit": limit,
                        "errors": errors,
                        "decreasing": decreasing,
                    }),
                )?;
            }
            Plan::Ks { input, t, alpha, beta } => {
                let xs = read_ensemble(input, *t)?;
                let green = GreenFunction::new(*alpha, *beta)?;
                let time = match t {
                    Some(t) => *t,
                    None => xs.0,
                };
                let sample = SampleSet::new(xs.1)?;
                let r = ks_against_green(&green, time, &sample)?;
                out.json(
                    "ks.json",
                    &serde_json::json!({
                        "statistic": r.statistic,
                        "n": r.n,
                        "threshold_1pct": r.threshold_1pct,
                        "pass": r.passes(),
                    }),
                )?;
            }
            Plan::Converge {
                jump,
                wait,
                hs,
                t,
                n_walkers,
                seed,
            } => {
                let rows = converge(jump, wait, hs, *t, *n_walkers, *seed)?;
                let mut w = out.create("converge.csv")?;
                writeln!(w, "h,tau,ks,threshold_1pct")?;
                for r in &rows {
                    writeln!(w, "{},{},{},{}", r.h, r.tau, r.ks.statistic, r.ks.threshold_1pct)?;
                }
                w.flush()?;
                let decreasing = rows.windows(2).all(|p| p[1].ks.statistic < p[0].ks.statistic);
                out.json(
                    "converge.json",
                    &serde_json::json!({
                        "jump": jump.to_string(),
                        "wait": wait.to_string(),
                        "t": t,
                        "runs": rows,
                        "decreasing": decreasing,
                        "final_below_threshold": rows.last().map(|r| r.ks.passes()),
                    }),
                )?;
            }
            Plan::SampleJump { law, n, k, seed } => {
                let values = draw(*n, *seed, |u| law.sample(u))?;
                write_samples(out, &values, *k, law.to_string(), law.alpha().get())?;
            }
            Plan::SampleWait { law, n, k, seed } => {
                let values = draw(*n, *seed, |u| law.sample(u))?;
                write_samples(out, &values, *k, law.to_string(), law.beta().get())?;
            }
        }
        Ok(())
    }
}

fn write_report(out: &mut Outputs, stem: &str, rep: &LemmaReport, extra: serde_json::Value) -> Result<()> {
    let mut w = out.create(&format!("{stem}.csv"))?;
    w.write_all(rep.to_csv().as_bytes())?;
    w.flush()?;
    out.json(
        &format!("{stem}.json"),
        &serde_json::json!({
            "law": extra,
            "converged": rep.converged,
            "deviation_decreasing_last4": rep.deviation_decreasing(4),
            "final_ratio": rep.ratios.last(),
        }),
    )
}

/// Read `walker,t,x` rows; keep the rows at time `t`, or at the only time
/// present when `t` is not given.
fn read_ensemble(path: &Path, t: Option<f64>) -> Result<(f64, Vec<f64>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read ensemble file {}: {e}", path.display())))?;
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("walker,t,x") {
        return Err(Error::Usage(format!("{}: expected header 'walker,t,x'", path.display())));
    }
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let mut parts = line.split(',');
        let bad = || Error::Usage(format!("{}: malformed row '{line}'", path.display()));
        let _walker = parts.next().ok_or_else(bad)?;
        let rt: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let x: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        rows.push((rt, x));
    }
    let time = match t {
        Some(t) => t,
        None => {
            let first = rows.first().map(|r| r.0).ok_or_else(|| Error::Usage("empty ensemble file".into()))?;
            if rows.iter().any(|r| r.0 != first) {
                return Err(Error::Usage("ensemble holds several times; select one with t".into()));
            }
            first
        }
    };
    let xs: Vec<f64> = rows.into_iter().filter(|r| r.0 == time).map(|r| r.1).collect();
    if xs.is_empty() {
        return Err(Error::Usage(format!("no ensemble rows at t={time}")));
    }
    Ok((time, xs))
}

/// KS distance of `sample` to `u(·, t)` through an interpolated table.
pub fn ks_against_green(green: &GreenFunction, t: f64, sample: &SampleSet) -> Result<stats::KsResult> {
    let spread = t.powf(green.beta().get() / green.alpha().get());
    let table = CdfTable::new(green.clone(), t, 200.0 * spread, 2000, 0.2 * spread)?;
    Ok(stats::ks_statistic(sample, |x| table.eval(x)))
}

/// One row of a convergence experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergeRow {
    pub h: f64,
    pub tau: f64,
    pub ks: stats::KsResult,
}

/// KS distance of the rescaled ensemble at time `t` to the limit law, for
/// each `h` (τ from the scaling relation), all runs sharing one seed.
pub fn converge(
    jump: &JumpLaw,
    wait: &WaitingLaw,
    hs: &[f64],
    t: f64,
    n_walkers: u64,
    seed: u64,
) -> Result<Vec<ConvergeRow>> {
    let green = GreenFunction::new(jump.alpha(), wait.beta())?;
    let spread = t.powf(wait.beta().get() / jump.alpha().get());
    let table = CdfTable::new(green, t, 200.0 * spread, 2000, 0.2 * spread)?;
    hs.iter()
        .map(|&h| {
            let pair = scaled_pair(jump, wait, h, None)?;
            let cfg = WalkConfig::new(jump.clone(), wait.clone(), pair, t, n_walkers, seed)?;
            let sample = SampleSet::new(ctrw::ensemble_positions(&cfg, t)?)?;
            Ok(ConvergeRow {
                h,
                tau: pair.tau,
                ks: stats::ks_statistic(&sample, |x| table.eval(x)),
            })
        })
        .collect()
}

/// `n` i.i.d. draws through `sample`, from walker stream 0 of `seed`.
pub fn draw(n: usize, seed: u64, sample: impl Fn(f64) -> Result<f64>) -> Result<Vec<f64>> {
    let mut stream = WalkerStream::new(seed, 0);
    (0..n).map(|_| sample(stream.next_uniform())).collect()
}

fn write_samples(out: &mut Outputs, values: &[f64], k: Option<usize>, law: String, exponent: f64) -> Result<()> {
    let mut w = out.create("samples.csv")?;
    writeln!(w, "i,value")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(w, "{i},{v}")?;
    }
    w.flush()?;
    let set = SampleSet::new(values.to_vec())?;
    let k = k.unwrap_or_else(|| stats::hill_default_k(values.len()));
    let hill = stats::hill_estimator(&set, k)?;
    out.json(
        "tail.json",
        &serde_json::json!({
            "law": law,
            "n": values.len(),
            "k": k,
            "hill": hill,
            "exponent": exponent,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn settings_parse_and_override() {
        let mut s = Settings::parse("# comment\njump = cpow:1.5\n\nwait=exp  # trailing\n").unwrap();
        assert_eq!(s.raw("jump"), Some("cpow:1.5"));
        assert_eq!(s.raw("wait"), Some("exp"));
        s.set("wait", "cpow:0.5");
        assert_eq!(s.raw("wait"), Some("cpow:0.5"));
        assert!(Settings::parse("no equals sign").is_err());
        assert!(s.get::<f64>("jump").is_err());
        assert_eq!(s.list("h_list", &[1.0]).unwrap(), vec![1.0]);
        s.set("h_list", "0.5, 0.2");
        assert_eq!(s.list("h_list", &[]).unwrap(), vec![0.5, 0.2]);
    }

    #[test]
    fn presets_fill_missing_keys_only() {
        let mut s = Settings::default();
        s.set("h", "0.2");
        Preset::Figure4.apply(&mut s);
        assert_eq!(s.raw("jump"), Some("cpow:1.5"));
        assert_eq!(s.raw("wait"), Some("cpow:0.5"));
        assert_eq!(s.raw("h"), Some("0.2"));
        assert_eq!(Preset::Figure1.laws(), ("gauss", "exp"));
        assert!("figure5".parse::<Preset>().is_err());
    }

    #[test]
    fn invalid_law_token_is_a_usage_error() {
        let mut s = Settings::default();
        s.set("jump", "cpow:2.5");
        let err = Plan::new(Command::Verify(VerifyTarget::Lemma1), &s).err().unwrap();
        assert_eq!(exit_code(&err), 2);
        assert!(err.to_string().contains("'cpow:2.5'"));
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut s = Settings::default();
        s.set("jump", "gauss");
        s.set("jmup", "gauss");
        assert!(Plan::new(Command::Verify(VerifyTarget::Lemma1), &s).is_err());
    }

    #[test]
    fn solve_rejects_out_of_range_orders() {
        let mut s = Settings::default();
        s.set("alpha", "2.5");
        s.set("beta", "1");
        let err = Plan::new(Command::Solve, &s).err().unwrap();
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Usage("x".into())), 2);
        assert_eq!(exit_code(&Error::numerical("x", 1.0)), 3);
    }

    #[test]
    fn simulate_writes_manifest_and_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = Settings::default();
        s.set("preset", "figure4");
        s.set("n_walkers", "200");
        s.set("seed", "7");
        s.set("times", "0.5,1");
        let a = run(Command::Simulate, s.clone(), &dir.path().join("a")).unwrap();
        run(Command::Simulate, s, &dir.path().join("b")).unwrap();
        assert_eq!(a.outputs, vec!["ensemble.csv", "trajectory_0.csv", "manifest.json"]);
        assert_eq!(a.seed, Some(7));
        for f in ["ensemble.csv", "trajectory_0.csv"] {
            let x = fs::read(dir.path().join("a").join(f)).unwrap();
            let y = fs::read(dir.path().join("b").join(f)).unwrap();
            assert_eq!(x, y, "{f}");
        }
        let text = fs::read_to_string(dir.path().join("a/ensemble.csv")).unwrap();
        assert!(text.starts_with("walker,t,x\n"));
        assert_eq!(text.lines().count(), 401);
        let manifest = fs::read_to_string(dir.path().join("a/manifest.json")).unwrap();
        assert!(manifest.contains(Preset::NOTE));
    }

    #[test]
    fn ks_round_trip_through_csv() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = Settings::default();
        for (k, v) in [("jump", "gauss"), ("wait", "exp"), ("h", "0.1"), ("n_walkers", "2000"), ("seed", "3")] {
            s.set(k, v);
        }
        run(Command::Simulate, s, dir.path()).unwrap();
        let mut v = Settings::default();
        v.set("input", dir.path().join("ensemble.csv").to_string_lossy());
        v.set("alpha", "2");
        v.set("beta", "1");
        let out = dir.path().join("ks");
        run(Command::Verify(VerifyTarget::Ks), v, &out).unwrap();
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("ks.json")).unwrap()).unwrap();
        assert_eq!(json["n"], 2000);
        assert_eq!(json["pass"], true);
    }
}
