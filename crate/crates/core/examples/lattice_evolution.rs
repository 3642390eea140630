//! Exact evolution of the fully discrete walk compared with a Monte Carlo
//! ensemble of the same process.

use fracwalk::asymptotics::ScalingPair;
use fracwalk::ctrw::{ensemble_positions, evolve_lattice, WalkConfig};
use fracwalk::specfun::{OrderBeta, StabilityAlpha};

fn main() -> fracwalk::Result<()> {
    let (k, t) = (500, 5);
    let evo = evolve_lattice(StabilityAlpha::new(1.5)?, OrderBeta::new(0.5)?, k, t)?;
    for st in &evo.states {
        println!(
            "t={} p(0)={:.6} p(1)={:.6} leakage={:.2e} mass={:.15}",
            st.time_index,
            st.at(0),
            st.at(1),
            st.leakage,
            st.total_mass()
        );
    }
    for w in &evo.warnings {
        println!("warning: {w}");
    }

    let n = 50_000;
    let cfg = WalkConfig::new(
        "lpow:1.5".parse()?,
        "dpow:0.5".parse()?,
        ScalingPair::new(1.0, 1.0)?,
        t as f64,
        n,
        12345,
    )?;
    let xs = ensemble_positions(&cfg, t as f64)?;
    let last = evo.states.last().expect("non-empty");
    println!("\n{:>4} {:>10} {:>10}", "x", "exact", "sampled");
    for x in -3i64..=3 {
        let c = xs.iter().filter(|&&v| v == x as f64).count();
        println!("{x:>4} {:>10.5} {:>10.5}", last.at(x), c as f64 / n as f64);
    }
    Ok(())
}
