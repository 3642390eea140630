//! Gaussian jumps: ensemble variance at time `t` against `2t^β/Γ(1+β)`.

use fracwalk::asymptotics::{scaling_tau, LemmaConstants};
use fracwalk::ctrw::{ensemble_snapshots, WalkConfig};
use fracwalk::greenfn::variance_alpha2;
use fracwalk::laws::{JumpLaw, WaitingLaw};
use fracwalk::stats::{sample_moments, SampleSet};

fn main() -> fracwalk::Result<()> {
    let times = [0.25, 0.5, 1.0, 2.0];
    for w in ["exp", "cpow:0.75", "cpow:0.5"] {
        let wait: WaitingLaw = w.parse()?;
        let jump = JumpLaw::Gaussian;
        let lc = LemmaConstants::for_laws(&jump, &wait)?;
        let pair = scaling_tau(0.05, &lc, jump.alpha(), wait.beta())?;
        let cfg = WalkConfig::new(jump, wait.clone(), pair, 2.0, 20_000, 12345)?;
        let snaps = ensemble_snapshots(&cfg, &times)?;
        println!("wait {w}");
        for (t, xs) in times.iter().zip(snaps) {
            let var = sample_moments(&SampleSet::new(xs)?)?.1;
            println!("  t={t:<5} sample {var:.4}  limit {:.4}", variance_alpha2(wait.beta(), *t)?);
        }
    }
    Ok(())
}
