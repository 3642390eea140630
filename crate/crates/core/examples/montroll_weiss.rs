//! The rescaled Montroll-Weiss transform approaches
//! `s^{β−1} / (s^β + κ^α)` as `h → 0` along the scaling relation.

use fracwalk::asymptotics::{mw_limit, mw_rescaled, scaling_tau, LemmaConstants};
use fracwalk::laws::{JumpLaw, WaitingLaw};

fn main() -> fracwalk::Result<()> {
    let (kappa, s) = (1.0, 1.0);
    for (j, w) in [("gauss", "exp"), ("gauss", "cpow:0.5"), ("cpow:1.5", "exp"), ("cpow:1.5", "cpow:0.5")] {
        let jump: JumpLaw = j.parse()?;
        let wait: WaitingLaw = w.parse()?;
        let lc = LemmaConstants::for_laws(&jump, &wait)?;
        let limit = mw_limit(jump.alpha(), wait.beta(), kappa, s);
        println!("{j} / {w}: limit {limit:.6}");
        for h in [1e-1, 1e-2, 1e-3] {
            let pair = scaling_tau(h, &lc, jump.alpha(), wait.beta())?;
            let v = mw_rescaled(&jump, &wait, &pair, kappa, s)?;
            println!("  h={h:<6} tau={:<12.4e} value={v:.6} error={:.2e}", pair.tau, (v - limit).abs());
        }
    }
    Ok(())
}
