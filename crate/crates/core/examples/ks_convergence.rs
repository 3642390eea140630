//! Kolmogorov-Smirnov distance between rescaled ensembles and the limit
//! law as the jump scale shrinks.

use fracwalk::cli::converge;
use fracwalk::laws::{JumpLaw, WaitingLaw};

fn main() -> fracwalk::Result<()> {
    let n = 20_000;
    for (j, w) in [("gauss", "exp"), ("gauss", "cpow:0.5"), ("cpow:1.5", "cpow:0.5")] {
        let jump: JumpLaw = j.parse()?;
        let wait: WaitingLaw = w.parse()?;
        println!("{j} / {w}");
        for row in converge(&jump, &wait, &[0.5, 0.2, 0.1], 1.0, n, 12345)? {
            println!(
                "  h={:<4} KS={:.4} (1% threshold {:.4})",
                row.h, row.ks.statistic, row.ks.threshold_1pct
            );
        }
    }
    Ok(())
}
