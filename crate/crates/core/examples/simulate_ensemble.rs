//! Simulate one scenario, print a staircase path and ensemble summary, and
//! show that a walker can be regenerated on its own.

use fracwalk::asymptotics::{scaling_tau, LemmaConstants};
use fracwalk::ctrw::{ensemble_snapshots, simulate_walk, trajectory_csv, WalkConfig};
use fracwalk::laws::{JumpLaw, WaitingLaw};
use fracwalk::stats::{sample_moments, SampleSet};

fn main() -> fracwalk::Result<()> {
    let jump: JumpLaw = "cpow:1.5".parse()?;
    let wait: WaitingLaw = "cpow:0.5".parse()?;
    let lc = LemmaConstants::for_laws(&jump, &wait)?;
    let pair = scaling_tau(0.1, &lc, jump.alpha(), wait.beta())?;
    let cfg = WalkConfig::new(jump, wait, pair, 1.0, 20_000, 12345)?;

    let path = simulate_walk(&cfg, 0)?;
    println!("walker 0: {} jumps before t=1", path.jump_times().len());
    for (t, x) in trajectory_csv(&path).iter().take(8) {
        println!("  t={t:.5} x={x:.4}");
    }

    let times = [0.25, 0.5, 1.0];
    let snaps = ensemble_snapshots(&cfg, &times)?;
    for (t, xs) in times.iter().zip(&snaps) {
        let s = SampleSet::new(xs.clone())?;
        let v = s.values();
        let median = v[v.len() / 2];
        let iqr = v[3 * v.len() / 4] - v[v.len() / 4];
        let stuck = xs.iter().filter(|&&x| x == 0.0).count();
        println!(
            "t={t}: median {median:.4}, IQR {iqr:.4}, still at origin {stuck}, mean {:.4}",
            sample_moments(&s)?.0
        );
    }

    let again = simulate_walk(&cfg, 17)?;
    assert_eq!(again.position_at(1.0)?, snaps[2][17]);
    println!("walker 17 regenerated alone matches the ensemble");
    Ok(())
}
