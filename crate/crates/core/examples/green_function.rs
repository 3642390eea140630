//! Fundamental solution of the space-time fractional diffusion equation:
//! density table, mass check, and the algebraic tail for `α < 2`.

use fracwalk::greenfn::{build_grid, GreenFunction};
use fracwalk::specfun::{OrderBeta, StabilityAlpha};

fn main() -> fracwalk::Result<()> {
    for (a, b) in [(2.0, 1.0), (2.0, 0.5), (1.5, 1.0), (1.5, 0.5), (1.0, 1.0)] {
        let (alpha, beta) = (StabilityAlpha::new(a)?, OrderBeta::new(b)?);
        let grid = build_grid(alpha, beta, 1.0, 20.0, 401)?;
        let g = GreenFunction::new(alpha, beta)?;
        let origin = if g.origin_is_finite() {
            format!("{:.6}", g.pdf(0.0, 1.0)?)
        } else {
            "infinite".to_string()
        };
        println!(
            "alpha={a} beta={b}: u(0)={origin} u(1)={:.6} u(5)={:.3e} mass={:.10} max_err={:.1e}",
            g.pdf(1.0, 1.0)?,
            g.pdf(5.0, 1.0)?,
            grid.mass(),
            grid.max_error
        );
        if let Some(tail) = g.tail_density(50.0) {
            println!("  u(50) = {:.4e}, tail series {:.4e}", g.pdf(50.0, 1.0)?, tail);
        }
    }
    Ok(())
}
