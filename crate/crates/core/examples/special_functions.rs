//! Mittag-Leffler relaxation `E_β(−t^β)` for a few orders, next to the
//! exponential it reduces to at `β = 1`.

use fracwalk::specfun::{gamma, mittag_leffler, riemann_zeta, OrderBeta};

fn main() -> fracwalk::Result<()> {
    println!("Gamma(0.5)^2 = {:.15} (pi = {:.15})", gamma(0.5)?.powi(2), std::f64::consts::PI);
    println!("zeta(2) = {:.15}", riemann_zeta(2.0)?);
    println!();
    let orders = [0.25, 0.5, 0.75, 1.0];
    print!("{:>8}", "t");
    for b in orders {
        print!("{:>14}", format!("beta={b}"));
    }
    println!();
    for t in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0] {
        print!("{t:>8}");
        for b in orders {
            let beta = OrderBeta::new(b)?;
            let z = -f64::powf(t, b);
            print!("{:>14.6e}", mittag_leffler(beta, z)?);
        }
        println!();
    }
    Ok(())
}
