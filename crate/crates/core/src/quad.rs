//! Quadrature kernels: adaptive Gauss–Kronrod on finite intervals and
//! half-period summation for Fourier-type integrals over the half line.
//!
//! Fourier integrals are split at the zeros of the trigonometric factor.
//! The resulting alternating sequence of half-period integrals is summed
//! directly for the first few periods and the remainder is accelerated by
//! the Euler transformation (iterated averaging of partial sums), which is
//! accurate for integrands that decay only algebraically.

use crate::error::{Error, Result};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_value = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_value += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        abs_value: abs_value * half.abs(),
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Stops when the summed error estimate falls below
/// `max(abs_tol, rel_tol * |I|)` or below the round-off floor of the
/// integrand magnitude.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    const MAX_SEGMENTS: usize = 2000;
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut segments = vec![kronrod15(&f, a, b)];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let magnitude: f64 = segments.iter().map(|s| s.abs_value).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::numerical(
                format!("non-finite integrand on [{a}, {b}]"),
                error,
            ));
        }
        let tol = abs_tol
            .max(rel_tol * value.abs())
            .max(50.0 * f64::EPSILON * magnitude);
        if error <= tol {
            return Ok(QuadResult { value, error });
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::numerical(
                format!("adaptive quadrature on [{a}, {b}] exhausted its segment budget"),
                error,
            ));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // interval no longer divisible in floating point
            return Err(Error::numerical(
                format!("adaptive quadrature cannot split [{}, {}]", seg.a, seg.b),
                error,
            ));
        }
        segments.push(kronrod15(&f, seg.a, mid));
        segments.push(kronrod15(&f, mid, seg.b));
    }
}

/// Sum of an alternating series given its terms, accelerated after the
/// first `direct` terms by `levels` rounds of partial-sum averaging.
///
/// Requires `terms.len() >= direct + levels + 1`.
pub fn euler_sum(terms: &[f64], direct: usize, levels: usize) -> QuadResult {
    assert!(terms.len() > direct + levels, "not enough terms to accelerate");
    let head: f64 = terms[..direct].iter().sum();
    let mut partial = Vec::with_capacity(levels + 1);
    let mut acc = 0.0;
    for &t in &terms[direct..=direct + levels] {
        acc += t;
        partial.push(acc);
    }
    let mut last_gap = f64::INFINITY;
    for _ in 0..levels {
        last_gap = (partial[1] - partial[0]).abs();
        for i in 0..partial.len() - 1 {
            partial[i] = 0.5 * (partial[i] + partial[i + 1]);
        }
        partial.pop();
    }
    QuadResult {
        value: head + partial[0],
        error: 0.5 * last_gap,
    }
}

/// `∫₀^b g` over geometrically shrinking pieces toward the origin, so that
/// integrand structure on scales far below `b` is not missed by the first
/// Kronrod sample.
fn first_piece<F: Fn(f64) -> f64>(g: &F, b: f64, abs_tol: f64) -> Result<QuadResult> {
    const SPLITS: i32 = 30;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut hi = b;
    for m in 1..=SPLITS {
        let lo = if m == SPLITS { 0.0 } else { b * 0.25f64.powi(m) };
        let r = integrate(g, lo, hi, abs_tol / SPLITS as f64, 1e-13)?;
        value += r.value;
        error += r.error;
        hi = lo;
    }
    Ok(QuadResult { value, error })
}

/// Trigonometric kernel of a half-line Fourier integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Cos,
    Sin,
}

/// `∫₀^∞ f(k)·cos(ωk) dk` or `∫₀^∞ f(k)·sin(ωk) dk` for `ω > 0` and an
/// `f` that is eventually smooth and decaying (possibly only
/// algebraically).
pub fn fourier_half_line<F: Fn(f64) -> f64>(
    f: F,
    omega: f64,
    kernel: Kernel,
    abs_tol: f64,
) -> Result<QuadResult> {
    const DIRECT: usize = 24;
    const LEVELS: usize = 24;
    assert!(omega > 0.0, "frequency must be positive");
    let period = std::f64::consts::PI / omega;
    let boundary = |j: usize| match kernel {
        Kernel::Cos if j == 0 => 0.0,
        Kernel::Cos => (j as f64 - 0.5) * period,
        Kernel::Sin => j as f64 * period,
    };
    let g = |k: f64| {
        let phase = omega * k;
        f(k) * match kernel {
            Kernel::Cos => phase.cos(),
            Kernel::Sin => phase.sin(),
        }
    };
    let n_terms = DIRECT + LEVELS + 1;
    let mut terms = Vec::with_capacity(n_terms);
    let mut error = 0.0;
    let mut negligible_run = 0;
    for j in 0..n_terms {
        let piece = if j == 0 {
            first_piece(&g, boundary(1), abs_tol * 1e-3)?
        } else {
            integrate(g, boundary(j), boundary(j + 1), abs_tol * 1e-3, 1e-13)?
        };
        error += piece.error;
        terms.push(piece.value);
        // super-exponentially decaying integrands end the series early
        if piece.value.abs() < abs_tol * 1e-6 && j > 4 {
            negligible_run += 1;
            if negligible_run >= 3 {
                let value = terms.iter().sum();
                return Ok(QuadResult { value, error });
            }
        } else {
            negligible_run = 0;
        }
    }
    let tail = euler_sum(&terms, DIRECT, LEVELS);
    let total = QuadResult {
        value: tail.value,
        error: error + tail.error,
    };
    if total.error > abs_tol.max(1e-12 * total.value.abs()) * 1e3 {
        return Err(Error::numerical(
            "Fourier half-line integral did not converge",
            total.error,
        ));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_kronrod_polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn euler_sum_of_alternating_harmonic_series() {
        let terms: Vec<f64> = (1..=60)
            .map(|k| if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64)
            .collect();
        let r = euler_sum(&terms, 10, 30);
        assert!((r.value - 2f64.ln()).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn cosine_transform_of_lorentzian() {
        for &w in &[0.3, 1.0, 4.0] {
            let r = fourier_half_line(|k| 1.0 / (1.0 + k * k), w, Kernel::Cos, 1e-12).unwrap();
            let exact = 0.5 * PI * (-w).exp();
            assert!((r.value - exact).abs() < 1e-10, "w={w}: {} vs {exact}", r.value);
        }
    }

    #[test]
    fn cosine_transform_with_algebraic_singular_weight() {
        let w = 2.0;
        let r = fourier_half_line(|k| 1.0 / k.sqrt(), w, Kernel::Cos, 1e-11).unwrap();
        let exact = (PI / (2.0 * w)).sqrt();
        assert!((r.value - exact).abs() < 1e-8, "{} vs {exact}", r.value);
    }

    #[test]
    fn dirichlet_integral() {
        let r = fourier_half_line(|k| 1.0 / k, 3.0, Kernel::Sin, 1e-12).unwrap();
        assert!((r.value - 0.5 * PI).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn sine_transform_of_exponential() {
        let w = 1.7;
        let r = fourier_half_line(|k| (-k).exp(), w, Kernel::Sin, 1e-13).unwrap();
        assert!((r.value - w / (1.0 + w * w)).abs() < 1e-12);
    }
}
