//! Fundamental solution `u(x, t)` of the space-time fractional diffusion
//! equation from its Fourier image `û(κ, t) = E_β(−|κ|^α t^β)`.
//!
//! Everything is computed for `t = 1` in the similarity variable
//! `y = x·t^{−β/α}` and mapped back with `u(x,t) = t^{−β/α}·U(y)`.
//! The inversion integrals are done by half-period summation with Euler
//! acceleration; large `|y|` tails use the algebraic expansion
//! `U(y) ~ (1/π) Σ (−1)^{n+1} Γ(nα+1) sin(nαπ/2) / (Γ(1+nβ) |y|^{nα+1})`.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{self, Kernel};
use crate::specfun::{gamma, recip_gamma, sin_pi, MittagLeffler, OrderBeta, StabilityAlpha};

/// Absolute tolerance on the similarity-variable density integrals.
const ABS_TOL: f64 = 1e-10;

/// `u(x, t)` for fixed orders.
#[derive(Debug, Clone)]
pub struct GreenFunction {
    alpha: StabilityAlpha,
    beta: OrderBeta,
    ml: MittagLeffler,
}

impl GreenFunction {
    pub fn new(alpha: StabilityAlpha, beta: OrderBeta) -> Result<Self> {
        Ok(Self {
            alpha,
            beta,
            ml: MittagLeffler::new(beta)?,
        })
    }

    pub fn alpha(&self) -> StabilityAlpha {
        self.alpha
    }

    pub fn beta(&self) -> OrderBeta {
        self.beta
    }

    fn check_time(t: f64) -> Result<()> {
        if t > 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!("time must be positive, got {t}")))
        }
    }

    /// `t^{β/α}`, the spatial scale at time `t`.
    fn spread(&self, t: f64) -> f64 {
        t.powf(self.beta.get() / self.alpha.get())
    }

    /// `û(κ, t) = E_β(−|κ|^α t^β)`.
    pub fn fourier(&self, kappa: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(self
            .ml
            .eval_neg(kappa.abs().powf(self.alpha.get()) * t.powf(self.beta.get())))
    }

    fn image(&self, k: f64) -> f64 {
        self.ml.eval_neg(k.powf(self.alpha.get()))
    }

    /// `u(0, t)` is finite for `β = 1` or `α > 1`.
    pub fn origin_is_finite(&self) -> bool {
        self.beta.get() == 1.0 || self.alpha.get() > 1.0
    }

    /// `u(x, t)` with the quadrature error estimate.
    pub fn pdf_with_error(&self, x: f64, t: f64) -> Result<quad::QuadResult> {
        Self::check_time(t)?;
        let scale = self.spread(t);
        let r = self.similarity_pdf(x.abs() / scale)?;
        Ok(quad::QuadResult {
            value: r.value / scale,
            error: r.error / scale,
        })
    }

    pub fn pdf(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.pdf_with_error(x, t)?.value)
    }

    /// `U(y) = (1/π) ∫₀^∞ cos(κy) E_β(−κ^α) dκ`, `y ≥ 0`.
    fn similarity_pdf(&self, y: f64) -> Result<quad::QuadResult> {
        if y == 0.0 {
            return self.similarity_pdf_origin();
        }
        // sharpen the tolerance where the density itself is tiny
        let tol = match self.tail_density(y) {
            Some(d) if d.abs() > 0.0 => ABS_TOL.min(1e-7 * d.abs()),
            _ => ABS_TOL,
        };
        let r = quad::fourier_half_line(|k| self.image(k), y, Kernel::Cos, tol * PI)?;
        Ok(quad::QuadResult {
            value: r.value / PI,
            error: r.error / PI,
        })
    }

    /// `U(0) = (1/π) ∫₀^∞ E_β(−κ^α) dκ`: adaptive quadrature up to
    /// `κ* = 200^{1/α}`, beyond which the algebraic expansion of `E_β`
    /// is integrated term by term.
    fn similarity_pdf_origin(&self) -> Result<quad::QuadResult> {
        if !self.origin_is_finite() {
            return Err(Error::domain(format!(
                "u(0,t) is unbounded for alpha={} <= 1 with beta={} < 1",
                self.alpha.get(),
                self.beta.get()
            )));
        }
        let a = self.alpha.get();
        let b = self.beta.get();
        let (cut, tail) = if b == 1.0 {
            // exp(−κ^α) < 1e−300 beyond this point
            (700f64.powf(1.0 / a), 0.0)
        } else {
            let cut = 200f64.powf(1.0 / a);
            let mut tail = 0.0;
            for k in 1..=12 {
                let kf = k as f64;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                tail += sign * recip_gamma(1.0 - kf * b) * cut.powf(1.0 - a * kf) / (a * kf - 1.0);
            }
            (cut, tail)
        };
        let mut value = tail;
        let mut error = 0.0;
        let mut lo = 0.0;
        let mut hi = cut.min(1.0);
        while lo < cut {
            let r = quad::integrate(|k| self.image(k), lo, hi, ABS_TOL * 1e-2, 1e-13)?;
            value += r.value;
            error += r.error;
            lo = hi;
            hi = (2.0 * hi).min(cut);
        }
        Ok(quad::QuadResult {
            value: value / PI,
            error: error / PI,
        })
    }

    /// `∫_{−∞}^x u(x', t) dx'`.
    pub fn cdf(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.cdf_with_error(x, t)?.value)
    }

    pub fn cdf_with_error(&self, x: f64, t: f64) -> Result<quad::QuadResult> {
        Self::check_time(t)?;
        if x == 0.0 {
            return Ok(quad::QuadResult {
                value: 0.5,
                error: 0.0,
            });
        }
        let y = x.abs() / self.spread(t);
        // ∫₀^y U = (1/π) ∫₀^∞ sin(κy)/κ · E_β(−κ^α) dκ
        let r = quad::fourier_half_line(|k| self.image(k) / k, y, Kernel::Sin, ABS_TOL * PI)?;
        let half = (r.value / PI).min(0.5);
        Ok(quad::QuadResult {
            value: if x > 0.0 { 0.5 + half } else { 0.5 - half },
            error: r.error / PI,
        })
    }

    /// Leading algebraic tail of `U(y)` for large `y`; `None` for `α = 2`
    /// (exponentially small tails) or when the expansion is not yet
    /// usable at this `y`.
    pub fn tail_density(&self, y: f64) -> Option<f64> {
        let a = self.alpha.get();
        let b = self.beta.get();
        self.tail_series(y, |n| {
            gamma(n * a + 1.0).unwrap_or(f64::INFINITY)
                * sin_pi(0.5 * n * a)
                * recip_gamma(1.0 + n * b)
                * y.powf(-(n * a + 1.0))
        })
        .map(|s| s / PI)
    }

    /// `2 ∫_x^∞ u(x', t) dx'` from the algebraic expansion; zero for
    /// `α = 2`. `None` if the expansion has not converged at this `x`.
    pub fn tail_mass(&self, x: f64, t: f64) -> Option<f64> {
        let a = self.alpha.get();
        let b = self.beta.get();
        if a == 2.0 {
            return Some(0.0);
        }
        let y = x.abs() / self.spread(t);
        self.tail_series(y, |n| {
            gamma(n * a).unwrap_or(f64::INFINITY)
                * sin_pi(0.5 * n * a)
                * recip_gamma(1.0 + n * b)
                * y.powf(-n * a)
        })
        .map(|s| 2.0 * s / PI)
    }

    /// Alternating expansion `Σ_{n≥1} (−1)^{n+1} term(n)`, summed while
    /// the terms shrink; accepted when the last term is below `1e−10`
    /// of the sum.
    fn tail_series(&self, y: f64, term: impl Fn(f64) -> f64) -> Option<f64> {
        if self.alpha.get() == 2.0 || !(y > 0.0) {
            return None;
        }
        let mut sum = 0.0;
        let mut last = f64::INFINITY;
        for n in 1..=60 {
            let t = term(n as f64);
            if !t.is_finite() {
                return None;
            }
            if t == 0.0 {
                continue;
            }
            if t.abs() > last {
                return None;
            }
            sum += if n % 2 == 1 { t } else { -t };
            if t.abs() <= 1e-10 * sum.abs() {
                return Some(sum);
            }
            last = t.abs();
        }
        None
    }
}

/// `E_β(−|κ|^α t^β)`.
pub fn green_fourier(alpha: StabilityAlpha, beta: OrderBeta, kappa: f64, t: f64) -> Result<f64> {
    GreenFunction::new(alpha, beta)?.fourier(kappa, t)
}

/// `u(x, t)`.
pub fn green_pdf(alpha: StabilityAlpha, beta: OrderBeta, x: f64, t: f64) -> Result<f64> {
    GreenFunction::new(alpha, beta)?.pdf(x, t)
}

/// `∫_{−∞}^x u(x', t) dx'`.
pub fn green_cdf(alpha: StabilityAlpha, beta: OrderBeta, x: f64, t: f64) -> Result<f64> {
    GreenFunction::new(alpha, beta)?.cdf(x, t)
}

/// `2t^β / Γ(1+β)`, the variance for `α = 2`.
pub fn variance_alpha2(beta: OrderBeta, t: f64) -> Result<f64> {
    GreenFunction::check_time(t)?;
    let b = beta.get();
    Ok(2.0 * t.powf(b) / gamma(1.0 + b)?)
}

/// Tabulated density and distribution on a uniform symmetric grid.
#[derive(Debug, Clone, Serialize)]
pub struct GreenGrid {
    pub alpha: f64,
    pub beta: f64,
    pub time: f64,
    pub x_grid: Vec<f64>,
    pub pdf: Vec<f64>,
    pub cdf: Vec<f64>,
    /// `2 ∫_{x_max}^∞ u` from the algebraic tail.
    pub tail_mass: f64,
    /// Largest quadrature error estimate over the table.
    pub max_error: f64,
    /// `x = 0` was not evaluated (unbounded density); the row carries the
    /// value at the nearest grid neighbour.
    pub origin_substituted: bool,
}

impl GreenGrid {
    /// `2(cdf(x_max) − 1/2) + tail_mass`.
    pub fn mass(&self) -> f64 {
        2.0 * (self.cdf.last().copied().unwrap_or(0.5) - 0.5) + self.tail_mass
    }

    /// CSV `x,pdf,cdf`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "x,pdf,cdf")?;
        for ((x, p), c) in self.x_grid.iter().zip(&self.pdf).zip(&self.cdf) {
            writeln!(out, "{x},{p},{c}")?;
        }
        Ok(())
    }

    /// Metadata record for the JSON sidecar.
    pub fn metadata(&self) -> serde_json::Value {
        serde_json::json!({
            "alpha": self.alpha,
            "beta": self.beta,
            "time": self.time,
            "n_points": self.x_grid.len(),
            "x_max": self.x_grid.last(),
            "tail_mass": self.tail_mass,
            "mass": self.mass(),
            "max_error": self.max_error,
            "origin_substituted": self.origin_substituted,
        })
    }
}

/// Tabulate `u` and its distribution function on `n_points` (odd)
/// equispaced points over `[−x_max, x_max]`.
pub fn build_grid(
    alpha: StabilityAlpha,
    beta: OrderBeta,
    t: f64,
    x_max: f64,
    n_points: usize,
) -> Result<GreenGrid> {
    if n_points < 3 || n_points.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "grid needs an odd number of points >= 3, got {n_points}"
        )));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::domain(format!("x_max must be positive, got {x_max}")));
    }
    let g = GreenFunction::new(alpha, beta)?;
    GreenFunction::check_time(t)?;
    let half = n_points / 2;
    let dx = x_max / half as f64;
    // non-negative half, mirrored afterwards
    let right = (0..=half)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * dx;
            let p = if i == 0 && !g.origin_is_finite() {
                None
            } else {
                Some(g.pdf_with_error(x, t)?)
            };
            let c = g.cdf_with_error(x, t)?;
            Ok((p, c))
        })
        .collect::<Result<Vec<_>>>()?;
    let origin_substituted = right[0].0.is_none();
    let pdf_right: Vec<f64> = right
        .iter()
        .enumerate()
        .map(|(i, (p, _))| p.map_or_else(|| right[i + 1].0.map_or(f64::NAN, |q| q.value), |p| p.value))
        .collect();
    let max_error = right
        .iter()
        .map(|(p, c)| p.map_or(0.0, |p| p.error).max(c.error))
        .fold(0.0, f64::max);
    let mut x_grid = Vec::with_capacity(n_points);
    let mut pdf = Vec::with_capacity(n_points);
    let mut cdf = Vec::with_capacity(n_points);
    for i in (1..=half).rev() {
        x_grid.push(-(i as f64) * dx);
        pdf.push(pdf_right[i]);
        cdf.push(1.0 - right[i].1.value);
    }
    for i in 0..=half {
        x_grid.push(i as f64 * dx);
        pdf.push(pdf_right[i]);
        cdf.push(right[i].1.value);
    }
    let tail_mass = g.tail_mass(x_max, t).unwrap_or(0.0);
    Ok(GreenGrid {
        alpha: alpha.get(),
        beta: beta.get(),
        time: t,
        x_grid,
        pdf,
        cdf,
        tail_mass,
        max_error,
        origin_substituted,
    })
}

/// Fast distribution function for goodness-of-fit work: cubic Hermite
/// interpolation of tabulated values (slopes from the density) on
/// `sinh`-spaced nodes, with the algebraic tail beyond the table.
#[derive(Debug, Clone)]
pub struct CdfTable {
    nodes: Vec<f64>,
    cdf: Vec<f64>,
    pdf: Vec<Option<f64>>,
    green: GreenFunction,
    time: f64,
}

impl CdfTable {
    /// Nodes `x_i = s·a·sinh(i·d)` for `i = 0..=n`, `s = t^{β/α}`, covering
    /// `[0, x_max]`; `a` sets the resolution near the origin.
    pub fn new(green: GreenFunction, t: f64, x_max: f64, n: usize, a: f64) -> Result<Self> {
        GreenFunction::check_time(t)?;
        if n < 2 || !(x_max > 0.0) || !(a > 0.0) {
            return Err(Error::domain("cdf table needs n >= 2, x_max > 0 and a > 0"));
        }
        let d = (x_max / a).asinh() / n as f64;
        let nodes: Vec<f64> = (0..=n)
            .map(|i| if i == n { x_max } else { a * (i as f64 * d).sinh() })
            .collect();
        let values = nodes
            .par_iter()
            .map(|&x| {
                let p = if x == 0.0 && !green.origin_is_finite() {
                    None
                } else {
                    Some(green.pdf(x, t)?)
                };
                Ok((green.cdf(x, t)?, p))
            })
            .collect::<Result<Vec<_>>>()?;
        let (cdf, pdf) = values.into_iter().unzip();
        Ok(Self {
            nodes,
            cdf,
            pdf,
            green,
            time: t,
        })
    }

    fn upper(&self, x: f64) -> f64 {
        let last = *self.nodes.last().expect("non-empty");
        if x >= last {
            return match self.green.tail_mass(x, self.time) {
                Some(m) => 1.0 - 0.5 * m,
                None => *self.cdf.last().expect("non-empty"),
            };
        }
        let i = self.nodes.partition_point(|&n| n <= x) - 1;
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let (c0, c1) = (self.cdf[i], self.cdf[i + 1]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        match (self.pdf[i], self.pdf[i + 1]) {
            (Some(m0), Some(m1)) => {
                let s2 = s * s;
                let s3 = s2 * s;
                (2.0 * s3 - 3.0 * s2 + 1.0) * c0
                    + (s3 - 2.0 * s2 + s) * h * m0
                    + (-2.0 * s3 + 3.0 * s2) * c1
                    + (s3 - s2) * h * m1
            }
            _ => c0 + s * (c1 - c0),
        }
    }

    /// Interpolated distribution function.
    pub fn eval(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.upper(x)
        } else {
            1.0 - self.upper(-x)
        }
    }
}
