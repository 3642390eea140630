//! Transform-domain machinery: the scale constants `μ` and `λ`, the
//! scaling relation `r(h, τ) = μh^α / (λτ^β) = 1`, numerical Fourier and
//! Laplace transforms of the laws, the ratio checks
//! `(1 − ŵ(κ)) / (μκ^α) → 1` and `(1 − φ̃(s)) / (λs^β) → 1`, and the
//! Montroll–Weiss transform of the (rescaled) walk.
//!
//! Transforms are returned in complement form (`1 − ŵ`, `1 − φ̃`) wherever
//! the small-argument behaviour is under test, so that no digits are lost
//! to cancellation against one.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::{JumpLaw, TailConstants, WaitingLaw};
use crate::quad::{self, Kernel};
use crate::specfun::{gamma, OrderBeta, StabilityAlpha};

/// `μ` (space) and `λ` (time) scale constants of the transform asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaConstants {
    pub mu: f64,
    pub lambda: f64,
}

/// `μ = σ²/2` for `α = 2`, `μ = bπ / (Γ(α+1) sin(απ/2))` for `α < 2`;
/// `λ = ρ` for `β = 1`, `λ = cΓ(1−β)/β` for `β < 1`.
pub fn lemma_constants(
    tc: &TailConstants,
    alpha: StabilityAlpha,
    beta: OrderBeta,
) -> Result<LemmaConstants> {
    let a = alpha.get();
    let b = beta.get();
    let mu = match (a == 2.0, tc.jump_sigma2, tc.jump_b) {
        (true, Some(sigma2), None) => sigma2 / 2.0,
        (false, None, Some(amp)) => amp * PI / (gamma(a + 1.0)? * (0.5 * a * PI).sin()),
        _ => {
            return Err(Error::domain(format!(
                "tail constants inconsistent with alpha={a}: need sigma^2 iff alpha=2"
            )))
        }
    };
    let lambda = match (b == 1.0, tc.wait_rho, tc.wait_c) {
        (true, Some(rho), None) => rho,
        (false, None, Some(c)) => c * gamma(1.0 - b)? / b,
        _ => {
            return Err(Error::domain(format!(
                "tail constants inconsistent with beta={b}: need rho iff beta=1"
            )))
        }
    };
    Ok(LemmaConstants { mu, lambda })
}

impl LemmaConstants {
    pub fn for_laws(jump: &JumpLaw, wait: &WaitingLaw) -> Result<Self> {
        let tc = crate::laws::tail_constants(jump, wait)?;
        lemma_constants(&tc, jump.alpha(), wait.beta())
    }

    /// `μ` of a jump law alone.
    pub fn mu_of(jump: &JumpLaw) -> Result<f64> {
        Ok(Self::for_laws(jump, &WaitingLaw::Exponential)?.mu)
    }

    /// `λ` of a waiting law alone.
    pub fn lambda_of(wait: &WaitingLaw) -> Result<f64> {
        Ok(Self::for_laws(&JumpLaw::Gaussian, wait)?.lambda)
    }
}

/// Jump scale `h` and waiting-time scale `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPair {
    pub h: f64,
    pub tau: f64,
}

impl ScalingPair {
    pub fn new(h: f64, tau: f64) -> Result<Self> {
        if h > 0.0 && tau > 0.0 && h.is_finite() && tau.is_finite() {
            Ok(Self { h, tau })
        } else {
            Err(Error::domain(format!("scales must be positive, got h={h}, tau={tau}")))
        }
    }

    /// `r(h, τ) = μh^α / (λτ^β)`.
    pub fn ratio(&self, lc: &LemmaConstants, alpha: StabilityAlpha, beta: OrderBeta) -> f64 {
        lc.mu * self.h.powf(alpha.get()) / (lc.lambda * self.tau.powf(beta.get()))
    }
}

/// The `τ` that makes `r(h, τ) = 1`: `τ = (μh^α/λ)^{1/β}`.
pub fn scaling_tau(
    h: f64,
    lc: &LemmaConstants,
    alpha: StabilityAlpha,
    beta: OrderBeta,
) -> Result<ScalingPair> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("jump scale h must be positive, got {h}")));
    }
    let tau = (lc.mu * h.powf(alpha.get()) / lc.lambda).powf(1.0 / beta.get());
    ScalingPair::new(h, tau)
}

/// `1 − ŵ(κ)`.
pub fn one_minus_char_fn(law: &JumpLaw, kappa: f64) -> Result<f64> {
    let k = kappa.abs();
    if k == 0.0 {
        return Ok(0.0);
    }
    match law {
        JumpLaw::ContinuousPower { .. } | JumpLaw::Gaussian => {
            // 1 − ŵ(κ) = 2κ ∫₀^∞ sin(κx)(1 − W(x)) dx = 2 ∫₀^∞ sin(y)(1 − W(y/κ)) dy
            let scale = law.alpha().get();
            let abs_tol = 1e-12 * k.powf(scale).min(1.0);
            let r = quad::fourier_half_line(|y| law.survival(y / k), 1.0, Kernel::Sin, abs_tol)?;
            Ok(2.0 * r.value)
        }
        JumpLaw::LatticePower { table, .. } => {
            // ŵ is 2π-periodic and even
            let k = (k + PI).rem_euclid(2.0 * PI) - PI;
            let k = k.abs();
            if k == 0.0 {
                return Ok(0.0);
            }
            let n = ((64.0 * PI / k).ceil() as u64).max(200_000);
            let mut sum = 0.0;
            for j in 1..=n {
                let half = 0.5 * j as f64 * k;
                let s = half.sin();
                sum += table.weight(j) * s * s;
            }
            let m = n + 1;
            let tail = 2.0 * table.tail(m) - 2.0 * oscillating_tail(table.weight(m), table.exponent() + 1.0, m, k);
            Ok(4.0 * sum + tail)
        }
    }
}

/// `Σ_{j ≥ m} p_j cos(jκ)` for `p_j = p_m (j/m)^{−e}`, by three rounds of
/// summation by parts: `Σ_{j≥m} a_j z^j = Σ_r z^{m+r} Δ^r a_m / (1−z)^{r+1} + …`
/// with `z = e^{iκ}`. The neglected remainder is of relative order
/// `(e/(mκ))³`.
fn oscillating_tail(p_m: f64, e: f64, m: u64, k: f64) -> f64 {
    let mf = m as f64;
    let d1 = (-e * (1.0 / mf).ln_1p()).exp_m1();
    let d2 = (-e * (2.0 / mf).ln_1p()).exp_m1();
    let d3 = (-e * (3.0 / mf).ln_1p()).exp_m1();
    // forward differences of (j/m)^{−e} at j = m
    let deltas = [1.0, d1, d2 - 2.0 * d1, d3 - 3.0 * d2 + 3.0 * d1];
    // 1 − z = 2sin²(κ/2) − i sin κ
    let h = (0.5 * k).sin();
    let one_minus_z = (2.0 * h * h, -k.sin());
    let inv = {
        let n2 = one_minus_z.0 * one_minus_z.0 + one_minus_z.1 * one_minus_z.1;
        (one_minus_z.0 / n2, -one_minus_z.1 / n2)
    };
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let phase = |t: f64| {
        let x = (t * k).rem_euclid(2.0 * PI);
        (x.cos(), x.sin())
    };
    let mut total = 0.0;
    let mut factor = inv;
    for (r, d) in deltas.iter().enumerate() {
        let term = mul(phase(mf + r as f64), factor);
        total += d * term.0;
        factor = mul(factor, inv);
    }
    p_m * total
}

/// Characteristic function `ŵ(κ) = ∫ e^{iκx} dW(x)`, real by symmetry.
pub fn char_fn(law: &JumpLaw, kappa: f64) -> Result<f64> {
    Ok(1.0 - one_minus_char_fn(law, kappa)?)
}

/// `1 − φ̃(s)`.
pub fn one_minus_laplace_wait(law: &WaitingLaw, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("Laplace variable must be >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    match law {
        WaitingLaw::Exponential => Ok(s / (1.0 + s)),
        WaitingLaw::ContinuousPower { beta, .. } => {
            // 1 − φ̃(s) = s ∫₀^∞ e^{−st}(1 − Φ(t)) dt = ∫₀^∞ e^{−y}(1 − Φ(y/s)) dy
            const UPPER: f64 = 60.0;
            let f = |y: f64| (-y).exp() * law.survival(y / s);
            let mut edges = vec![0.0];
            let mut e = s.min(1.0);
            while e < UPPER {
                edges.push(e);
                e *= 10.0;
            }
            edges.push(UPPER);
            let abs_tol = 1e-14 * s.powf(beta.get()).min(1.0);
            let mut total = 0.0;
            for w in edges.windows(2) {
                total += quad::integrate(f, w[0], w[1], abs_tol, 1e-13)?.value;
            }
            Ok(total)
        }
        WaitingLaw::DiscretePower { table, .. } => {
            let n = ((60.0 / s).ceil() as u64).max(1000);
            let mut sum = 0.0;
            for j in 1..=n {
                sum += table.weight(j) * -(-(j as f64) * s).exp_m1();
            }
            Ok(sum + table.tail(n + 1))
        }
    }
}

/// Laplace transform `φ̃(s) = ∫₀^∞ e^{−st} dΦ(t)`.
pub fn laplace_wait(law: &WaitingLaw, s: f64) -> Result<f64> {
    Ok(1.0 - one_minus_laplace_wait(law, s)?)
}

/// Ratio sequence certifying a power-law transform asymptotic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub probe_points: Vec<f64>,
    pub ratios: Vec<f64>,
    pub converged: bool,
}

/// Dyadic probes `2^{−j}`, `j = 2..=14`.
pub fn dyadic_probes() -> Vec<f64> {
    (2..=14).map(|j| 2f64.powi(-j)).collect()
}

const CONVERGENCE_TOL: f64 = 0.02;

impl LemmaReport {
    fn from_ratios(probe_points: Vec<f64>, ratios: Vec<f64>) -> Self {
        let converged = ratios
            .last()
            .is_some_and(|r| (r - 1.0).abs() < CONVERGENCE_TOL);
        Self {
            probe_points,
            ratios,
            converged,
        }
    }

    /// `|ratio − 1|` strictly decreasing over the last `n` probes.
    pub fn deviation_decreasing(&self, n: usize) -> bool {
        let devs: Vec<f64> = self.ratios.iter().map(|r| (r - 1.0).abs()).collect();
        devs.len() >= n && devs[devs.len() - n..].windows(2).all(|w| w[1] < w[0])
    }

    /// CSV with header `probe,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("probe,ratio\n");
        for (p, r) in self.probe_points.iter().zip(&self.ratios) {
            out.push_str(&format!("{p},{r}\n"));
        }
        out
    }
}

/// `(1 − ŵ(κ_j)) / (μκ_j^α)` over the dyadic probes.
pub fn verify_lemma1(law: &JumpLaw, lc: &LemmaConstants, alpha: StabilityAlpha) -> Result<LemmaReport> {
    let probes = dyadic_probes();
    let ratios = probes
        .par_iter()
        .map(|&k| Ok(one_minus_char_fn(law, k)? / (lc.mu * k.powf(alpha.get()))))
        .collect::<Result<Vec<f64>>>()?;
    Ok(LemmaReport::from_ratios(probes, ratios))
}

/// `(1 − φ̃(s_j)) / (λs_j^β)` over the dyadic probes.
pub fn verify_lemma2(law: &WaitingLaw, lc: &LemmaConstants, beta: OrderBeta) -> Result<LemmaReport> {
    let probes = dyadic_probes();
    let ratios = probes
        .par_iter()
        .map(|&s| Ok(one_minus_laplace_wait(law, s)? / (lc.lambda * s.powf(beta.get()))))
        .collect::<Result<Vec<f64>>>()?;
    Ok(LemmaReport::from_ratios(probes, ratios))
}

/// Montroll–Weiss transform `(1 − φ̃)/s · 1/(1 − ŵφ̃)`.
pub fn montroll_weiss(w_hat: f64, phi_tilde: f64, s: f64) -> Result<f64> {
    if !(w_hat.abs() <= 1.0) || !(phi_tilde > 0.0 && phi_tilde <= 1.0) || !(s > 0.0) {
        return Err(Error::domain(format!(
            "Montroll-Weiss needs |w|<=1, 0<phi<=1, s>0; got w={w_hat}, phi={phi_tilde}, s={s}"
        )));
    }
    mw_from_complements(1.0 - w_hat, 1.0 - phi_tilde, s)
}

/// Same transform from `a = 1 − ŵ` and `b = 1 − φ̃`, using
/// `1 − ŵφ̃ = a + b − ab`.
fn mw_from_complements(a: f64, b: f64, s: f64) -> Result<f64> {
    let denom = a + b - a * b;
    if denom.abs() < 1e-300 {
        return Err(Error::numerical("Montroll-Weiss denominator vanishes", denom));
    }
    Ok(b / s / denom)
}

/// Rescaled Montroll–Weiss transform
/// `(1 − φ̃(τs))/s · 1/(1 − ŵ(hκ)φ̃(τs))`.
pub fn mw_rescaled(
    jump: &JumpLaw,
    wait: &WaitingLaw,
    pair: &ScalingPair,
    kappa: f64,
    s: f64,
) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::domain(format!("Laplace variable must be positive, got {s}")));
    }
    let a = one_minus_char_fn(jump, pair.h * kappa)?;
    let b = one_minus_laplace_wait(wait, pair.tau * s)?;
    mw_from_complements(a, b, s)
}

/// Limit transform `s^{β−1} / (s^β + |κ|^α)`.
pub fn mw_limit(alpha: StabilityAlpha, beta: OrderBeta, kappa: f64, s: f64) -> f64 {
    let sb = s.powf(beta.get());
    sb / s / (sb + kappa.abs().powf(alpha.get()))
}
