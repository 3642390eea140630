//! Jump and waiting-time laws.
//!
//! Each law is a deterministic map from a uniform variate to a sample
//! (inverse-CDF sampling), together with its CDF or PMF and the tail
//! constants that fix the scale of its transform asymptotics.
//!
//! Law tokens: `cpow:<alpha>`, `gauss`, `lpow:<alpha>` for jumps and
//! `cpow:<beta>`, `exp`, `dpow:<beta>` for waiting times.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{
    gamma, normal_cdf, normal_quantile, power_tail_sum, riemann_zeta, OrderBeta, StabilityAlpha,
};

/// Number of lattice sites covered by the precomputed tail tables.
pub const LATTICE_TABLE_SIZE: usize = 1_000_000;

/// Normalized tail sums `S(m) = Σ_{j ≥ m} j^{−(a+1)} / scale` of a power
/// lattice, tabulated for `m = 1..=LATTICE_TABLE_SIZE` with an
/// Euler–Maclaurin continuation beyond.
#[derive(Clone)]
pub struct PowerTable {
    exponent: f64,
    scale: f64,
    tails: Arc<[f64]>,
}

impl fmt::Debug for PowerTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerTable")
            .field("exponent", &self.exponent)
            .field("scale", &self.scale)
            .finish_non_exhaustive()
    }
}

impl PowerTable {
    fn new(exponent: f64, scale: f64) -> Self {
        const BLOCK: usize = 1024;
        let s = exponent + 1.0;
        let mut tails = vec![0.0; LATTICE_TABLE_SIZE];
        // restart the backward accumulation from an exact tail every block
        for block_end in (0..LATTICE_TABLE_SIZE).step_by(BLOCK).map(|b| (b + BLOCK).min(LATTICE_TABLE_SIZE)) {
            let mut acc = power_tail_sum(s, block_end as u64 + 1);
            for i in (block_end.saturating_sub(BLOCK)..block_end).rev() {
                acc += ((i + 1) as f64).powf(-s);
                tails[i] = acc / scale;
            }
        }
        Self {
            exponent,
            scale,
            tails: tails.into(),
        }
    }

    /// Tail exponent `a` in `p_j ∝ j^{−(a+1)}`.
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Probability weight of site `j ≥ 1` (before any symmetric split).
    pub fn weight(&self, j: u64) -> f64 {
        (j as f64).powf(-(self.exponent + 1.0)) / self.scale
    }

    /// `S(m)` for any `m ≥ 1`.
    pub fn tail(&self, m: u64) -> f64 {
        debug_assert!(m >= 1);
        match self.tails.get((m - 1) as usize) {
            Some(v) => *v,
            None => power_tail_sum(self.exponent + 1.0, m) / self.scale,
        }
    }

    /// Largest `m ≥ 1` with `S(m) ≥ v` (or `S(m) > v` when `strict`).
    fn largest_index(&self, v: f64, strict: bool) -> f64 {
        let holds = |s: f64| if strict { s > v } else { s >= v };
        let count = self.tails.partition_point(|&s| holds(s));
        if count < self.tails.len() {
            return count as f64;
        }
        // Pareto continuation: S(m) ≈ m^{−a} / (a·scale)
        let a = self.exponent;
        let guess = (v * self.scale * a).powf(-1.0 / a);
        if !(guess < 1e15) {
            return guess.floor();
        }
        let mut m = (guess as u64).max(self.tails.len() as u64);
        while holds(self.tail(m + 1)) {
            m += 1;
        }
        while m > 1 && !holds(self.tail(m)) {
            m -= 1;
        }
        m as f64
    }
}

/// Jump law `W`.
#[derive(Debug, Clone)]
pub enum JumpLaw {
    /// `W(x) = 1/2 + sign(x)·(1/2)·|x|^α/(1+|x|^α)`, `0 < α < 2`.
    ContinuousPower { alpha: StabilityAlpha },
    /// Standard normal jumps, the `α = 2` border case.
    Gaussian,
    /// `p_0 = 0`, `p_k = |k|^{−(α+1)} / (2ζ(α+1))`, `0 < α < 2`.
    LatticePower { alpha: StabilityAlpha, table: PowerTable },
}

/// Waiting-time law `Φ`.
#[derive(Debug, Clone)]
pub enum WaitingLaw {
    /// `Φ(t) = 1 − 1/(1 + Γ(1−β)·t^β)`, `0 < β < 1`.
    ContinuousPower { beta: OrderBeta, gamma_one_minus_beta: f64 },
    /// Unit-mean exponential waits, the `β = 1` border case.
    Exponential,
    /// `c_n = n^{−(β+1)} / ζ(β+1)` on `n ≥ 1`, `0 < β < 1`.
    DiscretePower { beta: OrderBeta, table: PowerTable },
}

fn strict_alpha(alpha: f64) -> Result<StabilityAlpha> {
    if alpha > 0.0 && alpha < 2.0 {
        StabilityAlpha::new(alpha)
    } else {
        Err(Error::domain(format!("power-law jumps need 0 < alpha < 2, got {alpha}")))
    }
}

fn strict_beta(beta: f64) -> Result<OrderBeta> {
    if beta > 0.0 && beta < 1.0 {
        OrderBeta::new(beta)
    } else {
        Err(Error::domain(format!("power-law waits need 0 < beta < 1, got {beta}")))
    }
}

fn check_uniform(u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("uniform variate must lie in (0, 1), got {u}")))
    }
}

impl JumpLaw {
    pub fn continuous_power(alpha: f64) -> Result<Self> {
        Ok(JumpLaw::ContinuousPower {
            alpha: strict_alpha(alpha)?,
        })
    }

    pub fn lattice_power(alpha: f64) -> Result<Self> {
        let alpha = strict_alpha(alpha)?;
        let a = alpha.get();
        let table = PowerTable::new(a, 2.0 * riemann_zeta(a + 1.0)?);
        Ok(JumpLaw::LatticePower { alpha, table })
    }

    /// Space order of the law; 2 for the Gaussian case.
    pub fn alpha(&self) -> StabilityAlpha {
        match self {
            JumpLaw::ContinuousPower { alpha } | JumpLaw::LatticePower { alpha, .. } => *alpha,
            JumpLaw::Gaussian => StabilityAlpha::new(2.0).expect("2 is a valid order"),
        }
    }

    /// `W(x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        match self {
            JumpLaw::ContinuousPower { .. } | JumpLaw::Gaussian => {
                let s = self.survival(x.abs());
                Ok(if x >= 0.0 { 1.0 - s } else { s })
            }
            JumpLaw::LatticePower { .. } => Err(Error::domain(
                "lattice jump law has no continuous CDF; use lattice_jump_pmf",
            )),
        }
    }

    /// `1 − W(x)` for `x ≥ 0`; for lattice laws `P(K > x)`.
    pub fn survival(&self, x: f64) -> f64 {
        match self {
            JumpLaw::ContinuousPower { alpha } => 0.5 / (1.0 + x.powf(alpha.get())),
            JumpLaw::Gaussian => normal_cdf(-x),
            JumpLaw::LatticePower { table, .. } => table.tail(x.floor() as u64 + 1),
        }
    }

    /// The `u`-quantile of the law.
    pub fn sample(&self, u: f64) -> Result<f64> {
        check_uniform(u)?;
        Ok(match self {
            JumpLaw::ContinuousPower { alpha } => {
                let (q, sign) = if u > 0.5 { (1.0 - u, 1.0) } else { (u, -1.0) };
                if q == 0.5 {
                    return Ok(0.0);
                }
                sign * ((1.0 - 2.0 * q) / (2.0 * q)).powf(1.0 / alpha.get())
            }
            JumpLaw::Gaussian => normal_quantile(u)?,
            JumpLaw::LatticePower { table, .. } => {
                if u <= 0.5 {
                    -table.largest_index(u, false)
                } else {
                    table.largest_index(1.0 - u, true)
                }
            }
        })
    }

    /// `p_k` for lattice laws.
    pub fn pmf(&self, k: i64) -> Result<f64> {
        match self {
            JumpLaw::LatticePower { table, .. } => Ok(if k == 0 {
                0.0
            } else {
                table.weight(k.unsigned_abs())
            }),
            _ => Err(Error::domain("pmf is defined for lattice jump laws only")),
        }
    }
}

impl WaitingLaw {
    pub fn continuous_power(beta: f64) -> Result<Self> {
        let beta = strict_beta(beta)?;
        Ok(WaitingLaw::ContinuousPower {
            beta,
            gamma_one_minus_beta: gamma(1.0 - beta.get())?,
        })
    }

    pub fn discrete_power(beta: f64) -> Result<Self> {
        let beta = strict_beta(beta)?;
        let b = beta.get();
        let table = PowerTable::new(b, riemann_zeta(b + 1.0)?);
        Ok(WaitingLaw::DiscretePower { beta, table })
    }

    /// Time order of the law; 1 for the exponential case.
    pub fn beta(&self) -> OrderBeta {
        match self {
            WaitingLaw::ContinuousPower { beta, .. } | WaitingLaw::DiscretePower { beta, .. } => {
                *beta
            }
            WaitingLaw::Exponential => OrderBeta::new(1.0).expect("1 is a valid order"),
        }
    }

    /// `Φ(t)`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("waiting time must be >= 0, got {t}")));
        }
        match self {
            WaitingLaw::DiscretePower { .. } => Err(Error::domain(
                "discrete waiting law has no continuous CDF; use discrete_wait_pmf",
            )),
            _ => Ok(1.0 - self.survival(t)),
        }
    }

    /// `1 − Φ(t)` for `t ≥ 0`.
    pub fn survival(&self, t: f64) -> f64 {
        match self {
            WaitingLaw::ContinuousPower {
                beta,
                gamma_one_minus_beta,
            } => 1.0 / (1.0 + gamma_one_minus_beta * t.powf(beta.get())),
            WaitingLaw::Exponential => (-t).exp(),
            WaitingLaw::DiscretePower { table, .. } => table.tail(t.floor() as u64 + 1),
        }
    }

    /// The `u`-quantile of the law.
    pub fn sample(&self, u: f64) -> Result<f64> {
        check_uniform(u)?;
        Ok(match self {
            WaitingLaw::ContinuousPower {
                beta,
                gamma_one_minus_beta,
            } => (u / ((1.0 - u) * gamma_one_minus_beta)).powf(1.0 / beta.get()),
            WaitingLaw::Exponential => -(-u).ln_1p(),
            WaitingLaw::DiscretePower { table, .. } => table.largest_index(1.0 - u, true),
        })
    }

    /// `c_n` for discrete laws.
    pub fn pmf(&self, n: i64) -> Result<f64> {
        match self {
            WaitingLaw::DiscretePower { table, .. } => {
                if n < 1 {
                    return Err(Error::domain(format!("waiting index must be >= 1, got {n}")));
                }
                Ok(table.weight(n as u64))
            }
            _ => Err(Error::domain("pmf is defined for discrete waiting laws only")),
        }
    }
}

/// `W(x)` for the continuous jump laws.
pub fn jump_cdf(law: &JumpLaw, x: f64) -> Result<f64> {
    law.cdf(x)
}

/// `Φ(t)` for the continuous waiting laws.
pub fn waiting_cdf(law: &WaitingLaw, t: f64) -> Result<f64> {
    law.cdf(t)
}

pub fn sample_jump(law: &JumpLaw, u: f64) -> Result<f64> {
    law.sample(u)
}

pub fn sample_wait(law: &WaitingLaw, u: f64) -> Result<f64> {
    law.sample(u)
}

/// `p_k = b|k|^{−(α+1)}` with `b = 1/(2ζ(α+1))` and `p_0 = 0`.
pub fn lattice_jump_pmf(alpha: StabilityAlpha, k: i64) -> Result<f64> {
    let a = strict_alpha(alpha.get())?.get();
    if k == 0 {
        return Ok(0.0);
    }
    Ok((k.unsigned_abs() as f64).powf(-(a + 1.0)) / (2.0 * riemann_zeta(a + 1.0)?))
}

/// `c_n = c·n^{−(β+1)}` with `c = 1/ζ(β+1)`.
pub fn discrete_wait_pmf(beta: OrderBeta, n: i64) -> Result<f64> {
    let b = strict_beta(beta.get())?.get();
    if n < 1 {
        return Err(Error::domain(format!("waiting index must be >= 1, got {n}")));
    }
    Ok((n as f64).powf(-(b + 1.0)) / riemann_zeta(b + 1.0)?)
}

/// Tail amplitudes and moments entering the transform asymptotics.
/// Exactly one field of each jump/wait pair is populated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailConstants {
    pub jump_b: Option<f64>,
    pub jump_sigma2: Option<f64>,
    pub wait_c: Option<f64>,
    pub wait_rho: Option<f64>,
}

pub fn tail_constants(jump: &JumpLaw, wait: &WaitingLaw) -> Result<TailConstants> {
    let (jump_b, jump_sigma2) = match jump {
        JumpLaw::ContinuousPower { alpha } => (Some(alpha.get() / 2.0), None),
        JumpLaw::LatticePower { alpha, .. } => {
            (Some(1.0 / (2.0 * riemann_zeta(alpha.get() + 1.0)?)), None)
        }
        JumpLaw::Gaussian => (None, Some(1.0)),
    };
    let (wait_c, wait_rho) = match wait {
        WaitingLaw::ContinuousPower { beta, .. } => (Some(1.0 / gamma(-beta.get())?.abs()), None),
        WaitingLaw::DiscretePower { beta, .. } => (Some(1.0 / riemann_zeta(beta.get() + 1.0)?), None),
        WaitingLaw::Exponential => (None, Some(1.0)),
    };
    Ok(TailConstants {
        jump_b,
        jump_sigma2,
        wait_c,
        wait_rho,
    })
}

fn parse_order(token: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Usage(format!("invalid law token '{token}'")))
}

impl FromStr for JumpLaw {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("invalid law token '{token}'"));
        match token.split_once(':') {
            None if token == "gauss" => Ok(JumpLaw::Gaussian),
            Some(("cpow", v)) => JumpLaw::continuous_power(parse_order(token, v)?).map_err(|_| bad()),
            Some(("lpow", v)) => JumpLaw::lattice_power(parse_order(token, v)?).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl FromStr for WaitingLaw {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("invalid law token '{token}'"));
        match token.split_once(':') {
            None if token == "exp" => Ok(WaitingLaw::Exponential),
            Some(("cpow", v)) => {
                WaitingLaw::continuous_power(parse_order(token, v)?).map_err(|_| bad())
            }
            Some(("dpow", v)) => WaitingLaw::discrete_power(parse_order(token, v)?).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for JumpLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JumpLaw::ContinuousPower { alpha } => write!(f, "cpow:{}", alpha.get()),
            JumpLaw::Gaussian => write!(f, "gauss"),
            JumpLaw::LatticePower { alpha, .. } => write!(f, "lpow:{}", alpha.get()),
        }
    }
}

impl fmt::Display for WaitingLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaitingLaw::ContinuousPower { beta, .. } => write!(f, "cpow:{}", beta.get()),
            WaitingLaw::Exponential => write!(f, "exp"),
            WaitingLaw::DiscretePower { beta, .. } => write!(f, "dpow:{}", beta.get()),
        }
    }
}
