//! Monte Carlo engine for the rescaled compound renewal process
//! `S_n(h) = Σ hX_k`, `t_n(τ) = Σ τT_k`, and the exact lattice evolution
//! of the fully discrete walk.
//!
//! The particle sits at `S_n` for `t_n ≤ t < t_{n+1}`; jumps occurring
//! exactly at the horizon are observed.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::ScalingPair;
use crate::error::{Error, Result};
use crate::laws::{JumpLaw, WaitingLaw};
use crate::rng::WalkerStream;
use crate::specfun::{power_tail_sum, riemann_zeta, OrderBeta, StabilityAlpha};

/// Everything needed to generate an ensemble.
#[derive(Debug, Clone)]
pub struct WalkConfig {
    pub jump: JumpLaw,
    pub wait: WaitingLaw,
    pub scale: ScalingPair,
    pub t_max: f64,
    pub n_walkers: u64,
    pub seed: u64,
}

impl WalkConfig {
    pub fn new(
        jump: JumpLaw,
        wait: WaitingLaw,
        scale: ScalingPair,
        t_max: f64,
        n_walkers: u64,
        seed: u64,
    ) -> Result<Self> {
        let scale = ScalingPair::new(scale.h, scale.tau)?;
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::domain(format!("t_max must be positive, got {t_max}")));
        }
        if n_walkers == 0 {
            return Err(Error::domain("n_walkers must be at least 1"));
        }
        Ok(Self {
            jump,
            wait,
            scale,
            t_max,
            n_walkers,
            seed,
        })
    }
}

/// One realized path up to the horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    jump_times: Vec<f64>,
    positions: Vec<f64>,
    t_max: f64,
}

impl Trajectory {
    /// `t_1 < t_2 < …`, all `≤ t_max`.
    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    /// `S_1, S_2, …` after each jump.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// `S_n` for the `n` with `t_n ≤ t < t_{n+1}`.
    pub fn position_at(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.t_max).contains(&t) {
            return Err(Error::domain(format!(
                "time {t} outside the horizon [0, {}]",
                self.t_max
            )));
        }
        let n = self.jump_times.partition_point(|&tj| tj <= t);
        Ok(if n == 0 { 0.0 } else { self.positions[n - 1] })
    }
}

/// Drive a walk from an arbitrary uniform stream, alternating wait and
/// jump draws, until the next jump would fall after `t_max`.
pub fn simulate_with_uniforms(
    jump: &JumpLaw,
    wait: &WaitingLaw,
    scale: &ScalingPair,
    t_max: f64,
    mut uniform: impl FnMut() -> f64,
) -> Result<Trajectory> {
    let mut jump_times = Vec::new();
    let mut positions = Vec::new();
    let (mut t, mut x) = (0.0, 0.0);
    loop {
        t += scale.tau * wait.sample(uniform())?;
        if t > t_max {
            break;
        }
        x += scale.h * jump.sample(uniform())?;
        jump_times.push(t);
        positions.push(x);
    }
    Ok(Trajectory {
        jump_times,
        positions,
        t_max,
    })
}

fn check_walker(config: &WalkConfig, walker_id: u64) -> Result<()> {
    if walker_id >= config.n_walkers {
        return Err(Error::domain(format!(
            "walker {walker_id} outside [0, {})",
            config.n_walkers
        )));
    }
    Ok(())
}

/// Trajectory of walker `walker_id` on its own counter-addressed stream.
pub fn simulate_walk(config: &WalkConfig, walker_id: u64) -> Result<Trajectory> {
    check_walker(config, walker_id)?;
    let mut stream = WalkerStream::new(config.seed, walker_id);
    simulate_with_uniforms(&config.jump, &config.wait, &config.scale, config.t_max, || {
        stream.next_uniform()
    })
}

/// Positions of one walker at each of the increasing `times`, without
/// storing the trajectory.
fn positions_of_walker(config: &WalkConfig, walker_id: u64, times: &[f64]) -> Result<Vec<f64>> {
    let mut stream = WalkerStream::new(config.seed, walker_id);
    let mut out = Vec::with_capacity(times.len());
    let mut x = 0.0;
    let mut next_t = config.scale.tau * config.wait.sample(stream.next_uniform())?;
    for &target in times {
        while next_t <= target {
            x += config.scale.h * config.jump.sample(stream.next_uniform())?;
            next_t += config.scale.tau * config.wait.sample(stream.next_uniform())?;
        }
        out.push(x);
    }
    Ok(out)
}

fn check_times(config: &WalkConfig, times: &[f64]) -> Result<()> {
    for &t in times {
        if !(0.0..=config.t_max).contains(&t) {
            return Err(Error::domain(format!(
                "time {t} outside the horizon [0, {}]",
                config.t_max
            )));
        }
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("observation times must be non-decreasing"));
    }
    Ok(())
}

/// Positions of all walkers at time `t`, in walker order.
pub fn ensemble_positions(config: &WalkConfig, t: f64) -> Result<Vec<f64>> {
    Ok(ensemble_snapshots(config, &[t])?.pop().unwrap_or_default())
}

/// Positions of all walkers at several non-decreasing times:
/// `result[i][w]` is walker `w` at `times[i]`.
pub fn ensemble_snapshots(config: &WalkConfig, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    check_times(config, times)?;
    let per_walker = (0..config.n_walkers)
        .into_par_iter()
        .map(|w| positions_of_walker(config, w, times))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..times.len())
        .map(|i| per_walker.iter().map(|p| p[i]).collect())
        .collect())
}

/// Write an ensemble CSV `walker,t,x`, rows ordered by time then walker.
pub fn write_ensemble_csv<W: Write>(out: &mut W, times: &[f64], snapshots: &[Vec<f64>]) -> Result<()> {
    writeln!(out, "walker,t,x")?;
    for (t, xs) in times.iter().zip(snapshots) {
        for (w, x) in xs.iter().enumerate() {
            writeln!(out, "{w},{t},{x}")?;
        }
    }
    Ok(())
}

/// Staircase rows `(t, x)` with doubled time points at each jump.
pub fn trajectory_csv(traj: &Trajectory) -> Vec<(f64, f64)> {
    let mut rows = vec![(0.0, 0.0)];
    let mut x = 0.0;
    for (&t, &s) in traj.jump_times.iter().zip(&traj.positions) {
        rows.push((t, x));
        rows.push((t, s));
        x = s;
    }
    rows.push((traj.t_max, x));
    rows
}

/// Lattice probabilities at one integer time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeState {
    pub time_index: u64,
    /// Half-width `K`; sites are `−K..=K`.
    pub support: i64,
    /// `probabilities[i]` is the mass at site `i − K`.
    pub probabilities: Vec<f64>,
    /// Mass that has left `[−K, K]` by this time.
    pub leakage: f64,
}

impl LatticeState {
    pub fn at(&self, x: i64) -> f64 {
        if x.abs() > self.support {
            0.0
        } else {
            self.probabilities[(x + self.support) as usize]
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities.iter().sum::<f64>() + self.leakage
    }
}

/// States for `t = 0..=T` plus any warnings raised.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeEvolution {
    pub states: Vec<LatticeState>,
    pub warnings: Vec<String>,
}

/// Leakage above which a truncation warning is recorded.
pub const LEAKAGE_WARNING: f64 = 1e-6;

/// Exact evolution of the fully discrete walk (lattice jumps
/// `p_k ∝ |k|^{−(α+1)}`, integer waits `c_n ∝ n^{−(β+1)}`) on `|x| ≤ K`:
/// `p(x,t) = δ_{x,0}(1 − Φ(t)) + Σ_{m=1..t} c_m Σ_k p_k p(x−k, t−m)`.
///
/// Mass carried off the window is not renormalized but accumulated in
/// `leakage`, so `Σ_x p(x,t) + leakage(t) = 1`.
pub fn evolve_lattice(
    alpha: StabilityAlpha,
    beta: OrderBeta,
    k_max: i64,
    t_max: u64,
) -> Result<LatticeEvolution> {
    let a = alpha.get();
    let b = beta.get();
    if !(a < 2.0 && b < 1.0) {
        return Err(Error::domain(format!(
            "lattice evolution needs 0<alpha<2, 0<beta<1, got ({a}, {b})"
        )));
    }
    if k_max < 1 || t_max < 1 {
        return Err(Error::domain("lattice evolution needs K >= 1 and T >= 1"));
    }
    let width = (2 * k_max + 1) as usize;
    let zeta_a = riemann_zeta(a + 1.0)?;
    let zeta_b = riemann_zeta(b + 1.0)?;
    // jump weights p_d for d = −2K..=2K (index d + 2K)
    let span = 2 * k_max;
    let p_jump: Vec<f64> = (-span..=span)
        .map(|d| {
            if d == 0 {
                0.0
            } else {
                (d.unsigned_abs() as f64).powf(-(a + 1.0)) / (2.0 * zeta_a)
            }
        })
        .collect();
    // off-window jump mass from site y: Q(y) = Σ_{|y+k|>K} p_k
    // Σ_{k ≥ j} p_k for j ≥ 1
    let tail_from = |j: i64| power_tail_sum(a + 1.0, j as u64) / (2.0 * zeta_a);
    let off_window: Vec<f64> = (-k_max..=k_max)
        .map(|y| tail_from(k_max - y + 1) + tail_from(k_max + y + 1))
        .collect();
    let c: Vec<f64> = (0..=t_max)
        .map(|n| if n == 0 { 0.0 } else { (n as f64).powf(-(b + 1.0)) / zeta_b })
        .collect();

    let mut states: Vec<LatticeState> = Vec::with_capacity(t_max as usize + 1);
    // q[t'] = (p_jump * p̄(·, t')) restricted to the window, and its leak
    let mut convolved: Vec<Vec<f64>> = Vec::with_capacity(t_max as usize);
    let mut leaked_by_jump: Vec<f64> = Vec::with_capacity(t_max as usize);
    let mut survival = 1.0; // 1 − Φ(t)
    for t in 0..=t_max {
        if t > 0 {
            survival -= c[t as usize];
        }
        let mut p = vec![0.0; width];
        p[k_max as usize] = survival.max(0.0);
        let mut leakage = 0.0;
        for m in 1..=t {
            let src = (t - m) as usize;
            let cm = c[m as usize];
            for (pi, qi) in p.iter_mut().zip(&convolved[src]) {
                *pi += cm * qi;
            }
            leakage += cm * (states[src].leakage + leaked_by_jump[src]);
        }
        let state = LatticeState {
            time_index: t,
            support: k_max,
            probabilities: p,
            leakage,
        };
        if t < t_max {
            let probs = &state.probabilities;
            let q: Vec<f64> = (0..width)
                .into_par_iter()
                .map(|xi| {
                    probs
                        .iter()
                        .enumerate()
                        .map(|(yi, py)| py * p_jump[(xi as i64 - yi as i64 + span) as usize])
                        .sum()
                })
                .collect();
            convolved.push(q);
            leaked_by_jump.push(probs.iter().zip(&off_window).map(|(py, qy)| py * qy).sum());
        }
        states.push(state);
    }
    let worst = states.iter().map(|s| s.leakage).fold(0.0, f64::max);
    let warnings = if worst > LEAKAGE_WARNING {
        vec![format!(
            "lattice truncation K={k_max} leaks {worst:.3e} of the mass by t={t_max}"
        )]
    } else {
        Vec::new()
    };
    Ok(LatticeEvolution { states, warnings })
}

/// Write lattice states as CSV `t,x,p`.
pub fn write_lattice_csv<W: Write>(out: &mut W, states: &[LatticeState]) -> Result<()> {
    writeln!(out, "t,x,p")?;
    for s in states {
        for (i, p) in s.probabilities.iter().enumerate() {
            writeln!(out, "{},{},{}", s.time_index, i as i64 - s.support, p)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit() -> ScalingPair {
        ScalingPair::new(1.0, 1.0).unwrap()
    }

    fn fixed_stream_trajectory() -> Trajectory {
        let jump = JumpLaw::continuous_power(1.0).unwrap();
        let wait = WaitingLaw::continuous_power(0.5).unwrap();
        let mut us = [0.5, 0.75, 0.5, 0.25, 0.999_999].into_iter();
        simulate_with_uniforms(&jump, &wait, &unit(), 1.0, || us.next().unwrap()).unwrap()
    }

    #[test]
    fn fixed_stream_example() {
        let traj = fixed_stream_trajectory();
        assert_eq!(traj.jump_times().len(), 2);
        assert_relative_eq!(traj.jump_times()[0], 1.0 / PI, max_relative = 1e-14);
        assert_relative_eq!(traj.jump_times()[1], 2.0 / PI, max_relative = 1e-14);
        assert_relative_eq!(traj.positions()[0], 1.0, max_relative = 1e-14);
        assert!(traj.positions()[1].abs() < 1e-14);
        assert_eq!(traj.position_at(0.0).unwrap(), 0.0);
        assert_eq!(traj.position_at(0.5).unwrap(), traj.positions()[0]);
        let t1 = traj.jump_times()[0];
        assert_eq!(traj.position_at(t1 * (1.0 - 1e-12)).unwrap(), 0.0);
        assert_eq!(traj.position_at(t1).unwrap(), traj.positions()[0]);
        assert!(traj.position_at(1.5).is_err());
        assert!(traj.position_at(-0.1).is_err());
        assert_eq!(trajectory_csv(&traj).len(), 6);
    }

    #[test]
    fn horizon_before_first_jump() {
        let jump = JumpLaw::Gaussian;
        let wait = WaitingLaw::Exponential;
        let mut us = [0.9, 0.1].into_iter();
        let traj = simulate_with_uniforms(&jump, &wait, &unit(), 0.5, || us.next().unwrap()).unwrap();
        assert!(traj.jump_times().is_empty());
        assert_eq!(trajectory_csv(&traj), vec![(0.0, 0.0), (0.5, 0.0)]);
    }

    #[test]
    fn staircase_rows() {
        let traj = Trajectory {
            jump_times: vec![0.3],
            positions: vec![2.0],
            t_max: 1.0,
        };
        assert_eq!(
            trajectory_csv(&traj),
            vec![(0.0, 0.0), (0.3, 0.0), (0.3, 2.0), (1.0, 2.0)]
        );
    }

    #[test]
    fn jump_at_horizon_is_observed() {
        let jump = JumpLaw::Gaussian;
        let wait = WaitingLaw::Exponential;
        let u = -(-1.0f64).exp_m1(); // exponential sample of exactly 1
        let t_exact = WaitingLaw::Exponential.sample(u).unwrap();
        let mut us = [u, 0.9, 0.999].into_iter();
        let traj = simulate_with_uniforms(&jump, &wait, &unit(), t_exact, || us.next().unwrap()).unwrap();
        assert_eq!(traj.jump_times(), &[t_exact]);
        assert_eq!(traj.position_at(t_exact).unwrap(), traj.positions()[0]);
    }

    #[test]
    fn config_validation() {
        let cfg = |h: f64, t: f64, n: u64| {
            WalkConfig::new(
                JumpLaw::Gaussian,
                WaitingLaw::Exponential,
                ScalingPair { h, tau: 1.0 },
                t,
                n,
                0,
            )
        };
        assert!(cfg(0.0, 1.0, 1).is_err());
        assert!(cfg(1.0, 0.0, 1).is_err());
        assert!(cfg(1.0, 1.0, 0).is_err());
        let c = cfg(1.0, 1.0, 2).unwrap();
        assert!(simulate_walk(&c, 2).is_err());
    }

    #[test]
    fn ensemble_consistent_with_single_walks() {
        let cfg = WalkConfig::new(
            JumpLaw::continuous_power(1.5).unwrap(),
            WaitingLaw::continuous_power(0.5).unwrap(),
            ScalingPair::new(0.1, 0.01).unwrap(),
            2.0,
            50,
            11,
        )
        .unwrap();
        assert!(ensemble_positions(&cfg, 0.0).unwrap().iter().all(|&x| x == 0.0));
        let times = [0.5, 1.0, 2.0];
        let snaps = ensemble_snapshots(&cfg, &times).unwrap();
        for w in 0..cfg.n_walkers {
            let traj = simulate_walk(&cfg, w).unwrap();
            for (i, &t) in times.iter().enumerate() {
                assert_eq!(snaps[i][w as usize], traj.position_at(t).unwrap());
            }
        }
        assert!(ensemble_snapshots(&cfg, &[1.0, 0.5]).is_err());
        assert!(ensemble_positions(&cfg, 3.0).is_err());
    }

    #[test]
    fn ensemble_independent_of_thread_count() {
        let cfg = WalkConfig::new(
            JumpLaw::Gaussian,
            WaitingLaw::Exponential,
            ScalingPair::new(0.1, 0.005).unwrap(),
            1.0,
            500,
            5,
        )
        .unwrap();
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| ensemble_positions(&cfg, 1.0).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(3));
    }

    #[test]
    fn lattice_initial_and_first_step() {
        let evo = evolve_lattice(
            StabilityAlpha::new(1.5).unwrap(),
            OrderBeta::new(0.5).unwrap(),
            50,
            3,
        )
        .unwrap();
        let s0 = &evo.states[0];
        assert_eq!(s0.at(0), 1.0);
        assert_eq!(s0.probabilities.iter().sum::<f64>(), 1.0);
        let c1 = 1.0 / riemann_zeta(1.5).unwrap();
        let s1 = &evo.states[1];
        assert_relative_eq!(s1.at(0), 1.0 - c1, max_relative = 1e-14);
        assert_relative_eq!(s1.at(0), 0.617_206_6, max_relative = 1e-6);
        for k in [1, -1, 7, -30] {
            let pk = crate::laws::lattice_jump_pmf(StabilityAlpha::new(1.5).unwrap(), k).unwrap();
            assert_relative_eq!(s1.at(k), c1 * pk, max_relative = 1e-13);
        }
        for s in &evo.states {
            assert!((s.total_mass() - 1.0).abs() < 1e-12);
            assert!(s.probabilities.iter().all(|&p| p >= 0.0));
        }
        assert!(!evo.warnings.is_empty());
    }

    /// The window-restricted recursion only drops terms, so a wider window
    /// dominates a narrower one site by site, and the difference is bounded
    /// by the narrower window's leakage.
    #[test]
    fn lattice_truncation_is_monotone() {
        let a = StabilityAlpha::new(1.0).unwrap();
        let b = OrderBeta::new(0.7).unwrap();
        let narrow = evolve_lattice(a, b, 20, 6).unwrap();
        let wide = evolve_lattice(a, b, 80, 6).unwrap();
        for (n, w) in narrow.states.iter().zip(&wide.states) {
            let mut gap = 0.0;
            for x in -20..=20 {
                assert!(w.at(x) >= n.at(x) - 1e-16);
                gap += w.at(x) - n.at(x);
            }
            assert!(gap <= n.leakage + 1e-14);
        }
    }

    #[test]
    fn csv_headers() {
        let mut buf = Vec::new();
        write_ensemble_csv(&mut buf, &[1.0], &[vec![0.5, -1.0]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "walker,t,x\n0,1,0.5\n1,1,-1\n");
        let evo = evolve_lattice(
            StabilityAlpha::new(1.5).unwrap(),
            OrderBeta::new(0.5).unwrap(),
            1,
            1,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_lattice_csv(&mut buf, &evo.states).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,x,p\n0,-1,0\n0,0,1\n"));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn exponential_waits_give_poisson_counts() {
        let n = 20_000;
        let cfg = WalkConfig::new(JumpLaw::Gaussian, WaitingLaw::Exponential, unit(), 10.0, n, 99).unwrap();
        let counts: Vec<f64> = (0..n)
            .map(|id| simulate_walk(&cfg, id).unwrap().jump_times().len() as f64)
            .collect();
        let nf = n as f64;
        let mean = counts.iter().sum::<f64>() / nf;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        // three standard errors of the mean and of the variance
        assert!((mean - 10.0).abs() < 3.0 * (10.0 / nf).sqrt(), "{mean}");
        assert!((var - 10.0).abs() < 3.0 * ((10.0 + 2.0 * 100.0) / nf).sqrt(), "{var}");
    }

    #[test]
    fn variance_stable_under_refinement() {
        use crate::asymptotics::{scaling_tau, LemmaConstants};
        let n = 20_000;
        let jump = JumpLaw::Gaussian;
        let wait = WaitingLaw::Exponential;
        let lc = LemmaConstants::for_laws(&jump, &wait).unwrap();
        let var = |h: f64| {
            let pair = scaling_tau(h, &lc, jump.alpha(), wait.beta()).unwrap();
            let cfg = WalkConfig::new(jump.clone(), wait.clone(), pair, 1.0, n, 5).unwrap();
            let xs = ensemble_positions(&cfg, 1.0).unwrap();
            let m = xs.iter().sum::<f64>() / n as f64;
            xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n as f64 - 1.0)
        };
        let (coarse, fine) = (var(0.1), var(0.05));
        // sd of a sample variance of a near-Gaussian with variance 2 is 2·sqrt(2/n)
        let sd = 2.0 * (2.0 / n as f64).sqrt();
        assert!((coarse - fine).abs() < 4.0 * 2f64.sqrt() * sd, "{coarse} {fine}");
    }
}
