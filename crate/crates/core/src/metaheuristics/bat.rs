use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{argmin, check_bounds, Execution, Objective, OptimizerTrace};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatConfig {
    pub population: usize,
    pub f_min: f64,
    pub f_max: f64,
    /// Initial loudness A₀.
    pub loudness: f64,
    /// Initial and asymptotic pulse rate r₀.
    pub pulse_rate: f64,
    /// Loudness decay per accepted move.
    pub alpha: f64,
    /// Pulse-rate growth constant.
    pub gamma: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for BatConfig {
    /// Canonical frequency range, loudness and pulse rate. Loudness decays
    /// by 0.5 per accepted move: it only shrinks on acceptance, and with
    /// 0.9 the walk step is still ~0.25 after 300 iterations.
    fn default() -> Self {
        Self {
            population: 30,
            f_min: 0.0,
            f_max: 2.0,
            loudness: 1.0,
            pulse_rate: 0.5,
            alpha: 0.5,
            gamma: 0.9,
            max_iterations: 300,
            seed: 0,
        }
    }
}

impl BatConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field, message: String| Err(Error::InvalidConfig { field, message });
        if self.population < 2 {
            return bad(
                "population",
                format!("need at least 2, got {}", self.population),
            );
        }
        if !(self.f_min.is_finite() && self.f_max.is_finite() && self.f_min < self.f_max) {
            return bad(
                "f_min",
                format!("need f_min < f_max, got {} / {}", self.f_min, self.f_max),
            );
        }
        if !(self.loudness.is_finite() && self.loudness > 0.0) {
            return bad(
                "loudness",
                format!("must be positive, got {}", self.loudness),
            );
        }
        if !(0.0..=1.0).contains(&self.pulse_rate) {
            return bad(
                "pulse_rate",
                format!("must lie in [0, 1], got {}", self.pulse_rate),
            );
        }
        for (field, v) in [("alpha", self.alpha), ("gamma", self.gamma)] {
            if !(v > 0.0 && v < 1.0) {
                return bad(field, format!("must lie in (0, 1), got {v}"));
            }
        }
        if self.max_iterations == 0 {
            return bad("max_iterations", "must be at least 1".into());
        }
        Ok(())
    }
}

/// Loudness after `accepts` accepted moves: `A₀ · alpha^accepts`.
pub fn loudness_after(initial: f64, alpha: f64, accepts: u32) -> f64 {
    initial * alpha.powi(accepts as i32)
}

/// Pulse rate set on acceptance at iteration `t`: `r₀ (1 − e^{−γ t})`.
pub fn pulse_rate(r0: f64, gamma: f64, t: usize) -> f64 {
    r0 * (1.0 - (-gamma * t as f64).exp())
}

pub fn optimize_bat<O: Objective + ?Sized>(obj: &O, cfg: &BatConfig) -> Result<OptimizerTrace> {
    optimize_bat_with(obj, cfg, Execution::Serial)
}

/// Bat algorithm with synchronous global-best updates.
///
/// Per iteration `t` (from 1) and bat `i`: draw `f_i = f_min + (f_max −
/// f_min) β`, update `v ← v + (x − gbest) f_i` and propose `x + v` clamped to
/// the box. With probability `1 − r_i` the proposal is replaced by a local
/// walk `gbest + ε Ā`, `ε ~ U[-1, 1]^d`, `Ā` the mean loudness at the start of
/// the iteration. A proposal replaces `x` when it improves on it and a
/// uniform draw falls below `A_i`; then `A_i ← alpha A_i` and
/// `r_i ← r₀ (1 − e^{−γ t})`. The global best follows any strictly better
/// proposal.
pub fn optimize_bat_with<O: Objective + ?Sized>(
    obj: &O,
    cfg: &BatConfig,
    exec: Execution,
) -> Result<OptimizerTrace> {
    cfg.validate()?;
    check_bounds(obj)?;
    let dim = obj.dim();
    let (lo, hi) = obj.bounds();
    let n = cfg.population;
    let mut rng = rng::seeded(cfg.seed);

    let mut pos: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|j| rng.random_range(lo[j]..=hi[j])).collect())
        .collect();
    let mut vel = vec![vec![0.0; dim]; n];
    let mut fitness = exec.evaluate(obj, &pos)?;
    let mut evaluations = n;
    let mut loudness = vec![cfg.loudness; n];
    let mut rate = vec![cfg.pulse_rate; n];

    let g = argmin(&fitness);
    let mut gbest = pos[g].clone();
    let mut gbest_f = fitness[g];
    let mut history = Vec::with_capacity(cfg.max_iterations);
    let mut proposals = vec![vec![0.0; dim]; n];
    let mut accept_draw = vec![0.0; n];

    for t in 1..=cfg.max_iterations {
        let mean_loudness = loudness.iter().sum::<f64>() / n as f64;
        for i in 0..n {
            let beta: f64 = rng.random();
            let freq = cfg.f_min + (cfg.f_max - cfg.f_min) * beta;
            let walk = rng.random::<f64>() > rate[i];
            let (x, v, cand) = (&pos[i], &mut vel[i], &mut proposals[i]);
            for j in 0..dim {
                v[j] += (x[j] - gbest[j]) * freq;
                cand[j] = (x[j] + v[j]).clamp(lo[j], hi[j]);
            }
            if walk {
                for j in 0..dim {
                    let eps: f64 = rng.random_range(-1.0..=1.0);
                    cand[j] = (gbest[j] + eps * mean_loudness).clamp(lo[j], hi[j]);
                }
            }
            accept_draw[i] = rng.random();
        }
        let cand_f = exec.evaluate(obj, &proposals)?;
        evaluations += n;
        for i in 0..n {
            if cand_f[i] < fitness[i] && accept_draw[i] < loudness[i] {
                pos[i].clone_from(&proposals[i]);
                fitness[i] = cand_f[i];
                loudness[i] *= cfg.alpha;
                rate[i] = pulse_rate(cfg.pulse_rate, cfg.gamma, t);
            }
            if cand_f[i] < gbest_f {
                gbest_f = cand_f[i];
                gbest.clone_from(&proposals[i]);
            }
        }
        history.push(gbest_f);
    }

    Ok(OptimizerTrace {
        best_history: history,
        best_position: gbest,
        best_fitness: gbest_f,
        evaluations,
    })
}
