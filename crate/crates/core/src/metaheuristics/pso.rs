use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{argmin, check_bounds, Execution, Objective, OptimizerTrace};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub max_iterations: usize,
    /// Velocity limit per coordinate as a fraction of that coordinate's range.
    pub velocity_fraction: f64,
    pub seed: u64,
}

impl Default for PsoConfig {
    /// Constriction-equivalent weights.
    fn default() -> Self {
        Self {
            swarm_size: 50,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            max_iterations: 300,
            velocity_fraction: 0.2,
            seed: 0,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field, message: String| Err(Error::InvalidConfig { field, message });
        if self.swarm_size < 2 {
            return bad(
                "swarm_size",
                format!("need at least 2, got {}", self.swarm_size),
            );
        }
        for (field, v) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(field, format!("must be non-negative, got {v}"));
            }
        }
        if self.max_iterations == 0 {
            return bad("max_iterations", "must be at least 1".into());
        }
        if !(self.velocity_fraction > 0.0 && self.velocity_fraction <= 1.0) {
            return bad(
                "velocity_fraction",
                format!("must lie in (0, 1], got {}", self.velocity_fraction),
            );
        }
        Ok(())
    }
}

pub fn optimize_pso<O: Objective + ?Sized>(obj: &O, cfg: &PsoConfig) -> Result<OptimizerTrace> {
    optimize_pso_with(obj, cfg, Execution::Serial)
}

/// Global-best PSO with synchronous best updates.
///
/// Positions start uniform in the box with zero velocity. Each iteration
/// applies `v ← w v + c1 r1 ∘ (pbest − x) + c2 r2 ∘ (gbest − x)`, clamps `v`
/// to `±velocity_fraction · range` and `x + v` to the box, then evaluates the
/// swarm and updates personal and global bests on strict improvement.
pub fn optimize_pso_with<O: Objective + ?Sized>(
    obj: &O,
    cfg: &PsoConfig,
    exec: Execution,
) -> Result<OptimizerTrace> {
    cfg.validate()?;
    check_bounds(obj)?;
    let dim = obj.dim();
    let (lo, hi) = obj.bounds();
    let vmax: Vec<f64> = (0..dim)
        .map(|j| cfg.velocity_fraction * (hi[j] - lo[j]))
        .collect();
    let mut rng = rng::seeded(cfg.seed);

    let mut pos: Vec<Vec<f64>> = (0..cfg.swarm_size)
        .map(|_| (0..dim).map(|j| rng.random_range(lo[j]..=hi[j])).collect())
        .collect();
    let mut vel = vec![vec![0.0; dim]; cfg.swarm_size];
    let fitness = exec.evaluate(obj, &pos)?;
    let mut evaluations = pos.len();

    let mut pbest = pos.clone();
    let mut pbest_f = fitness;
    let g = argmin(&pbest_f);
    let mut gbest = pbest[g].clone();
    let mut gbest_f = pbest_f[g];
    let mut history = Vec::with_capacity(cfg.max_iterations);

    for _ in 0..cfg.max_iterations {
        for i in 0..cfg.swarm_size {
            let r1: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let r2: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let (x, v) = (&mut pos[i], &mut vel[i]);
            for j in 0..dim {
                let vj = cfg.inertia * v[j]
                    + cfg.cognitive * r1[j] * (pbest[i][j] - x[j])
                    + cfg.social * r2[j] * (gbest[j] - x[j]);
                v[j] = vj.clamp(-vmax[j], vmax[j]);
                x[j] = (x[j] + v[j]).clamp(lo[j], hi[j]);
            }
            debug_assert!(x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(x, (l, h))| l <= x && x <= h));
        }
        let fitness = exec.evaluate(obj, &pos)?;
        evaluations += pos.len();
        for (i, &f) in fitness.iter().enumerate() {
            if f < pbest_f[i] {
                pbest_f[i] = f;
                pbest[i].clone_from(&pos[i]);
                if f < gbest_f {
                    gbest_f = f;
                    gbest.clone_from(&pos[i]);
                }
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
