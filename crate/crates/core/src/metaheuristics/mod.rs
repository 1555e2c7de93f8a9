//! Population-based optimizers over box-bounded objectives.
//!
//! Both optimizers draw every random number for an iteration serially,
//! in particle-index order, before evaluating the population. Evaluation
//! may then run on a thread pool ([`Execution::Threads`]) without changing
//! any result bit.

mod bat;
mod grid;
mod objective;
mod pso;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bat::{loudness_after, optimize_bat, optimize_bat_with, pulse_rate, BatConfig};
pub use grid::{grid_search, median, BatGrid, GridEntry, GridResult, PsoGrid};
pub use objective::{
    fnn_weight_objective, Counting, FnObjective, FnnWeightObjective, Objective,
    DEFAULT_WEIGHT_BOUND,
};
pub use pso::{optimize_pso, optimize_pso_with, PsoConfig};

/// Result of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerTrace {
    /// Best-so-far fitness after each iteration.
    pub best_history: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    /// Objective calls, including the initial population.
    pub evaluations: usize,
}

/// Optimizer settings tagged by algorithm, for self-describing output files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum OptimizerConfig {
    Pso(PsoConfig),
    Bat(BatConfig),
}

impl OptimizerConfig {
    pub fn seed(&self) -> u64 {
        match self {
            OptimizerConfig::Pso(c) => c.seed,
            OptimizerConfig::Bat(c) => c.seed,
        }
    }

    pub fn run<O: Objective + ?Sized>(&self, obj: &O, exec: Execution) -> Result<OptimizerTrace> {
        match self {
            OptimizerConfig::Pso(c) => optimize_pso_with(obj, c, exec),
            OptimizerConfig::Bat(c) => optimize_bat_with(obj, c, exec),
        }
    }
}

/// JSON record of a run: the config (including seed) and its trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub config: OptimizerConfig,
    pub trace: OptimizerTrace,
}

/// How a population is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Serial,
    /// Evaluate on a dedicated pool of this many threads.
    Threads(usize),
}

impl Execution {
    fn evaluate<O: Objective + ?Sized>(self, obj: &O, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        let values: Vec<f64> = match self {
            Execution::Serial | Execution::Threads(0 | 1) => {
                points.iter().map(|p| obj.evaluate(p)).collect()
            }
            Execution::Threads(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::InvalidConfig {
                        field: "threads",
                        message: e.to_string(),
                    })?;
                pool.install(|| points.par_iter().map(|p| obj.evaluate(p)).collect())
            }
        };
        for (p, &v) in points.iter().zip(&values) {
            if !v.is_finite() {
                return Err(Error::NonFiniteObjective {
                    value: v,
                    point: p.clone(),
                });
            }
        }
        Ok(values)
    }
}

fn check_bounds<O: Objective + ?Sized>(obj: &O) -> Result<()> {
    let (lo, hi) = obj.bounds();
    if lo.len() != obj.dim() || hi.len() != obj.dim() || obj.dim() == 0 {
        return Err(Error::InvalidConfig {
            field: "bounds",
            message: format!(
                "need {} lower/upper bounds, got {}/{}",
                obj.dim(),
                lo.len(),
                hi.len()
            ),
        });
    }
    if let Some(j) =
        (0..obj.dim()).find(|&j| !lo[j].is_finite() || !hi[j].is_finite() || lo[j] >= hi[j])
    {
        return Err(Error::InvalidConfig {
            field: "bounds",
            message: format!(
                "coordinate {j}: lower {} must be below upper {}",
                lo[j], hi[j]
            ),
        });
    }
    Ok(())
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v < values[best] {
            best = i;
        }
    }
    best
}
