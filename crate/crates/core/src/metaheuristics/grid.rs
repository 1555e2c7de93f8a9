use serde::{Deserialize, Serialize};

use super::{BatConfig, PsoConfig};
use crate::error::{Error, Result};

/// One scored configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEntry<C> {
    /// Position in lexicographic grid order.
    pub grid_index: usize,
    pub config: C,
    /// One score per seed, in seed order.
    pub scores: Vec<f64>,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult<C> {
    pub best: C,
    pub best_score: f64,
    /// Sorted by median score, then grid index.
    pub leaderboard: Vec<GridEntry<C>>,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Scores every candidate with `run(config, seed)` over `seeds` and ranks
/// by the median. Candidates past `budget` (in grid order) are skipped.
/// Non-finite scores rank last.
pub fn grid_search<C, F>(
    candidates: Vec<C>,
    seeds: &[u64],
    budget: Option<usize>,
    mut run: F,
) -> Result<GridResult<C>>
where
    C: Clone,
    F: FnMut(&C, u64) -> Result<f64>,
{
    if candidates.is_empty() || budget == Some(0) {
        return Err(Error::EmptyGrid);
    }
    if seeds.len() < 3 {
        return Err(Error::InvalidArgument {
            name: "seeds",
            message: format!("need at least 3 seeds, got {}", seeds.len()),
        });
    }
    let take = budget.unwrap_or(candidates.len()).min(candidates.len());
    let mut leaderboard = Vec::with_capacity(take);
    for (grid_index, config) in candidates.into_iter().take(take).enumerate() {
        let scores = seeds
            .iter()
            .map(|&s| run(&config, s))
            .collect::<Result<Vec<f64>>>()?;
        let m = median(&scores);
        leaderboard.push(GridEntry {
            grid_index,
            config,
            scores,
            median: if m.is_nan() { f64::INFINITY } else { m },
        });
    }
    leaderboard.sort_by(|a, b| {
        a.median
            .total_cmp(&b.median)
            .then(a.grid_index.cmp(&b.grid_index))
    });
    Ok(GridResult {
        best: leaderboard[0].config.clone(),
        best_score: leaderboard[0].median,
        leaderboard,
    })
}

/// Candidate values for each PSO hyperparameter; expands to the Cartesian
/// product in lexicographic order (swarm size outermost).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoGrid {
    pub swarm_size: Vec<usize>,
    pub inertia: Vec<f64>,
    pub cognitive: Vec<f64>,
    pub social: Vec<f64>,
    pub velocity_fraction: Vec<f64>,
}

impl PsoGrid {
    /// Grid holding only `base`'s values.
    pub fn around(base: &PsoConfig) -> Self {
        Self {
            swarm_size: vec![base.swarm_size],
            inertia: vec![base.inertia],
            cognitive: vec![base.cognitive],
            social: vec![base.social],
            velocity_fraction: vec![base.velocity_fraction],
        }
    }

    pub fn expand(&self, base: &PsoConfig) -> Vec<PsoConfig> {
        let mut out = Vec::new();
        for &swarm_size in &self.swarm_size {
            for &inertia in &self.inertia {
                for &cognitive in &self.cognitive {
                    for &social in &self.social {
                        for &velocity_fraction in &self.velocity_fraction {
                            out.push(PsoConfig {
                                swarm_size,
                                inertia,
                                cognitive,
                                social,
                                velocity_fraction,
                                ..base.clone()
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Candidate values for BAT hyperparameters (population outermost).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatGrid {
    pub population: Vec<usize>,
    pub loudness: Vec<f64>,
    pub pulse_rate: Vec<f64>,
    pub alpha: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl BatGrid {
    pub fn around(base: &BatConfig) -> Self {
        Self {
            population: vec![base.population],
            loudness: vec![base.loudness],
            pulse_rate: vec![base.pulse_rate],
            alpha: vec![base.alpha],
            gamma: vec![base.gamma],
        }
    }

    pub fn expand(&self, base: &BatConfig) -> Vec<BatConfig> {
        let mut out = Vec::new();
        for &population in &self.population {
            for &loudness in &self.loudness {
                for &pulse_rate in &self.pulse_rate {
                    for &alpha in &self.alpha {
                        for &gamma in &self.gamma {
                            out.push(BatConfig {
                                population,
                                loudness,
                                pulse_rate,
                                alpha,
                                gamma,
                                ..base.clone()
                            });
                        }
                    }
                }
            }
        }
        out
    }
}
