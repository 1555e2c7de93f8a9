use std::sync::atomic::{AtomicUsize, Ordering};

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};
use crate::fnn::{self, param_count, Network};

/// Weight box for network objectives. Wider boxes start the swarm on
/// saturated sigmoids and the search stalls on 100+ dimensional nets.
pub const DEFAULT_WEIGHT_BOUND: f64 = 2.0;

/// A deterministic cost over a box; lower is better.
pub trait Objective: Sync {
    fn dim(&self) -> usize;
    /// `(lower, upper)`, one entry per coordinate.
    fn bounds(&self) -> (&[f64], &[f64]);
    fn evaluate(&self, x: &[f64]) -> f64;
}

/// Closure-backed objective.
pub struct FnObjective<F> {
    lower: Vec<f64>,
    upper: Vec<f64>,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnObjective<F> {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, f: F) -> Result<Self> {
        let obj = Self { lower, upper, f };
        super::check_bounds(&obj)?;
        Ok(obj)
    }

    /// Same `[lower, upper]` on every coordinate.
    pub fn uniform(dim: usize, lower: f64, upper: f64, f: F) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim], f)
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for FnObjective<F> {
    fn dim(&self) -> usize {
        self.lower.len()
    }

    fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// Wraps an objective and counts calls.
pub struct Counting<'a, O: ?Sized> {
    inner: &'a O,
    calls: AtomicUsize,
}

impl<'a, O: Objective + ?Sized> Counting<'a, O> {
    pub fn new(inner: &'a O) -> Self {
        Self {
            inner,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

impl<O: Objective + ?Sized> Objective for Counting<'_, O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn bounds(&self) -> (&[f64], &[f64]) {
        self.inner.bounds()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(x)
    }
}

/// Training MSE of a network whose parameters are the search vector.
pub struct FnnWeightObjective {
    sizes: Vec<usize>,
    inputs: Vec<f64>,
    targets: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl FnnWeightObjective {
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Like [`Objective::evaluate`] but reports a wrong-length vector.
    pub fn try_evaluate(&self, x: &[f64]) -> Result<f64> {
        let net = Network::decode(&self.sizes, x)?;
        let batch = fnn::Batch::new(&self.inputs, self.sizes[0], &self.targets)?;
        net.loss(&batch)
    }
}

impl Objective for FnnWeightObjective {
    fn dim(&self) -> usize {
        self.lower.len()
    }

    fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    /// A wrong-length vector costs `+inf`, which the optimizers reject.
    fn evaluate(&self, x: &[f64]) -> f64 {
        self.try_evaluate(x).unwrap_or(f64::INFINITY)
    }
}

/// MSE-over-weights objective on a (normalized) training matrix, with every
/// coordinate in `[-bound, bound]`.
pub fn fnn_weight_objective(
    train: &FeatureMatrix,
    sizes: &[usize],
    bound: f64,
) -> Result<FnnWeightObjective> {
    if train.n_samples() == 0 {
        return Err(Error::EmptyDataset);
    }
    fnn::validate_sizes(sizes)?;
    if sizes[0] != train.n_features {
        return Err(Error::LengthMismatch {
            expected: sizes[0],
            actual: train.n_features,
        });
    }
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::InvalidArgument {
            name: "bound",
            message: format!("must be positive, got {bound}"),
        });
    }
    let dim = param_count(sizes);
    Ok(FnnWeightObjective {
        sizes: sizes.to_vec(),
        inputs: train.data.clone(),
        targets: train.targets.clone(),
        lower: vec![-bound; dim],
        upper: vec![bound; dim],
    })
}
