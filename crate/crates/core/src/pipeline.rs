//! End-to-end training of the learned models and the provenance they carry.
//!
//! Normalization bounds are fitted on the whole dataset before splitting, so
//! every split (and every model trained on the same data and combo) shares
//! one set of [`NormParams`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::{
    build_features, normalize, split, Dataset, FeatureMatrix, NormParams, ScsCombo,
    DEFAULT_TRAIN_FRACTION,
};
use crate::error::{Error, Result};
use crate::evaluation::{metric_set, Method, MetricSet};
use crate::fnn::{train_backprop, Network, NetworkRecord, StopReason, TrainConfig};
use crate::metaheuristics::{
    fnn_weight_objective, BatConfig, Execution, OptimizerConfig, PsoConfig, TraceRecord,
    DEFAULT_WEIGHT_BOUND,
};

/// Share of the training split held out for backprop early stopping.
pub const DEFAULT_VALIDATION_FRACTION: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Fnn,
    Psofnn,
    Batfnn,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Fnn, ModelKind::Psofnn, ModelKind::Batfnn];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Fnn => "fnn",
            ModelKind::Psofnn => "psofnn",
            ModelKind::Batfnn => "batfnn",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
    }

    pub fn method(self) -> Method {
        match self {
            ModelKind::Fnn => Method::Fnn,
            ModelKind::Psofnn => Method::PsoFnn,
            ModelKind::Batfnn => Method::BatFnn,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything that determines a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSpec {
    pub combo: u8,
    pub model: ModelKind,
    pub seed: u64,
    pub train_fraction: f64,
    /// Only used by backprop; 0 disables early stopping.
    pub validation_fraction: f64,
    /// Box half-width for the metaheuristic weight search.
    pub weight_bound: f64,
    pub backprop: TrainConfig,
    pub pso: PsoConfig,
    pub bat: BatConfig,
}

impl TrainSpec {
    /// Defaults for `combo`: population sizes and iteration budget from the
    /// combo table, every seed set to `seed`.
    pub fn new(combo: u8, model: ModelKind, seed: u64) -> Result<Self> {
        let c = ScsCombo::get(combo)?;
        Ok(Self {
            combo,
            model,
            seed,
            train_fraction: DEFAULT_TRAIN_FRACTION,
            validation_fraction: DEFAULT_VALIDATION_FRACTION,
            weight_bound: DEFAULT_WEIGHT_BOUND,
            backprop: TrainConfig {
                seed,
                ..TrainConfig::default()
            },
            pso: PsoConfig {
                swarm_size: c.pso_members,
                max_iterations: c.iterations,
                seed,
                ..PsoConfig::default()
            },
            bat: BatConfig {
                population: c.bat_members,
                max_iterations: c.iterations,
                seed,
                ..BatConfig::default()
            },
        })
    }

    pub fn validate(&self) -> Result<()> {
        ScsCombo::get(self.combo)?;
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return Err(Error::InvalidConfig {
                field: "validation_fraction",
                message: format!("must lie in [0, 1), got {}", self.validation_fraction),
            });
        }
        match self.model {
            ModelKind::Fnn => self.backprop.validate(),
            ModelKind::Psofnn => self.pso.validate(),
            ModelKind::Batfnn => self.bat.validate(),
        }
    }
}

/// A trained network plus what is needed to apply and audit it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub model: ModelKind,
    pub combo: u8,
    pub feature_names: Vec<String>,
    pub norm: NormParams,
    pub spec: TrainSpec,
    pub network: NetworkRecord,
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
}

impl ModelFile {
    /// Predicted capacities in kN, one per sample.
    pub fn predict(&self, ds: &Dataset) -> Result<Vec<f64>> {
        let combo = ScsCombo::get(self.combo)?;
        let m = self.norm.apply(&build_features(ds, &combo)?)?;
        let net = self.network.to_network()?;
        let y = net.predict(&m.batch())?;
        Ok(y.into_iter()
            .map(|v| self.norm.denormalize_target(v))
            .collect())
    }

    /// Checks that two models can be compared on the same data.
    pub fn check_compatible(&self, other: &ModelFile) -> Result<()> {
        if self.combo != other.combo {
            return Err(Error::Provenance(format!(
                "{} uses combo {} but {} uses combo {}",
                self.model, self.combo, other.model, other.combo
            )));
        }
        if self.norm != other.norm {
            let column = self
                .norm
                .features
                .iter()
                .zip(&other.norm.features)
                .find(|(a, b)| a != b)
                .map(|(a, _)| a.name.clone())
                .unwrap_or_else(|| self.norm.target.name.clone());
            return Err(Error::Provenance(format!(
                "normalization bounds differ between {} and {} (column {column})",
                self.model, other.model
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitMetrics {
    /// On min-max normalized targets.
    pub normalized: MetricSet,
    pub kn: MetricSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainMetrics {
    pub train: SplitMetrics,
    pub test: SplitMetrics,
    /// Test MSE (normalized) of the freshly initialized network.
    pub untrained_test_mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackpropLog {
    pub history: Vec<f64>,
    pub validation_history: Vec<f64>,
    pub stop: StopReason,
    pub epochs: usize,
}

#[derive(Debug, Clone)]
pub struct TrainRun {
    pub model: ModelFile,
    /// Set for the metaheuristic models.
    pub trace: Option<TraceRecord>,
    /// Set for plain backprop.
    pub backprop: Option<BackpropLog>,
    pub metrics: TrainMetrics,
}

fn project(ds: &Dataset, combo: &ScsCombo, norm: &NormParams) -> Result<FeatureMatrix> {
    norm.apply(&build_features(ds, combo)?)
}

fn split_metrics(net: &Network, m: &FeatureMatrix, norm: &NormParams) -> Result<SplitMetrics> {
    let y = net.predict(&m.batch())?;
    let normalized = metric_set(&m.targets, &y)?;
    let kn_exp: Vec<f64> = m
        .targets
        .iter()
        .map(|&v| norm.denormalize_target(v))
        .collect();
    let kn_pred: Vec<f64> = y.iter().map(|&v| norm.denormalize_target(v)).collect();
    Ok(SplitMetrics {
        normalized,
        kn: metric_set(&kn_exp, &kn_pred)?,
    })
}

fn ids(ds: &Dataset) -> Vec<String> {
    ds.iter().map(|s| s.id.clone()).collect()
}

/// Trains one model on `ds` as described by `spec`.
pub fn train_model(ds: &Dataset, spec: &TrainSpec, exec: Execution) -> Result<TrainRun> {
    spec.validate()?;
    let combo = ScsCombo::get(spec.combo)?;
    let (_, norm) = normalize(&build_features(ds, &combo)?)?;
    let (train_ds, test_ds) = split(ds, spec.train_fraction, spec.seed)?;
    let train_m = project(&train_ds, &combo, &norm)?;
    let test_m = project(&test_ds, &combo, &norm)?;
    let sizes = combo.layer_sizes();
    let untrained = Network::init(&sizes, spec.seed)?;

    let (net, trace, backprop) = match spec.model {
        ModelKind::Fnn => {
            let use_val = spec.validation_fraction > 0.0 && train_ds.len() >= 4;
            let outcome = if use_val {
                let (fit_ds, val_ds) = split(
                    &train_ds,
                    1.0 - spec.validation_fraction,
                    spec.seed.wrapping_add(1),
                )?;
                let fit_m = project(&fit_ds, &combo, &norm)?;
                let val_m = project(&val_ds, &combo, &norm)?;
                train_backprop(
                    untrained.clone(),
                    &fit_m.batch(),
                    Some(&val_m.batch()),
                    &spec.backprop,
                )?
            } else {
                train_backprop(untrained.clone(), &train_m.batch(), None, &spec.backprop)?
            };
            let log = BackpropLog {
                history: outcome.history,
                validation_history: outcome.validation_history,
                stop: outcome.stop,
                epochs: outcome.epochs,
            };
            (outcome.network, None, Some(log))
        }
        ModelKind::Psofnn | ModelKind::Batfnn => {
            let config = if spec.model == ModelKind::Psofnn {
                OptimizerConfig::Pso(spec.pso.clone())
            } else {
                OptimizerConfig::Bat(spec.bat.clone())
            };
            let obj = fnn_weight_objective(&train_m, &sizes, spec.weight_bound)?;
            let trace = config.run(&obj, exec)?;
            let net = Network::decode(&sizes, &trace.best_position)?;
            (net, Some(TraceRecord { config, trace }), None)
        }
    };

    let metrics = TrainMetrics {
        train: split_metrics(&net, &train_m, &norm)?,
        test: split_metrics(&net, &test_m, &norm)?,
        untrained_test_mse: untrained.loss(&test_m.batch())?,
    };
    let model = ModelFile {
        model: spec.model,
        combo: spec.combo,
        feature_names: train_m.feature_names.clone(),
        network: NetworkRecord::from_network(&net, Some(spec.seed)),
        norm,
        spec: spec.clone(),
        train_ids: ids(&train_ds),
        test_ids: ids(&test_ds),
    };
    Ok(TrainRun {
        model,
        trace,
        backprop,
        metrics,
    })
}
