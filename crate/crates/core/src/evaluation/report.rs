use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{
    metric_set, parametric_scatter, ratio_stats, Method, MetricSet, NormalizedMetrics, RatioStats,
    ScatterTable, SCATTER_PARAMS,
};
use crate::dataset::{ColumnBounds, Dataset};
use crate::error::{Error, Result};

/// Direction of the average error, read from the mean strength ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assessment {
    /// Mean ratio above 1: predictions fall below experiment.
    Underestimates,
    /// Mean ratio below 1.
    Overestimates,
    Exact,
}

impl Assessment {
    fn from_mean_ratio(mean: f64) -> Self {
        match mean.partial_cmp(&1.0) {
            Some(Ordering::Greater) => Assessment::Underestimates,
            Some(Ordering::Less) => Assessment::Overestimates,
            _ => Assessment::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: Method,
    pub present: bool,
    /// Metrics in kN.
    pub metrics: Option<MetricSet>,
    /// MSE / MAE on normalized loads, percent.
    pub normalized: Option<NormalizedMetrics>,
    pub ratios: Option<RatioStats>,
    pub assessment: Option<Assessment>,
    /// One table per parameter in `SCATTER_PARAMS`.
    pub scatter: Vec<ScatterTable>,
}

impl MethodReport {
    fn absent(method: Method) -> Self {
        Self {
            method,
            present: false,
            metrics: None,
            normalized: None,
            ratios: None,
            assessment: None,
            scatter: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub n_samples: usize,
    pub band: f64,
    /// Bounds used for the normalized metrics, when given.
    pub target_bounds: Option<ColumnBounds>,
    /// Every method in canonical order, present or not.
    pub methods: Vec<MethodReport>,
    /// Present methods by r descending, then MSE ascending, then name.
    pub ranking: Vec<Method>,
}

impl EvaluationReport {
    pub fn method(&self, m: Method) -> &MethodReport {
        self.methods
            .iter()
            .find(|r| r.method == m)
            .expect("every method is listed")
    }
}

/// Predictions (kN) for some of the six methods over one sample set.
#[derive(Debug, Clone)]
pub struct CompareInput<'a> {
    pub samples: &'a Dataset,
    pub predictions: Vec<(Method, Vec<f64>)>,
    /// Target min/max for normalized metrics.
    pub target_bounds: Option<ColumnBounds>,
    pub band: f64,
}

pub fn compare(input: &CompareInput<'_>) -> Result<EvaluationReport> {
    let y_exp: Vec<f64> = input.samples.iter().map(|s| s.v_exp).collect();
    let mut methods: Vec<MethodReport> = Method::ALL
        .iter()
        .map(|&m| MethodReport::absent(m))
        .collect();

    for (method, preds) in &input.predictions {
        if preds.len() != y_exp.len() {
            return Err(Error::LengthMismatch {
                expected: y_exp.len(),
                actual: preds.len(),
            });
        }
        let slot = methods
            .iter_mut()
            .find(|r| r.method == *method)
            .expect("every method is listed");
        if slot.present {
            return Err(Error::InvalidArgument {
                name: "predictions",
                message: format!("{method} given twice"),
            });
        }
        let metrics = metric_set(&y_exp, preds)?;
        let normalized = match &input.target_bounds {
            Some(b) => {
                let scale = |v: &f64| (v - b.min) / (b.max - b.min);
                let ye: Vec<f64> = y_exp.iter().map(scale).collect();
                let yp: Vec<f64> = preds.iter().map(scale).collect();
                let m = metric_set(&ye, &yp)?;
                Some(NormalizedMetrics {
                    mse_percent: 100.0 * m.mse,
                    mae_percent: 100.0 * m.mae,
                })
            }
            None => None,
        };
        let ratios = ratio_stats(&y_exp, preds)?;
        let scatter = SCATTER_PARAMS
            .iter()
            .map(|&p| parametric_scatter(input.samples, &ratios.ratios, p, input.band))
            .collect::<Result<Vec<_>>>()?;
        *slot = MethodReport {
            method: *method,
            present: true,
            metrics: Some(metrics),
            normalized,
            assessment: Some(Assessment::from_mean_ratio(ratios.mean)),
            ratios: Some(ratios),
            scatter,
        };
    }

    let mut ranking: Vec<(&MethodReport, &MetricSet)> = methods
        .iter()
        .filter_map(|r| r.metrics.as_ref().map(|m| (r, m)))
        .collect();
    ranking.sort_by(|(ra, a), (rb, b)| {
        b.r.total_cmp(&a.r)
            .then(a.mse.total_cmp(&b.mse))
            .then(ra.method.name().cmp(rb.method.name()))
    });
    let ranking = ranking.into_iter().map(|(r, _)| r.method).collect();

    Ok(EvaluationReport {
        n_samples: y_exp.len(),
        band: input.band,
        target_bounds: input.target_bounds.clone(),
        methods,
        ranking,
    })
}
