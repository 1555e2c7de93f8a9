use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Agreement between experimental and predicted values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub n: usize,
    pub mse: f64,
    pub mae: f64,
    /// Pearson correlation coefficient r.
    pub r: f64,
    /// r², the square of Pearson's r.
    pub r_squared: f64,
}

/// MSE and MAE on min-max normalized values, expressed in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedMetrics {
    pub mse_percent: f64,
    pub mae_percent: f64,
}

/// Sample Pearson correlation. Fails when either series is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance {
            series: "experimental",
        });
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance {
            series: "predicted",
        });
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn metric_set(y_exp: &[f64], y_pred: &[f64]) -> Result<MetricSet> {
    if y_exp.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            expected: y_exp.len(),
            actual: y_pred.len(),
        });
    }
    if y_exp.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: y_exp.len(),
        });
    }
    let n = y_exp.len();
    let mse = crate::fnn::mse(y_exp, y_pred)?;
    let mae = y_exp
        .iter()
        .zip(y_pred)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / n as f64;
    let r = pearson(y_exp, y_pred)?;
    Ok(MetricSet {
        n,
        mse,
        mae,
        r,
        r_squared: r * r,
    })
}
