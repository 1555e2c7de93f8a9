use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of points emitted for the fitted normal curve.
pub const PDF_POINTS: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdfPoint {
    pub x: f64,
    pub density: f64,
}

/// Distribution of `V_exp / V_pred` with its fitted normal curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioStats {
    pub ratios: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    /// Set when `std == 0`; `pdf` is then empty.
    pub degenerate: bool,
    /// Normal density on `[mean − 4 std, mean + 4 std]`.
    pub pdf: Vec<PdfPoint>,
}

pub fn ratio_stats(y_exp: &[f64], y_pred: &[f64]) -> Result<RatioStats> {
    if y_exp.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            expected: y_exp.len(),
            actual: y_pred.len(),
        });
    }
    if y_exp.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some((index, &value)) = y_pred
        .iter()
        .enumerate()
        .find(|(_, v)| v.is_nan() || **v <= 0.0)
    {
        return Err(Error::NonPositivePrediction { index, value });
    }
    let ratios: Vec<f64> = y_exp.iter().zip(y_pred).map(|(e, p)| e / p).collect();
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let std = (ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n).sqrt();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let degenerate = std == 0.0;
    let pdf = if degenerate {
        Vec::new()
    } else {
        let lo = mean - 4.0 * std;
        let step = 8.0 * std / (PDF_POINTS - 1) as f64;
        let norm = 1.0 / (std * (2.0 * std::f64::consts::PI).sqrt());
        (0..PDF_POINTS)
            .map(|k| {
                let x = lo + step * k as f64;
                let z = (x - mean) / std;
                PdfPoint {
                    x,
                    density: norm * (-0.5 * z * z).exp(),
                }
            })
            .collect()
    };
    Ok(RatioStats {
        ratios,
        mean: mean.clamp(min, max),
        std,
        min,
        max,
        degenerate,
        pdf,
    })
}

impl RatioStats {
    /// Trapezoid integral of the emitted curve.
    pub fn pdf_area(&self) -> f64 {
        self.pdf
            .windows(2)
            .map(|w| 0.5 * (w[0].density + w[1].density) * (w[1].x - w[0].x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect_predictions_are_degenerate() {
        let y = [100.0, 250.0, 400.0];
        let s = ratio_stats(&y, &y).unwrap();
        assert_eq!((s.mean, s.std, s.min, s.max), (1.0, 0.0, 1.0, 1.0));
        assert!(s.degenerate);
        assert!(s.pdf.is_empty());
    }

    #[test]
    fn two_ratio_statistics() {
        let s = ratio_stats(&[50.0, 150.0], &[100.0, 100.0]).unwrap();
        assert_eq!((s.mean, s.std), (1.0, 0.5));
        assert_eq!(s.pdf.len(), PDF_POINTS);
        assert!((s.pdf_area() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_non_positive_prediction() {
        assert!(matches!(
            ratio_stats(&[1.0, 2.0], &[1.0, 0.0]),
            Err(Error::NonPositivePrediction { index: 1, .. })
        ));
        assert!(ratio_stats(&[1.0], &[1.0, 2.0]).is_err());
    }

    proptest! {
        #[test]
        fn pdf_integrates_to_one(
            pairs in proptest::collection::vec((1.0..3000.0f64, 1.0..3000.0f64), 2..60)
        ) {
            let (e, p): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let s = ratio_stats(&e, &p).unwrap();
            prop_assert!(s.min <= s.mean && s.mean <= s.max);
            prop_assert!(s.ratios.iter().all(|r| *r > 0.0));
            if !s.degenerate {
                prop_assert!((s.pdf_area() - 1.0).abs() < 1e-3);
            }
        }
    }
}
