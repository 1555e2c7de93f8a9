use serde::{Deserialize, Serialize};

use super::{Dataset, Param};
use crate::error::{Error, Result};

/// Summary statistics for one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub diff: f64,
    pub avg: f64,
    /// Population standard deviation.
    pub std: f64,
    /// Coefficient of variation, std / avg.
    pub cov: f64,
}

impl ParamRange {
    /// Builds a row from printed values, deriving `diff` and `cov`.
    pub fn new(param: Param, min: f64, max: f64, avg: f64, std: f64) -> Self {
        let cov = if avg != 0.0 { std / avg } else { 0.0 };
        Self {
            param,
            min,
            max,
            diff: max - min,
            avg,
            std,
            cov,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.min && value <= self.max
    }

    fn check(&self) -> Result<()> {
        let bad = |message: String| Error::InvalidRangeSpec {
            param: self.param.symbol().to_string(),
            message,
        };
        let vals = [self.min, self.max, self.diff, self.avg, self.std, self.cov];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(bad("non-finite entry".into()));
        }
        if !(self.min <= self.avg && self.avg <= self.max) {
            return Err(bad(format!(
                "need min <= avg <= max, got {} / {} / {}",
                self.min, self.avg, self.max
            )));
        }
        if self.std < 0.0 {
            return Err(bad(format!("negative std {}", self.std)));
        }
        // Printed tables round cov to two decimals.
        if self.avg != 0.0 && (self.cov - self.std / self.avg).abs() > 5e-3 {
            return Err(bad(format!(
                "cov {} != std/avg {}",
                self.cov,
                self.std / self.avg
            )));
        }
        Ok(())
    }
}

/// Per-parameter ranges of a slab database.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeSpec {
    pub rows: Vec<ParamRange>,
}

impl RangeSpec {
    pub fn new(rows: Vec<ParamRange>) -> Result<Self> {
        let spec = Self { rows };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.rows.iter().try_for_each(ParamRange::check)
    }

    pub fn get(&self, param: Param) -> Option<&ParamRange> {
        self.rows.iter().find(|r| r.param == param)
    }

    /// Reference ranges of a 145-sample square-slab database. The
    /// reinforcement ratio row is stored as a fraction; `cov` is rounded
    /// to two decimals.
    pub fn reference_database() -> Self {
        let row = |param, min, max, avg, std, cov| ParamRange {
            param,
            min,
            max,
            diff: max - min,
            avg,
            std,
            cov,
        };
        Self {
            rows: vec![
                row(Param::D, 64.0, 275.0, 122.32, 44.82, 0.37),
                row(Param::C, 54.0, 600.0, 206.34, 87.0, 0.42),
                row(Param::AvD, 4.5, 14.02, 7.81, 2.4, 0.31),
                row(Param::Rho, 0.003, 0.069, 0.0131, 0.0089, 0.68),
                row(Param::MFs, 39000.0, 1951000.0, 252655.0, 292121.0, 1.16),
                row(Param::Fy, 294.0, 749.0, 496.88, 117.68, 0.24),
                row(Param::Fc, 9.52, 118.7, 41.3, 24.85, 0.6),
                row(Param::VExp, 105.0, 2450.0, 458.7, 436.88, 0.95),
            ],
        }
    }
}

/// Population statistics (divisor n) for every parameter at least one
/// sample carries.
pub fn summarize(ds: &Dataset) -> Result<RangeSpec> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let rows = Param::ALL
        .iter()
        .filter_map(|&param| {
            let values = ds.column(param);
            if values.is_empty() {
                return None;
            }
            let n = values.len() as f64;
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let avg = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - avg).powi(2)).sum::<f64>() / n;
            // Summation rounding can leave avg an ulp outside [min, max].
            let avg = avg.clamp(min, max);
            Some(ParamRange::new(param, min, max, avg, var.sqrt()))
        })
        .collect();
    Ok(RangeSpec { rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// 1-based row in the dataset.
    pub row: usize,
    pub sample_id: String,
    pub param: Param,
    pub value: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every (row, parameter) outside the inclusive `[min, max]` of
/// `spec`. Parameters absent from either side are skipped.
pub fn validate_ranges(ds: &Dataset, spec: &RangeSpec) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, s) in ds.iter().enumerate() {
        for range in &spec.rows {
            let Some(value) = s.get(range.param) else {
                continue;
            };
            if !range.contains(value) {
                violations.push(Violation {
                    row: i + 1,
                    sample_id: s.id.clone(),
                    param: range.param,
                    value,
                    min: range.min,
                    max: range.max,
                });
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures;
    use approx::assert_relative_eq;

    fn with_depths(depths: &[f64]) -> Dataset {
        let samples = depths
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut s = fixtures::s1();
                s.id = format!("x{i}");
                s.d = d;
                s
            })
            .collect();
        Dataset::new(samples).unwrap()
    }

    #[test]
    fn reference_database_is_consistent() {
        let spec = RangeSpec::reference_database();
        spec.validate().unwrap();
        let d = spec.get(Param::D).unwrap();
        assert_eq!(d.diff, 211.0);
        let fc = spec.get(Param::Fc).unwrap();
        assert_relative_eq!(fc.diff, 109.18, epsilon = 1e-9);
    }

    #[test]
    fn two_sample_population_stats() {
        let spec = summarize(&with_depths(&[100.0, 200.0])).unwrap();
        let d = spec.get(Param::D).unwrap();
        assert_eq!(d.avg, 150.0);
        assert_eq!(d.std, 50.0);
        assert_relative_eq!(d.cov, 1.0 / 3.0, epsilon = 1e-12);
        assert_eq!(d.diff, 100.0);
    }

    #[test]
    fn single_sample_stats() {
        let spec = summarize(&with_depths(&[150.0])).unwrap();
        let d = spec.get(Param::D).unwrap();
        assert_eq!(
            (d.min, d.max, d.avg, d.std, d.cov),
            (150.0, 150.0, 150.0, 0.0, 0.0)
        );
        assert!(spec.get(Param::MFs).is_none());
    }

    #[test]
    fn empty_dataset_cannot_be_summarized() {
        assert!(matches!(
            summarize(&Dataset::default()),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn range_checks_are_inclusive() {
        let spec = RangeSpec::reference_database();
        let mut ds = with_depths(&[64.0]);
        ds.samples[0].rho = 0.01;
        assert!(validate_ranges(&ds, &spec).is_pass());

        let mut ds = with_depths(&[300.0]);
        ds.samples[0].rho = 0.01;
        let report = validate_ranges(&ds, &spec);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].param, Param::D);
        assert_eq!(report.violations[0].row, 1);
    }

    #[test]
    fn empty_dataset_validates() {
        let report = validate_ranges(&Dataset::default(), &RangeSpec::reference_database());
        assert!(report.is_pass());
    }

    #[test]
    fn rejects_inconsistent_spec() {
        let bad = RangeSpec::new(vec![ParamRange::new(Param::D, 10.0, 5.0, 7.0, 1.0)]);
        assert!(matches!(bad, Err(Error::InvalidRangeSpec { .. })));
        let bad = RangeSpec::new(vec![ParamRange::new(Param::D, 1.0, 5.0, 3.0, -1.0)]);
        assert!(bad.is_err());
    }
}
