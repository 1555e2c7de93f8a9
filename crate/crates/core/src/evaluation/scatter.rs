use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Param};
use crate::error::{Error, Result};

/// Ratios further than this from 1 are flagged.
pub const DEFAULT_BAND: f64 = 0.25;

/// Parameters plotted against the strength ratio.
pub const SCATTER_PARAMS: [Param; 4] = [Param::D, Param::AvD, Param::Fc, Param::Rho];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub sample_id: String,
    pub value: f64,
    pub ratio: f64,
    /// `|ratio − 1| > band`.
    pub flagged: bool,
}

/// Strength ratio against one parameter, ascending in the parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterTable {
    pub param: Param,
    pub band: f64,
    pub rows: Vec<ScatterRow>,
}

impl ScatterTable {
    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.flagged).count()
    }
}

pub fn parametric_scatter(
    samples: &Dataset,
    ratios: &[f64],
    param: Param,
    band: f64,
) -> Result<ScatterTable> {
    if ratios.len() != samples.len() {
        return Err(Error::LengthMismatch {
            expected: samples.len(),
            actual: ratios.len(),
        });
    }
    let mut rows = samples
        .iter()
        .zip(ratios)
        .map(|(s, &ratio)| {
            let value = s.get(param).ok_or_else(|| Error::InvalidArgument {
                name: "param",
                message: format!("sample `{}` has no {}", s.id, param.symbol()),
            })?;
            Ok(ScatterRow {
                sample_id: s.id.clone(),
                value,
                ratio,
                flagged: (ratio - 1.0).abs() > band,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(ScatterTable { param, band, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures;

    fn three() -> Dataset {
        Dataset::new(vec![
            fixtures::full("a", 200.0, 200.0, 30.0, 0.01, 300.0),
            fixtures::full("b", 100.0, 200.0, 30.0, 0.01, 300.0),
            fixtures::full("c", 150.0, 200.0, 30.0, 0.01, 300.0),
        ])
        .unwrap()
    }

    #[test]
    fn rows_sorted_by_parameter() {
        let t = parametric_scatter(&three(), &[1.0, 1.0, 1.0], Param::D, DEFAULT_BAND).unwrap();
        let vals: Vec<f64> = t.rows.iter().map(|r| r.value).collect();
        assert_eq!(vals, [100.0, 150.0, 200.0]);
        assert_eq!(t.flagged(), 0);
    }

    #[test]
    fn band_flags_large_deviation() {
        let t = parametric_scatter(&three(), &[1.0, 1.4, 0.8], Param::D, DEFAULT_BAND).unwrap();
        let at_100 = &t.rows[0];
        assert_eq!(
            (at_100.value, at_100.ratio, at_100.flagged),
            (100.0, 1.4, true)
        );
        assert_eq!(t.flagged(), 1);
    }

    #[test]
    fn length_mismatch() {
        assert!(parametric_scatter(&three(), &[1.0], Param::D, DEFAULT_BAND).is_err());
    }
}
