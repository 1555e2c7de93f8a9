use serde::{Deserialize, Serialize};

use super::metrics::pearson;
use crate::dataset::{Dataset, Param};
use crate::error::{Error, Result};

const COLUMNS: [Param; 8] = [
    Param::D,
    Param::C,
    Param::AvD,
    Param::Rho,
    Param::MFs,
    Param::Fy,
    Param::Fc,
    Param::VExp,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedColumn {
    pub param: Param,
    pub reason: String,
}

/// Pairwise Pearson correlations between database parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub params: Vec<Param>,
    /// Row-major, `params.len()` squared.
    pub values: Vec<Vec<f64>>,
    pub dropped: Vec<DroppedColumn>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: Param, b: Param) -> Option<f64> {
        let i = self.params.iter().position(|p| *p == a)?;
        let j = self.params.iter().position(|p| *p == b)?;
        Some(self.values[i][j])
    }
}

/// Constant columns and columns missing on some samples are dropped with
/// a note.
pub fn correlation_matrix(ds: &Dataset) -> Result<CorrelationMatrix> {
    if ds.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: ds.len(),
        });
    }
    let mut params = Vec::new();
    let mut columns = Vec::new();
    let mut dropped = Vec::new();
    for p in COLUMNS {
        if !ds.has_all(p) {
            dropped.push(DroppedColumn {
                param: p,
                reason: "missing on some samples".into(),
            });
            continue;
        }
        let col = ds.column(p);
        if col.iter().all(|v| *v == col[0]) {
            dropped.push(DroppedColumn {
                param: p,
                reason: format!("constant ({})", col[0]),
            });
            continue;
        }
        params.push(p);
        columns.push(col);
    }
    let k = params.len();
    let mut values = vec![vec![0.0; k]; k];
    for i in 0..k {
        values[i][i] = 1.0;
        for j in i + 1..k {
            let r = pearson(&columns[i], &columns[j])?;
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        params,
        values,
        dropped,
    })
}
