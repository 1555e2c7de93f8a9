//! Slab-column test data: ingestion, statistics, feature projection,
//! normalization, splitting and synthesis.

mod csv_io;
mod features;
mod split;
mod stats;
mod synth;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use csv_io::{load_csv, read_csv, write_csv, CSV_HEADER};
pub use features::{
    build_features, denormalize, normalize, ColumnBounds, Feature, FeatureMatrix, NormParams,
    ScsCombo,
};
pub use split::{split, DEFAULT_TRAIN_FRACTION};
pub use stats::{summarize, validate_ranges, ParamRange, RangeSpec, ValidationReport, Violation};
pub use synth::{synthesize, target_function};

/// One physical punching test on a square slab with a square column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabSample {
    pub id: String,
    pub source: String,
    /// Effective slab depth, mm.
    pub d: f64,
    /// Column side, mm.
    pub c: f64,
    /// Shear span ratio a_v/d.
    pub av_d: f64,
    /// Longitudinal steel yield strength, MPa.
    pub fy: f64,
    /// Longitudinal reinforcement ratio as a fraction (0.01 = 1 %).
    pub rho: f64,
    /// Concrete compressive strength, MPa.
    pub fc: f64,
    /// Measured ultimate punching load, kN.
    pub v_exp: f64,
    /// Flexural moment, kN·mm.
    pub m_fs: Option<f64>,
    /// Slab width, mm.
    pub b: Option<f64>,
}

impl SlabSample {
    /// Checks the physical invariants. `row` is only used for error context.
    pub fn validate(&self, row: usize) -> Result<()> {
        let required = [
            (Param::D, self.d),
            (Param::C, self.c),
            (Param::AvD, self.av_d),
            (Param::Fy, self.fy),
            (Param::Rho, self.rho),
            (Param::Fc, self.fc),
            (Param::VExp, self.v_exp),
        ];
        let optional = [(Param::MFs, self.m_fs), (Param::B, self.b)];
        let present = optional.iter().filter_map(|&(p, v)| v.map(|v| (p, v)));
        for (param, value) in required.into_iter().chain(present) {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Field {
                    row,
                    field: param.column(),
                    message: format!("must be positive and finite, got {value}"),
                });
            }
        }
        Ok(())
    }

    pub fn get(&self, param: Param) -> Option<f64> {
        match param {
            Param::D => Some(self.d),
            Param::C => Some(self.c),
            Param::AvD => Some(self.av_d),
            Param::Rho => Some(self.rho),
            Param::MFs => self.m_fs,
            Param::Fy => Some(self.fy),
            Param::Fc => Some(self.fc),
            Param::VExp => Some(self.v_exp),
            Param::B => self.b,
        }
    }
}

/// Database parameters, in the order the summary table lists them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    D,
    C,
    AvD,
    Rho,
    MFs,
    Fy,
    Fc,
    VExp,
    B,
}

impl Param {
    pub const ALL: [Param; 9] = [
        Param::D,
        Param::C,
        Param::AvD,
        Param::Rho,
        Param::MFs,
        Param::Fy,
        Param::Fc,
        Param::VExp,
        Param::B,
    ];

    /// Short symbol used in reports.
    pub fn symbol(self) -> &'static str {
        match self {
            Param::D => "d",
            Param::C => "c",
            Param::AvD => "av_d",
            Param::Rho => "rho",
            Param::MFs => "m_fs",
            Param::Fy => "fy",
            Param::Fc => "fc",
            Param::VExp => "v_exp",
            Param::B => "b",
        }
    }

    /// CSV column carrying the parameter.
    pub fn column(self) -> &'static str {
        match self {
            Param::D => "d_mm",
            Param::C => "c_mm",
            Param::AvD => "av_over_d",
            Param::Rho => "rho_percent",
            Param::MFs => "m_fs_knmm",
            Param::Fy => "fy_mpa",
            Param::Fc => "fc_mpa",
            Param::VExp => "v_exp_kn",
            Param::B => "b_mm",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Param::D | Param::C | Param::B => "mm",
            Param::AvD => "-",
            Param::Rho => "fraction",
            Param::MFs => "kN·mm",
            Param::Fy | Param::Fc => "MPa",
            Param::VExp => "kN",
        }
    }

    pub fn is_optional(self) -> bool {
        matches!(self, Param::MFs | Param::B)
    }
}

/// A validated collection of slab tests.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub samples: Vec<SlabSample>,
}

impl Dataset {
    /// Validates every sample; the error names the 1-based row.
    pub fn new(samples: Vec<SlabSample>) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            s.validate(i + 1)?;
        }
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SlabSample> {
        self.samples.iter()
    }

    /// Values of `param` for every sample that carries it.
    pub fn column(&self, param: Param) -> Vec<f64> {
        self.samples.iter().filter_map(|s| s.get(param)).collect()
    }

    /// True when every sample carries `param`.
    pub fn has_all(&self, param: Param) -> bool {
        self.samples.iter().all(|s| s.get(param).is_some())
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a SlabSample;
    type IntoIter = std::slice::Iter<'a, SlabSample>;

    fn into_iter(self) -> Self::IntoIter {
        self.samples.iter()
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_field() {
        let mut s = fixtures::s1();
        s.fc = -5.0;
        let err = Dataset::new(vec![fixtures::s1(), s]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2"), "{msg}");
        assert!(msg.contains("fc"), "{msg}");
    }

    #[test]
    fn optional_fields_checked_only_when_present() {
        let mut s = fixtures::s1();
        assert!(s.validate(1).is_ok());
        s.b = Some(0.0);
        assert!(matches!(
            s.validate(1),
            Err(Error::Field { field: "b_mm", .. })
        ));
    }
}
