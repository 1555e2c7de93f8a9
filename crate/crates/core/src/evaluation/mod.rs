//! Error metrics, strength ratios and the six-method comparison.
//!
//! Strength ratios are `V_exp / V_pred`: above 1 the method underestimates
//! the measured capacity (conservative), below 1 it overestimates.

mod correlation;
mod metrics;
mod ratio;
mod report;
mod scatter;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use correlation::{correlation_matrix, CorrelationMatrix, DroppedColumn};
pub use metrics::{metric_set, pearson, MetricSet, NormalizedMetrics};
pub use ratio::{ratio_stats, PdfPoint, RatioStats, PDF_POINTS};
pub use report::{compare, Assessment, CompareInput, EvaluationReport, MethodReport};
pub use scatter::{parametric_scatter, ScatterRow, ScatterTable, DEFAULT_BAND, SCATTER_PARAMS};

use crate::codes::CodeMethod;

/// The six prediction methods under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Aci,
    Ec2,
    Cfp,
    Fnn,
    PsoFnn,
    BatFnn,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Aci,
        Method::Ec2,
        Method::Cfp,
        Method::Fnn,
        Method::PsoFnn,
        Method::BatFnn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Aci => "ACI",
            Method::Ec2 => "EC2",
            Method::Cfp => "CFP",
            Method::Fnn => "FNN",
            Method::PsoFnn => "PSOFNN",
            Method::BatFnn => "BATFNN",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
    }

    pub fn is_learned(self) -> bool {
        matches!(self, Method::Fnn | Method::PsoFnn | Method::BatFnn)
    }
}

impl From<CodeMethod> for Method {
    fn from(m: CodeMethod) -> Self {
        match m {
            CodeMethod::Aci => Method::Aci,
            CodeMethod::Ec2 => Method::Ec2,
            CodeMethod::Cfp => Method::Cfp,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
