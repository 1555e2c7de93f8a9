//! Punching shear strength prediction for reinforced-concrete slab-column
//! connections.
//!
//! The crate covers the whole comparison pipeline:
//!
//! - [`dataset`]: CSV ingestion of slab tests, database statistics, min-max
//!   normalization, the seven feature combinations, seeded splits and a
//!   bounded synthetic generator.
//! - [`codes`]: closed-form capacities per ACI 318-19, Eurocode 2 and the
//!   Compressive Force Path method.
//! - [`fnn`]: a small feed-forward regression network with analytic
//!   gradients, backpropagation training and a flat weight codec.
//! - [`metaheuristics`]: particle swarm and bat optimizers over box-bounded
//!   objectives, the network-weight objective, and grid search.
//! - [`evaluation`]: error metrics, strength-ratio fits, parametric scatter
//!   tables and the six-method comparison report.
//! - [`pipeline`]: glue that trains FNN / PSO-FNN / BAT-FNN models end to end.
//!
//! Units: lengths in mm, stresses in MPa, forces in kN at every public
//! boundary (newtons only inside the capacity formulas), reinforcement ratio
//! as a fraction.

pub mod codes;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod fnn;
pub mod metaheuristics;
pub mod pipeline;
pub mod rng;

pub use codes::{CodeMethod, CodePrediction};
pub use dataset::{Dataset, FeatureMatrix, NormParams, Param, RangeSpec, ScsCombo, SlabSample};
pub use error::{Error, Result};
pub use evaluation::{EvaluationReport, Method, MetricSet, RatioStats};
pub use fnn::{Activation, Network, TrainConfig};
pub use metaheuristics::{BatConfig, Objective, OptimizerTrace, PsoConfig};
