//! Mendelian randomization with summarized data: inverse-variance weighted
//! and MR-Egger regression, their robust (MM) and penalized variants,
//! weighted-median estimators, and a simulation harness for comparing them.

pub mod analysis;
pub mod distributions;
pub mod error;
pub mod estimate;
mod linalg;
pub mod median_methods;
pub mod penalization;
pub mod rng;
pub mod robust_mm;
pub mod simulation;
pub mod summary_data;
pub mod wls;

pub use analysis::{analyze, AnalysisOptions, AnalysisReport, Diagnostics};
pub use error::{Error, Result};
pub use estimate::{EffectsModel, Estimate, InterceptEstimate, Interval, Method, Reference};
pub use robust_mm::{BisquareParams, RobustFit};
pub use summary_data::{SummarySet, VariantAssociation};
pub use wls::{WeightKind, WeightVector};
