//! End-to-end pipelines for the two double-plane examples: asset loading,
//! reduction to the working prime, condition-system assembly, and the data
//! feeding the verification checks.

pub mod campedelli;
pub mod oort_peters;

pub use campedelli::{residual_parameter_conditions, Campedelli, ResidualOutcome};
pub use oort_peters::{OortPeters, OortPetersModQ};
