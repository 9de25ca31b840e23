//! Virtual expansion: the projection factor `eta`, the fields `b_mu(F^n)`,
//! the sequence `beta_mu` and the coverage partition of the image strips.

mod coverage;
mod field;

pub use coverage::{coverage_partition, ColumnSpan, CoveragePiece};
pub use field::{b_mu_at, b_mu_field, beta_mu_estimate, eta, eta_of, refinement_change, ExpansionReport, TREE_BUDGET};
