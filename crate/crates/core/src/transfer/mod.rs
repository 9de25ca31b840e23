//! The transfer operator: pointwise preimage sums, Ulam discretization,
//! stationary densities, spectral gap and a discrete Sobolev diagnostic.

mod density;
mod operator;
mod sobolev;
mod spectral;
mod stationary;
mod ulam;

pub use density::{DensityFn, GridDensity};
pub use operator::apply_transfer;
pub use sobolev::{sobolev_diagnostic, sobolev_seminorm, sobolev_seminorm_values};
pub use spectral::{dense_spectrum, spectral_gap, SpectralReport};
pub use stationary::{stationary_density, StationaryDensity};
pub use ulam::{ulam_matrix, UlamMatrix};
