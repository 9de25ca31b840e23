//! Direct simulation: orbit clouds, Birkhoff averages, correlation decay and
//! a central-limit diagnostic.

mod cloud;
mod correlation;
mod observable;
mod orbit;

pub use cloud::{push_cloud, CloudOptions, CloudResult, Snapshot};
pub use correlation::{clt_diagnostic, correlation_series, CltReport, CorrelationSeries};
pub use observable::Observable;
pub use orbit::{birkhoff_average, OrbitOptions, Stepper};
