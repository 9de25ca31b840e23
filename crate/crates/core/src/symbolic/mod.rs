//! Words over branch ids, refined strips, manifold approximations, the
//! attractor on a grid, itineraries and the straightening chart.

mod attractor;
mod chart;
mod itinerary;
mod refine;
mod word;

pub use attractor::{attractor_cells, CellSet};
pub use chart::{straightening_chart, ChartApprox};
pub use itinerary::{itinerary, itinerary_with_ties, Itinerary};
pub use refine::{manifold_approx, refine_strip, refinement_resolution, ManifoldApprox};
pub use word::{Orientation, Word};
