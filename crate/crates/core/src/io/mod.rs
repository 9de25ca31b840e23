//! Output formats: CSV tables, SVG overlays and PNG heat maps.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! inputs give byte-identical files.

mod csv;
mod heatmap;
mod svg;

pub use csv::{
    cells_csv, correlation_csv, coverage_csv, density_csv, expansion_field_csv, histogram_csv, points_csv,
    polyline_csv, ulam_csv, write_text,
};
pub use heatmap::{heat_color, write_heatmap_png};
pub use svg::{SvgCanvas, DEFAULT_SVG_SIZE};
