//! Numerical laboratory for generalized horseshoe maps.
//!
//! A generalized horseshoe map sends finitely many curvilinear vertical
//! strips of the unit square onto curvilinear horizontal strips, expanding
//! horizontally and contracting vertically. This crate builds and validates
//! such maps, refines their symbolic strips, discretizes the transfer
//! operator, simulates orbit clouds and computes the virtual-expansion
//! quantities `b_mu` and `beta_mu`.
//!
//! ```
//! use ghm::map::{baker_map, three_strip_map};
//! use ghm::geometry::point;
//!
//! let baker = baker_map();
//! assert_eq!(baker.differential(point(0.25, 0.5)).unwrap().det, 1.0);
//!
//! let three = three_strip_map();
//! assert!(three.is_overlapping());
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expansion;
pub mod geometry;
pub mod io;
pub mod map;
pub mod run;
pub mod stats;
pub mod symbolic;
pub mod transfer;

pub use error::{GhmError, Result};
pub use geometry::{point, GraphPolyline, Point, StripOrientation, StripRegion};
pub use map::{Branch, GhmMap};
