use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::{graph_points, point, GraphPolyline, Point, StripOrientation};
use crate::map::GhmMap;

use super::itinerary::itinerary_with_ties;
use super::refine::refine_strip;

/// Approximation of the stable leaf `Psi_x` through `(x, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartApprox {
    pub base_x: f64,
    pub depth: usize,
    /// The leaf as a graph `x = psi(y)`.
    pub polyline: GraphPolyline,
    pub slope_sup: f64,
    /// `[min, max]` of `|Psi_x'| = sqrt(1 + psi'^2)`.
    pub derivative_band: [f64; 2],
    /// Smallest `delta_0` with the band inside `[(1 + delta_0)^-1, 1 + delta_0]`.
    pub delta0: f64,
}

impl ChartApprox {
    pub fn points(&self) -> Vec<Point> {
        graph_points(&self.polyline, StripOrientation::Vertical)
    }
}

/// The stable leaf through `(x, 1)`, read off the depth-`n` stable strip that
/// contains it at the same relative position across the strip.
pub fn straightening_chart(map: &GhmMap, x: f64, depth: usize) -> Result<ChartApprox> {
    if map.is_overlapping() {
        return Err(GhmError::Overlapping);
    }
    if depth < 2 {
        return Err(GhmError::InvalidParameter("chart depth must be at least 2".into()));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(GhmError::OutsideSquare { x, y: 1.0 });
    }
    let word = itinerary_with_ties(map, point(x, 1.0), depth)?.word;
    let strip = refine_strip(map, &word)?;
    let (lo, hi) = strip.span_at(1.0);
    let theta = if hi > lo {
        ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
    } else {
        0.5
    };
    let params = crate::geometry::union_params(&[strip.lower(), strip.upper()]);
    let values: Vec<f64> = params
        .iter()
        .map(|&y| {
            let (a, b) = strip.span_at(y);
            a + theta * (b - a)
        })
        .collect();
    let polyline = GraphPolyline::new(params, values)?;
    let slope_sup = polyline.max_abs_slope();
    let band = polyline
        .params()
        .windows(2)
        .map(|w| (1.0 + polyline.slope_at(0.5 * (w[0] + w[1])).powi(2)).sqrt())
        .fold([f64::INFINITY, f64::NEG_INFINITY], |[a, b], d| [a.min(d), b.max(d)]);
    let delta0 = (band[1] - 1.0).max(1.0 / band[0] - 1.0).max(0.0);
    Ok(ChartApprox {
        base_x: x,
        depth,
        polyline,
        slope_sup,
        derivative_band: band,
        delta0,
    })
}
