use crate::error::{GhmError, Result};
use crate::geometry::{Point, GEOM_TOL};
use crate::map::GhmMap;

use super::density::DensityFn;

/// `(L^n h)(z) = sum over n-step preimages y of h(y) / Jac F^n(y)`,
/// enumerating the preimage tree depth first.
///
/// Fails when some preimage lands on a domain boundary, i.e. `z` lies on the
/// singular set of `F^n`.
pub fn apply_transfer(map: &GhmMap, h: &dyn DensityFn, z: Point, power: usize) -> Result<f64> {
    if power == 0 {
        return Ok(h.value(z));
    }
    let mut total = 0.0;
    let mut stack = vec![(z, 1.0, 0usize)];
    while let Some((w, jac, depth)) = stack.pop() {
        if depth == power {
            total += h.value(w) / jac;
            continue;
        }
        for b in map.branches() {
            if let Some(y) = b.pullback(w) {
                if b.boundary_gap(y) <= GEOM_TOL {
                    return Err(GhmError::Singular { x: z.x, y: z.y });
                }
                stack.push((y, jac * b.jacobian(y), depth + 1));
            }
        }
    }
    Ok(total)
}
