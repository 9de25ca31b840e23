use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::{Point, GEOM_TOL};
use crate::map::GhmMap;

use super::word::{Orientation, Word};

/// An itinerary together with the steps at which the orbit sat on a domain
/// boundary and the tie rule picked the lower-indexed branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Itinerary {
    pub word: Word,
    pub boundary_steps: Vec<usize>,
}

/// Symbols `a_j` with `F^{j-1}(z)` in the interior of `S_{a_j}`.
///
/// Fails with the (0-based) step at which the orbit touches the singular set.
pub fn itinerary(map: &GhmMap, z: Point, n: usize) -> Result<Word> {
    let mut z = z;
    let mut symbols = Vec::with_capacity(n);
    for step in 0..n {
        let idx = map.locate_interior(z).map_err(|e| match e {
            GhmError::Singular { .. } | GhmError::OutsideSquare { .. } => GhmError::OrbitHitsBoundary { step },
            other => other,
        })?;
        let b = &map.branches()[idx];
        symbols.push(b.id());
        z = b.forward(z);
    }
    Word::new(symbols, Orientation::Stable)
}

/// Like [`itinerary`] but resolves boundary points by the tie rule.
pub fn itinerary_with_ties(map: &GhmMap, z: Point, n: usize) -> Result<Itinerary> {
    let mut z = z;
    let mut symbols = Vec::with_capacity(n);
    let mut boundary_steps = Vec::new();
    for step in 0..n {
        let idx = map.locate(z).ok_or(GhmError::OutsideSquare { x: z.x, y: z.y })?;
        let b = &map.branches()[idx];
        if b.boundary_gap(z) <= GEOM_TOL {
            boundary_steps.push(step);
        }
        symbols.push(b.id());
        z = b.forward(z);
    }
    Ok(Itinerary {
        word: Word::new(symbols, Orientation::Stable)?,
        boundary_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use crate::map::{baker_map, three_strip_map};
    use crate::symbolic::refine_strip;

    #[test]
    fn baker_by_hand() {
        let map = baker_map();
        let w = itinerary(&map, point(0.3, 0.5), 3).unwrap();
        assert_eq!(w.symbols(), &[1, 2, 1]);
        assert_eq!(itinerary(&map, point(0.7, 0.1), 1).unwrap().symbols(), &[2]);
    }

    #[test]
    fn boundary_points() {
        let map = baker_map();
        let err = itinerary(&map, point(0.5, 0.5), 3).unwrap_err();
        assert!(matches!(err, GhmError::OrbitHitsBoundary { step: 0 }));
        let it = itinerary_with_ties(&map, point(0.5, 0.5), 3).unwrap();
        assert_eq!(it.word.symbols()[0], 1);
        assert_eq!(it.boundary_steps[0], 0);
    }

    #[test]
    fn points_lie_in_their_refined_strip() {
        let map = three_strip_map();
        for i in 1..50 {
            let z = point((i as f64 * 0.6180339887).fract(), (i as f64 * 0.7548776662).fract());
            let w = itinerary(&map, z, 6).unwrap();
            let s = refine_strip(&map, &w).unwrap();
            assert!(s.contains(z, 1e-12), "{z:?} {w}");
        }
    }
}
