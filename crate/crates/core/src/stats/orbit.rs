use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{point, Point, GEOM_TOL};
use crate::map::GhmMap;

use super::observable::Observable;

/// Orbit noise and seed.
///
/// Affine maps with dyadic expansion are exact in binary, so noiseless
/// floating-point orbits of such maps collapse onto a periodic point after
/// about fifty steps. A uniform kick of size `noise` per coordinate and step
/// keeps orbits generic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitOptions {
    pub noise: f64,
    pub seed: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self { noise: 1e-13, seed: 0 }
    }
}

/// Advances single points, nudging them off the singular set.
pub struct Stepper<'a> {
    map: &'a GhmMap,
    noise: f64,
    rng: ChaCha8Rng,
    pub nudges: usize,
}

impl<'a> Stepper<'a> {
    /// A stepper drawing from stream `stream` of the seeded generator.
    pub fn new(map: &'a GhmMap, options: OrbitOptions, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        rng.set_stream(stream);
        Self {
            map,
            noise: options.noise,
            rng,
            nudges: 0,
        }
    }

    pub fn uniform_point(&mut self) -> Point {
        point(self.rng.random(), self.rng.random())
    }

    pub fn step(&mut self, z: Point) -> Point {
        let mut z = point(z.x.clamp(0.0, 1.0), z.y.clamp(0.0, 1.0));
        let idx = self.map.locate(z).unwrap_or(0);
        let b = &self.map.branches()[idx];
        if b.boundary_gap(z) <= GEOM_TOL {
            let (lo, hi) = b.domain().span_at(z.y);
            z.x = if z.x - lo <= hi - z.x {
                lo + GEOM_TOL
            } else {
                hi - GEOM_TOL
            };
            self.nudges += 1;
        }
        let mut w = b.forward(z);
        if self.noise > 0.0 {
            w.x += self.noise * (2.0 * self.rng.random::<f64>() - 1.0);
            w.y += self.noise * (2.0 * self.rng.random::<f64>() - 1.0);
        }
        point(w.x.clamp(0.0, 1.0), w.y.clamp(0.0, 1.0))
    }
}

/// `(1/n) sum_{i<n} f(F^i(z))`.
pub fn birkhoff_average(map: &GhmMap, f: &Observable, z: Point, n: usize, options: OrbitOptions) -> f64 {
    let mut stepper = Stepper::new(map, options, 0);
    let mut z = z;
    let mut sum = 0.0;
    for _ in 0..n {
        sum += f.eval(z);
        z = stepper.step(z);
    }
    sum / n.max(1) as f64
}
