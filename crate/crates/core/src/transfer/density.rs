use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::Point;

/// Anything that can be evaluated as a density on the square.
pub trait DensityFn: Sync {
    fn value(&self, z: Point) -> f64;
}

impl<F: Fn(Point) -> f64 + Sync> DensityFn for F {
    fn value(&self, z: Point) -> f64 {
        self(z)
    }
}

/// Piecewise-constant density on the uniform `m x m` grid.
///
/// Cell `(ix, iy)` is stored at `iy * m + ix`, row 0 at the bottom, and the
/// values integrate to one: `sum(values) / m^2 = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    m: usize,
    values: Vec<f64>,
}

impl GridDensity {
    pub fn uniform(m: usize) -> Self {
        Self {
            m,
            values: vec![1.0; m * m],
        }
    }

    /// Normalizes nonnegative cell weights into a density.
    pub fn from_weights(m: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != m * m || m == 0 {
            return Err(GhmError::InvalidParameter(format!(
                "expected {} cell weights, got {}",
                m * m,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(GhmError::InvalidParameter(
                "density weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(GhmError::InvalidParameter("density weights sum to zero".into()));
        }
        let scale = (m * m) as f64 / total;
        Ok(Self {
            m,
            values: weights.into_iter().map(|w| w * scale).collect(),
        })
    }

    /// Density from a probability vector over cells (`sum = 1`).
    pub fn from_probabilities(m: usize, p: &[f64]) -> Result<Self> {
        Self::from_weights(m, p.iter().map(|v| v.max(0.0)).collect())
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Cell masses `values / m^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        let a = 1.0 / (self.m * self.m) as f64;
        self.values.iter().map(|v| v * a).collect()
    }

    pub fn cell_of(&self, z: Point) -> usize {
        let m = self.m;
        let ix = ((z.x * m as f64).floor().max(0.0) as usize).min(m - 1);
        let iy = ((z.y * m as f64).floor().max(0.0) as usize).min(m - 1);
        iy * m + ix
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.m + ix]
    }

    /// `integral |h - g| dm`; both densities must share the resolution.
    pub fn l1_distance(&self, other: &GridDensity) -> f64 {
        assert_eq!(self.m, other.m, "resolutions differ");
        let a = 1.0 / (self.m * self.m) as f64;
        self.values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>()
            * a
    }

    /// Averages `factor x factor` blocks.
    pub fn coarsen(&self, factor: usize) -> Result<GridDensity> {
        if factor == 0 || !self.m.is_multiple_of(factor) {
            return Err(GhmError::InvalidParameter(format!(
                "cannot coarsen m = {} by {factor}",
                self.m
            )));
        }
        let mc = self.m / factor;
        let mut out = vec![0.0; mc * mc];
        for iy in 0..self.m {
            for ix in 0..self.m {
                out[(iy / factor) * mc + ix / factor] += self.at(ix, iy);
            }
        }
        let inv = 1.0 / (factor * factor) as f64;
        Ok(GridDensity {
            m: mc,
            values: out.into_iter().map(|v| v * inv).collect(),
        })
    }

    /// Mass carried by cells where `keep` is false.
    pub fn mass_outside(&self, keep: &[bool]) -> f64 {
        let a = 1.0 / (self.m * self.m) as f64;
        self.values
            .iter()
            .zip(keep)
            .filter(|(_, &k)| !k)
            .map(|(v, _)| v * a)
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum::<f64>() / (self.m * self.m) as f64
    }
}

impl DensityFn for GridDensity {
    fn value(&self, z: Point) -> f64 {
        self.values[self.cell_of(z)]
    }
}
