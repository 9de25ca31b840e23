use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::Point;
use crate::transfer::{DensityFn, GridDensity};

/// A bounded function on the square.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Constant(f64),
    CoordX,
    CoordY,
    /// `cos(2 pi x)`.
    Cos2PiX,
    /// Indicator of `[x0, x1) x [y0, y1)`.
    Indicator {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    /// Piecewise constant on the grid of the density.
    GridSampled(GridDensity),
    /// `f - c`.
    Centered(Box<Observable>, f64),
}

impl Observable {
    pub fn eval(&self, z: Point) -> f64 {
        match self {
            Observable::Constant(c) => *c,
            Observable::CoordX => z.x,
            Observable::CoordY => z.y,
            Observable::Cos2PiX => (2.0 * PI * z.x).cos(),
            Observable::Indicator { x0, x1, y0, y1 } => {
                if z.x >= *x0 && z.x < *x1 && z.y >= *y0 && z.y < *y1 {
                    1.0
                } else {
                    0.0
                }
            }
            Observable::GridSampled(h) => h.value(z),
            Observable::Centered(f, c) => f.eval(z) - c,
        }
    }

    pub fn centered(self, c: f64) -> Self {
        Observable::Centered(Box::new(self), c)
    }

    pub fn name(&self) -> String {
        match self {
            Observable::Constant(c) => format!("const:{c}"),
            Observable::CoordX => "coord_x".into(),
            Observable::CoordY => "coord_y".into(),
            Observable::Cos2PiX => "cos2pix".into(),
            Observable::Indicator { x0, x1, y0, y1 } => format!("indicator:{x0},{x1},{y0},{y1}"),
            Observable::GridSampled(h) => format!("grid_sampled:{}", h.resolution()),
            Observable::Centered(f, c) => format!("{}-{c}", f.name()),
        }
    }
}

/// Parses `coord_x`, `coord_y`, `cos2pix`, `const:<c>` and
/// `indicator:<x0>,<x1>,<y0>,<y1>`.
impl FromStr for Observable {
    type Err = GhmError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GhmError::InvalidParameter(format!("unknown observable {s:?}"));
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        match s.split_once(':') {
            None => match s {
                "coord_x" => Ok(Observable::CoordX),
                "coord_y" => Ok(Observable::CoordY),
                "cos2pix" => Ok(Observable::Cos2PiX),
                _ => Err(bad()),
            },
            Some(("const", v)) => Ok(Observable::Constant(num(v)?)),
            Some(("indicator", v)) => {
                let p: Vec<f64> = v.split(',').map(num).collect::<Result<_>>()?;
                match p[..] {
                    [x0, x1, y0, y1] => Ok(Observable::Indicator { x0, x1, y0, y1 }),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}
