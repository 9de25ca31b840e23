use std::path::Path;

use image::{Rgb, RgbImage};

use crate::error::{GhmError, Result};
use crate::transfer::GridDensity;

const STOPS: [[f64; 3]; 5] = [
    [68.0, 1.0, 84.0],
    [59.0, 82.0, 139.0],
    [33.0, 145.0, 140.0],
    [94.0, 201.0, 98.0],
    [253.0, 231.0, 37.0],
];

/// Viridis-like ramp on `[0, 1]`.
pub fn heat_color(t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (t.floor() as usize).min(STOPS.len() - 2);
    let f = t - i as f64;
    let mut rgb = [0u8; 3];
    for (k, c) in rgb.iter_mut().enumerate() {
        *c = (STOPS[i][k] + f * (STOPS[i + 1][k] - STOPS[i][k])).round() as u8;
    }
    rgb
}

/// Nearest-neighbour heat map, `pixels` wide, top row = largest `y`.
pub fn write_heatmap_png(density: &GridDensity, pixels: u32, path: impl AsRef<Path>) -> Result<()> {
    let m = density.resolution();
    let max = density
        .values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let img = RgbImage::from_fn(pixels, pixels, |px, py| {
        let ix = (px as usize * m) / pixels as usize;
        let iy = m - 1 - (py as usize * m) / pixels as usize;
        Rgb(heat_color(density.at(ix, iy) / max))
    });
    if let Some(dir) = path.as_ref().parent() {
        std::fs::create_dir_all(dir)?;
    }
    img.save(path)
        .map_err(|e| GhmError::Io(std::io::Error::other(e.to_string())))
}
