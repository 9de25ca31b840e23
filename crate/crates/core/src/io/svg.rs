use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::geometry::Point;
use crate::symbolic::CellSet;
use crate::transfer::GridDensity;

use super::heatmap::heat_color;

pub const DEFAULT_SVG_SIZE: u32 = 1024;

/// An SVG drawing of the unit square, `y` pointing up.
#[derive(Clone, Debug)]
pub struct SvgCanvas {
    size: u32,
    body: String,
}

impl Default for SvgCanvas {
    fn default() -> Self {
        Self::new(DEFAULT_SVG_SIZE)
    }
}

impl SvgCanvas {
    pub fn new(size: u32) -> Self {
        let mut canvas = Self {
            size,
            body: String::new(),
        };
        canvas.rect(0.0, 0.0, 1.0, 1.0, "white", 1.0);
        canvas
    }

    fn px(&self, p: Point) -> (f64, f64) {
        let s = self.size as f64;
        (snap(p.x * s), snap((1.0 - p.y) * s))
    }

    fn path_data(&self, points: &[Point]) -> String {
        let mut d = String::new();
        for (i, &p) in points.iter().enumerate() {
            let (x, y) = self.px(p);
            let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
        }
        d
    }

    /// Axis-aligned rectangle with lower-left corner `(x, y)`.
    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, opacity: f64) -> &mut Self {
        let s = self.size as f64;
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}" fill-opacity="{opacity}"/>"#,
            snap(x * s),
            snap((1.0 - y - h) * s),
            snap(w * s),
            snap(h * s)
        );
        self
    }

    pub fn polyline(&mut self, points: &[Point], stroke: &str, width: f64) -> &mut Self {
        let d = self.path_data(points);
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#
        );
        self
    }

    pub fn polygon(&mut self, points: &[Point], fill: &str, opacity: f64) -> &mut Self {
        let d = self.path_data(points);
        let _ = writeln!(
            self.body,
            r#"<path d="{d} Z" fill="{fill}" fill-opacity="{opacity}" stroke="none"/>"#
        );
        self
    }

    pub fn dots(&mut self, points: &[Point], fill: &str, radius: f64) -> &mut Self {
        for &p in points {
            let (x, y) = self.px(p);
            let _ = writeln!(
                self.body,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius}" fill="{fill}"/>"#
            );
        }
        self
    }

    pub fn cells(&mut self, cells: &CellSet, fill: &str, opacity: f64) -> &mut Self {
        let m = cells.resolution();
        let h = 1.0 / m as f64;
        for c in cells.indices() {
            self.rect((c % m) as f64 * h, (c / m) as f64 * h, h, h, fill, opacity);
        }
        self
    }

    /// Density heat map scaled to the maximum cell value.
    pub fn density(&mut self, density: &GridDensity) -> &mut Self {
        let m = density.resolution();
        let h = 1.0 / m as f64;
        let max = density.values().iter().copied().fold(0.0, f64::max);
        for (c, &v) in density.values().iter().enumerate() {
            if v > 0.0 {
                let [r, g, b] = heat_color(v / max);
                let color = format!("#{r:02x}{g:02x}{b:02x}");
                self.rect((c % m) as f64 * h, (c / m) as f64 * h, h, h, &color, 1.0);
            }
        }
        self
    }

    pub fn label(&mut self, p: Point, text: &str) -> &mut Self {
        let (x, y) = self.px(p);
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="{}">{text}</text>"#,
            self.size / 40
        );
        self
    }

    pub fn render(&self) -> String {
        let s = self.size;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n{}<rect x=\"0\" y=\"0\" width=\"{s}\" height=\"{s}\" fill=\"none\" stroke=\"black\"/>\n</svg>\n",
            self.body
        )
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        super::write_text(path, &self.render())
    }
}

/// Rounds to the printed precision so that no coordinate renders as `-0.000`.
fn snap(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0 + 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;

    #[test]
    fn y_axis_points_up() {
        let mut c = SvgCanvas::new(100);
        c.polyline(&[point(0.0, 0.0), point(1.0, 1.0)], "red", 1.0);
        assert!(c.render().contains("M0.000,100.000 L100.000,0.000"));
    }
}
