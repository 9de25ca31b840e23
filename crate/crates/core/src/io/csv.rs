use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::expansion::{CoveragePiece, ExpansionReport};
use crate::geometry::Point;
use crate::stats::CorrelationSeries;
use crate::symbolic::CellSet;
use crate::transfer::{GridDensity, UlamMatrix};

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    if let Some(dir) = path.as_ref().parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// `x,y` per vertex.
pub fn points_csv(points: &[Point]) -> String {
    let mut out = String::from("x,y\n");
    for p in points {
        let _ = writeln!(out, "{},{}", p.x, p.y);
    }
    out
}

pub fn polyline_csv(points: &[Point]) -> String {
    points_csv(points)
}

/// Row-major density values, one grid row (fixed `iy`) per line, bottom row first.
pub fn density_csv(h: &GridDensity) -> String {
    let m = h.resolution();
    let mut out = String::new();
    for row in h.values().chunks(m) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Integer tallies in the same layout as [`density_csv`].
pub fn histogram_csv(m: usize, counts: &[u64]) -> String {
    let mut out = String::new();
    for row in counts.chunks(m) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// `cell,ix,iy` per member cell, with `cell = iy * m + ix`.
pub fn cells_csv(cells: &CellSet) -> String {
    let m = cells.resolution();
    let mut out = String::from("cell,ix,iy\n");
    for c in cells.indices() {
        let _ = writeln!(out, "{c},{},{}", c % m, c / m);
    }
    out
}

/// `row,col,value` per nonzero entry.
pub fn ulam_csv(p: &UlamMatrix) -> String {
    let mut out = String::from("row,col,value\n");
    for (i, j, v) in p.triplets() {
        let _ = writeln!(out, "{i},{j},{v}");
    }
    out
}

pub fn correlation_csv(series: &CorrelationSeries) -> String {
    let mut out = String::from("n,c\n");
    for (n, c) in series.n.iter().zip(&series.c) {
        let _ = writeln!(out, "{n},{c}");
    }
    out
}

/// `ix,iy,angle,x,y,vx,vy,b_mu` per sample of the `b_mu(F)` field.
pub fn expansion_field_csv(report: &ExpansionReport) -> String {
    let mut out = String::from("ix,iy,angle,x,y,vx,vy,b_mu\n");
    let (xr, ar) = (report.x_res, report.angle_res);
    for iy in 0..xr {
        for ix in 0..xr {
            let z = report.base_point(ix, iy);
            for j in 0..ar {
                let v = report.direction(j);
                let b = report.field[(iy * xr + ix) * ar + j];
                let _ = writeln!(out, "{ix},{iy},{j},{},{},{},{},{b}", z.x, z.y, v.x, v.y);
            }
        }
    }
    out
}

/// `piece,theta,column,y0,y1` per column span, `theta` as `1|2|...`.
pub fn coverage_csv(pieces: &[CoveragePiece]) -> String {
    let mut out = String::from("piece,theta,column,y0,y1\n");
    for p in pieces {
        let theta: Vec<String> = p.theta.iter().map(|t| t.to_string()).collect();
        let theta = theta.join("|");
        for s in &p.spans {
            let _ = writeln!(out, "{},{theta},{},{},{}", p.id, s.column, s.y0, s.y1);
        }
    }
    out
}
