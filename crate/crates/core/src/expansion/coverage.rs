use serde::{Deserialize, Serialize};

use crate::map::GhmMap;

const ORDINATE_TOL: f64 = 1e-12;

/// A maximal interval of constant coverage inside one x-column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpan {
    pub column: usize,
    pub y0: f64,
    pub y1: f64,
}

/// A connected union of column spans sharing the same covering set `theta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveragePiece {
    pub id: usize,
    /// Ids of the branches whose images cover the piece.
    pub theta: Vec<usize>,
    pub x_interval: [f64; 2],
    /// Bounding y-interval over all spans.
    pub y_interval: [f64; 2],
    pub spans: Vec<ColumnSpan>,
}

struct Interval {
    y0: f64,
    y1: f64,
    theta: Vec<usize>,
    /// Image-boundary curves below and above, as `(branch index, is_upper)`.
    lo: (usize, bool),
    hi: (usize, bool),
}

fn curve(map: &GhmMap, (i, upper): (usize, bool), x: f64) -> f64 {
    let image = map.branches()[i].image();
    if upper {
        image.upper().eval(x)
    } else {
        image.lower().eval(x)
    }
}

fn column_intervals(map: &GhmMap, x: f64) -> Vec<Interval> {
    let bounds: Vec<(usize, f64, f64)> = map
        .branches()
        .iter()
        .map(|b| (b.id(), b.image().lower().eval(x), b.image().upper().eval(x)))
        .collect();
    let mut ords: Vec<(f64, (usize, bool))> = bounds
        .iter()
        .enumerate()
        .flat_map(|(i, &(_, a, b))| [(a, (i, false)), (b, (i, true))])
        .collect();
    ords.sort_by(|a, b| a.0.total_cmp(&b.0));
    ords.dedup_by(|a, b| (a.0 - b.0).abs() <= ORDINATE_TOL);
    let mut out: Vec<Interval> = Vec::new();
    for w in ords.windows(2) {
        let mid = 0.5 * (w[0].0 + w[1].0);
        let theta: Vec<usize> = bounds
            .iter()
            .filter(|&&(_, a, b)| a <= mid && mid <= b)
            .map(|&(id, _, _)| id)
            .collect();
        if theta.is_empty() {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.theta == theta && (last.y1 - w[0].0).abs() <= ORDINATE_TOL => {
                last.y1 = w[1].0;
                last.hi = w[1].1;
            }
            _ => out.push(Interval {
                y0: w[0].0,
                y1: w[1].0,
                theta,
                lo: w[0].1,
                hi: w[1].1,
            }),
        }
    }
    out
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = i;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Splits the union of the image strips into pieces of constant covering set.
///
/// Each of the `x_res` columns is cut at the image boundary ordinates of its
/// center line. Intervals of adjacent columns with equal covering sets are
/// merged when their bounding curves, evaluated on the shared column edge,
/// enclose overlapping ranges.
pub fn coverage_partition(map: &GhmMap, x_res: usize) -> Vec<CoveragePiece> {
    let x_res = x_res.max(1);
    let columns: Vec<Vec<Interval>> = (0..x_res)
        .map(|c| column_intervals(map, (c as f64 + 0.5) / x_res as f64))
        .collect();
    let mut offsets = Vec::with_capacity(x_res + 1);
    offsets.push(0);
    for col in &columns {
        offsets.push(offsets.last().unwrap() + col.len());
    }
    let mut parent: Vec<usize> = (0..offsets[x_res]).collect();
    for c in 1..x_res {
        let edge = c as f64 / x_res as f64;
        for (i, a) in columns[c - 1].iter().enumerate() {
            for (j, b) in columns[c].iter().enumerate() {
                let lo = curve(map, a.lo, edge).max(curve(map, b.lo, edge));
                let hi = curve(map, a.hi, edge).min(curve(map, b.hi, edge));
                if a.theta == b.theta && lo < hi {
                    let (ra, rb) = (find(&mut parent, offsets[c - 1] + i), find(&mut parent, offsets[c] + j));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
    }
    let mut pieces: Vec<CoveragePiece> = Vec::new();
    let mut root_to_piece = std::collections::HashMap::new();
    let width = 1.0 / x_res as f64;
    for (c, col) in columns.iter().enumerate() {
        for (i, iv) in col.iter().enumerate() {
            let root = find(&mut parent, offsets[c] + i);
            let idx = *root_to_piece.entry(root).or_insert_with(|| {
                pieces.push(CoveragePiece {
                    id: pieces.len(),
                    theta: iv.theta.clone(),
                    x_interval: [c as f64 * width, (c + 1) as f64 * width],
                    y_interval: [iv.y0, iv.y1],
                    spans: Vec::new(),
                });
                pieces.len() - 1
            });
            let p = &mut pieces[idx];
            p.x_interval[0] = p.x_interval[0].min(c as f64 * width);
            p.x_interval[1] = p.x_interval[1].max((c + 1) as f64 * width);
            p.y_interval[0] = p.y_interval[0].min(iv.y0);
            p.y_interval[1] = p.y_interval[1].max(iv.y1);
            p.spans.push(ColumnSpan {
                column: c,
                y0: iv.y0,
                y1: iv.y1,
            });
        }
    }
    pieces
}
