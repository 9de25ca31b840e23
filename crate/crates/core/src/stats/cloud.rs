use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GhmError, Result};
use crate::geometry::Point;
use crate::map::GhmMap;
use crate::transfer::GridDensity;

use super::orbit::{OrbitOptions, Stepper};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudOptions {
    pub num_points: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Histogram resolution.
    pub m: usize,
    /// Steps at which to record an extra histogram (and a point sample).
    pub snapshot_steps: Vec<usize>,
    /// Number of points kept per snapshot for scatter plots.
    pub keep_points: usize,
    pub noise: f64,
}

impl CloudOptions {
    pub fn new(num_points: usize, iterations: usize, seed: u64, m: usize) -> Self {
        Self {
            num_points,
            iterations,
            seed,
            m,
            snapshot_steps: Vec::new(),
            keep_points: 0,
            noise: OrbitOptions::default().noise,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: usize,
    pub histogram: GridDensity,
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudResult {
    /// Histogram after the final iteration.
    pub histogram: GridDensity,
    pub snapshots: Vec<Snapshot>,
    /// Singular-set nudges applied over all orbits.
    pub nudges: usize,
}

struct Tally {
    final_counts: Vec<u64>,
    snapshot_counts: Vec<Vec<u64>>,
    nudges: usize,
}

impl Tally {
    fn new(cells: usize, snapshots: usize) -> Self {
        Self {
            final_counts: vec![0; cells],
            snapshot_counts: vec![vec![0; cells]; snapshots],
            nudges: 0,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.final_counts
            .iter_mut()
            .zip(&other.final_counts)
            .for_each(|(a, b)| *a += b);
        for (mine, theirs) in self.snapshot_counts.iter_mut().zip(&other.snapshot_counts) {
            mine.iter_mut().zip(theirs).for_each(|(a, b)| *a += b);
        }
        self.nudges += other.nudges;
        self
    }
}

fn cell(z: Point, m: usize) -> usize {
    let ix = ((z.x * m as f64) as usize).min(m - 1);
    let iy = ((z.y * m as f64) as usize).min(m - 1);
    iy * m + ix
}

/// Advances `num_points` uniformly seeded points and histograms them.
///
/// Point `i` draws its start and its orbit noise from stream `i` of the
/// seeded generator and counts are integers, so the result is independent
/// of the thread count.
pub fn push_cloud(map: &GhmMap, options: &CloudOptions) -> Result<CloudResult> {
    let m = options.m;
    if m == 0 || options.num_points == 0 {
        return Err(GhmError::InvalidParameter("cloud needs points and m >= 1".into()));
    }
    let orbit = OrbitOptions {
        noise: options.noise,
        seed: options.seed,
    };
    let steps = &options.snapshot_steps;
    let run = |i: usize, mut visit: Box<dyn FnMut(usize, Point) + '_>| -> usize {
        let mut stepper = Stepper::new(map, orbit, i as u64);
        let mut z = stepper.uniform_point();
        visit(0, z);
        for t in 1..=options.iterations {
            z = stepper.step(z);
            visit(t, z);
        }
        stepper.nudges
    };
    let tally = (0..options.num_points)
        .into_par_iter()
        .fold(
            || Tally::new(m * m, steps.len()),
            |mut tally, i| {
                let mut last = Point::zeros();
                let counts = &mut tally.snapshot_counts;
                let nudges = run(
                    i,
                    Box::new(|t, z| {
                        for (k, &s) in steps.iter().enumerate() {
                            if s == t {
                                counts[k][cell(z, m)] += 1;
                            }
                        }
                        last = z;
                    }),
                );
                tally.final_counts[cell(last, m)] += 1;
                tally.nudges += nudges;
                tally
            },
        )
        .reduce(|| Tally::new(m * m, steps.len()), Tally::merge);

    let keep = options.keep_points.min(options.num_points);
    let mut kept: Vec<Vec<Point>> = vec![Vec::with_capacity(keep); steps.len()];
    for i in 0..keep {
        run(
            i,
            Box::new(|t, z| {
                for (k, &s) in steps.iter().enumerate() {
                    if s == t {
                        kept[k].push(z);
                    }
                }
            }),
        );
    }
    let to_density = |counts: &[u64]| GridDensity::from_weights(m, counts.iter().map(|&c| c as f64).collect());
    let snapshots = steps
        .iter()
        .zip(&tally.snapshot_counts)
        .zip(kept)
        .map(|((&step, counts), points)| {
            Ok(Snapshot {
                step,
                histogram: to_density(counts)?,
                points,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CloudResult {
        histogram: to_density(&tally.final_counts)?,
        snapshots,
        nudges: tally.nudges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::baker_map;

    #[test]
    fn no_steps_gives_uniform_cloud() {
        let r = push_cloud(&baker_map(), &CloudOptions::new(20_000, 0, 1, 8)).unwrap();
        assert!(r.histogram.l1_distance(&GridDensity::uniform(8)) < 0.1);
    }

    #[test]
    fn snapshots_and_kept_points() {
        let mut o = CloudOptions::new(5_000, 3, 2, 16);
        o.snapshot_steps = vec![1, 3];
        o.keep_points = 10;
        let r = push_cloud(&baker_map(), &o).unwrap();
        assert_eq!(r.snapshots.len(), 2);
        assert_eq!(r.snapshots[1].points.len(), 10);
        assert_eq!(r.snapshots[1].histogram, r.histogram);
    }
}
