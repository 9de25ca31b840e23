//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process fails if any criterion fails, except the two marked `known`, whose
//! literal targets are not met by the true discrete quantities. For those the
//! suite asserts the observed behaviour instead and prints both.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use ghm::expansion::{b_mu_at, beta_mu_estimate, coverage_partition, refinement_change};
use ghm::geometry::hausdorff_distance;
use ghm::map::fixtures::{diagonal_map, identity_map, overlap_pair};
use ghm::map::{baker_map, three_strip_map, validate_hyperbolicity, GhmMap};
use ghm::stats::{correlation_series, push_cloud, CloudOptions, Observable};
use ghm::symbolic::{attractor_cells, manifold_approx, refine_strip, Word};
use ghm::transfer::{
    apply_transfer, dense_spectrum, sobolev_seminorm_values, stationary_density, ulam_matrix, GridDensity,
};
use ghm::{point, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_611;

enum Verdict {
    Pass,
    Fail,
    /// Literal target missed; the observed behaviour was asserted instead.
    Known {
        observed_ok: bool,
    },
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome {
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        detail,
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let mut o = f();
    let elapsed = t.elapsed();
    if elapsed > limit {
        o.verdict = Verdict::Fail;
        o.detail.push_str(&format!("; over the {limit:?} budget"));
    }
    (o, elapsed)
}

fn axioms() -> Outcome {
    let baker = validate_hyperbolicity(&baker_map(), 10_000, SEED);
    let three = validate_hyperbolicity(&three_strip_map(), 10_000, SEED);
    let flat = validate_hyperbolicity(&identity_map(), 10_000, SEED);
    outcome(
        baker.is_valid() && three.is_valid() && flat.h2_violations > 0,
        format!(
            "baker {} / three-strip {} samples clean; non-expanding fixture {} H2 violations",
            baker.samples_checked, three.samples_checked, flat.h2_violations
        ),
    )
}

fn trig_polynomial(seed: u64) -> impl Fn(Point) -> f64 + Sync {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64, f64, f64)> = (0..12)
        .map(|_| {
            (
                rng.random_range(-3..=3) as f64,
                rng.random_range(-3..=3) as f64,
                rng.random_range(-0.3..0.3),
                rng.random_range(-0.3..0.3),
            )
        })
        .collect();
    move |z: Point| {
        1.0 + terms
            .iter()
            .map(|&(k, l, a, b)| {
                let t = 2.0 * std::f64::consts::PI * (k * z.x + l * z.y);
                a * t.cos() + b * t.sin()
            })
            .sum::<f64>()
    }
}

fn duality_defect(map: &GhmMap, h: &(dyn Fn(Point) -> f64 + Sync), m: usize) -> f64 {
    let cell = 1.0 / (m * m) as f64;
    let mut pushed = 0.0;
    let mut plain = 0.0;
    for iy in 0..m {
        for ix in 0..m {
            let z = point((ix as f64 + 0.5) / m as f64, (iy as f64 + 0.5) / m as f64);
            pushed += apply_transfer(map, &h, z, 1).expect("cell centers avoid the singular set") * cell;
            plain += h(z) * cell;
        }
    }
    (pushed - plain).abs()
}

fn duality() -> Outcome {
    let m = 128;
    let tol = 2.0 / m as f64;
    let one = |_: Point| 1.0;
    let x = |z: Point| z.x;
    let trig = trig_polynomial(SEED);
    let mut worst: f64 = 0.0;
    for map in [three_strip_map(), baker_map()] {
        for h in [&one as &(dyn Fn(Point) -> f64 + Sync), &x, &trig] {
            worst = worst.max(duality_defect(&map, h, m));
        }
    }
    outcome(
        worst <= tol,
        format!("max |int Lh - int h| = {worst:.2e} (tol {tol:.2e})"),
    )
}

fn baker_rate(seed: u64) -> f64 {
    correlation_series(
        &baker_map(),
        &Observable::CoordX,
        &Observable::CoordX,
        20,
        10_000_000,
        1000,
        seed,
    )
    .expect("coord_x is not degenerate")
    .fitted_rate
    .unwrap_or(f64::NAN)
}

fn baker_truth() -> Outcome {
    let baker = baker_map();
    let p32 = ulam_matrix(&baker, 32, 64, SEED).unwrap();
    let l1 = stationary_density(&p32, 1e-13)
        .unwrap()
        .density
        .l1_distance(&GridDensity::uniform(32));
    let second = |m: usize| dense_spectrum(&ulam_matrix(&baker, m, 64, SEED).unwrap()).unwrap()[1];
    let (s16, s17) = (second(16), second(17));
    let rate = baker_rate(SEED);
    let density_ok = l1 <= 1e-6;
    let rate_ok = (rate / LN_2 - 1.0).abs() <= 0.15;
    let gap_literal = (s16 - 0.5).abs() <= 0.05;
    let detail = format!(
        "L1(density, uniform) = {l1:.1e}; rate = {rate:.4} vs ln 2 = {LN_2:.4}; \
         dense second modulus m=16: {s16:.4}, m=17: {s17:.4}"
    );
    if gap_literal {
        return outcome(density_ok && rate_ok, detail);
    }
    // On a dyadic grid the baker Ulam matrix is nilpotent modulo constants.
    // Off the dyadic grid the discretization sees the 1/2 of the continuum.
    let observed_ok = density_ok && rate_ok && s16 < 0.05 && (s17 - 0.5).abs() <= 0.05;
    Outcome {
        verdict: Verdict::Known { observed_ok },
        detail: detail + "; dyadic m = 16 is nilpotent mod constants, 0.5 appears at m = 17",
    }
}

fn three_strip_cloud(seed: u64) -> (f64, f64) {
    let map = three_strip_map();
    let cloud = push_cloud(&map, &CloudOptions::new(1_000_000, 15, seed, 32)).unwrap();
    let ulam = stationary_density(&ulam_matrix(&map, 32, 64, seed).unwrap(), 1e-12).unwrap();
    let cells = attractor_cells(&map, 15, 32).unwrap();
    (
        cloud.histogram.l1_distance(&ulam.density),
        cloud.histogram.mass_outside(cells.mask()),
    )
}

fn reproduction() -> Outcome {
    let (l1, outside) = three_strip_cloud(SEED);
    outcome(
        l1 <= 0.1 && outside <= 0.01,
        format!("L1(cloud, Ulam) = {l1:.4}; mass outside depth-15 cells = {outside:.2e}"),
    )
}

fn virtual_expansion() -> Outcome {
    let id = beta_mu_estimate(&identity_map(), 0.25, 4, 8, 8).unwrap();
    let id_ok = id.beta_sequence.iter().all(|&b| (b - 1.0).abs() < 1e-12);
    let hand = b_mu_at(&diagonal_map(), 0.5, point(0.3, 0.2), point(1.0, 0.0), 1).unwrap();
    let hand_ok = (hand - 0.5).abs() < 1e-12;
    let map = three_strip_map();
    let r = beta_mu_estimate(&map, 0.25, 4, 16, 16).unwrap();
    let s = &r.sup_per_n;
    let submult_ok = s[1] <= s[0] * s[0] + 1e-6;
    let monotone_ok = r.beta_sequence.windows(2).all(|w| w[1] <= w[0] + 1e-6);
    let change = refinement_change(&map, 0.25, 16, 16).unwrap();
    outcome(
        id_ok && hand_ok && submult_ok && monotone_ok && change <= 0.05,
        format!(
            "identity beta = 1: {id_ok}; diag b = {hand}; sup2 {:.4} <= sup1^2 {:.4}; beta = {:?}; grid change {change:.3}",
            s[1],
            s[0] * s[0],
            r.beta_sequence.iter().map(|b| format!("{b:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn thetas(map: &GhmMap, x_res: usize) -> Vec<Vec<usize>> {
    coverage_partition(map, x_res).into_iter().map(|p| p.theta).collect()
}

fn coverage() -> Outcome {
    let baker = thetas(&baker_map(), 32);
    let pair = thetas(&overlap_pair(), 32);
    let map = three_strip_map();
    let (coarse, fine) = (thetas(&map, 64), thetas(&map, 128));
    outcome(
        baker == vec![vec![1], vec![2]] && pair == vec![vec![1], vec![1, 2], vec![2]] && coarse == fine,
        format!(
            "baker {baker:?}; pair {pair:?}; three-strip {} pieces at 64 and {} at 128",
            coarse.len(),
            fine.len()
        ),
    )
}

fn sobolev() -> Outcome {
    let norms = |mu: f64| -> Vec<f64> {
        [32usize, 64, 128]
            .iter()
            .map(|&m| {
                let v: Vec<f64> = (0..m * m).map(|c| if c % m < m / 2 { 1.0 } else { 0.0 }).collect();
                sobolev_seminorm_values(m, &v, mu).unwrap()
            })
            .collect()
    };
    let ratios = |n: Vec<f64>| [n[1] / n[0], n[2] / n[1]];
    let low = ratios(norms(0.25));
    let high = ratios(norms(0.75));
    let low_ok = low[1] < low[0] && low[1] < 1.05;
    let detail = format!(
        "mu=0.25 ratios {:.4}, {:.4}; mu=0.75 ratios {:.4}, {:.4}",
        low[0], low[1], high[0], high[1]
    );
    if high[1] > high[0] {
        return outcome(low_ok, detail);
    }
    // The partial sums grow like m^(2 mu - 1), so the mu = 3/4 ratio settles
    // at sqrt(2) from above: the norm diverges, the ratio does not.
    let sqrt2 = 2f64.sqrt();
    let observed_ok = low_ok && high.iter().all(|r| (r - sqrt2).abs() < 0.04);
    Outcome {
        verdict: Verdict::Known { observed_ok },
        detail: detail + "; mu=0.75 norm grows like sqrt(m), ratio tends to sqrt(2) from above",
    }
}

fn geometry_decay() -> Outcome {
    let map = three_strip_map();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_width: f64 = 0.0;
    for _ in 0..20 {
        let symbols: Vec<usize> = (0..10).map(|_| rng.random_range(1..=3)).collect();
        let widths: Vec<f64> = (1..=10)
            .map(|n| {
                refine_strip(&map, &Word::stable(&symbols[..n]).unwrap())
                    .unwrap()
                    .width()
            })
            .collect();
        for w in widths.windows(2) {
            worst_width = worst_width.max((3.0 * w[1] / w[0] - 1.0).abs());
        }
    }
    // Periodic words; a midline sitting in the center of all its refinements
    // has zero distance, so the symmetric words (2), (1,3), (3,1) are skipped.
    let mut worst_manifold: f64 = 0.0;
    for base in [
        vec![1],
        vec![3],
        vec![1, 2],
        vec![2, 3],
        vec![1, 1, 2],
        vec![3, 2, 1, 1],
    ] {
        let word = Word::stable(&base).unwrap();
        let mid = |n: usize| manifold_approx(&map, &word, n).unwrap().points();
        let d: Vec<f64> = (2..=9).map(|n| hausdorff_distance(&mid(n), &mid(n + 2))).collect();
        let p = base.len();
        for k in 0..d.len() - p {
            let factor = (d[k + p] / d[k]).powf(1.0 / p as f64);
            worst_manifold = worst_manifold.max((3.0 * factor - 1.0).abs());
        }
    }
    outcome(
        worst_width <= 0.05 && worst_manifold <= 0.05,
        format!("worst relative deviation from 1/3: widths {worst_width:.1e}, midline distances {worst_manifold:.1e}"),
    )
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn determinism() -> Outcome {
    let map = three_strip_map();
    let run = || {
        let cloud = push_cloud(&map, &CloudOptions::new(100_000, 15, SEED, 32)).unwrap();
        let ulam = stationary_density(&ulam_matrix(&map, 32, 64, SEED).unwrap(), 1e-12).unwrap();
        let field = beta_mu_estimate(&map, 0.25, 3, 8, 8).unwrap();
        let cells = attractor_cells(&map, 8, 32).unwrap();
        (cloud.histogram, ulam.density, field.field, cells)
    };
    let single = in_pool(1, run);
    let multi = in_pool(4, run);
    let bitwise = single == multi && single == in_pool(1, run);
    let rate_shift = (baker_rate(SEED + 1) - baker_rate(SEED)).abs();
    let (l1_a, out_a) = three_strip_cloud(SEED);
    let (l1_b, out_b) = three_strip_cloud(SEED + 1);
    let rate_ok = rate_shift < 2.0 * 0.15 * LN_2;
    let cloud_ok = (l1_a - l1_b).abs() < 0.2 && (out_a - out_b).abs() < 0.02;
    outcome(
        bitwise && rate_ok && cloud_ok,
        format!(
            "1 vs 4 threads bit-identical: {bitwise}; seed shift moves rate by {rate_shift:.4}, L1 by {:.4}, outside mass by {:.1e}",
            (l1_a - l1_b).abs(),
            (out_a - out_b).abs()
        ),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("axiom suite", Duration::from_secs(5), axioms),
        ("transfer-operator duality", Duration::from_secs(10), duality),
        ("baker ground truth", Duration::from_secs(60), baker_truth),
        ("three-strip reproduction", Duration::from_secs(180), reproduction),
        ("virtual expansion", Duration::from_secs(120), virtual_expansion),
        ("coverage partition", Duration::from_secs(5), coverage),
        ("Sobolev threshold", Duration::from_secs(10), sobolev),
        ("geometry decay", Duration::from_secs(10), geometry_decay),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let (o, elapsed) = timed(limit, run);
        let tag = match o.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Known { observed_ok: true } => "FAIL (known; observed behaviour confirmed)",
            Verdict::Known { observed_ok: false } => "FAIL (known; observed behaviour NOT confirmed)",
        };
        println!(
            "criterion {}: {tag}: {name} [{:.2}s] {}",
            i + 1,
            elapsed.as_secs_f64(),
            o.detail
        );
        if matches!(o.verdict, Verdict::Fail | Verdict::Known { observed_ok: false }) {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("unexpected failures: {failed:?}");
        std::process::exit(1);
    }
}
