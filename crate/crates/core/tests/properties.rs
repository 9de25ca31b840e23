use ghm::expansion::{b_mu_at, coverage_partition, eta};
use ghm::map::fixtures::{identity_map, perturbed_map};
use ghm::map::{
    build_affine_family, estimate_distortion, max_feasible_angle_scale, min_cone_aperture, three_strip_map,
    validate_hyperbolicity, GhmMap, Layout, MapSpec,
};
use ghm::stats::Observable;
use ghm::symbolic::{attractor_cells, itinerary, manifold_approx, refine_strip, Orientation, Word};
use ghm::transfer::{apply_transfer, stationary_density, ulam_matrix, GridDensity};
use ghm::{point, Point};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = (usize, f64, f64, Layout)> {
    (
        2usize..=4,
        0.1f64..0.6,
        0.0f64..=1.0,
        prop_oneof![Just(Layout::Stack), Just(Layout::Spread)],
    )
}

fn build((n, lambda_c, frac, layout): (usize, f64, f64, Layout)) -> Option<GhmMap> {
    let scale = frac * max_feasible_angle_scale(n, lambda_c, layout).ok()?;
    let k = (1.02 * min_cone_aperture(n, lambda_c, scale)).max(0.5);
    if k >= 1.0 {
        return None;
    }
    build_affine_family(n, lambda_c, scale, layout, k).ok()
}

fn interior() -> impl Strategy<Value = Point> {
    (0.001f64..0.999, 0.001f64..0.999).prop_map(|(x, y)| point(x, y))
}

fn word(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, len)
}

fn smooth_and_affine() -> impl Strategy<Value = GhmMap> {
    prop_oneof![Just(three_strip_map()), (0.0f64..0.1).prop_map(perturbed_map)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn feasible_family_members_are_hyperbolic(params in family(), seed in 0u64..1000) {
        if let Some(map) = build(params) {
            let r = validate_hyperbolicity(&map, 200, seed);
            prop_assert!(r.is_valid(), "{r:?}");
        }
    }

    #[test]
    fn family_determinant_is_constant(params in family(), z in interior()) {
        if let Some(map) = build(params) {
            if let Ok(d) = map.differential(z) {
                let expected = params.0 as f64 * params.1;
                prop_assert!((d.det - expected).abs() < 1e-12 * expected.max(1.0));
            }
        }
    }

    #[test]
    fn unstable_cone_edges_expand_by_lambda(params in family(), z in interior(), sign in prop_oneof![Just(-1.0), Just(1.0)]) {
        if let Some(map) = build(params) {
            if let Ok(d) = map.differential(z) {
                let v = point(1.0, sign * map.k());
                let w = d.matrix * v;
                let ratio = w.x.abs().max(w.y.abs()) / v.x.abs().max(v.y.abs());
                prop_assert!(ratio >= map.lambda() * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn preimages_invert_the_map(map in smooth_and_affine(), z in interior()) {
        for pre in map.preimages(z) {
            prop_assert!((map.apply(pre.point).unwrap() - z).norm() < 1e-12);
        }
        if let Ok(i) = map.locate_interior(z) {
            let w = map.branches()[i].forward(z);
            prop_assert!(map.preimages(w).iter().any(|p| (p.point - z).norm() < 1e-12));
        }
    }

    #[test]
    fn affine_maps_have_no_distortion(symbols in word(1..5), seed in 0u64..100) {
        let r = estimate_distortion(&three_strip_map(), &Word::stable(&symbols).unwrap(), 50, seed).unwrap();
        prop_assert_eq!(r.stable_dir_ratio_sup, 0.0);
        prop_assert_eq!(r.jac_ratio_sup, 0.0);
    }

    #[test]
    fn refined_strips_nest(map in smooth_and_affine(), symbols in word(2..7), stable in any::<bool>()) {
        let symbols: Vec<usize> = symbols.into_iter().map(|s| s.min(map.len())).collect();
        let orientation = if stable { Orientation::Stable } else { Orientation::Unstable };
        let w = Word::new(symbols, orientation).unwrap();
        let outer = refine_strip(&map, &w.prefix(w.len() - 1).unwrap()).unwrap();
        let inner = refine_strip(&map, &w).unwrap();
        prop_assert!(outer.contains_region(&inner, 1e-9));
        prop_assert!(inner.width() <= outer.width());
    }

    #[test]
    fn manifold_slopes_respect_the_cone(map in smooth_and_affine(), symbols in word(1..4), stable in any::<bool>(), depth in 2usize..8) {
        let symbols: Vec<usize> = symbols.into_iter().map(|s| s.min(map.len())).collect();
        let orientation = if stable { Orientation::Stable } else { Orientation::Unstable };
        let m = manifold_approx(&map, &Word::new(symbols, orientation).unwrap(), depth).unwrap();
        prop_assert!(m.polyline.max_abs_slope() <= map.k());
    }

    #[test]
    fn points_lie_in_their_refined_strip(map in smooth_and_affine(), z in interior(), n in 1usize..7) {
        if let Ok(w) = itinerary(&map, z, n) {
            prop_assert!(refine_strip(&map, &w).unwrap().contains(z, 1e-9));
        }
    }

    #[test]
    fn transfer_is_linear(z in interior(), a in -2.0f64..2.0, b in -2.0f64..2.0, power in 1usize..3) {
        let map = three_strip_map();
        let h1 = |p: Point| p.x * p.x + 0.3;
        let h2 = |p: Point| (3.0 * p.y).sin();
        let mix = |p: Point| a * h1(p) + b * h2(p);
        if let (Ok(l1), Ok(l2), Ok(lm)) = (
            apply_transfer(&map, &h1, z, power),
            apply_transfer(&map, &h2, z, power),
            apply_transfer(&map, &mix, z, power),
        ) {
            prop_assert!((lm - (a * l1 + b * l2)).abs() < 1e-12 * (1.0 + lm.abs()));
        }
    }

    #[test]
    fn eta_formula_matches_brute_force(y in interior(), angle in 0.0f64..std::f64::consts::PI) {
        let map = perturbed_map(0.05);
        let v = point(angle.cos(), angle.sin());
        if let Ok(d) = map.differential(y) {
            let brute = (0..1000)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / 1000.0;
                    v.dot(&(d.matrix * point(t.cos(), t.sin())))
                })
                .fold(f64::NEG_INFINITY, f64::max);
            let e = eta(&map, y, v).unwrap();
            prop_assert!((e - brute).abs() < 1e-3 * e.max(1.0));
        }
    }

    #[test]
    fn single_area_preserving_branch_ignores_the_base_point(a in interior(), b in interior(), angle in 0.0f64..std::f64::consts::PI, mu in 0.05f64..0.5) {
        let map = identity_map();
        let v = point(angle.cos(), angle.sin());
        let ba = b_mu_at(&map, mu, a, v, 2).unwrap();
        let bb = b_mu_at(&map, mu, b, v, 2).unwrap();
        prop_assert_eq!(ba, bb);
    }

    #[test]
    fn words_and_observables_round_trip(symbols in word(1..9), c in -5.0f64..5.0) {
        let w = Word::stable(&symbols).unwrap();
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        let o = Observable::Constant(c);
        prop_assert_eq!(o.name().parse::<Observable>().unwrap(), o);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn attractor_cells_shrink_with_depth(depth in 1usize..6) {
        let map = three_strip_map();
        let shallow = attractor_cells(&map, depth, 32).unwrap();
        let deep = attractor_cells(&map, depth + 1, 32).unwrap();
        prop_assert!(deep.is_subset_of(&shallow));
        let fine = attractor_cells(&map, depth, 64).unwrap();
        prop_assert!(fine.coarsen(2).is_subset_of(&shallow));
    }

    #[test]
    fn coverage_columns_tile_the_image_union(x_res in 4usize..64) {
        let map = three_strip_map();
        let pieces = coverage_partition(&map, x_res);
        for c in 0..x_res {
            let x = (c as f64 + 0.5) / x_res as f64;
            let mut spans: Vec<(f64, f64)> = pieces
                .iter()
                .flat_map(|p| p.spans.iter().filter(|s| s.column == c).map(|s| (s.y0, s.y1)))
                .collect();
            spans.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in spans.windows(2) {
                prop_assert!(w[1].0 >= w[0].1 - 1e-12);
            }
            let covered: f64 = spans.iter().map(|s| s.1 - s.0).sum();
            let mut cuts: Vec<(f64, f64)> = map
                .branches()
                .iter()
                .map(|b| (b.image().lower().eval(x), b.image().upper().eval(x)))
                .collect();
            cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut union = 0.0;
            let mut reach = f64::NEG_INFINITY;
            for (lo, hi) in cuts {
                let start = lo.max(reach);
                if hi > start {
                    union += hi - start;
                }
                reach = reach.max(hi);
            }
            prop_assert!((covered - union).abs() < 1e-9, "column {c}: {covered} vs {union}");
        }
    }

    #[test]
    fn ulam_rows_are_stochastic_and_densities_fixed(m in 4usize..20, seed in 0u64..1000) {
        let map = three_strip_map();
        let p = ulam_matrix(&map, m, 16, seed).unwrap();
        prop_assert!(p.row_sums().iter().all(|s| (s - 1.0).abs() < 1e-12));
        let s = stationary_density(&p, 1e-12).unwrap();
        let image = p.left_mul(&s.density.probabilities());
        let moved: f64 = image.iter().zip(s.density.probabilities()).map(|(a, b)| (a - b).abs()).sum();
        prop_assert!(moved <= 1e-11);
    }

    #[test]
    fn baker_density_does_not_depend_on_the_seed(a in 0u64..1000, b in 0u64..1000) {
        let map = ghm::map::baker_map();
        let tol = 1e-12;
        let da = stationary_density(&ulam_matrix(&map, 16, 256, a).unwrap(), tol).unwrap();
        let db = stationary_density(&ulam_matrix(&map, 16, 256, b).unwrap(), tol).unwrap();
        prop_assert!(da.density.l1_distance(&db.density) <= 5.0 * tol);
    }

    #[test]
    fn map_specs_round_trip(params in family()) {
        if let Some(map) = build(params) {
            let spec = MapSpec::from_map(&map).unwrap();
            let again = ghm::map::load_map_spec(&spec.to_json().unwrap()).unwrap();
            for i in 0..10 {
                let z = point((i as f64 + 0.37) / 10.0, 0.61);
                prop_assert_eq!(again.apply(z), map.apply(z));
            }
        }
    }

    #[test]
    fn coarsening_keeps_mass(m in 1usize..8, weights in prop::collection::vec(0.01f64..1.0, 256)) {
        let m = m * 2;
        let h = GridDensity::from_weights(m, weights[..m * m].to_vec()).unwrap();
        prop_assert!((h.coarsen(2).unwrap().total_mass() - 1.0).abs() < 1e-12);
    }
}
