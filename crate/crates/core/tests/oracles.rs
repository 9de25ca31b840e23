//! Frozen reference values. A change here means the numerics moved.

use ghm::expansion::{beta_mu_estimate, coverage_partition};
use ghm::map::{baker_map, three_strip_map, three_strip_params};
use ghm::symbolic::attractor_cells;
use ghm::transfer::{dense_spectrum, sobolev_seminorm, spectral_gap, stationary_density, ulam_matrix};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * b.abs().max(1.0)
}

#[test]
fn three_strip_parameters() {
    let p = three_strip_params().resolved().unwrap();
    let map = three_strip_map();
    assert!(close(p.angle_scale.unwrap(), 0.8145674080376928));
    assert!(close(p.k.unwrap(), 0.7505660377358492));
    assert!(close(map.lambda(), 1.4632345013477088));
    assert!(map.is_overlapping());
}

#[test]
fn three_strip_second_modulus() {
    let map = three_strip_map();
    for (m, expected) in [(64, 0.44494845660872706), (128, 0.49220395955855745)] {
        let r = spectral_gap(&ulam_matrix(&map, m, 64, 0).unwrap(), 6).unwrap();
        assert!(
            (r.second_modulus - expected).abs() < 1e-8,
            "m = {m}: {}",
            r.second_modulus
        );
    }
}

#[test]
fn baker_odd_grid_second_modulus() {
    let moduli = dense_spectrum(&ulam_matrix(&baker_map(), 17, 64, 0).unwrap()).unwrap();
    assert!((moduli[0] - 1.0).abs() < 1e-12);
    assert!((moduli[1] - 0.5000000262127672).abs() < 1e-8);
}

#[test]
fn three_strip_attractor_and_density() {
    let map = three_strip_map();
    assert_eq!(attractor_cells(&map, 15, 32).unwrap().area_fraction(), 0.5244140625);
    let s = stationary_density(&ulam_matrix(&map, 32, 64, 0).unwrap(), 1e-12).unwrap();
    assert!((sobolev_seminorm(&s.density, 0.25).unwrap() - 9.841647898885526).abs() < 1e-8);
}

#[test]
fn three_strip_coverage_pieces() {
    let thetas: Vec<Vec<usize>> = coverage_partition(&three_strip_map(), 64)
        .into_iter()
        .map(|p| p.theta)
        .collect();
    assert_eq!(
        thetas,
        [
            vec![1],
            vec![1, 3],
            vec![1, 2, 3],
            vec![2, 3],
            vec![2],
            vec![1, 2],
            vec![3],
            vec![2]
        ]
    );
}

#[test]
fn beta_sequences() {
    let three_strip = beta_mu_estimate(&three_strip_map(), 0.25, 4, 16, 16).unwrap();
    let expected = [
        3.9341829723394097,
        2.6022092758500293,
        1.9241993495696013,
        1.4393434514620458,
    ];
    for (b, e) in three_strip.beta_sequence.iter().zip(expected) {
        assert!(close(*b, e), "{:?}", three_strip.beta_sequence);
    }
    let baker = beta_mu_estimate(&baker_map(), 0.45, 4, 8, 8).unwrap();
    for b in baker.beta_sequence {
        assert!(close(b, 2f64.powf(0.9)), "{b}");
    }
}
