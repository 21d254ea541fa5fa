//! Invariants checked across modules on random inputs.

use extremal_copula::acceptance::random_table_pair;
use extremal_copula::copulas::{check_axioms, piecewise_copula, Copula, DoublyStochasticGrid, HPair};
use extremal_copula::costs::{CostField, PhiProfile};
use extremal_copula::coupling::{solve_beta, BetaSolution};
use extremal_copula::discrete_ot::{
    build_cost_matrix, empirical_map, solve_max_assignment, transposition_distance, Assignment,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table_pair(seed: u64) -> HPair {
    random_table_pair(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_pairs_give_copulas(seed in any::<u64>()) {
        let h = table_pair(seed);
        prop_assert!(h.validate().is_valid());
        let c = piecewise_copula(&h).unwrap();
        let report = check_axioms(&c, 200, seed);
        prop_assert!(report.passes(), "{report:?}");
    }

    #[test]
    fn hpair_csv_round_trip(seed in any::<u64>()) {
        let h = table_pair(seed);
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        let back = HPair::read_csv(buf.as_slice()).unwrap();
        prop_assert!((back.x1 - h.x1).abs() <= 1e-12 && (back.x2 - h.x2).abs() <= 1e-12);
        for y in h.check_grid() {
            prop_assert!((back.h1.eval(y) - h.h1.eval(y)).abs() <= 1e-12);
            prop_assert!((back.h2.eval(y) - h.h2.eval(y)).abs() <= 1e-12);
        }
    }

    #[test]
    fn grid_csv_round_trip(perm in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle()) {
        let g = DoublyStochasticGrid::from_permutation(&perm).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let back = DoublyStochasticGrid::read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.n(), 12);
        for i in 0..12 {
            for j in 0..12 {
                prop_assert!((back.mass(i, j) - g.mass(i, j)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn empirical_maps_preserve_measure(perm in Just((0..40usize).collect::<Vec<_>>()).prop_shuffle()) {
        let a = Assignment { n: perm.len(), perm, sum: 0.0, value: 0.0 };
        let emp = empirical_map(&a).unwrap();
        prop_assert!(emp.map.check_measure_preserving().is_ok());
        let covered: usize = emp.segments.iter().map(|s| s.end - s.start).sum();
        prop_assert_eq!(covered, 40);
        let c = Copula::MapInduced(emp.map);
        prop_assert!(check_axioms(&c, 100, 7).passes());
    }

    #[test]
    fn copula_record_round_trip(seed in any::<u64>()) {
        let c = piecewise_copula(&table_pair(seed)).unwrap();
        let json = serde_json::to_string(&c.to_record().unwrap()).unwrap();
        let back = Copula::from_record(&serde_json::from_str(&json).unwrap()).unwrap();
        for i in 0..=10 {
            for j in 0..=10 {
                let (x, y) = (i as f64 / 10.0, j as f64 / 10.0);
                prop_assert!((back.eval(x, y).unwrap() - c.eval(x, y).unwrap()).abs() <= 1e-12);
            }
        }
    }
}

/// `φ(z) = sin(πz/1.9)` tabulated on `[0, 2]`: concave almost everywhere,
/// so no breakpoint exists and the antitone coupling should win.
#[test]
fn concave_dominated_table_falls_back_to_antitone() {
    let samples: Vec<(f64, f64)> = (0..=100)
        .map(|i| {
            let z = i as f64 * 0.02;
            (z, (std::f64::consts::PI * z / 1.9).sin())
        })
        .collect();
    let p = PhiProfile::from_table(&samples, None).unwrap();
    assert_eq!(solve_beta(&p).unwrap(), BetaSolution::NoneInUnitInterval);

    let cost = CostField::separable(p);
    let a = solve_max_assignment(&build_cost_matrix(&cost, 100).unwrap()).unwrap();
    let reversal: Vec<usize> = (0..100).rev().collect();
    let d = transposition_distance(&a.perm, &reversal).unwrap();
    assert!(d <= 2, "assignment is {d} transpositions from the reversal");
}
