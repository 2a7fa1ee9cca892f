mod common;

use conceptgauge::enumerate_concepts;
use conceptgauge::experiments::{auc, kendall_tau_b, ols_fit};
use conceptgauge::fixtures;
use conceptgauge::indices::{gamma_via_mobius, LevelCounts, StabilityCounts};
use conceptgauge::measures::{norm2, rule_measure, AggregatorKind, ContingencyTable, MeasureKind};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn fixture_counts() {
    assert_eq!(enumerate_concepts(&fixtures::fig2(), 0).unwrap().len(), 8);
    assert_eq!(
        enumerate_concepts(&fixtures::table1(), 0).unwrap().len(),
        73
    );
}

#[test]
fn level_counts_match_subset_enumeration() {
    for ctx in common::corpus(12, 24, 10, 5) {
        let lat = enumerate_concepts(&ctx, 0).unwrap();
        let counts = StabilityCounts::compute(&lat).unwrap();
        let levels = LevelCounts::compute(&lat).unwrap();
        for (c, concept) in lat.concepts().iter().enumerate() {
            if concept.extent.count() > 12 {
                continue;
            }
            let gamma = common::brute_gamma(&ctx, &concept.extent, &concept.intent);
            assert_eq!(*counts.sigma(c), BigUint::from(gamma.iter().sum::<u64>()));
            for (j, &g) in gamma.iter().enumerate() {
                assert_eq!(
                    gamma_via_mobius(&lat, c, j).unwrap(),
                    g as i128,
                    "γ_{j} of {c}"
                );
                assert_eq!(levels.gamma(c, j), BigUint::from(g));
            }
        }
    }
}

#[test]
fn tau_and_auc_match_pairwise_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let n = rng.gen_range(2..=120);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0..7) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen::<f64>().round()).collect();
        let t = kendall_tau_b(&x, &y).unwrap();
        match common::tau_oracle(&x, &y) {
            Some(o) => assert_eq!(t.tau, o),
            None => assert!(t.degenerate && t.tau == 0.0),
        }
        let labels: Vec<bool> = y.iter().map(|&v| v > 0.5).collect();
        if labels.iter().any(|&l| l) && labels.iter().any(|&l| !l) {
            assert_eq!(auc(&x, &labels).unwrap(), common::auc_oracle(&x, &labels));
        } else {
            assert!(auc(&x, &labels).is_err());
        }
    }
}

#[test]
fn ols_by_hand() {
    // mean x 3, mean y 4, Sxx 10, Sxy 6, SSE 2.4, SST 6
    let f = ols_fit(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 4.0, 5.0, 4.0, 5.0]).unwrap();
    assert!((f.slope - 0.6).abs() < 1e-12);
    assert!((f.intercept - 2.2).abs() < 1e-12);
    assert!((f.r_squared - 0.6).abs() < 1e-12);
    let flat = ols_fit(&[-2.0, -1.0, 0.0, 1.0, 2.0], &[4.0, 1.0, 0.0, 1.0, 4.0]).unwrap();
    assert!(flat.slope.abs() < 1e-12 && (flat.intercept - 2.0).abs() < 1e-12);
    assert!(flat.r_squared.abs() < 1e-12);
    assert!(ols_fit(&[1.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]).is_err());
}

#[test]
fn norm_laws_on_grid() {
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    for kind in AggregatorKind::TNORMS
        .into_iter()
        .chain(AggregatorKind::SNORMS)
    {
        let f = |a: f64, b: f64| norm2(kind, a, b).unwrap();
        let unit = if kind.is_tnorm() { 1.0 } else { 0.0 };
        let dual = kind.dual().unwrap();
        assert_eq!(dual.dual(), Some(kind));
        for &a in &grid {
            assert!((f(a, unit) - a).abs() < 1e-12, "{kind} identity at {a}");
            assert!(
                (f(a, 1.0 - unit) - (1.0 - unit)).abs() < 1e-12,
                "{kind} absorbing at {a}"
            );
            for &b in &grid {
                assert!((f(a, b) - f(b, a)).abs() < 1e-12);
                let d = 1.0 - norm2(dual, 1.0 - a, 1.0 - b).unwrap();
                assert!((f(a, b) - d).abs() < 1e-12, "{kind} dual at ({a}, {b})");
                for &c in &grid {
                    assert!(
                        (f(f(a, b), c) - f(a, f(b, c))).abs() < 1e-12,
                        "{kind} associativity at ({a}, {b}, {c})"
                    );
                    if b <= c {
                        assert!(f(a, b) <= f(a, c) + 1e-12, "{kind} monotone");
                    }
                }
            }
        }
    }
}

#[test]
fn independence_identities_are_exact() {
    // marginals are dyadic, so every product below is exact
    for (pa, pb, n) in [(1u64, 1, 2u64), (1, 3, 4), (3, 1, 8), (5, 11, 16)] {
        let t = ContingencyTable::new(pa * pb, pa * (n - pb), (n - pa) * pb, (n - pa) * (n - pb));
        assert_eq!(rule_measure(MeasureKind::Lift, &t), 1.0);
        assert_eq!(rule_measure(MeasureKind::PiatetskyShapiro, &t), 0.0);
        assert_eq!(rule_measure(MeasureKind::Leverage, &t), 0.0);
        assert_eq!(rule_measure(MeasureKind::InformationGain, &t), 0.0);
    }
}
