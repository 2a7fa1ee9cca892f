mod common;

use std::collections::BTreeSet;

use conceptgauge::context::{
    generate_random_context, read_context, write_context, ContextFormat, RandomContextSpec,
};
use conceptgauge::experiments::{auc, correlation_indices, kendall_tau_b, meta_indices};
use conceptgauge::indices::{
    lstab_and_bounds_all, robustness_all, stability_via_mobius, IndexSpec, StabilityCounts,
};
use conceptgauge::measures::{contingency_from_sets, ContingencyTable};
use conceptgauge::{enumerate_concepts, FormalContext};
use proptest::prelude::*;

fn context(max_objects: usize, max_attributes: usize) -> impl Strategy<Value = FormalContext> {
    (1..=max_objects, 1..=max_attributes)
        .prop_flat_map(|(g, m)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), g)
        })
        .prop_map(|rows| FormalContext::from_matrix(&rows).unwrap())
}

fn key(ctx: &FormalContext) -> Vec<Vec<bool>> {
    (0..ctx.n_objects())
        .map(|g| {
            (0..ctx.n_attributes())
                .map(|m| ctx.incident(g, m))
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lattice_holds_exactly_the_closed_pairs(ctx in context(9, 7)) {
        let lat = enumerate_concepts(&ctx, 0).unwrap();
        let got: BTreeSet<Vec<usize>> = lat.concepts().iter().map(|c| c.intent.to_vec()).collect();
        let want: BTreeSet<Vec<usize>> =
            common::brute_concepts(&ctx).iter().map(|(_, b)| b.to_vec()).collect();
        prop_assert_eq!(got.len(), lat.len());
        prop_assert_eq!(got, want);
        for c in lat.concepts() {
            prop_assert_eq!(&ctx.common_attributes(&c.extent), &c.intent);
            prop_assert_eq!(&ctx.common_objects(&c.intent), &c.extent);
        }
        prop_assert!(lat.concept(lat.top()).extent.is_full());
    }

    #[test]
    fn covers_are_symmetric_and_strict(ctx in context(8, 6)) {
        let lat = enumerate_concepts(&ctx, 0).unwrap();
        for c in 0..lat.len() {
            for &d in lat.lower_neighbors(c) {
                prop_assert!(lat.upper_neighbors(d).contains(&c));
                let (big, small) = (&lat.concept(c).extent, &lat.concept(d).extent);
                prop_assert!(small.is_subset(big) && small != big);
            }
        }
    }

    #[test]
    fn stability_agrees_with_enumeration(ctx in context(10, 6)) {
        let lat = enumerate_concepts(&ctx, 0).unwrap();
        let counts = StabilityCounts::compute(&lat).unwrap();
        let rob = robustness_all(&lat, 0.5).unwrap();
        for (c, concept) in lat.concepts().iter().enumerate() {
            let brute = common::brute_stability(&ctx, &concept.extent, &concept.intent);
            prop_assert_eq!(counts.stability(c), brute);
            prop_assert!((stability_via_mobius(&lat, c).unwrap() - brute).abs() < 1e-12);
            prop_assert!((rob[c] - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_chain(ctx in context(12, 8)) {
        let lat = enumerate_concepts(&ctx, 0).unwrap();
        let log_m = (ctx.n_attributes() as f64).log2();
        for (c, b) in lstab_and_bounds_all(&lat).unwrap().iter().enumerate() {
            prop_assert_eq!(b.delta_h, b.delta_l);
            if lat.lower_neighbors(c).is_empty() {
                continue;
            }
            prop_assert!(b.delta_l - log_m <= b.lstab_lower + 1e-9);
            prop_assert!(b.lstab_lower <= b.lstab + 1e-9);
            prop_assert!(b.lstab <= b.delta_l + 1e-9);
            prop_assert!(b.lstab <= b.stab2noe.min(b.stab2oe).min(b.stab2oie) + 1e-9);
        }
    }

    #[test]
    fn formats_round_trip(ctx in context(8, 8)) {
        for f in [ContextFormat::Cxt, ContextFormat::Csv] {
            let text = String::from_utf8(write_context(&ctx, f)).unwrap();
            let back = read_context(&text, f).unwrap();
            prop_assert_eq!(key(&back), key(&ctx));
            prop_assert_eq!(back.object_names(), ctx.object_names());
            prop_assert_eq!(back.attribute_names(), ctx.attribute_names());
        }
    }

    #[test]
    fn contingency_cells_partition_objects(ctx in context(10, 5), a in 0usize..5, b in 0usize..5) {
        let m = ctx.n_attributes();
        let x = ctx.attribute_set([a % m]).unwrap();
        let y = ctx.attribute_set([b % m]).unwrap();
        let t = contingency_from_sets(&ctx, &x, &y).unwrap();
        prop_assert_eq!(t, ContingencyTable::new(t.n_ab, t.n_a_not_b, t.n_not_a_b, t.n_not_a_not_b));
        prop_assert_eq!(t.n as usize, ctx.n_objects());
    }

    #[test]
    fn tau_symmetry_and_sign(
        pairs in proptest::collection::vec((0i32..6, 0i32..6), 2..60)
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        let t = kendall_tau_b(&x, &y).unwrap();
        prop_assert_eq!(t, kendall_tau_b(&y, &x).unwrap());
        let n = kendall_tau_b(&x, &neg).unwrap();
        prop_assert_eq!(n.degenerate, t.degenerate);
        prop_assert!((n.tau + t.tau).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&t.tau));
        match common::tau_oracle(&x, &y) {
            Some(o) => prop_assert_eq!(t.tau, o),
            None => prop_assert!(t.degenerate),
        }
    }

    #[test]
    fn auc_complements_and_ignores_monotone_maps(
        items in proptest::collection::vec((0i32..8, any::<bool>()), 2..80)
    ) {
        let labels: Vec<bool> = items.iter().map(|p| p.1).collect();
        prop_assume!(labels.iter().any(|&l| l) && labels.iter().any(|&l| !l));
        let s: Vec<f64> = items.iter().map(|p| p.0 as f64).collect();
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        let cubed: Vec<f64> = s.iter().map(|v| v * v * v + 3.0).collect();
        let a = auc(&s, &labels).unwrap();
        prop_assert_eq!(a, common::auc_oracle(&s, &labels));
        prop_assert!((a + auc(&neg, &labels).unwrap() - 1.0).abs() < 1e-12);
        prop_assert_eq!(a, auc(&cubed, &labels).unwrap());
    }
}

#[test]
fn study_index_specs_round_trip() {
    for spec in correlation_indices().into_iter().chain(meta_indices()) {
        let text = spec.to_string();
        let back: IndexSpec = text.parse().unwrap();
        assert_eq!(back.to_string(), text);
    }
}

#[test]
fn fimi_keeps_incidence() {
    let ctx = &generate_random_context(&RandomContextSpec {
        n_objects: 12,
        n_attributes: 6,
        density: 0.5,
        seed: 7,
    })
    .unwrap();
    let text = String::from_utf8(write_context(ctx, ContextFormat::Fimi)).unwrap();
    let back = read_context(&text, ContextFormat::Fimi).unwrap();
    for g in 0..ctx.n_objects() {
        assert_eq!(back.row(g).to_vec(), ctx.row(g).to_vec());
    }
}
