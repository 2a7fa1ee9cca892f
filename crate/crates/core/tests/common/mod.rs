//! Brute-force oracles shared by the integration tests. Nothing here uses
//! the lattice machinery; everything is direct enumeration.

#![allow(dead_code)]

use conceptgauge::context::{generate_random_context, RandomContextSpec};
use conceptgauge::{AttributeSet, FormalContext, ObjectSet};

/// Random contexts with the given bounds, density cycling through 0.1..0.4.
pub fn corpus(
    n: usize,
    max_objects: usize,
    max_attributes: usize,
    seed: u64,
) -> Vec<FormalContext> {
    (0..n)
        .map(|i| {
            let i64 = i as u64;
            generate_random_context(&RandomContextSpec {
                n_objects: 4 + (i * 7) % (max_objects - 3),
                n_attributes: 3 + (i * 5) % (max_attributes - 2),
                density: [0.1, 0.2, 0.3, 0.4][i % 4],
                seed: seed.wrapping_mul(1_000_003).wrapping_add(i64),
            })
            .unwrap()
        })
        .collect()
}

fn objects_of(ctx: &FormalContext, mask: u64, among: &[usize]) -> ObjectSet {
    let mut s = ctx.empty_objects();
    for (k, &g) in among.iter().enumerate() {
        if mask >> k & 1 == 1 {
            s.insert(g);
        }
    }
    s
}

/// Every closed pair, found by closing each attribute subset. Only for
/// contexts with at most 16 attributes.
pub fn brute_concepts(ctx: &FormalContext) -> Vec<(ObjectSet, AttributeSet)> {
    let m = ctx.n_attributes();
    assert!(m <= 16);
    let mut out: Vec<(ObjectSet, AttributeSet)> = Vec::new();
    for mask in 0u32..(1 << m) {
        let b = AttributeSet::from_indices(m, (0..m).filter(|i| mask >> i & 1 == 1));
        let a = ctx.common_objects(&b);
        let bb = ctx.common_attributes(&a);
        if bb == b {
            out.push((a, b));
        }
    }
    out
}

/// Number of subsets `Y ⊆ extent` with `Y′ = intent`, by size.
pub fn brute_gamma(ctx: &FormalContext, extent: &ObjectSet, intent: &AttributeSet) -> Vec<u64> {
    let members: Vec<usize> = extent.iter().collect();
    let n = members.len();
    assert!(n <= 20);
    let mut by_size = vec![0u64; n + 1];
    for mask in 0u64..(1 << n) {
        let y = objects_of(ctx, mask, &members);
        if &ctx.common_attributes(&y) == intent {
            by_size[mask.count_ones() as usize] += 1;
        }
    }
    by_size
}

/// Fraction of subsets of the extent whose derivation is the intent.
pub fn brute_stability(ctx: &FormalContext, extent: &ObjectSet, intent: &AttributeSet) -> f64 {
    let g = brute_gamma(ctx, extent, intent);
    g.iter().sum::<u64>() as f64 / (1u64 << extent.count()) as f64
}

/// Tau-b by direct pair counting.
pub fn tau_oracle(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    let (mut s, mut n1, mut n2) = (0i64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = (x[i] - x[j]).partial_cmp(&0.0).unwrap() as i64;
            let dy = (y[i] - y[j]).partial_cmp(&0.0).unwrap() as i64;
            s += dx * dy;
            n1 += (dx == 0) as u64;
            n2 += (dy == 0) as u64;
        }
    }
    let n0 = (n * (n - 1) / 2) as u64;
    if n0 == n1 || n0 == n2 {
        return None;
    }
    Some(s as f64 / (((n0 - n1) as f64) * ((n0 - n2) as f64)).sqrt())
}

/// AUC by comparing every positive with every negative.
pub fn auc_oracle(scores: &[f64], labels: &[bool]) -> f64 {
    let (mut twice, mut pairs) = (0u64, 0u64);
    for (i, &li) in labels.iter().enumerate() {
        if !li {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj {
                continue;
            }
            pairs += 1;
            twice += if scores[i] > scores[j] {
                2
            } else if scores[i] == scores[j] {
                1
            } else {
                0
            };
        }
    }
    twice as f64 / (2 * pairs) as f64
}
