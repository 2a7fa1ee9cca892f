//! Logarithmic stability and its cheap estimates.
//!
//! With `Δ(c, d) = |A_c \ A_d|` over the lower neighbors `d` of `c`, a
//! subset of `A_c` fails to generate `B_c` exactly when it sits inside some
//! lower neighbor's extent. The union bound and the single largest term give
//!
//! ```text
//! lstab_lower ≤ lstab ≤ delta_l ≤ {stab2noe, stab2oe, stab2oie}
//! ```
//!
//! and `delta_h` equals `delta_l`: the largest sets `A ∩ m′` with `m ∉ B`
//! are exactly the lower neighbors' extents.

use super::stability::StabilityCounts;
use crate::error::Result;
use crate::lattice::ConceptLattice;

/// `LStab` together with its bounds. Every field is `+∞` for the bottom
/// concept (no lower neighbors, stability 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LStabBounds {
    pub lstab: f64,
    /// `−log2 Σ_d 2^{−Δ(c, d)}`
    pub lstab_lower: f64,
    /// `min_d Δ(c, d)`
    pub delta_l: f64,
    /// `|A| − max_{m ∉ B} |A ∩ m′|`, computed from the data alone.
    pub delta_h: f64,
    pub stab2noe: f64,
    pub stab2oe: f64,
    pub stab2oie: f64,
}

/// Bounds for every concept.
pub fn lstab_and_bounds_all(lat: &ConceptLattice) -> Result<Vec<LStabBounds>> {
    let counts = StabilityCounts::compute(lat)?;
    Ok((0..lat.len())
        .map(|c| bounds_with(lat, &counts, c))
        .collect())
}

/// Bounds for one concept.
pub fn lstab_and_bounds(lat: &ConceptLattice, c: usize) -> Result<LStabBounds> {
    lat.get(c)?;
    let counts = StabilityCounts::compute(lat)?;
    Ok(bounds_with(lat, &counts, c))
}

pub(crate) fn bounds_with(lat: &ConceptLattice, counts: &StabilityCounts, c: usize) -> LStabBounds {
    let concept = lat.concept(c);
    let delta_h = delta_h(lat, c);
    let lstab = counts.lstab(c);
    let mut nb: Vec<(usize, usize)> = lat
        .lower_neighbors(c)
        .iter()
        .map(|&d| (concept.extent.count() - lat.concept(d).extent.count(), d))
        .collect();
    if nb.is_empty() {
        return LStabBounds {
            lstab,
            lstab_lower: f64::INFINITY,
            delta_l: f64::INFINITY,
            delta_h,
            stab2noe: f64::INFINITY,
            stab2oe: f64::INFINITY,
            stab2oie: f64::INFINITY,
        };
    }
    // (Δ, id) ascending: the first entry is the minimizer with smallest id.
    nb.sort_unstable();
    let (d1_delta, d1) = nb[0];
    let delta_l = d1_delta as f64;

    let lstab_lower = {
        let s: f64 = nb
            .iter()
            .map(|&(k, _)| 2f64.powi(-((k - d1_delta) as i32)))
            .sum();
        delta_l - s.log2()
    };

    let a1 = &lat.concept(d1).extent;
    // D_d = A_c \ A_d; disjointness of D_d1 and D_d2 inside A_c means
    // A_d1 ∪ A_d2 = A_c.
    let union_size =
        |d2: usize| concept.extent.count() - a1.intersection_count(&lat.concept(d2).extent);

    let stab2noe = nb[1..]
        .iter()
        .find(|&&(_, d2)| {
            union_size(d2) == d1_delta + (concept.extent.count() - lat.concept(d2).extent.count())
        })
        .map(|&(k2, _)| (d1_delta + k2) as f64)
        .unwrap_or(delta_l);

    let stab2oe = nb[1..]
        .iter()
        .map(|&(k2, d2)| (lat.concept(d2).extent.difference_count(a1), k2, d2))
        .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)).then(y.2.cmp(&x.2)))
        .map(|(_, _, d2)| union_size(d2) as f64)
        .unwrap_or(delta_l);

    let stab2oie = nb
        .get(1)
        .map(|&(_, d2)| union_size(d2) as f64)
        .unwrap_or(delta_l);

    LStabBounds {
        lstab,
        lstab_lower,
        delta_l,
        delta_h,
        stab2noe,
        stab2oe,
        stab2oie,
    }
}

/// `|A| − max_{m ∉ B} |A ∩ m′|`; `+∞` when `B = M`.
pub fn delta_h(lat: &ConceptLattice, c: usize) -> f64 {
    let ctx = lat.context();
    let concept = lat.concept(c);
    (0..ctx.n_attributes())
        .filter(|&m| !concept.intent.contains(m))
        .map(|m| concept.extent.intersection_count(ctx.column(m)))
        .max()
        .map_or(f64::INFINITY, |best| (concept.extent.count() - best) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::k1;
    use crate::lattice::enumerate_concepts;

    #[test]
    fn k1_bounds() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        let top = lstab_and_bounds(&lat, 0).unwrap();
        // top: lower neighbors {b} and {a}, each Δ = 1, disjoint differences.
        assert!((top.lstab - (4.0f64 / 3.0).log2()).abs() < 1e-15);
        assert_eq!(top.delta_l, 1.0);
        assert_eq!(top.lstab_lower, 0.0);
        assert_eq!(top.delta_h, 1.0);
        assert_eq!(top.stab2noe, 2.0);
        assert_eq!(top.stab2oe, 2.0);
        assert_eq!(top.stab2oie, 2.0);
        let a = lstab_and_bounds(&lat, 2).unwrap();
        assert_eq!(
            (a.lstab, a.delta_l, a.stab2noe, a.stab2oe),
            (1.0, 1.0, 1.0, 1.0)
        );
        let bottom = lstab_and_bounds(&lat, 3).unwrap();
        assert!(bottom.lstab.is_infinite() && bottom.delta_l.is_infinite());
        assert!(bottom.delta_h.is_infinite());
    }

    #[test]
    fn k1_table_matches_single() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        let all = lstab_and_bounds_all(&lat).unwrap();
        for c in 0..lat.len() {
            assert_eq!(all[c], lstab_and_bounds(&lat, c).unwrap());
        }
    }
}
