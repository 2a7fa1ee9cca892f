//! Stability, level-wise stability and robustness.
//!
//! Every subset `C ⊆ A` of a concept's extent closes to exactly one
//! concept below it, so per-concept counts satisfy
//!
//! ```text
//! σ(c)    = 2^|A_c|       − Σ_{d<c} σ(d)
//! γ_j(c)  = C(|A_c|, j)   − Σ_{d<c} γ_j(d)
//! ρ_α(c)  = 1             − Σ_{d<c} (1−α)^{|A_c|−|A_d|} ρ_α(d)
//! ```
//!
//! σ and γ are kept as exact integers (`u128` while `|G| < 127`, big
//! integers beyond that) and only divided at the end. The Möbius forms of
//! the same quantities are provided separately as an independent route.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::context::{keyed_rng, FormalContext};
use crate::error::{Error, Result};
use crate::lattice::{Concept, ConceptLattice, IdealWalker};

/// Exact non-negative counts used by the recursions.
pub(crate) trait Count: Clone + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn sub_assign(&mut self, other: &Self);
    fn shl(&self, bits: usize) -> Self;
    fn approx(&self) -> f64;
    fn is_nil(&self) -> bool;
    fn to_big(&self) -> BigUint;
}

impl Count for u128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn plus(&self, other: &Self) -> Self {
        self.checked_add(*other).expect("u128 count overflow")
    }
    fn sub_assign(&mut self, other: &Self) {
        *self = self.checked_sub(*other).expect("negative subset count");
    }
    fn shl(&self, bits: usize) -> Self {
        assert!(bits < 128, "u128 count overflow");
        self << bits
    }
    fn approx(&self) -> f64 {
        *self as f64
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Count for BigUint {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_assign(&mut self, other: &Self) {
        *self -= other;
    }
    fn shl(&self, bits: usize) -> Self {
        self << bits
    }
    fn approx(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

/// Largest object count for which all counts fit a `u128`.
const NARROW_LIMIT: usize = 126;

/// Pascal triangle rows `0..=n`.
fn pascal<T: Count>(n: usize) -> Vec<Vec<T>> {
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = Vec::with_capacity(i + 1);
        for k in 0..=i {
            if k == 0 || k == i {
                row.push(T::unit());
            } else {
                let prev = &rows[i - 1];
                row.push(prev[k - 1].plus(&prev[k]));
            }
        }
        rows.push(row);
    }
    rows
}

/// Processing order for the recursions: every strict descendant of a
/// concept appears before it. Ids are a linear extension of intent
/// inclusion, so descending id order works.
fn bottom_up(lat: &ConceptLattice) -> impl Iterator<Item = usize> {
    (0..lat.len()).rev()
}

/// Exact subset counts per concept.
#[derive(Clone, Debug)]
pub struct StabilityCounts {
    extent_sizes: Vec<usize>,
    sigma: Vec<BigUint>,
    sigma_f: Vec<f64>,
    lstab: Vec<f64>,
}

impl StabilityCounts {
    /// `σ(c) = |{C ⊆ A : C′ = B}|` for every concept.
    pub fn compute(lat: &ConceptLattice) -> Result<Self> {
        lat.require_complete("stability")?;
        if lat.context().n_objects() <= NARROW_LIMIT {
            Ok(Self::from_counts(lat, sigma_counts::<u128>(lat)))
        } else {
            Ok(Self::from_counts(lat, sigma_counts::<BigUint>(lat)))
        }
    }

    fn from_counts<T: Count>(lat: &ConceptLattice, sigma: Vec<T>) -> Self {
        let extent_sizes: Vec<usize> = lat.concepts().iter().map(|c| c.extent.count()).collect();
        let mut lstab = Vec::with_capacity(sigma.len());
        let mut sigma_f = Vec::with_capacity(sigma.len());
        for (s, &n) in sigma.iter().zip(&extent_sizes) {
            let mut rest = T::unit().shl(n);
            rest.sub_assign(s);
            // LStab = −log2(1 − σ/2^n) = n − log2(2^n − σ)
            lstab.push(if rest.is_nil() {
                f64::INFINITY
            } else {
                n as f64 - rest.approx().log2()
            });
            sigma_f.push(s.approx() / 2f64.powi(n as i32));
        }
        Self {
            extent_sizes,
            sigma: sigma.iter().map(Count::to_big).collect(),
            sigma_f,
            lstab,
        }
    }

    pub fn sigma(&self, c: usize) -> &BigUint {
        &self.sigma[c]
    }

    /// `σ(c) / 2^|A|`.
    pub fn stability(&self, c: usize) -> f64 {
        self.sigma_f[c]
    }

    /// `−log2(1 − Stab(c))`, `+∞` when the stability is exactly 1.
    pub fn lstab(&self, c: usize) -> f64 {
        self.lstab[c]
    }

    pub fn extent_size(&self, c: usize) -> usize {
        self.extent_sizes[c]
    }

    pub fn stabilities(&self) -> &[f64] {
        &self.sigma_f
    }
}

fn sigma_counts<T: Count>(lat: &ConceptLattice) -> Vec<T> {
    let mut sigma: Vec<T> = vec![T::nil(); lat.len()];
    let mut walker = IdealWalker::new(lat.len());
    for c in bottom_up(lat) {
        let n = lat.concept(c).extent.count();
        let mut s = T::unit().shl(n);
        for &d in walker.ideal(lat, c) {
            if d != c {
                s.sub_assign(&sigma[d]);
            }
        }
        sigma[c] = s;
    }
    sigma
}

/// Exact stability of one concept; only its order ideal is visited.
pub fn stability_exact(lat: &ConceptLattice, c: usize) -> Result<f64> {
    lat.get(c)?;
    lat.require_complete("stability")?;
    let ideal = lat.descendants(c)?;
    let n = lat.concept(c).extent.count();
    // Ids in the ideal are processed bottom-up (descending).
    let mut sigma: std::collections::HashMap<usize, BigUint> = Default::default();
    let mut walker = IdealWalker::new(lat.len());
    for &d in ideal.iter().rev() {
        let nd = lat.concept(d).extent.count();
        let mut s = BigUint::from(1u8) << nd;
        for &e in walker.ideal(lat, d) {
            if e != d {
                s -= &sigma[&e];
            }
        }
        sigma.insert(d, s);
    }
    Ok(sigma[&c].approx() / 2f64.powi(n as i32))
}

/// Level-wise subset counts `γ_j(c) = |{Y ⊆ A : |Y| = j, Y′ = B}|`.
#[derive(Clone, Debug)]
pub struct LevelCounts {
    /// `gamma[c][j] / C(|A_c|, j)` for `j = 0..=|A_c|`.
    ratios: Vec<Vec<f64>>,
    gamma: Vec<Vec<BigUint>>,
}

impl LevelCounts {
    pub fn compute(lat: &ConceptLattice) -> Result<Self> {
        lat.require_complete("level-wise stability")?;
        if lat.context().n_objects() <= NARROW_LIMIT {
            Ok(Self::from_counts::<u128>(lat))
        } else {
            Ok(Self::from_counts::<BigUint>(lat))
        }
    }

    fn from_counts<T: Count>(lat: &ConceptLattice) -> Self {
        let n_obj = lat.context().n_objects();
        let binom = pascal::<T>(n_obj);
        let mut gamma: Vec<Vec<T>> = vec![Vec::new(); lat.len()];
        let mut walker = IdealWalker::new(lat.len());
        for c in bottom_up(lat) {
            let n = lat.concept(c).extent.count();
            let mut g: Vec<T> = binom[n].clone();
            for &d in walker.ideal(lat, c) {
                if d != c {
                    // |A_d| < |A_c|, so levels above |A_d| get nothing from d.
                    for (j, v) in gamma[d].iter().enumerate() {
                        g[j].sub_assign(v);
                    }
                }
            }
            gamma[c] = g;
        }
        let ratios = gamma
            .iter()
            .map(|g| {
                let n = g.len() - 1;
                g.iter()
                    .enumerate()
                    .map(|(j, v)| v.approx() / binom[n][j].approx())
                    .collect()
            })
            .collect();
        Self {
            ratios,
            gamma: gamma
                .iter()
                .map(|g| g.iter().map(Count::to_big).collect())
                .collect(),
        }
    }

    /// `γ_j(c)`; zero when `j > |A|`.
    pub fn gamma(&self, c: usize, j: usize) -> BigUint {
        self.gamma[c].get(j).cloned().unwrap_or_default()
    }

    /// `J_j(c) = γ_j / C(n, j)` for `2 ≤ j ≤ n−1`, otherwise `None`.
    pub fn level(&self, c: usize, j: usize) -> Option<f64> {
        let n = self.ratios[c].len() - 1;
        (j >= 2 && j < n).then(|| self.ratios[c][j])
    }

    /// Sum of `J_i` over the requested side; see [`IntegralSide`].
    pub fn integral(&self, c: usize, j: usize, side: IntegralSide) -> LevelValue {
        integral_from(&self.ratios[c], j, side)
    }

    pub fn extent_size(&self, c: usize) -> usize {
        self.ratios[c].len() - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntegralSide {
    /// `Σ_{i=2..j} J_i`
    Minor,
    /// `Σ_{i=j..n−1} J_i`
    Major,
    /// `Σ_{i=2..n−1} J_i`
    Full,
}

/// A level-wise value together with whether the requested level was
/// outside `[2, n−1]` (value is then 0 by convention).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelValue {
    pub value: f64,
    pub out_of_range: bool,
}

/// `J_j(c)` for one concept.
pub fn levelwise_stability(lat: &ConceptLattice, c: usize, j: usize) -> Result<LevelValue> {
    let (gamma, binom) = gamma_row(lat, c)?;
    let n = gamma.len() - 1;
    if j < 2 || j + 1 > n {
        return Ok(LevelValue {
            value: 0.0,
            out_of_range: true,
        });
    }
    Ok(LevelValue {
        value: gamma[j].approx() / binom[j].approx(),
        out_of_range: false,
    })
}

/// Minor, major or full integral stability of one concept.
pub fn integral_stability(
    lat: &ConceptLattice,
    c: usize,
    j: usize,
    side: IntegralSide,
) -> Result<LevelValue> {
    let (gamma, binom) = gamma_row(lat, c)?;
    let ratios: Vec<f64> = gamma
        .iter()
        .zip(&binom)
        .map(|(g, b)| g.approx() / b.approx())
        .collect();
    Ok(integral_from(&ratios, j, side))
}

fn integral_from(ratios: &[f64], j: usize, side: IntegralSide) -> LevelValue {
    let n = ratios.len() - 1;
    if side != IntegralSide::Full && !(j >= 2 && j < n) {
        return LevelValue {
            value: 0.0,
            out_of_range: true,
        };
    }
    let (lo, hi) = match side {
        IntegralSide::Minor => (2, j),
        IntegralSide::Major => (j, n.saturating_sub(1)),
        IntegralSide::Full => (2, n.saturating_sub(1)),
    };
    LevelValue {
        value: if lo <= hi {
            ratios[lo..=hi].iter().sum()
        } else {
            0.0
        },
        out_of_range: false,
    }
}

/// `γ_·(c)` and `C(|A_c|, ·)` for a single concept by the recursion over
/// its order ideal.
fn gamma_row(lat: &ConceptLattice, c: usize) -> Result<(Vec<BigUint>, Vec<BigUint>)> {
    lat.get(c)?;
    lat.require_complete("level-wise stability")?;
    let ideal = lat.descendants(c)?;
    let n_c = lat.concept(c).extent.count();
    let binom = pascal::<BigUint>(n_c);
    let mut gamma: std::collections::HashMap<usize, Vec<BigUint>> = Default::default();
    let mut walker = IdealWalker::new(lat.len());
    for &d in ideal.iter().rev() {
        let n = lat.concept(d).extent.count();
        let mut g = binom[n].clone();
        for &e in walker.ideal(lat, d) {
            if e != d {
                for (j, v) in gamma[&e].iter().enumerate() {
                    g[j] -= v;
                }
            }
        }
        gamma.insert(d, g);
    }
    let g = gamma.remove(&c).expect("concept is in its own ideal");
    Ok((g, binom[n_c].clone()))
}

/// `γ_j(c) = Σ_{d ≤ c} μ(d, c) · C(|A_d|, j)` via the Möbius function.
pub fn gamma_via_mobius(lat: &ConceptLattice, c: usize, j: usize) -> Result<i128> {
    let mu = lat.mobius(c)?;
    Ok(mu
        .iter()
        .map(|(d, m)| m as i128 * binomial_i128(lat.concept(d).extent.count(), j))
        .sum())
}

/// `Stab(c) = Σ_{d ≤ c} μ(d, c) · 2^{|A_d| − |A_c|}` via the Möbius function.
pub fn stability_via_mobius(lat: &ConceptLattice, c: usize) -> Result<f64> {
    let n = lat.get(c)?.extent.count() as i32;
    let mu = lat.mobius(c)?;
    Ok(mu
        .iter()
        .map(|(d, m)| m as f64 * 2f64.powi(lat.concept(d).extent.count() as i32 - n))
        .sum())
}

fn binomial_i128(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// Robustness `r(c, α)` for every concept: the probability that the intent
/// is still generated after each extent object is kept independently with
/// probability `α`.
pub fn robustness_all(lat: &ConceptLattice, alpha: f64) -> Result<Vec<f64>> {
    check_unit("alpha", alpha)?;
    lat.require_complete("robustness")?;
    let q = 1.0 - alpha;
    let sizes: Vec<i32> = lat
        .concepts()
        .iter()
        .map(|c| c.extent.count() as i32)
        .collect();
    let mut rho = vec![0.0f64; lat.len()];
    let mut walker = IdealWalker::new(lat.len());
    for c in bottom_up(lat) {
        let mut r = 1.0;
        for &d in walker.ideal(lat, c) {
            if d != c {
                r -= q.powi(sizes[c] - sizes[d]) * rho[d];
            }
        }
        rho[c] = r;
    }
    Ok(rho)
}

/// Robustness of one concept.
pub fn robustness(lat: &ConceptLattice, c: usize, alpha: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    lat.get(c)?;
    lat.require_complete("robustness")?;
    let ideal = lat.descendants(c)?;
    let q = 1.0 - alpha;
    let mut rho: std::collections::HashMap<usize, f64> = Default::default();
    let mut walker = IdealWalker::new(lat.len());
    for &d in ideal.iter().rev() {
        let nd = lat.concept(d).extent.count() as i32;
        let mut r = 1.0;
        for &e in walker.ideal(lat, d) {
            if e != d {
                r -= q.powi(nd - lat.concept(e).extent.count() as i32) * rho[&e];
            }
        }
        rho.insert(d, r);
    }
    Ok(rho[&c])
}

/// Integer coefficients `a_k` with `r(c, α) = Σ_k a_k (1−α)^k`, where
/// `a_k = Σ { μ(d, c) : |A_c| − |A_d| = k }`.
pub fn robustness_polynomial(lat: &ConceptLattice, c: usize) -> Result<Vec<i64>> {
    let n = lat.get(c)?.extent.count();
    let mu = lat.mobius(c)?;
    let mut coef = vec![0i64; n + 1];
    for (d, m) in mu.iter() {
        coef[n - lat.concept(d).extent.count()] += m;
    }
    Ok(coef)
}

/// Robustness evaluated through its Möbius polynomial.
pub fn robustness_via_mobius(lat: &ConceptLattice, c: usize, alpha: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    let coef = robustness_polynomial(lat, c)?;
    let q = 1.0 - alpha;
    Ok(coef
        .iter()
        .enumerate()
        .map(|(k, &a)| a as f64 * q.powi(k as i32))
        .sum())
}

/// The alternating sum with `(−1)^{|B_d|−|B_c|}` weights over subconcepts.
/// It agrees with [`robustness`] on intervals that are Boolean (and on the
/// small examples it was stated for) but not on general lattices.
pub fn robustness_literal(lat: &ConceptLattice, c: usize, alpha: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    let cc = lat.get(c)?;
    let (na, nb) = (cc.extent.count() as i32, cc.intent.count() as i32);
    let q = 1.0 - alpha;
    Ok(lat
        .descendants(c)?
        .into_iter()
        .map(|d| {
            let dd = lat.concept(d);
            let sign = if (dd.intent.count() as i32 - nb) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            sign * q.powi(na - dd.extent.count() as i32)
        })
        .sum())
}

/// Fraction of `samples` uniformly drawn subsets `C ⊆ A` with `C′ = B`.
/// The stream is keyed by `(seed, concept id)`.
pub fn stability_montecarlo(
    ctx: &FormalContext,
    concept: &Concept,
    samples: u64,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let mut rng = keyed_rng(seed, concept.id as u64);
    let members: Vec<usize> = concept.extent.to_vec();
    let target = concept.intent.count();
    let full = ctx.all_attributes();
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut derived = full.clone();
        let mut bits = 0u64;
        let mut left = 0u32;
        for &g in &members {
            if left == 0 {
                bits = rng.gen();
                left = 64;
            }
            let keep = bits & 1 == 1;
            bits >>= 1;
            left -= 1;
            if keep && derived.count() != target {
                derived.intersect_with(ctx.row(g));
            }
        }
        if derived.count() == target {
            hits += 1;
        }
    }
    Ok(hits as f64 / samples as f64)
}

/// Monte Carlo stability for every concept, in parallel.
pub fn stability_montecarlo_all(lat: &ConceptLattice, samples: u64, seed: u64) -> Result<Vec<f64>> {
    lat.concepts()
        .par_iter()
        .map(|c| stability_montecarlo(lat.context(), c, samples, seed))
        .collect()
}

pub(crate) fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {v}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::k1;
    use crate::lattice::enumerate_concepts;

    fn k1_lattice() -> ConceptLattice {
        enumerate_concepts(&k1(), 0).unwrap()
    }

    // K1 ids: 0 = top (G, ∅), 1 = ({g2,g3},{b}), 2 = ({g1,g2},{a}), 3 = bottom.

    #[test]
    fn k1_exact_stability() {
        let lat = k1_lattice();
        assert_eq!(stability_exact(&lat, 2).unwrap(), 0.5);
        assert_eq!(stability_exact(&lat, 0).unwrap(), 0.25);
        assert_eq!(stability_exact(&lat, 3).unwrap(), 1.0);
        let all = StabilityCounts::compute(&lat).unwrap();
        assert_eq!(all.stabilities(), &[0.25, 0.5, 0.5, 1.0]);
        assert_eq!(all.sigma(0), &BigUint::from(2u32));
        assert!((all.lstab(0) - (-(0.75f64).log2())).abs() < 1e-15);
        assert_eq!(all.lstab(2), 1.0);
        assert_eq!(all.lstab(3), f64::INFINITY);
    }

    #[test]
    fn incomplete_lattice_is_rejected() {
        let lat = enumerate_concepts(&k1(), 2).unwrap();
        assert!(matches!(
            stability_exact(&lat, 0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            StabilityCounts::compute(&lat),
            Err(Error::Precondition(_))
        ));
        assert!(robustness_all(&lat, 0.5).is_err());
    }

    #[test]
    fn k1_levels() {
        let lat = k1_lattice();
        let top = levelwise_stability(&lat, 0, 2).unwrap();
        assert!((top.value - 1.0 / 3.0).abs() < 1e-15);
        assert!(!top.out_of_range);
        let small = integral_stability(&lat, 2, 2, IntegralSide::Full).unwrap();
        assert_eq!(small.value, 0.0);
        assert!(levelwise_stability(&lat, 0, 3).unwrap().out_of_range);
        let table = LevelCounts::compute(&lat).unwrap();
        assert_eq!(table.gamma(0, 2), BigUint::from(1u32));
        assert_eq!(table.level(0, 2), Some(1.0 / 3.0));
        assert_eq!(table.level(0, 1), None);
        assert_eq!(gamma_via_mobius(&lat, 0, 2).unwrap(), 1);
    }

    #[test]
    fn k1_robustness() {
        let lat = k1_lattice();
        for c in 0..lat.len() {
            assert_eq!(robustness(&lat, c, 1.0).unwrap(), 1.0);
        }
        assert_eq!(robustness(&lat, 2, 0.5).unwrap(), 0.5);
        assert_eq!(robustness(&lat, 0, 0.5).unwrap(), 0.25);
        assert_eq!(
            robustness_all(&lat, 0.5).unwrap(),
            vec![0.25, 0.5, 0.5, 1.0]
        );
        assert_eq!(robustness_literal(&lat, 0, 0.5).unwrap(), 0.25);
        assert_eq!(robustness_polynomial(&lat, 0).unwrap(), vec![1, -2, 1, 0]);
        assert!(robustness(&lat, 0, 1.5).is_err());
    }

    #[test]
    fn k1_montecarlo() {
        let lat = k1_lattice();
        let ctx = lat.context();
        assert_eq!(
            stability_montecarlo(ctx, lat.concept(3), 1000, 1).unwrap(),
            1.0
        );
        let p = stability_montecarlo(ctx, lat.concept(2), 100_000, 7).unwrap();
        let sigma = (0.25f64 / 100_000.0).sqrt();
        assert!((p - 0.5).abs() <= 4.0 * sigma, "{p}");
        let one = stability_montecarlo(ctx, lat.concept(2), 1, 3).unwrap();
        assert!(one == 0.0 || one == 1.0);
        assert_eq!(
            one,
            stability_montecarlo(ctx, lat.concept(2), 1, 3).unwrap()
        );
        assert!(stability_montecarlo(ctx, lat.concept(2), 0, 3).is_err());
    }

    #[test]
    fn pascal_rows() {
        let p = pascal::<u128>(5);
        assert_eq!(p[5], vec![1, 5, 10, 10, 5, 1]);
        assert_eq!(binomial_i128(5, 2), 10);
        assert_eq!(binomial_i128(2, 5), 0);
    }
}
