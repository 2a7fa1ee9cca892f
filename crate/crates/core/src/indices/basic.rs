//! Indices that need only counts: support, probability of closedness,
//! separation, MONOCLE weights, support-gap criteria and the
//! conditional-probability family (CV, CFC, CU).

use super::stability::check_unit;
use crate::context::{AttributeSet, FormalContext};
use crate::error::Result;
use crate::lattice::{Concept, ConceptLattice};

/// `|A| / |G|`.
pub fn support(lat: &ConceptLattice, c: usize) -> Result<f64> {
    let concept = lat.get(c)?;
    Ok(concept.extent.count() as f64 / lat.context().n_objects() as f64)
}

/// Attribute frequencies and log-factorials reused across concepts when
/// evaluating the probability that an intent is closed under independence.
#[derive(Clone, Debug)]
pub struct ClosednessModel {
    n: usize,
    p: Vec<f64>,
    ln_fact: Vec<f64>,
    /// Per `k`: number of attributes with `1 − p_m^k = 0`.
    zeros: Vec<usize>,
    /// Per `k`: `Σ ln(1 − p_m^k)` over the attributes where that is finite.
    ln_sum: Vec<f64>,
    /// `ln(1 − p_m^k)` per attribute and `k` (`−∞` where the factor is 0).
    ln_factor: Vec<Vec<f64>>,
}

impl ClosednessModel {
    pub fn new(ctx: &FormalContext) -> Self {
        let n = ctx.n_objects();
        let p: Vec<f64> = (0..ctx.n_attributes())
            .map(|m| ctx.column(m).count() as f64 / n as f64)
            .collect();
        let mut ln_fact = vec![0.0; n + 1];
        for i in 1..=n {
            ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
        }
        let ln_factor: Vec<Vec<f64>> = p
            .iter()
            .map(|&pm| (0..=n).map(|k| (1.0 - pm.powi(k as i32)).ln()).collect())
            .collect();
        let mut zeros = vec![0; n + 1];
        let mut ln_sum = vec![0.0; n + 1];
        for row in &ln_factor {
            for (k, &v) in row.iter().enumerate() {
                if v == f64::NEG_INFINITY {
                    zeros[k] += 1;
                } else {
                    ln_sum[k] += v;
                }
            }
        }
        Self {
            n,
            p,
            ln_fact,
            zeros,
            ln_sum,
            ln_factor,
        }
    }

    /// `Σ_k C(n,k) p_B^k (1−p_B)^{n−k} Π_{m∉B} (1 − p_m^k)`.
    pub fn probability(&self, intent: &AttributeSet) -> f64 {
        let n = self.n;
        let p_b: f64 = intent.iter().map(|m| self.p[m]).product();
        let mut total = 0.0;
        for k in 0..=n {
            let zeros_in_b = intent
                .iter()
                .filter(|&m| self.ln_factor[m][k] == f64::NEG_INFINITY)
                .count();
            if self.zeros[k] > zeros_in_b {
                continue;
            }
            let ln_outside = self.ln_sum[k]
                - intent
                    .iter()
                    .map(|m| self.ln_factor[m][k])
                    .filter(|v| v.is_finite())
                    .sum::<f64>();
            let ln_binom = self.ln_fact[n] - self.ln_fact[k] - self.ln_fact[n - k];
            let ln_term = ln_binom + ln_pow(p_b, k) + ln_pow(1.0 - p_b, n - k) + ln_outside;
            total += ln_term.exp();
        }
        total.clamp(0.0, 1.0)
    }
}

/// `ln(x^k)` with `x^0 = 1` even for `x = 0`.
fn ln_pow(x: f64, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

/// Probability that `intent` is closed when attributes occur independently
/// with their observed frequencies.
pub fn concept_probability(ctx: &FormalContext, intent: &AttributeSet) -> f64 {
    ClosednessModel::new(ctx).probability(intent)
}

/// Share of the ones in the rows and columns of a concept that the concept
/// itself covers. 0 when either side is empty.
pub fn separation(ctx: &FormalContext, concept: &Concept) -> f64 {
    let (a, b) = (concept.extent.count(), concept.intent.count());
    if a == 0 || b == 0 {
        return 0.0;
    }
    let rows: usize = concept.extent.iter().map(|g| ctx.row(g).count()).sum();
    let cols: usize = concept.intent.iter().map(|m| ctx.column(m).count()).sum();
    (a * b) as f64 / (rows + cols - a * b) as f64
}

/// MONOCLE weights relative to a set `H` of concepts.
#[derive(Clone, Debug)]
pub struct MonocleWeights {
    h_len: usize,
    /// concepts in H whose extent contains g
    object_hits: Vec<usize>,
    /// concepts in H whose intent contains m
    attribute_hits: Vec<usize>,
}

impl MonocleWeights {
    /// `h = None` means all concepts.
    pub fn new(lat: &ConceptLattice, h: Option<&[usize]>) -> Result<Self> {
        let ctx = lat.context();
        let mut object_hits = vec![0; ctx.n_objects()];
        let mut attribute_hits = vec![0; ctx.n_attributes()];
        let all: Vec<usize>;
        let ids = match h {
            Some(ids) => ids,
            None => {
                all = (0..lat.len()).collect();
                &all
            }
        };
        for &id in ids {
            let c = lat.get(id)?;
            c.extent.iter().for_each(|g| object_hits[g] += 1);
            c.intent.iter().for_each(|m| attribute_hits[m] += 1);
        }
        Ok(Self {
            h_len: ids.len(),
            object_hits,
            attribute_hits,
        })
    }

    /// `(|A| + Σ_{g∈A} N_G(g)) · (|B| + Σ_{m∈B} N_M(m))`.
    pub fn weight(&self, concept: &Concept) -> f64 {
        let left: usize = concept
            .extent
            .iter()
            .map(|g| 1 + self.h_len - self.object_hits[g])
            .sum();
        let right: usize = concept
            .intent
            .iter()
            .map(|m| 1 + self.h_len - self.attribute_hits[m])
            .sum();
        left as f64 * right as f64
    }
}

pub fn monocle(lat: &ConceptLattice, c: usize, h: Option<&[usize]>) -> Result<f64> {
    let concept = lat.get(c)?;
    Ok(MonocleWeights::new(lat, h)?.weight(concept))
}

/// δ-tolerance closed frequent itemset test against the concepts whose
/// intent adds exactly one attribute.
///
/// The default reading is true when no such child keeps at least a
/// `1 − δ` share of the support. `literal = true` asks the opposite: some
/// child does.
pub fn delta_tcfi(lat: &ConceptLattice, c: usize, delta: f64, literal: bool) -> Result<bool> {
    check_unit("delta", delta)?;
    let concept = lat.get(c)?;
    let b = concept.intent.count();
    let threshold = (1.0 - delta) * concept.extent.count() as f64;
    let near = lat
        .lower_neighbors(c)
        .iter()
        .map(|&d| lat.concept(d))
        .filter(|d| d.intent.count() == b + 1)
        .any(|d| d.extent.count() as f64 >= threshold);
    Ok(if literal { near } else { !near })
}

/// Frequent (`supp(B) ≥ min_support`) and every frequent proper closed
/// super-intent keeps at most a `1 − α` share of the support.
pub fn margin_closed(lat: &ConceptLattice, c: usize, alpha: f64, min_support: f64) -> Result<bool> {
    check_unit("alpha", alpha)?;
    check_unit("min_support", min_support)?;
    let concept = lat.get(c)?;
    let n = lat.context().n_objects() as f64;
    let a = concept.extent.count() as f64;
    if a / n < min_support {
        return Ok(false);
    }
    // Any proper sub-extent lies inside a lower neighbor's extent, so the
    // largest frequent ratio is attained on a lower neighbor.
    Ok(lat
        .lower_neighbors(c)
        .iter()
        .map(|&d| lat.concept(d).extent.count() as f64)
        .filter(|&ad| ad / n >= min_support)
        .all(|ad| ad / a <= 1.0 - alpha))
}

/// `max_{d ∈ LN(c)} |A_d| / |A_c|`, 0 without lower neighbors.
pub fn margin_closed_relaxed(lat: &ConceptLattice, c: usize) -> Result<f64> {
    let concept = lat.get(c)?;
    let a = concept.extent.count() as f64;
    Ok(lat
        .lower_neighbors(c)
        .iter()
        .map(|&d| lat.concept(d).extent.count() as f64 / a)
        .fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CvCfcCu {
    pub cv: f64,
    pub cfc: f64,
    pub cu: f64,
}

/// Category validity, category feature collocation and category utility.
///
/// `cu` uses `|A∩y′|/|y′|` inside the square; with `standard_cu` it uses
/// the usual `|A∩y′|/|A|`. Attributes with empty columns contribute 0.
pub fn cv_cfc_cu(ctx: &FormalContext, concept: &Concept, standard_cu: bool) -> CvCfcCu {
    let n = ctx.n_objects() as f64;
    let a = concept.extent.count() as f64;
    let (mut cv, mut cfc, mut cu_sum) = (0.0, 0.0, 0.0);
    for y in 0..ctx.n_attributes() {
        let col = ctx.column(y);
        let ny = col.count() as f64;
        if ny == 0.0 {
            continue;
        }
        let hit = concept.extent.intersection_count(col) as f64;
        if concept.intent.contains(y) {
            cv += a / ny;
        }
        if a > 0.0 {
            cfc += (hit / ny) * (hit / a);
        }
        let cond = if standard_cu {
            if a > 0.0 {
                hit / a
            } else {
                0.0
            }
        } else {
            hit / ny
        };
        cu_sum += cond * cond - (ny / n) * (ny / n);
    }
    CvCfcCu {
        cv,
        cfc,
        cu: a / n * cu_sum,
    }
}
