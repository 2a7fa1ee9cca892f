//! Basic-level similarity and predictability.
//!
//! Both combine three factors with a t-norm: the concept's own score, a term
//! comparing it to its upper neighbors and a term comparing it to its lower
//! neighbors. A concept whose neighbors are too often "out of order" gets 0.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::context::{AttributeSet, FormalContext};
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;
use crate::measures::{norm2, AggregatorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Similarity {
    /// Simple matching coefficient.
    Smc,
    Jaccard,
}

/// How per-pair or per-neighbor values are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Aggregation {
    Average,
    /// Minimum for cohesion and the lower term, maximum for the upper term.
    Extreme,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityConfig {
    pub similarity: Similarity,
    pub object_aggregation: Aggregation,
    pub neighbor_aggregation: Aggregation,
    /// Must be a t-norm.
    pub tnorm: AggregatorKind,
    pub nonmonotone_threshold: f64,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        Self {
            similarity: Similarity::Smc,
            object_aggregation: Aggregation::Average,
            neighbor_aggregation: Aggregation::Average,
            tnorm: AggregatorKind::MinimumT,
            nonmonotone_threshold: 0.5,
        }
    }
}

impl SimilarityConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.tnorm.is_tnorm() {
            return Err(Error::InvalidParameter(format!(
                "`{}` is not a t-norm",
                self.tnorm
            )));
        }
        super::stability::check_unit("threshold", self.nonmonotone_threshold)
    }
}

impl fmt::Display for Similarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Similarity::Smc => "smc",
            Similarity::Jaccard => "jaccard",
        })
    }
}

impl FromStr for Similarity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smc" => Ok(Similarity::Smc),
            "jaccard" => Ok(Similarity::Jaccard),
            _ => Err(Error::InvalidParameter(format!(
                "unknown similarity `{s}` (valid: smc, jaccard)"
            ))),
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::Average => "a",
            Aggregation::Extreme => "m",
        })
    }
}

impl FromStr for Aggregation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "avg" | "average" => Ok(Aggregation::Average),
            "m" | "min" | "minimum" | "max" => Ok(Aggregation::Extreme),
            _ => Err(Error::InvalidParameter(format!(
                "unknown aggregation `{s}` (valid: a, m)"
            ))),
        }
    }
}

/// Similarity of two object intents.
pub fn similarity(kind: Similarity, x: &AttributeSet, y: &AttributeSet) -> f64 {
    match kind {
        Similarity::Smc => {
            let m = x.universe();
            let union = x.union_count(y);
            (x.intersection_count(y) + (m - union)) as f64 / m as f64
        }
        Similarity::Jaccard => {
            let union = x.union_count(y);
            if union == 0 {
                1.0
            } else {
                x.intersection_count(y) as f64 / union as f64
            }
        }
    }
}

/// Pairwise similarity of the extent's object intents, averaged or
/// minimized. 1 when the extent has fewer than two objects.
pub fn cohesion(
    ctx: &FormalContext,
    extent: &crate::ObjectSet,
    sim: Similarity,
    agg: Aggregation,
) -> f64 {
    let objs: Vec<usize> = extent.to_vec();
    if objs.len() < 2 {
        return 1.0;
    }
    let (mut sum, mut min, mut pairs) = (0.0, f64::INFINITY, 0usize);
    for (i, &g) in objs.iter().enumerate() {
        for &h in &objs[i + 1..] {
            let s = similarity(sim, ctx.row(g), ctx.row(h));
            sum += s;
            min = min.min(s);
            pairs += 1;
        }
    }
    match agg {
        Aggregation::Average => sum / pairs as f64,
        Aggregation::Extreme => min,
    }
}

/// `1 − Σ_{y ∈ M∖B} E(|A∩y′|/|A|) / |M∖B|` with `E(q) = −q log2 q`.
pub fn predictability_score(
    ctx: &FormalContext,
    extent: &crate::ObjectSet,
    intent: &AttributeSet,
) -> f64 {
    let outside = ctx.n_attributes() - intent.count();
    let a = extent.count();
    if outside == 0 || a == 0 {
        return 1.0;
    }
    let entropy: f64 = (0..ctx.n_attributes())
        .filter(|&y| !intent.contains(y))
        .map(|y| {
            let q = extent.intersection_count(ctx.column(y)) as f64 / a as f64;
            if q > 0.0 {
                -q * q.log2()
            } else {
                0.0
            }
        })
        .sum();
    1.0 - entropy / outside as f64
}

/// `x / y` read as a ratio of non-negative scores: `+∞` for `x > 0 = y`,
/// 1 for `0 / 0`.
fn score_ratio(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        if x > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    } else {
        x / y
    }
}

/// Combines per-concept base scores into the three-factor index.
fn combine(lat: &ConceptLattice, base: &[f64], cfg: &SimilarityConfig, c: usize) -> Result<f64> {
    let own = base[c];
    let up = lat.upper_neighbors(c);
    let down = lat.lower_neighbors(c);

    let non_monotone = up.iter().filter(|&&u| base[u] > own).count()
        + down.iter().filter(|&&l| base[l] < own).count();
    let neighbors = up.len() + down.len();
    if neighbors > 0 && non_monotone as f64 / neighbors as f64 > cfg.nonmonotone_threshold {
        return Ok(0.0);
    }

    let up_term = if up.is_empty() {
        1.0
    } else {
        let ratios = up.iter().map(|&u| score_ratio(base[u], own));
        1.0 - match cfg.neighbor_aggregation {
            Aggregation::Average => ratios.sum::<f64>() / up.len() as f64,
            Aggregation::Extreme => ratios.fold(f64::NEG_INFINITY, f64::max),
        }
    };
    let down_term = if down.is_empty() {
        1.0
    } else {
        let ratios = down.iter().map(|&l| score_ratio(own, base[l]));
        match cfg.neighbor_aggregation {
            Aggregation::Average => ratios.sum::<f64>() / down.len() as f64,
            Aggregation::Extreme => ratios.fold(f64::INFINITY, f64::min),
        }
    };
    let clamp = |v: f64| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    let t = norm2(cfg.tnorm, clamp(own), clamp(up_term))?;
    norm2(cfg.tnorm, t, clamp(down_term))
}

/// Cohesion of every concept under `cfg`.
pub fn cohesion_all(lat: &ConceptLattice, cfg: &SimilarityConfig) -> Vec<f64> {
    let ctx = lat.context();
    lat.concepts()
        .par_iter()
        .map(|c| cohesion(ctx, &c.extent, cfg.similarity, cfg.object_aggregation))
        .collect()
}

pub fn predictability_all_scores(lat: &ConceptLattice) -> Vec<f64> {
    let ctx = lat.context();
    lat.concepts()
        .par_iter()
        .map(|c| predictability_score(ctx, &c.extent, &c.intent))
        .collect()
}

/// Basic-level similarity index of every concept.
pub fn basic_level_similarity_all(
    lat: &ConceptLattice,
    cfg: &SimilarityConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    lat.require_complete("basic-level similarity")?;
    let base = cohesion_all(lat, cfg);
    (0..lat.len())
        .map(|c| combine(lat, &base, cfg, c))
        .collect()
}

/// Basic-level predictability index of every concept. The object
/// aggregation and similarity fields of `cfg` are not used.
pub fn predictability_all(lat: &ConceptLattice, cfg: &SimilarityConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    lat.require_complete("predictability")?;
    let base = predictability_all_scores(lat);
    (0..lat.len())
        .map(|c| combine(lat, &base, cfg, c))
        .collect()
}

/// Basic-level similarity of one concept.
pub fn basic_level_similarity(
    lat: &ConceptLattice,
    c: usize,
    cfg: &SimilarityConfig,
) -> Result<f64> {
    cfg.validate()?;
    lat.get(c)?;
    lat.require_complete("basic-level similarity")?;
    let ctx = lat.context();
    let mut base = vec![0.0; lat.len()];
    for &d in lat
        .upper_neighbors(c)
        .iter()
        .chain(lat.lower_neighbors(c))
        .chain([&c])
    {
        base[d] = cohesion(
            ctx,
            &lat.concept(d).extent,
            cfg.similarity,
            cfg.object_aggregation,
        );
    }
    combine(lat, &base, cfg, c)
}

/// Basic-level predictability of one concept.
pub fn predictability(lat: &ConceptLattice, c: usize, cfg: &SimilarityConfig) -> Result<f64> {
    cfg.validate()?;
    lat.get(c)?;
    lat.require_complete("predictability")?;
    let ctx = lat.context();
    let mut base = vec![0.0; lat.len()];
    for &d in lat
        .upper_neighbors(c)
        .iter()
        .chain(lat.lower_neighbors(c))
        .chain([&c])
    {
        let dd = lat.concept(d);
        base[d] = predictability_score(ctx, &dd.extent, &dd.intent);
    }
    combine(lat, &base, cfg, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::k1;
    use crate::lattice::enumerate_concepts;

    #[test]
    fn k1_similarity() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        let ctx = lat.context();
        let coh: Vec<f64> = cohesion_all(&lat, &SimilarityConfig::default());
        assert!((coh[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(coh[2], 0.5);
        assert_eq!(coh[3], 1.0);
        let cfg = SimilarityConfig {
            nonmonotone_threshold: 1.0,
            ..Default::default()
        };
        let v = basic_level_similarity(&lat, 2, &cfg).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(basic_level_similarity_all(&lat, &cfg).unwrap()[2], v);
        let b = ctx.row(1);
        assert_eq!(similarity(Similarity::Smc, b, b), 1.0);
        assert_eq!(similarity(Similarity::Jaccard, b, b), 1.0);
        let empty = ctx.empty_attributes();
        assert_eq!(similarity(Similarity::Jaccard, &empty, &empty), 1.0);
    }

    #[test]
    fn k1_predictability() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        let ctx = lat.context();
        let c = lat.concept(2);
        assert_eq!(predictability_score(ctx, &c.extent, &c.intent), 0.5);
        let bottom = lat.concept(3);
        assert_eq!(
            predictability_score(ctx, &bottom.extent, &bottom.intent),
            1.0
        );
    }

    #[test]
    fn config_validation() {
        let cfg = SimilarityConfig {
            tnorm: AggregatorKind::MaximumS,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = SimilarityConfig {
            nonmonotone_threshold: 2.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
