use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use super::stats::ols_fit;
use super::RandomDesign;
use crate::error::{Error, Result};
use crate::indices::{format_g, IntegralSide, Level, LevelCounts, StabilityCounts};
use crate::lattice::ConceptLattice;

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxStudySpec {
    pub design: RandomDesign,
    /// Fractions in `(0, 1)`; the level of a concept is `⌈rate·|A|⌉`.
    pub rates: Vec<f64>,
    pub regressor: Regressor,
}

/// What stability is regressed on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Regressor {
    /// `Σ_{i=2..j} J_i`.
    #[default]
    MinorIntegral,
    /// `J_j` alone.
    Levelwise,
}

impl FromStr for Regressor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minor" => Ok(Regressor::MinorIntegral),
            "levelwise" => Ok(Regressor::Levelwise),
            _ => Err(Error::InvalidParameter(format!(
                "regressor must be minor or levelwise, got `{s}`"
            ))),
        }
    }
}

impl Default for ApproxStudySpec {
    fn default() -> Self {
        Self {
            design: RandomDesign {
                densities: vec![0.1, 0.2, 0.3],
                ..Default::default()
            },
            rates: default_rates(),
            regressor: Regressor::default(),
        }
    }
}

/// `0.05, 0.10, …, 0.95`.
pub fn default_rates() -> Vec<f64> {
    (1..20).map(|k| k as f64 / 20.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxCell {
    pub density: f64,
    pub rate: f64,
    /// `None` when fewer than two usable concepts, or a constant regressor.
    pub fit: Option<(f64, f64, f64)>,
    pub n_concepts: usize,
}

impl ApproxCell {
    pub fn r_squared(&self) -> Option<f64> {
        self.fit.map(|f| f.2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxResult {
    pub cells: Vec<ApproxCell>,
    pub regenerated: u64,
}

impl ApproxResult {
    pub fn cell(&self, density: f64, rate: f64) -> Option<&ApproxCell> {
        self.cells
            .iter()
            .find(|c| (c.density - density).abs() < 1e-9 && (c.rate - rate).abs() < 1e-9)
    }

    /// `density,rate,slope,intercept,r2,n_concepts`; skipped cells leave the
    /// fit fields empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("density,rate,slope,intercept,r2,n_concepts\n");
        for c in &self.cells {
            let fit = c.fit.map_or_else(
                || ",,".to_string(),
                |(s, i, r)| format!("{},{},{}", format_g(s), format_g(i), format_g(r)),
            );
            let _ = writeln!(
                out,
                "{},{},{fit},{}",
                format_g(c.density),
                format_g(c.rate),
                c.n_concepts
            );
        }
        out
    }
}

/// `(x, y)` pairs of one lattice: the regressor at the rate's level against
/// exact stability, for concepts with a valid level (`|A| ≥ 3`).
pub fn approx_points(
    lat: &ConceptLattice,
    rate: f64,
    regressor: Regressor,
) -> Result<Vec<(f64, f64)>> {
    let counts = StabilityCounts::compute(lat)?;
    let levels = LevelCounts::compute(lat)?;
    Ok(points_with(&counts, &levels, lat.len(), rate, regressor))
}

fn points_with(
    counts: &StabilityCounts,
    levels: &LevelCounts,
    n: usize,
    rate: f64,
    regressor: Regressor,
) -> Vec<(f64, f64)> {
    (0..n)
        .filter(|&c| levels.extent_size(c) >= 3)
        .map(|c| {
            let j = Level::Rate(rate).resolve(levels.extent_size(c));
            let x = match regressor {
                Regressor::MinorIntegral => levels.integral(c, j, IntegralSide::Minor).value,
                Regressor::Levelwise => levels.level(c, j).unwrap_or(0.0),
            };
            (x, counts.stability(c))
        })
        .collect()
}

/// Pools every usable concept of every context per density and fits
/// `stability = slope · integral + intercept` for each rate.
pub fn run_approx_study(spec: &ApproxStudySpec) -> Result<ApproxResult> {
    spec.design.validate()?;
    if spec.rates.is_empty() {
        return Err(Error::InvalidParameter("no rates given".into()));
    }
    if let Some(r) = spec.rates.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::InvalidParameter(format!("rate {r} outside (0, 1)")));
    }
    let items = spec.design.items();
    // per context: group, one point list per rate, regenerations
    type PerContext = (usize, Vec<Vec<(f64, f64)>>, u64);
    let per_context: Vec<PerContext> = items
        .par_iter()
        .map(|&(g, i)| -> Result<_> {
            let (lat, attempts) = spec.design.lattice(g, i)?;
            let counts = StabilityCounts::compute(&lat)?;
            let levels = LevelCounts::compute(&lat)?;
            let pts = spec
                .rates
                .iter()
                .map(|&r| points_with(&counts, &levels, lat.len(), r, spec.regressor))
                .collect();
            Ok((g, pts, attempts))
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for (g, &density) in spec.design.densities.iter().enumerate() {
        for (ri, &rate) in spec.rates.iter().enumerate() {
            let (x, y): (Vec<f64>, Vec<f64>) = per_context
                .iter()
                .filter(|p| p.0 == g)
                .flat_map(|p| p.1[ri].iter().copied())
                .unzip();
            let fit = match ols_fit(&x, &y) {
                Ok(f) => Some((f.slope, f.intercept, f.r_squared)),
                Err(Error::Degenerate(_)) => None,
                Err(e) => return Err(e),
            };
            cells.push(ApproxCell {
                density,
                rate,
                fit,
                n_concepts: x.len(),
            });
        }
    }
    Ok(ApproxResult {
        cells,
        regenerated: per_context.iter().map(|p| p.2).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::FormalContext;
    use crate::lattice::enumerate_concepts;

    #[test]
    fn small_extents_contribute_nothing() {
        // every concept has at most two objects
        let ctx = FormalContext::from_matrix(&[vec![true, false, true], vec![false, true, true]])
            .unwrap();
        let lat = enumerate_concepts(&ctx, 0).unwrap();
        assert!(approx_points(&lat, 0.4, Regressor::Levelwise)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn study_shape_and_skips() {
        let spec = ApproxStudySpec {
            design: RandomDesign {
                densities: vec![0.3],
                contexts_per_density: 3,
                object_range: 8..=10,
                attribute_range: 4..=6,
                seed: 3,
                ..Default::default()
            },
            rates: vec![0.2, 0.5],
            regressor: Regressor::MinorIntegral,
        };
        let r = run_approx_study(&spec).unwrap();
        assert_eq!(r.cells.len(), 2);
        for c in &r.cells {
            if let Some(r2) = c.r_squared() {
                assert!((-1e-12..=1.0 + 1e-12).contains(&r2));
            }
        }
        assert_eq!(r.to_csv(), run_approx_study(&spec).unwrap().to_csv());
        let bad = ApproxStudySpec {
            rates: vec![1.0],
            ..spec
        };
        assert!(run_approx_study(&bad).is_err());
    }
}
