//! Seeded study pipelines: rank correlation between indices, stability
//! approximation by integral stability, and noise filtering.
//!
//! Every random draw comes from a stream keyed by the study seed and the
//! work item, so contexts and trials can run in parallel and the results
//! do not depend on scheduling.

mod approx;
mod correlation;
mod meta;
mod noise;
pub mod stats;

use std::ops::RangeInclusive;

use rand::Rng;

pub use approx::{
    approx_points, default_rates, run_approx_study, ApproxCell, ApproxResult, ApproxStudySpec,
    Regressor,
};
pub use correlation::{
    correlation_indices, run_correlation_study, CorrelationGroup, CorrelationResult,
    CorrelationStudySpec,
};
pub use meta::{meta_indices, run_meta_demo, top_k, MetaReport, Ranking, TOP_K};
pub use noise::{
    noise_trial, run_noise_study, Matching, NoiseCell, NoiseResult, NoiseStudySpec, NoiseTrial,
};
pub use stats::{auc, kendall_tau_b, mean_sd, ols_fit, OlsFit, TauResult};

use crate::context::{generate_random_context, keyed_rng, RandomContextSpec};
use crate::error::{Error, Result};
use crate::lattice::{ConceptLattice, LatticeOptions};

/// Concept budget used by the studies unless overridden.
pub const STUDY_BUDGET: usize = 200_000;

/// Regeneration attempts per context before giving up.
const MAX_ATTEMPTS: u64 = 64;

/// Shape of the random contexts shared by the correlation and
/// approximation studies.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomDesign {
    pub densities: Vec<f64>,
    pub contexts_per_density: usize,
    pub object_range: RangeInclusive<usize>,
    pub attribute_range: RangeInclusive<usize>,
    pub seed: u64,
    pub budget: usize,
}

impl RandomDesign {
    pub fn validate(&self) -> Result<()> {
        if self.densities.is_empty() {
            return Err(Error::InvalidParameter("no densities given".into()));
        }
        if let Some(d) = self.densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::InvalidParameter(format!(
                "density {d} outside [0, 1]"
            )));
        }
        if self.contexts_per_density == 0 {
            return Err(Error::InvalidParameter(
                "contexts per density must be positive".into(),
            ));
        }
        for (name, r) in [
            ("object", &self.object_range),
            ("attribute", &self.attribute_range),
        ] {
            if r.is_empty() || *r.start() == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} range {}..={} must be nonempty and positive",
                    r.start(),
                    r.end()
                )));
            }
        }
        Ok(())
    }

    /// Lattice of context `index` in density group `group`, together with the
    /// number of regenerations needed to fit the budget.
    pub fn lattice(&self, group: usize, index: usize) -> Result<(ConceptLattice, u64)> {
        let opts = LatticeOptions {
            min_support: 0,
            budget: self.budget,
        };
        for attempt in 0..MAX_ATTEMPTS {
            let key = ((group as u64) << 40) | ((index as u64) << 16) | attempt;
            let mut rng = keyed_rng(self.seed, key);
            let spec = RandomContextSpec {
                n_objects: rng.gen_range(self.object_range.clone()),
                n_attributes: rng.gen_range(self.attribute_range.clone()),
                density: self.densities[group],
                seed: rng.gen(),
            };
            let ctx = generate_random_context(&spec)?;
            match ConceptLattice::build(&ctx, &opts) {
                Ok(lat) => return Ok((lat, attempt)),
                Err(Error::BudgetExceeded { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::BudgetExceeded {
            budget: self.budget,
        })
    }

    /// `(group, index)` for every context, in output order.
    fn items(&self) -> Vec<(usize, usize)> {
        (0..self.densities.len())
            .flat_map(|g| (0..self.contexts_per_density).map(move |i| (g, i)))
            .collect()
    }
}

impl Default for RandomDesign {
    fn default() -> Self {
        Self {
            densities: vec![0.1, 0.2, 0.3, 0.4],
            contexts_per_density: 100,
            object_range: 40..=80,
            attribute_range: 10..=50,
            seed: 0,
            budget: STUDY_BUDGET,
        }
    }
}

/// Parses `a..=b`, `a..b` (exclusive), `a-b` or a single value.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::InvalidParameter(format!("bad range `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let r = if let Some((a, b)) = s.split_once("..=") {
        num(a)?..=num(b)?
    } else if let Some((a, b)) = s.split_once("..") {
        num(a)?..=num(b)?.checked_sub(1).ok_or_else(bad)?
    } else if let Some((a, b)) = s.split_once('-') {
        num(a)?..=num(b)?
    } else {
        let v = num(s)?;
        v..=v
    };
    if r.is_empty() {
        return Err(bad());
    }
    Ok(r)
}
