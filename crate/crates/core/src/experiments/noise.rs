use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::correlation::quote;
use super::stats::auc;
use crate::context::{apply_noise, keyed_rng, FormalContext, NoiseSpec};
use crate::error::{Error, Result};
use crate::indices::{compute_index_table, format_g, IndexSpec};
use crate::lattice::{ConceptLattice, LatticeOptions};
use crate::{AttributeSet, ObjectSet};

/// How a noisy concept is recognised as one of the original concepts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Matching {
    #[default]
    Intent,
    Extent,
    Both,
}

impl FromStr for Matching {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intent" => Ok(Matching::Intent),
            "extent" => Ok(Matching::Extent),
            "both" => Ok(Matching::Both),
            _ => Err(Error::InvalidParameter(format!(
                "matching must be intent, extent or both, got `{s}`"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NoiseStudySpec {
    pub base: FormalContext,
    pub noise_rates: Vec<f64>,
    pub trials_per_rate: usize,
    pub indices: Vec<IndexSpec>,
    pub seed: u64,
    pub matching: Matching,
    pub budget: usize,
}

impl NoiseStudySpec {
    pub fn validate(&self) -> Result<()> {
        if self.noise_rates.is_empty() {
            return Err(Error::InvalidParameter("no noise rates given".into()));
        }
        if let Some(r) = self.noise_rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::InvalidParameter(format!(
                "noise rate {r} outside [0, 1]"
            )));
        }
        if self.trials_per_rate == 0 {
            return Err(Error::InvalidParameter(
                "trials per rate must be at least 1".into(),
            ));
        }
        if self.indices.is_empty() {
            return Err(Error::InvalidParameter("no indices given".into()));
        }
        self.indices.iter().try_for_each(IndexSpec::validate)
    }
}

/// The noisy lattice of one trial and the ground-truth label of each of its
/// concepts.
#[derive(Clone, Debug)]
pub struct NoiseTrial {
    pub lattice: ConceptLattice,
    pub labels: Vec<bool>,
}

struct Originals {
    intents: HashSet<AttributeSet>,
    extents: HashSet<ObjectSet>,
    pairs: HashSet<(ObjectSet, AttributeSet)>,
}

impl Originals {
    fn new(lat: &ConceptLattice) -> Self {
        let cs = lat.concepts();
        Self {
            intents: cs.iter().map(|c| c.intent.clone()).collect(),
            extents: cs.iter().map(|c| c.extent.clone()).collect(),
            pairs: cs
                .iter()
                .map(|c| (c.extent.clone(), c.intent.clone()))
                .collect(),
        }
    }

    fn labels(&self, noisy: &ConceptLattice, matching: Matching) -> Vec<bool> {
        noisy
            .concepts()
            .iter()
            .map(|c| match matching {
                Matching::Intent => self.intents.contains(&c.intent),
                Matching::Extent => self.extents.contains(&c.extent),
                Matching::Both => self.pairs.contains(&(c.extent.clone(), c.intent.clone())),
            })
            .collect()
    }
}

fn options(budget: usize) -> LatticeOptions {
    LatticeOptions {
        min_support: 0,
        budget,
    }
}

/// Trial `trial` at rate index `rate_index`: flips cells of the base context
/// and labels the concepts of the resulting lattice.
pub fn noise_trial(spec: &NoiseStudySpec, rate_index: usize, trial: usize) -> Result<NoiseTrial> {
    let original = ConceptLattice::build(&spec.base, &options(spec.budget))?;
    trial_with(spec, &Originals::new(&original), rate_index, trial)
}

fn trial_with(
    spec: &NoiseStudySpec,
    originals: &Originals,
    rate_index: usize,
    trial: usize,
) -> Result<NoiseTrial> {
    let rate = *spec
        .noise_rates
        .get(rate_index)
        .ok_or_else(|| Error::InvalidParameter(format!("no noise rate with index {rate_index}")))?;
    let key = ((rate_index as u64) << 32) | trial as u64;
    let seed = keyed_rng(spec.seed, key).gen();
    let noisy = apply_noise(&spec.base, &NoiseSpec { rate, seed })?;
    let lattice = ConceptLattice::build(&noisy, &options(spec.budget))?;
    let labels = originals.labels(&lattice, spec.matching);
    Ok(NoiseTrial { lattice, labels })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseCell {
    pub rate: f64,
    pub index: String,
    /// NaN when every trial was dropped.
    pub mean_auc: f64,
    pub trials_used: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseResult {
    pub cells: Vec<NoiseCell>,
    /// Per rate, trials dropped because every concept had the same label.
    pub dropped: Vec<(f64, usize)>,
}

impl NoiseResult {
    pub fn mean_auc(&self, rate: f64, index: &str) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| (c.rate - rate).abs() < 1e-12 && c.index == index)
            .map(|c| c.mean_auc)
    }

    /// `rate,index,mean_auc,trials_used`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rate,index,mean_auc,trials_used\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                format_g(c.rate),
                quote(&c.index),
                format_g(c.mean_auc),
                c.trials_used
            );
        }
        out
    }
}

/// Averages, per rate and index, the AUC of separating original from
/// noise-born concepts. Lower-is-better indices are negated first.
pub fn run_noise_study(spec: &NoiseStudySpec) -> Result<NoiseResult> {
    spec.validate()?;
    let original = ConceptLattice::build(&spec.base, &options(spec.budget))?;
    let originals = Originals::new(&original);
    let items: Vec<(usize, usize)> = (0..spec.noise_rates.len())
        .flat_map(|r| (0..spec.trials_per_rate).map(move |t| (r, t)))
        .collect();
    let per_trial: Vec<(usize, Option<Vec<f64>>)> = items
        .par_iter()
        .map(|&(r, t)| -> Result<_> {
            let trial = trial_with(spec, &originals, r, t)?;
            let positives = trial.labels.iter().filter(|&&l| l).count();
            if positives == 0 || positives == trial.labels.len() {
                return Ok((r, None));
            }
            let table = compute_index_table(&trial.lattice, &spec.indices)?;
            let aucs = spec
                .indices
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let scores: Vec<f64> = if s.higher_is_better() {
                        table.column(i).to_vec()
                    } else {
                        table.column(i).iter().map(|v| -v).collect()
                    };
                    auc(&scores, &trial.labels)
                })
                .collect::<Result<_>>()?;
            Ok((r, Some(aucs)))
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    let mut dropped = Vec::new();
    for (r, &rate) in spec.noise_rates.iter().enumerate() {
        let used: Vec<&Vec<f64>> = per_trial
            .iter()
            .filter(|p| p.0 == r)
            .filter_map(|p| p.1.as_ref())
            .collect();
        dropped.push((rate, spec.trials_per_rate - used.len()));
        for (i, s) in spec.indices.iter().enumerate() {
            let mean_auc = if used.is_empty() {
                f64::NAN
            } else {
                used.iter().map(|a| a[i]).sum::<f64>() / used.len() as f64
            };
            cells.push(NoiseCell {
                rate,
                index: s.to_string(),
                mean_auc,
                trials_used: used.len(),
            });
        }
    }
    Ok(NoiseResult { cells, dropped })
}
