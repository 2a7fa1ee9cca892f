use std::fmt::Write as _;

use rayon::prelude::*;

use super::stats::{kendall_tau_b, mean_sd};
use super::RandomDesign;
use crate::error::{Error, Result};
use crate::indices::{
    compute_index_table, format_g, Aggregation, IndexSpec, Similarity as Sim, SimilarityConfig,
};

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationStudySpec {
    pub design: RandomDesign,
    pub indices: Vec<IndexSpec>,
}

impl Default for CorrelationStudySpec {
    fn default() -> Self {
        Self {
            design: RandomDesign::default(),
            indices: correlation_indices(),
        }
    }
}

/// The 26 indices compared pairwise in the published correlation table.
pub fn correlation_indices() -> Vec<IndexSpec> {
    use IndexSpec::*;
    let mut v = vec![
        Stability {
            samples: None,
            seed: 0,
        },
        DeltaL,
        DeltaH,
        Stab2Noe,
        Stab2Oe,
        Stab2Oie,
    ];
    v.extend([0.1, 0.3, 0.5, 0.8].map(|alpha| Robustness { alpha }));
    v.extend([ConceptProbability, Separation, Support, MarginClosedRelaxed]);
    for similarity in [Sim::Smc, Sim::Jaccard] {
        for neighbor_aggregation in [Aggregation::Average, Aggregation::Extreme] {
            for object_aggregation in [Aggregation::Average, Aggregation::Extreme] {
                v.push(IndexSpec::Similarity(SimilarityConfig {
                    similarity,
                    object_aggregation,
                    neighbor_aggregation,
                    ..Default::default()
                }));
            }
        }
    }
    v.extend([
        Predictability(SimilarityConfig::default()),
        Cv,
        Cfc,
        Cu { standard: false },
    ]);
    v
}

/// Mean and standard deviation of pairwise tau over one group of contexts.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationGroup {
    /// `None` for the pooled group over all densities.
    pub density: Option<f64>,
    pub mean: Vec<Vec<f64>>,
    pub sd: Vec<Vec<f64>>,
    /// Contexts contributing to each pair (degenerate pairs excluded).
    pub used: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationResult {
    pub headers: Vec<String>,
    /// One group per density, followed by the pooled group.
    pub groups: Vec<CorrelationGroup>,
    /// Contexts rebuilt because their lattice exceeded the budget.
    pub regenerated: u64,
    /// (context, pair) combinations skipped because one column was constant.
    pub degenerate_pairs: usize,
}

impl CorrelationResult {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    /// Pooled mean tau between two columns, looked up by header.
    pub fn mean_tau(&self, a: &str, b: &str) -> Option<f64> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Some(self.groups.last()?.mean[i][j])
    }

    /// Largest within-density standard deviation over all off-diagonal pairs.
    pub fn max_group_sd(&self) -> f64 {
        let per_density = &self.groups[..self.groups.len() - 1];
        per_density
            .iter()
            .flat_map(|g| {
                g.sd.iter().enumerate().flat_map(move |(i, row)| {
                    row.iter()
                        .enumerate()
                        .filter(move |(j, _)| *j != i)
                        .map(|(_, &v)| v)
                })
            })
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max)
    }

    /// Long format: `density,index_a,index_b,mean_tau,sd_tau`, with
    /// `density = all` for the pooled group.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("density,index_a,index_b,mean_tau,sd_tau\n");
        for g in &self.groups {
            let density = g.density.map_or_else(|| "all".to_string(), format_g);
            for (i, a) in self.headers.iter().enumerate() {
                for (j, b) in self.headers.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{density},{},{},{},{}",
                        quote(a),
                        quote(b),
                        format_g(g.mean[i][j]),
                        format_g(g.sd[i][j])
                    );
                }
            }
        }
        out
    }
}

pub(crate) fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Per context: build the lattice, tabulate every index, and take tau-b
/// between each pair of columns over the concepts.
pub fn run_correlation_study(spec: &CorrelationStudySpec) -> Result<CorrelationResult> {
    spec.design.validate()?;
    if spec.indices.is_empty() {
        return Err(Error::InvalidParameter("no indices given".into()));
    }
    for s in &spec.indices {
        s.validate()?;
    }
    let k = spec.indices.len();
    let items = spec.design.items();
    type Matrix = Vec<Vec<Option<f64>>>;
    let per_context: Vec<(usize, Matrix, u64)> = items
        .par_iter()
        .map(|&(g, i)| -> Result<_> {
            let (lat, attempts) = spec.design.lattice(g, i)?;
            let table = compute_index_table(&lat, &spec.indices)?;
            let mut m = vec![vec![None; k]; k];
            if lat.len() >= 2 {
                for a in 0..k {
                    for b in a..k {
                        let t = kendall_tau_b(table.column(a), table.column(b))?;
                        let v = (!t.degenerate).then_some(t.tau);
                        m[a][b] = v;
                        m[b][a] = v;
                    }
                }
            }
            Ok((g, m, attempts))
        })
        .collect::<Result<_>>()?;

    let regenerated = per_context.iter().map(|p| p.2).sum();
    let degenerate_pairs = per_context
        .iter()
        .map(|(_, m, _)| {
            (0..k)
                .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
                .filter(|&(a, b)| m[a][b].is_none())
                .count()
        })
        .sum();

    let group = |density: Option<f64>, members: &[&Matrix]| {
        let mut mean = vec![vec![f64::NAN; k]; k];
        let mut sd = vec![vec![f64::NAN; k]; k];
        let mut used = vec![vec![0; k]; k];
        for a in 0..k {
            for b in 0..k {
                let vals: Vec<f64> = members.iter().filter_map(|m| m[a][b]).collect();
                (mean[a][b], sd[a][b]) = mean_sd(&vals);
                used[a][b] = vals.len();
            }
        }
        CorrelationGroup {
            density,
            mean,
            sd,
            used,
        }
    };
    let mut groups: Vec<CorrelationGroup> = spec
        .design
        .densities
        .iter()
        .enumerate()
        .map(|(gi, &d)| {
            let members: Vec<&Matrix> = per_context
                .iter()
                .filter(|p| p.0 == gi)
                .map(|p| &p.1)
                .collect();
            group(Some(d), &members)
        })
        .collect();
    let all: Vec<&Matrix> = per_context.iter().map(|p| &p.1).collect();
    groups.push(group(None, &all));

    Ok(CorrelationResult {
        headers: spec.indices.iter().map(ToString::to_string).collect(),
        groups,
        regenerated,
        degenerate_pairs,
    })
}
