use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::Result;
use crate::fixtures;
use crate::indices::{
    compute_index_table, format_g, Aggregation, IndexSpec, Similarity as Sim, SimilarityConfig,
};
use crate::lattice::ConceptLattice;

/// Length of each ranking.
pub const TOP_K: usize = 8;

/// Indices ranked in the meta demo. Both margin-closed variants are kept.
pub fn meta_indices() -> Vec<IndexSpec> {
    use IndexSpec::*;
    let sim = |similarity| {
        IndexSpec::Similarity(SimilarityConfig {
            similarity,
            object_aggregation: Aggregation::Average,
            neighbor_aggregation: Aggregation::Average,
            ..Default::default()
        })
    };
    vec![
        ConceptProbability,
        Separation,
        Monocle,
        MarginClosed {
            alpha: 0.1,
            min_support: 0.0,
        },
        MarginClosedRelaxed,
        Support,
        Stability {
            samples: None,
            seed: 0,
        },
        DeltaL,
        DeltaH,
        Stab2Noe,
        Stab2Oe,
        Stab2Oie,
        Cv,
        Cfc,
        Cu { standard: false },
        Predictability(SimilarityConfig::default()),
        sim(Sim::Jaccard),
        sim(Sim::Smc),
        Robustness { alpha: 0.3 },
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ranking {
    pub index: String,
    /// `(concept id, value)`, best first.
    pub top: Vec<(usize, f64)>,
}

#[derive(Clone, Debug)]
pub struct MetaReport {
    pub lattice: ConceptLattice,
    pub rankings: Vec<Ranking>,
    /// Share of rankings that include each concept.
    pub frequencies: Vec<f64>,
}

impl MetaReport {
    /// Concepts by decreasing frequency (ties by id), skipping those never
    /// ranked.
    pub fn most_frequent(&self) -> Vec<(usize, f64)> {
        let mut v: Vec<(usize, f64)> = self
            .frequencies
            .iter()
            .copied()
            .enumerate()
            .filter(|p| p.1 > 0.0)
            .collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }

    /// `index,rank,concept,value` rows followed by nothing else.
    pub fn rankings_csv(&self) -> String {
        let mut out = String::from("index,rank,concept,value\n");
        for r in &self.rankings {
            for (rank, (c, v)) in r.top.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{c},{}",
                    super::correlation::quote(&r.index),
                    rank + 1,
                    format_g(*v)
                );
            }
        }
        out
    }

    /// Human-readable summary naming concepts by extent and intent.
    pub fn render(&self) -> String {
        let ctx = self.lattice.context();
        let names = |c: usize| {
            let concept = self.lattice.concept(c);
            let ext: Vec<&str> = concept
                .extent
                .iter()
                .map(|g| ctx.object_names()[g].as_str())
                .collect();
            let int: Vec<&str> = concept
                .intent
                .iter()
                .map(|m| ctx.attribute_names()[m].as_str())
                .collect();
            format!("{{{}}} x {{{}}}", ext.join(", "), int.join(", "))
        };
        let mut out = format!(
            "{} concepts, {} rankings of the top {TOP_K}\n\n",
            self.lattice.len(),
            self.rankings.len()
        );
        for (c, f) in self.most_frequent() {
            let _ = writeln!(out, "{:.3}  #{c:<3} {}", f, names(c));
        }
        out
    }
}

/// Best `k` concepts for one column; ties and NaN values are ordered by id,
/// with NaN after every number.
pub fn top_k(values: &[f64], higher_is_better: bool, k: usize) -> Vec<(usize, f64)> {
    let mut ids: Vec<usize> = (0..values.len()).collect();
    ids.sort_by(|&a, &b| {
        let (x, y) = (values[a], values[b]);
        let ord = match (x.is_nan(), y.is_nan()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ if higher_is_better => y.total_cmp(&x),
            _ => x.total_cmp(&y),
        };
        ord.then(a.cmp(&b))
    });
    ids.into_iter().take(k).map(|c| (c, values[c])).collect()
}

/// Ranks the concepts of the bundled index context by every meta index.
pub fn run_meta_demo() -> Result<MetaReport> {
    let lattice = ConceptLattice::build(&fixtures::table1(), &Default::default())?;
    let specs = meta_indices();
    let table = compute_index_table(&lattice, &specs)?;
    let rankings: Vec<Ranking> = specs
        .iter()
        .enumerate()
        .map(|(i, s)| Ranking {
            index: s.to_string(),
            top: top_k(table.column(i), s.higher_is_better(), TOP_K),
        })
        .collect();
    let mut frequencies = vec![0.0; lattice.len()];
    for r in &rankings {
        for &(c, _) in &r.top {
            frequencies[c] += 1.0;
        }
    }
    for f in &mut frequencies {
        *f /= rankings.len() as f64;
    }
    Ok(MetaReport {
        lattice,
        rankings,
        frequencies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_breaks_ties_by_id() {
        let v = [0.5, 0.9, 0.5, f64::NAN, 0.9];
        let ids: Vec<usize> = top_k(&v, true, 5).iter().map(|p| p.0).collect();
        assert_eq!(ids, [1, 4, 0, 2, 3]);
        let ids: Vec<usize> = top_k(&v, false, 3).iter().map(|p| p.0).collect();
        assert_eq!(ids, [0, 2, 1]);
    }

    #[test]
    fn demo_shape() {
        let r = run_meta_demo().unwrap();
        assert_eq!(r.lattice.len(), 73);
        let n = r.rankings.len() as f64;
        for rk in &r.rankings {
            assert_eq!(rk.top.len(), TOP_K);
        }
        for &f in &r.frequencies {
            assert!((0.0..=1.0).contains(&f));
            let k = f * n;
            assert!((k - k.round()).abs() < 1e-9);
        }
    }
}
