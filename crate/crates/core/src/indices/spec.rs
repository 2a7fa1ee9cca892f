//! Typed index specifications and their `kind:param=value,...` syntax.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::basic_level::{Aggregation, Similarity, SimilarityConfig};
use crate::error::{Error, Result};
use crate::measures::AggregatorKind;

/// Which level of level-wise stability to use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Level {
    Fixed(usize),
    /// `⌈rate · |A|⌉`, clamped to `[2, |A|−1]`.
    Rate(f64),
}

impl Level {
    /// The level for an extent of size `n`.
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Level::Fixed(j) => j,
            Level::Rate(r) => {
                let j = (r * n as f64).ceil() as usize;
                j.clamp(2, n.saturating_sub(1).max(2))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IndexSpec {
    Support,
    /// Exact, or Monte Carlo when `samples` is set.
    Stability {
        samples: Option<u64>,
        seed: u64,
    },
    LStab,
    LStabLower,
    DeltaL,
    DeltaH,
    Stab2Noe,
    Stab2Oe,
    Stab2Oie,
    LevelwiseStability {
        level: Level,
    },
    IntegralStabilityMinor {
        level: Level,
    },
    IntegralStabilityMajor {
        level: Level,
    },
    IntegralStability,
    Robustness {
        alpha: f64,
    },
    ConceptProbability,
    Separation,
    Monocle,
    DeltaTcfi {
        delta: f64,
        literal: bool,
    },
    MarginClosed {
        alpha: f64,
        min_support: f64,
    },
    MarginClosedRelaxed,
    Similarity(SimilarityConfig),
    Predictability(SimilarityConfig),
    Cv,
    Cfc,
    Cu {
        standard: bool,
    },
}

pub const KINDS: [&str; 25] = [
    "support",
    "stability",
    "lstab",
    "lstab_lower",
    "delta_l",
    "delta_h",
    "stab2noe",
    "stab2oe",
    "stab2oie",
    "levelwise_stability",
    "integral_stability_minor",
    "integral_stability_major",
    "integral_stability",
    "robustness",
    "concept_probability",
    "separation",
    "monocle",
    "delta_tcfi",
    "margin_closed",
    "margin_closed_relaxed",
    "similarity",
    "predictability",
    "cv",
    "cfc",
    "cu",
];

impl IndexSpec {
    pub fn kind(&self) -> &'static str {
        use IndexSpec::*;
        match self {
            Support => "support",
            Stability { .. } => "stability",
            LStab => "lstab",
            LStabLower => "lstab_lower",
            DeltaL => "delta_l",
            DeltaH => "delta_h",
            Stab2Noe => "stab2noe",
            Stab2Oe => "stab2oe",
            Stab2Oie => "stab2oie",
            LevelwiseStability { .. } => "levelwise_stability",
            IntegralStabilityMinor { .. } => "integral_stability_minor",
            IntegralStabilityMajor { .. } => "integral_stability_major",
            IntegralStability => "integral_stability",
            Robustness { .. } => "robustness",
            ConceptProbability => "concept_probability",
            Separation => "separation",
            Monocle => "monocle",
            DeltaTcfi { .. } => "delta_tcfi",
            MarginClosed { .. } => "margin_closed",
            MarginClosedRelaxed => "margin_closed_relaxed",
            Similarity(_) => "similarity",
            Predictability(_) => "predictability",
            Cv => "cv",
            Cfc => "cfc",
            Cu { .. } => "cu",
        }
    }

    /// Ranking direction. Only the relaxed margin is "lower is better": a
    /// large ratio means a child keeps most of the support.
    pub fn higher_is_better(&self) -> bool {
        !matches!(self, IndexSpec::MarginClosedRelaxed)
    }

    /// True when the index needs every subconcept of a concept.
    pub fn needs_complete_lattice(&self) -> bool {
        use IndexSpec::*;
        !matches!(
            self,
            Support
                | Stability {
                    samples: Some(_),
                    ..
                }
                | ConceptProbability
                | Separation
                | Monocle
                | DeltaTcfi { .. }
                | MarginClosed { .. }
                | MarginClosedRelaxed
                | DeltaH
                | Cv
                | Cfc
                | Cu { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        use IndexSpec::*;
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {v}"
                )))
            }
        };
        match self {
            Stability {
                samples: Some(0), ..
            } => Err(Error::InvalidParameter("samples must be at least 1".into())),
            LevelwiseStability { level }
            | IntegralStabilityMinor { level }
            | IntegralStabilityMajor { level } => match *level {
                Level::Rate(r) if !(r > 0.0 && r < 1.0) => Err(Error::InvalidParameter(format!(
                    "rate must lie in (0, 1), got {r}"
                ))),
                _ => Ok(()),
            },
            Robustness { alpha } => unit("alpha", *alpha),
            DeltaTcfi { delta, .. } => unit("delta", *delta),
            MarginClosed { alpha, min_support } => {
                unit("alpha", *alpha)?;
                unit("min_support", *min_support)
            }
            Similarity(cfg) | Predictability(cfg) => cfg.validate(),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for IndexSpec {
    /// Required parameters always, optional ones only when not default.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use IndexSpec::*;
        let mut params: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| params.push((k.to_string(), v));
        match self {
            Stability { samples, seed } => {
                if let Some(s) = samples {
                    push("samples", s.to_string());
                    push("seed", seed.to_string());
                }
            }
            LevelwiseStability { level }
            | IntegralStabilityMinor { level }
            | IntegralStabilityMajor { level } => match level {
                Level::Fixed(j) => push("level", j.to_string()),
                Level::Rate(r) => push("rate", r.to_string()),
            },
            Robustness { alpha } => push("alpha", alpha.to_string()),
            DeltaTcfi { delta, literal } => {
                push("delta", delta.to_string());
                if *literal {
                    push("literal", "true".into());
                }
            }
            MarginClosed { alpha, min_support } => {
                push("alpha", alpha.to_string());
                if *min_support != 0.0 {
                    push("min_support", min_support.to_string());
                }
            }
            Similarity(cfg) | Predictability(cfg) => {
                let d = SimilarityConfig::default();
                let is_sim = matches!(self, Similarity(_));
                if is_sim && cfg.similarity != d.similarity {
                    push("sim", cfg.similarity.to_string());
                }
                if is_sim && cfg.object_aggregation != d.object_aggregation {
                    push("obj", cfg.object_aggregation.to_string());
                }
                if cfg.neighbor_aggregation != d.neighbor_aggregation {
                    push("nb", cfg.neighbor_aggregation.to_string());
                }
                if cfg.tnorm != d.tnorm {
                    push("tnorm", cfg.tnorm.to_string());
                }
                if cfg.nonmonotone_threshold != d.nonmonotone_threshold {
                    push("threshold", cfg.nonmonotone_threshold.to_string());
                }
            }
            Cu { standard } => {
                if *standard {
                    push("standard", "true".into());
                }
            }
            _ => {}
        }
        f.write_str(self.kind())?;
        for (i, (k, v)) in params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

struct Params {
    kind: String,
    map: BTreeMap<String, String>,
}

impl Params {
    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| {
                Error::InvalidParameter(format!("`{}`: bad value `{v}` for `{key}`", self.kind))
            }),
        }
    }

    fn require<T: FromStr>(&mut self, key: &str) -> Result<T> {
        self.take(key)?.ok_or_else(|| {
            Error::InvalidParameter(format!("`{}` needs parameter `{key}`", self.kind))
        })
    }

    fn level(&mut self) -> Result<Level> {
        match (self.take::<usize>("level")?, self.take::<f64>("rate")?) {
            (Some(j), None) => Ok(Level::Fixed(j)),
            (None, Some(r)) => Ok(Level::Rate(r)),
            _ => Err(Error::InvalidParameter(format!(
                "`{}` needs exactly one of `level` or `rate`",
                self.kind
            ))),
        }
    }

    fn similarity(&mut self, with_objects: bool) -> Result<SimilarityConfig> {
        let d = SimilarityConfig::default();
        let (similarity, object_aggregation) = if with_objects {
            (
                self.take::<Similarity>("sim")?.unwrap_or(d.similarity),
                self.take::<Aggregation>("obj")?
                    .unwrap_or(d.object_aggregation),
            )
        } else {
            (d.similarity, d.object_aggregation)
        };
        Ok(SimilarityConfig {
            similarity,
            object_aggregation,
            neighbor_aggregation: self.take("nb")?.unwrap_or(d.neighbor_aggregation),
            tnorm: self.take::<AggregatorKind>("tnorm")?.unwrap_or(d.tnorm),
            nonmonotone_threshold: self.take("threshold")?.unwrap_or(d.nonmonotone_threshold),
        })
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::InvalidParameter(format!(
                "`{}` has no parameter `{k}`",
                self.kind
            ))),
        }
    }
}

impl FromStr for IndexSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use IndexSpec::*;
        let s = s.trim();
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut map = BTreeMap::new();
        for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = pair.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("`{kind}`: expected key=value, got `{pair}`"))
            })?;
            if map
                .insert(k.trim().to_string(), v.trim().to_string())
                .is_some()
            {
                return Err(Error::InvalidParameter(format!("`{kind}`: repeated `{k}`")));
            }
        }
        let mut p = Params {
            kind: kind.to_string(),
            map,
        };
        let spec = match kind {
            "support" => Support,
            "stability" => {
                let samples = p.take("samples")?;
                let seed = p.take("seed")?.unwrap_or(0);
                Stability { samples, seed }
            }
            "lstab" => LStab,
            "lstab_lower" => LStabLower,
            "delta_l" => DeltaL,
            "delta_h" => DeltaH,
            "stab2noe" => Stab2Noe,
            "stab2oe" => Stab2Oe,
            "stab2oie" => Stab2Oie,
            "levelwise_stability" => LevelwiseStability { level: p.level()? },
            "integral_stability_minor" => IntegralStabilityMinor { level: p.level()? },
            "integral_stability_major" => IntegralStabilityMajor { level: p.level()? },
            "integral_stability" => IntegralStability,
            "robustness" => Robustness {
                alpha: p.require("alpha")?,
            },
            "concept_probability" => ConceptProbability,
            "separation" => Separation,
            "monocle" => Monocle,
            "delta_tcfi" => DeltaTcfi {
                delta: p.require("delta")?,
                literal: p.take("literal")?.unwrap_or(false),
            },
            "margin_closed" => MarginClosed {
                alpha: p.require("alpha")?,
                min_support: p.take("min_support")?.unwrap_or(0.0),
            },
            "margin_closed_relaxed" => MarginClosedRelaxed,
            "similarity" => Similarity(p.similarity(true)?),
            "predictability" => Predictability(p.similarity(false)?),
            "cv" => Cv,
            "cfc" => Cfc,
            "cu" => Cu {
                standard: p.take("standard")?.unwrap_or(false),
            },
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown index kind `{kind}` (valid: {})",
                    KINDS.join(", ")
                )))
            }
        };
        p.finish()?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Splits a comma-separated list of specs. A token with `=` but no `:`
/// continues the parameters of the spec before it, so
/// `support,robustness:alpha=0.3,similarity:sim=jaccard,nb=m` gives three
/// specs.
pub fn parse_spec_list(list: &str) -> Result<Vec<IndexSpec>> {
    let mut groups: Vec<String> = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match groups.last_mut() {
            Some(prev) if token.contains('=') && !token.contains(':') => {
                prev.push(',');
                prev.push_str(token);
            }
            _ => groups.push(token.to_string()),
        }
    }
    groups.iter().map(|g| g.parse()).collect()
}
