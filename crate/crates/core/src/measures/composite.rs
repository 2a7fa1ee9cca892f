//! Composite indices: a base measure collected over a scope around a
//! concept, optionally compared with the concept's own value, then
//! aggregated.

use std::fmt;
use std::str::FromStr;

use super::aggregate::{aggregate, AggregatorKind};
use super::rules::{contingency_from_sets, rule_measure, MeasureKind};
use crate::context::{AttributeSet, FormalContext};
use crate::error::{Error, Result};
use crate::indices::{compute_index_table, IndexSpec};
use crate::lattice::ConceptLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scope {
    SelfConcept,
    UpperNeighbors,
    LowerNeighbors,
    AllDescendants,
    /// Attributes outside the intent; the base measure is a rule `B → {m}`.
    OutOfIntentAttributes,
}

impl Scope {
    pub fn name(self) -> &'static str {
        match self {
            Scope::SelfConcept => "self",
            Scope::UpperNeighbors => "upper",
            Scope::LowerNeighbors => "lower",
            Scope::AllDescendants => "descendants",
            Scope::OutOfIntentAttributes => "outside",
        }
    }
}

impl FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "self" => Scope::SelfConcept,
            "upper" | "upper_neighbors" => Scope::UpperNeighbors,
            "lower" | "lower_neighbors" => Scope::LowerNeighbors,
            "descendants" | "all_descendants" => Scope::AllDescendants,
            "outside" | "out_of_intent_attributes" => Scope::OutOfIntentAttributes,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown scope `{s}` (valid: self, upper, lower, descendants, outside)"
                )))
            }
        })
    }
}

/// Itemset measures of an intent `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ItemsetMeasure {
    /// `P(D)`
    Support,
    /// `P(D) / Π_{m∈D} P(m)`
    Lift,
    /// `P(D) − Π_{m∈D} P(m)`
    PiatetskyShapiro,
}

impl ItemsetMeasure {
    pub fn name(self) -> &'static str {
        match self {
            ItemsetMeasure::Support => "support",
            ItemsetMeasure::Lift => "lift",
            ItemsetMeasure::PiatetskyShapiro => "piatetsky_shapiro",
        }
    }

    pub fn eval(self, ctx: &FormalContext, intent: &AttributeSet) -> f64 {
        let n = ctx.n_objects() as f64;
        let p = ctx.common_objects(intent).count() as f64 / n;
        let indep: f64 = intent
            .iter()
            .map(|m| ctx.column(m).count() as f64 / n)
            .product();
        match self {
            ItemsetMeasure::Support => p,
            ItemsetMeasure::Lift => {
                if indep == 0.0 {
                    if p == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    p / indep
                }
            }
            ItemsetMeasure::PiatetskyShapiro => p - indep,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BaseMeasure {
    /// Only for the attribute scope.
    Rule(MeasureKind),
    Itemset(ItemsetMeasure),
    Index(IndexSpec),
}

impl fmt::Display for BaseMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseMeasure::Rule(k) => write!(f, "{k}"),
            BaseMeasure::Itemset(m) => f.write_str(m.name()),
            BaseMeasure::Index(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Difference,
    Ratio,
    LogRatio,
    None,
}

impl Comparison {
    /// `el − d`, `el / d` or `log2(el / d)`.
    pub fn apply(self, el: f64, d: f64) -> f64 {
        match self {
            Comparison::Difference => el - d,
            Comparison::Ratio => el / d,
            Comparison::LogRatio => (el / d).log2(),
            Comparison::None => el,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Comparison::Difference => "difference",
            Comparison::Ratio => "ratio",
            Comparison::LogRatio => "log_ratio",
            Comparison::None => "none",
        }
    }
}

impl FromStr for Comparison {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "difference" => Comparison::Difference,
            "ratio" => Comparison::Ratio,
            "log_ratio" => Comparison::LogRatio,
            "none" => Comparison::None,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown comparison `{s}` (valid: difference, ratio, log_ratio, none)"
                )))
            }
        })
    }
}

/// Whether each element is compared before aggregation or the aggregate is
/// compared once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Order {
    #[default]
    CompareThenAggregate,
    AggregateThenCompare,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositeIndexSpec {
    pub scope: Scope,
    pub base: BaseMeasure,
    pub comparison: Comparison,
    pub aggregator: AggregatorKind,
    pub order: Order,
}

impl fmt::Display for CompositeIndexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}",
            self.scope.name(),
            self.base,
            self.comparison.name(),
            self.aggregator
        )
    }
}

impl FromStr for CompositeIndexSpec {
    type Err = Error;

    /// `scope:measure:comparison:aggregator`. The measure part may itself
    /// contain `:` (an index spec with parameters).
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() < 4 {
            return Err(Error::InvalidParameter(format!(
                "composite spec `{s}` must look like scope:measure:comparison:aggregator"
            )));
        }
        let scope: Scope = parts[0].parse()?;
        let measure = parts[1..parts.len() - 2].join(":");
        let comparison: Comparison = parts[parts.len() - 2].parse()?;
        let aggregator: AggregatorKind = parts[parts.len() - 1].parse()?;
        let base = if scope == Scope::OutOfIntentAttributes {
            BaseMeasure::Rule(measure.parse()?)
        } else {
            match measure.as_str() {
                "support" => BaseMeasure::Itemset(ItemsetMeasure::Support),
                "lift" => BaseMeasure::Itemset(ItemsetMeasure::Lift),
                "piatetsky_shapiro" => BaseMeasure::Itemset(ItemsetMeasure::PiatetskyShapiro),
                other => BaseMeasure::Index(other.parse()?),
            }
        };
        let spec = CompositeIndexSpec {
            scope,
            base,
            comparison,
            aggregator,
            order: Order::default(),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl CompositeIndexSpec {
    pub fn validate(&self) -> Result<()> {
        let attr_scope = self.scope == Scope::OutOfIntentAttributes;
        match (&self.base, attr_scope) {
            (BaseMeasure::Rule(_), false) => Err(Error::InvalidParameter(
                "rule measures need the `outside` scope".into(),
            )),
            (BaseMeasure::Itemset(_) | BaseMeasure::Index(_), true) => Err(
                Error::InvalidParameter("the `outside` scope needs a rule measure".into()),
            ),
            (BaseMeasure::Rule(_), true) if self.comparison != Comparison::None => {
                Err(Error::InvalidParameter(
                    "the `outside` scope has no reference value; use comparison `none`".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompositeValue {
    pub value: f64,
    /// The scope had no elements; `value` is then 0.
    pub empty_scope: bool,
}

/// Evaluates a composite index for concept `c`.
pub fn evaluate_composite(
    lat: &ConceptLattice,
    c: usize,
    spec: &CompositeIndexSpec,
) -> Result<CompositeValue> {
    spec.validate()?;
    let concept = lat.get(c)?;
    let ctx = lat.context();
    let (elements, own) = match &spec.base {
        BaseMeasure::Rule(kind) => {
            let values = (0..ctx.n_attributes())
                .filter(|&m| !concept.intent.contains(m))
                .map(|m| {
                    let consequent = AttributeSet::from_indices(ctx.n_attributes(), [m]);
                    contingency_from_sets(ctx, &concept.intent, &consequent)
                        .map(|t| rule_measure(*kind, &t))
                })
                .collect::<Result<Vec<f64>>>()?;
            (values, f64::NAN)
        }
        base => {
            let ids: Vec<usize> = match spec.scope {
                Scope::SelfConcept => vec![c],
                Scope::UpperNeighbors => lat.upper_neighbors(c).to_vec(),
                Scope::LowerNeighbors => lat.lower_neighbors(c).to_vec(),
                Scope::AllDescendants => lat
                    .descendants(c)?
                    .into_iter()
                    .filter(|&d| d != c)
                    .collect(),
                Scope::OutOfIntentAttributes => unreachable!("validated"),
            };
            let value_of: Box<dyn Fn(usize) -> f64> = match base {
                BaseMeasure::Itemset(m) => {
                    let m = *m;
                    Box::new(move |d| m.eval(ctx, &lat.concept(d).intent))
                }
                BaseMeasure::Index(s) => {
                    let table = compute_index_table(lat, std::slice::from_ref(s))?;
                    let col = table.column(0).to_vec();
                    Box::new(move |d| col[d])
                }
                BaseMeasure::Rule(_) => unreachable!("handled above"),
            };
            (ids.iter().map(|&d| value_of(d)).collect(), value_of(c))
        }
    };
    if elements.is_empty() {
        return Ok(CompositeValue {
            value: 0.0,
            empty_scope: true,
        });
    }
    let value = match spec.order {
        Order::CompareThenAggregate => {
            let compared: Vec<f64> = elements
                .iter()
                .map(|&el| spec.comparison.apply(el, own))
                .collect();
            aggregate(&compared, spec.aggregator)?
        }
        Order::AggregateThenCompare => spec
            .comparison
            .apply(aggregate(&elements, spec.aggregator)?, own),
    };
    Ok(CompositeValue {
        value,
        empty_scope: false,
    })
}

/// `min` over upper neighbors of `PS(D) − PS(B)`; 0 for the top concept.
pub fn index1(lat: &ConceptLattice, c: usize) -> Result<f64> {
    let spec = CompositeIndexSpec {
        scope: Scope::UpperNeighbors,
        base: BaseMeasure::Itemset(ItemsetMeasure::PiatetskyShapiro),
        comparison: Comparison::Difference,
        aggregator: AggregatorKind::Minimum,
        order: Order::CompareThenAggregate,
    };
    Ok(evaluate_composite(lat, c, &spec)?.value)
}

/// `|M∖B| · Σ_{m∉B} 1/P(m|B)` as printed, or with `harmonic` the harmonic
/// mean `|M∖B| / Σ 1/P(m|B)`. A zero conditional probability makes the
/// printed form `+∞` and the harmonic form 0; `M∖B = ∅` gives 0.
pub fn index2(ctx: &FormalContext, intent: &AttributeSet, harmonic: bool) -> Result<f64> {
    if intent.universe() != ctx.n_attributes() {
        return Err(Error::Dimension(format!(
            "intent sized for {} attributes, context has {}",
            intent.universe(),
            ctx.n_attributes()
        )));
    }
    let extent = ctx.common_objects(intent);
    let a = extent.count() as f64;
    let outside: Vec<usize> = (0..ctx.n_attributes())
        .filter(|&m| !intent.contains(m))
        .collect();
    if outside.is_empty() {
        return Ok(0.0);
    }
    let inv_sum: f64 = outside
        .iter()
        .map(|&m| {
            let hit = extent.intersection_count(ctx.column(m)) as f64;
            if hit == 0.0 {
                f64::INFINITY
            } else {
                a / hit
            }
        })
        .sum();
    let k = outside.len() as f64;
    Ok(if harmonic { k / inv_sum } else { k * inv_sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::k1;
    use crate::lattice::enumerate_concepts;

    #[test]
    fn k1_examples() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        assert_eq!(index1(&lat, 0).unwrap(), 0.0);
        // upper neighbor of ({g1,g2},{a}) is the top; PS(∅) = PS({a}) = 0
        assert_eq!(index1(&lat, 2).unwrap(), 0.0);
        let ctx = lat.context();
        assert_eq!(index2(ctx, &lat.concept(2).intent, false).unwrap(), 2.0);
        assert_eq!(index2(ctx, &lat.concept(2).intent, true).unwrap(), 0.5);
        assert_eq!(index2(ctx, &lat.concept(3).intent, false).unwrap(), 0.0);
    }

    #[test]
    fn self_scope_is_the_base() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        let spec: CompositeIndexSpec = "self:support:none:sum".parse().unwrap();
        assert_eq!(evaluate_composite(&lat, 1, &spec).unwrap().value, 2.0 / 3.0);
        let spec: CompositeIndexSpec = "self:robustness:alpha=0.5:none:minimum".parse().unwrap();
        assert_eq!(evaluate_composite(&lat, 2, &spec).unwrap().value, 0.5);
        assert_eq!(spec.to_string(), "self:robustness:alpha=0.5:none:minimum");
    }

    #[test]
    fn empty_scope_and_parse_errors() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        let spec: CompositeIndexSpec = "outside:lift:none:arithmetic_mean".parse().unwrap();
        let v = evaluate_composite(&lat, 3, &spec).unwrap();
        assert!(v.empty_scope && v.value == 0.0);
        let v = evaluate_composite(&lat, 2, &spec).unwrap();
        // rule {a} → {b}: P(ab)/(P(a)P(b)) = (1/3)/(4/9)
        assert!((v.value - 0.75).abs() < 1e-15);
        for bad in [
            "upper:lift",
            "upper:conviction:none:sum",
            "outside:lift:difference:sum",
            "x:support:none:sum",
        ] {
            assert!(bad.parse::<CompositeIndexSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn fuzzy_aggregator_rejects_out_of_range() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        // MONOCLE weights of the top's lower neighbors are well above 1.
        let spec: CompositeIndexSpec = "lower:monocle:none:algebraic_product".parse().unwrap();
        let err = evaluate_composite(&lat, 0, &spec).unwrap_err();
        assert!(err.to_string().contains("[0, 1]"));
        let spec: CompositeIndexSpec = "outside:lift:none:minimum_t".parse().unwrap();
        assert!(evaluate_composite(&lat, 2, &spec).is_ok());
    }
}
