//! 2×2 contingency tables and association-rule measures.

use std::fmt;
use std::str::FromStr;

use crate::context::{AttributeSet, FormalContext};
use crate::error::{Error, Result};

/// Joint counts of an antecedent `A` and a consequent `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ContingencyTable {
    pub n: u64,
    pub n_ab: u64,
    pub n_a_not_b: u64,
    pub n_not_a_b: u64,
    pub n_not_a_not_b: u64,
}

impl ContingencyTable {
    pub fn new(n_ab: u64, n_a_not_b: u64, n_not_a_b: u64, n_not_a_not_b: u64) -> Self {
        Self {
            n: n_ab + n_a_not_b + n_not_a_b + n_not_a_not_b,
            n_ab,
            n_a_not_b,
            n_not_a_b,
            n_not_a_not_b,
        }
    }

    /// Every cell multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Self {
        Self::new(
            self.n_ab * k,
            self.n_a_not_b * k,
            self.n_not_a_b * k,
            self.n_not_a_not_b * k,
        )
    }

    fn p(&self, count: u64) -> f64 {
        count as f64 / self.n as f64
    }
}

/// Rows of `G` split by containing the antecedent's and consequent's
/// attributes.
pub fn contingency_from_sets(
    ctx: &FormalContext,
    antecedent: &AttributeSet,
    consequent: &AttributeSet,
) -> Result<ContingencyTable> {
    let a = ctx.derive_attributes(antecedent)?;
    let b = ctx.derive_attributes(consequent)?;
    let n = ctx.n_objects() as u64;
    let n_a = a.count() as u64;
    let n_b = b.count() as u64;
    let n_ab = a.intersection_count(&b) as u64;
    Ok(ContingencyTable {
        n,
        n_ab,
        n_a_not_b: n_a - n_ab,
        n_not_a_b: n_b - n_ab,
        n_not_a_not_b: n + n_ab - n_a - n_b,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureKind {
    Accuracy,
    AddedValue,
    CertaintyFactor,
    CollectiveStrength,
    ConditionalProbability,
    Conviction,
    Cosine,
    GiniIndex,
    InformationGain,
    JMeasure,
    Jaccard,
    Klosgen,
    KlosgenMax,
    LaplaceCorrection,
    LeastContradiction,
    Leverage,
    Lift,
    Loevinger,
    NormalizedMutualInformation,
    OddMultiplier,
    ExampleCounterexampleRate,
    OddsRatio,
    OneWaySupport,
    PearsonChi2,
    PiatetskyShapiro,
    RelativeRisk,
    SebagSchoenauer,
    TwoWaySupport,
    LinearCorrelation,
    Zhang,
}

use MeasureKind::*;

impl MeasureKind {
    pub const ALL: [MeasureKind; 30] = [
        Accuracy,
        AddedValue,
        CertaintyFactor,
        CollectiveStrength,
        ConditionalProbability,
        Conviction,
        Cosine,
        GiniIndex,
        InformationGain,
        JMeasure,
        Jaccard,
        Klosgen,
        KlosgenMax,
        LaplaceCorrection,
        LeastContradiction,
        Leverage,
        Lift,
        Loevinger,
        NormalizedMutualInformation,
        OddMultiplier,
        ExampleCounterexampleRate,
        OddsRatio,
        OneWaySupport,
        PearsonChi2,
        PiatetskyShapiro,
        RelativeRisk,
        SebagSchoenauer,
        TwoWaySupport,
        LinearCorrelation,
        Zhang,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Accuracy => "accuracy",
            AddedValue => "added_value",
            CertaintyFactor => "certainty_factor",
            CollectiveStrength => "collective_strength",
            ConditionalProbability => "conditional_probability",
            Conviction => "conviction",
            Cosine => "cosine",
            GiniIndex => "gini_index",
            InformationGain => "information_gain",
            JMeasure => "j_measure",
            Jaccard => "jaccard",
            Klosgen => "klosgen",
            KlosgenMax => "klosgen_max",
            LaplaceCorrection => "laplace_correction",
            LeastContradiction => "least_contradiction",
            Leverage => "leverage",
            Lift => "lift",
            Loevinger => "loevinger",
            NormalizedMutualInformation => "normalized_mutual_information",
            OddMultiplier => "odd_multiplier",
            ExampleCounterexampleRate => "example_counterexample_rate",
            OddsRatio => "odds_ratio",
            OneWaySupport => "one_way_support",
            PearsonChi2 => "pearson_chi2",
            PiatetskyShapiro => "piatetsky_shapiro",
            RelativeRisk => "relative_risk",
            SebagSchoenauer => "sebag_schoenauer",
            TwoWaySupport => "two_way_support",
            LinearCorrelation => "linear_correlation",
            Zhang => "zhang",
        }
    }

    /// True for the two measures that read absolute counts.
    pub fn uses_counts(self) -> bool {
        matches!(self, PearsonChi2 | LaplaceCorrection)
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let valid: Vec<&str> = Self::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown measure `{s}` (valid: {})",
                    valid.join(", ")
                ))
            })
    }
}

/// A measure value and whether a `0/0` was resolved to 0 on the way.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub undefined: bool,
}

#[derive(Default)]
struct Division {
    undefined: bool,
}

impl Division {
    /// `x / 0` is `±∞` by the sign of `x`; `0 / 0` is 0 and raises the flag.
    fn div(&mut self, num: f64, den: f64) -> f64 {
        if den != 0.0 {
            num / den
        } else if num == 0.0 {
            self.undefined = true;
            0.0
        } else {
            num.signum() * f64::INFINITY
        }
    }

    /// `p · log2(ratio)` with `0 · log 0 = 0`.
    fn plog(&mut self, p: f64, num: f64, den: f64) -> f64 {
        if p == 0.0 {
            0.0
        } else {
            p * self.div(num, den).log2()
        }
    }
}

/// The measure's value; see [`rule_measure_flagged`] for the `0/0` flag.
pub fn rule_measure(kind: MeasureKind, t: &ContingencyTable) -> f64 {
    rule_measure_flagged(kind, t).value
}

/// Evaluates `kind` on cell ratios. Logarithms are base 2.
pub fn rule_measure_flagged(kind: MeasureKind, t: &ContingencyTable) -> MeasureValue {
    let mut d = Division::default();
    if t.n == 0 {
        return MeasureValue {
            value: 0.0,
            undefined: true,
        };
    }
    let p_ab = t.p(t.n_ab);
    let p_anb = t.p(t.n_a_not_b);
    let p_nab = t.p(t.n_not_a_b);
    let p_nanb = t.p(t.n_not_a_not_b);
    let p_a = t.p(t.n_ab + t.n_a_not_b);
    let p_b = t.p(t.n_ab + t.n_not_a_b);
    let p_na = 1.0 - p_a;
    let p_nb = 1.0 - p_b;
    let b_given_a = d.div(p_ab, p_a);
    let nb_given_a = d.div(p_anb, p_a);
    let dev = p_ab - p_a * p_b;

    let value = match kind {
        Accuracy => p_ab + p_nanb,
        AddedValue => b_given_a - p_b,
        CertaintyFactor => d.div(b_given_a - p_b, 1.0 - p_b),
        CollectiveStrength => {
            let expected = p_a * p_b + p_na * p_nb;
            let left = d.div(p_ab + p_nanb, expected);
            let right = d.div(1.0 - expected, 1.0 - p_ab - p_nanb);
            left * right
        }
        ConditionalProbability => b_given_a,
        Conviction => d.div(p_a * p_nb, p_anb),
        Cosine => d.div(p_ab, (p_a * p_b).sqrt()),
        GiniIndex => {
            let b_given_na = d.div(p_nab, p_na);
            let nb_given_na = d.div(p_nanb, p_na);
            p_a * (b_given_a.powi(2) + nb_given_a.powi(2))
                + p_na * (b_given_na.powi(2) + nb_given_na.powi(2))
                - p_b.powi(2)
                - p_nb.powi(2)
        }
        InformationGain => d.div(p_ab, p_a * p_b).log2(),
        JMeasure => d.plog(p_ab, b_given_a, p_b) + d.plog(p_anb, nb_given_a, p_nb),
        Jaccard => d.div(p_ab, p_a + p_b - p_ab),
        Klosgen => p_ab.sqrt() * (b_given_a - p_b),
        KlosgenMax => {
            let a_given_b = d.div(p_ab, p_b);
            p_ab.sqrt() * (b_given_a - p_b).max(a_given_b - p_a)
        }
        LaplaceCorrection => (t.n_ab as f64 + 1.0) / ((t.n_ab + t.n_a_not_b) as f64 + 2.0),
        LeastContradiction => d.div(p_ab - p_anb, p_b),
        Leverage => dev,
        Lift => d.div(p_ab, p_a * p_b),
        Loevinger => 1.0 - d.div(p_a * p_nb, p_anb),
        NormalizedMutualInformation => {
            let cells = [
                (p_ab, p_a, p_b),
                (p_anb, p_a, p_nb),
                (p_nab, p_na, p_b),
                (p_nanb, p_na, p_nb),
            ];
            let mi: f64 = cells.iter().map(|&(j, x, y)| d.plog(j, j, x * y)).sum();
            let h_a = -[p_a, p_na]
                .iter()
                .map(|&p| if p > 0.0 { p * p.log2() } else { 0.0 })
                .sum::<f64>();
            d.div(mi, h_a)
        }
        OddMultiplier => d.div(p_ab * p_nb, p_b * p_anb),
        ExampleCounterexampleRate => 1.0 - d.div(p_anb, p_ab),
        OddsRatio => d.div(p_ab * p_nanb, p_anb * p_nab),
        OneWaySupport => {
            if p_ab == 0.0 {
                0.0
            } else {
                b_given_a * d.div(p_ab, p_a * p_b).log2()
            }
        }
        PearsonChi2 => {
            let cells = [
                (p_ab, p_a * p_b),
                (p_nab, p_na * p_b),
                (p_anb, p_a * p_nb),
                (p_nanb, p_na * p_nb),
            ];
            t.n as f64
                * cells
                    .iter()
                    .map(|&(o, e)| d.div((o - e).powi(2), e))
                    .sum::<f64>()
        }
        PiatetskyShapiro => dev,
        RelativeRisk => {
            let b_given_na = d.div(p_nab, p_na);
            d.div(b_given_a, b_given_na)
        }
        SebagSchoenauer => d.div(p_ab, p_anb),
        TwoWaySupport => d.plog(p_ab, p_ab, p_a * p_b),
        LinearCorrelation => d.div(dev, (p_a * p_b * p_na * p_nb).sqrt()),
        Zhang => d.div(dev, (p_ab * p_nb).max(p_b * p_anb)),
    };
    MeasureValue {
        value,
        undefined: d.undefined,
    }
}
