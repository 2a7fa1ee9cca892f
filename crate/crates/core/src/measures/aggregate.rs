//! Real-valued means and fuzzy t-norms / s-norms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggregatorKind {
    Sum,
    ArithmeticMean,
    GeometricMean,
    HarmonicMean,
    Median,
    Maximum,
    Minimum,
    Midrange,
    DrasticProduct,
    BoundedDifference,
    EinsteinProduct,
    AlgebraicProduct,
    HamacherProduct,
    MinimumT,
    DrasticSum,
    BoundedSum,
    EinsteinSum,
    ProbabilisticSum,
    HamacherSum,
    MaximumS,
}

use AggregatorKind::*;

impl AggregatorKind {
    pub const ALL: [AggregatorKind; 20] = [
        Sum,
        ArithmeticMean,
        GeometricMean,
        HarmonicMean,
        Median,
        Maximum,
        Minimum,
        Midrange,
        DrasticProduct,
        BoundedDifference,
        EinsteinProduct,
        AlgebraicProduct,
        HamacherProduct,
        MinimumT,
        DrasticSum,
        BoundedSum,
        EinsteinSum,
        ProbabilisticSum,
        HamacherSum,
        MaximumS,
    ];

    pub const TNORMS: [AggregatorKind; 6] = [
        DrasticProduct,
        BoundedDifference,
        EinsteinProduct,
        AlgebraicProduct,
        HamacherProduct,
        MinimumT,
    ];

    pub const SNORMS: [AggregatorKind; 6] = [
        DrasticSum,
        BoundedSum,
        EinsteinSum,
        ProbabilisticSum,
        HamacherSum,
        MaximumS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sum => "sum",
            ArithmeticMean => "arithmetic_mean",
            GeometricMean => "geometric_mean",
            HarmonicMean => "harmonic_mean",
            Median => "median",
            Maximum => "maximum",
            Minimum => "minimum",
            Midrange => "midrange",
            DrasticProduct => "drastic_product",
            BoundedDifference => "bounded_difference",
            EinsteinProduct => "einstein_product",
            AlgebraicProduct => "algebraic_product",
            HamacherProduct => "hamacher_product",
            MinimumT => "minimum_t",
            DrasticSum => "drastic_sum",
            BoundedSum => "bounded_sum",
            EinsteinSum => "einstein_sum",
            ProbabilisticSum => "probabilistic_sum",
            HamacherSum => "hamacher_sum",
            MaximumS => "maximum_s",
        }
    }

    pub fn is_tnorm(self) -> bool {
        Self::TNORMS.contains(&self)
    }

    pub fn is_snorm(self) -> bool {
        Self::SNORMS.contains(&self)
    }

    pub fn is_fuzzy(self) -> bool {
        self.is_tnorm() || self.is_snorm()
    }

    /// The dual norm `S(a, b) = 1 − T(1−a, 1−b)` and back.
    pub fn dual(self) -> Option<AggregatorKind> {
        let i = Self::TNORMS.iter().position(|&k| k == self);
        let j = Self::SNORMS.iter().position(|&k| k == self);
        i.map(|i| Self::SNORMS[i]).or(j.map(|j| Self::TNORMS[j]))
    }
}

impl fmt::Display for AggregatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AggregatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let alias = match s.as_str() {
            "mean" | "avg" | "average" => Some(ArithmeticMean),
            "min" => Some(Minimum),
            "max" => Some(Maximum),
            _ => None,
        };
        alias
            .or_else(|| Self::ALL.iter().copied().find(|k| k.name() == s))
            .ok_or_else(|| {
                let valid: Vec<&str> = Self::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown aggregator `{s}` (valid: {})",
                    valid.join(", ")
                ))
            })
    }
}

/// The binary fuzzy norm `kind(a, b)`. Inputs must lie in `[0, 1]`.
pub fn norm2(kind: AggregatorKind, a: f64, b: f64) -> Result<f64> {
    if !kind.is_fuzzy() {
        return Err(Error::InvalidParameter(format!(
            "`{kind}` is not a fuzzy norm"
        )));
    }
    check_fuzzy(kind, a)?;
    check_fuzzy(kind, b)?;
    Ok(norm2_unchecked(kind, a, b))
}

/// Clamped to `[0, 1]` so rounding never pushes a result out of the domain.
fn norm2_unchecked(kind: AggregatorKind, a: f64, b: f64) -> f64 {
    let v = match kind {
        DrasticProduct => {
            if a == 1.0 {
                b
            } else if b == 1.0 {
                a
            } else {
                0.0
            }
        }
        BoundedDifference => (a + b - 1.0).max(0.0),
        EinsteinProduct => a * b / (2.0 - (a + b - a * b)),
        AlgebraicProduct => a * b,
        HamacherProduct => {
            if a == 0.0 && b == 0.0 {
                0.0
            } else {
                a * b / (a + b - a * b)
            }
        }
        MinimumT => a.min(b),
        DrasticSum => {
            if a == 0.0 {
                b
            } else if b == 0.0 {
                a
            } else {
                1.0
            }
        }
        BoundedSum => (a + b).min(1.0),
        EinsteinSum => (a + b) / (1.0 + a * b),
        ProbabilisticSum => a + b - a * b,
        HamacherSum => {
            // exact at the boundary, where the quotient cancels badly
            if a == 1.0 || b == 1.0 {
                1.0
            } else {
                (a + b - 2.0 * a * b) / (1.0 - a * b)
            }
        }
        MaximumS => a.max(b),
        _ => unreachable!("not a fuzzy norm"),
    };
    v.clamp(0.0, 1.0)
}

fn check_fuzzy(kind: AggregatorKind, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "`{kind}` needs values in [0, 1], got {v}"
        )))
    }
}

/// Aggregates a nonempty sequence. Fuzzy norms fold from the left.
pub fn aggregate(values: &[f64], kind: AggregatorKind) -> Result<f64> {
    let Some(&first) = values.first() else {
        return Err(Error::InvalidParameter(format!(
            "`{kind}` of an empty sequence"
        )));
    };
    if kind.is_fuzzy() {
        check_fuzzy(kind, first)?;
        return values[1..].iter().try_fold(first, |acc, &v| {
            check_fuzzy(kind, v)?;
            Ok(norm2_unchecked(kind, acc, v))
        });
    }
    let n = values.len() as f64;
    Ok(match kind {
        Sum => values.iter().sum(),
        ArithmeticMean => values.iter().sum::<f64>() / n,
        GeometricMean => {
            if let Some(v) = values.iter().find(|v| **v < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "geometric_mean needs non-negative values, got {v}"
                )));
            }
            (values.iter().map(|v| v.ln()).sum::<f64>() / n).exp()
        }
        HarmonicMean => {
            if values.contains(&0.0) {
                0.0
            } else {
                n / values.iter().map(|v| 1.0 / v).sum::<f64>()
            }
        }
        Median => {
            let mut sorted = values.to_vec();
            sorted.sort_by(f64::total_cmp);
            let k = sorted.len();
            if k % 2 == 1 {
                sorted[k / 2]
            } else {
                (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0
            }
        }
        Maximum => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Minimum => values.iter().copied().fold(f64::INFINITY, f64::min),
        Midrange => {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (lo + hi) / 2.0
        }
        _ => unreachable!("fuzzy kinds handled above"),
    })
}
