use std::collections::HashMap;

use rayon::prelude::*;

use super::basic::{
    cv_cfc_cu, delta_tcfi, margin_closed, margin_closed_relaxed, separation, ClosednessModel,
    MonocleWeights,
};
use super::basic_level::{basic_level_similarity_all, predictability_all};
use super::bounds::{bounds_with, LStabBounds};
use super::spec::{IndexSpec, Level};
use super::stability::{
    robustness_all, stability_montecarlo_all, IntegralSide, LevelCounts, StabilityCounts,
};
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;

/// Index values per concept, one column per spec, rows in concept-id order.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexTable {
    extent_sizes: Vec<usize>,
    intent_sizes: Vec<usize>,
    specs: Vec<IndexSpec>,
    columns: Vec<Vec<f64>>,
    /// Per column: number of concepts whose level fell outside `[2, n−1]`.
    out_of_range: Vec<usize>,
}

impl IndexTable {
    pub fn n_concepts(&self) -> usize {
        self.extent_sizes.len()
    }

    pub fn specs(&self) -> &[IndexSpec] {
        &self.specs
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    /// First column whose header equals `name`.
    pub fn column_by_name(&self, name: &str) -> Option<&[f64]> {
        self.specs
            .iter()
            .position(|s| s.to_string() == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn out_of_range(&self, i: usize) -> usize {
        self.out_of_range[i]
    }

    pub fn headers(&self) -> Vec<String> {
        let mut h = vec!["id".to_string(), "extent_size".into(), "intent_size".into()];
        h.extend(self.specs.iter().map(ToString::to_string));
        h
    }

    /// CSV with 12 significant digits; `+∞` is written `inf`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.headers()).expect("in-memory write");
        for c in 0..self.n_concepts() {
            let mut rec = vec![
                c.to_string(),
                self.extent_sizes[c].to_string(),
                self.intent_sizes[c].to_string(),
            ];
            rec.extend(self.columns.iter().map(|col| format_g(col[c])));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }
}

/// `%.12g`-style rendering.
pub fn format_g(v: f64) -> String {
    const DIGITS: usize = 12;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= DIGITS as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Per-lattice caches shared between columns.
struct Evaluator<'a> {
    lat: &'a ConceptLattice,
    stability: Option<StabilityCounts>,
    levels: Option<LevelCounts>,
    bounds: Option<Vec<LStabBounds>>,
}

impl<'a> Evaluator<'a> {
    fn stability(&mut self) -> Result<&StabilityCounts> {
        if self.stability.is_none() {
            self.stability = Some(StabilityCounts::compute(self.lat)?);
        }
        Ok(self.stability.as_ref().expect("just filled"))
    }

    fn levels(&mut self) -> Result<&LevelCounts> {
        if self.levels.is_none() {
            self.levels = Some(LevelCounts::compute(self.lat)?);
        }
        Ok(self.levels.as_ref().expect("just filled"))
    }

    fn bounds(&mut self) -> Result<&[LStabBounds]> {
        if self.bounds.is_none() {
            let lat = self.lat;
            let counts = self.stability()?;
            let b = (0..lat.len())
                .map(|c| bounds_with(lat, counts, c))
                .collect();
            self.bounds = Some(b);
        }
        Ok(self.bounds.as_deref().expect("just filled"))
    }

    fn bound_column(&mut self, f: impl Fn(&LStabBounds) -> f64) -> Result<Vec<f64>> {
        Ok(self.bounds()?.iter().map(f).collect())
    }

    fn level_column(
        &mut self,
        level: Level,
        side: IntegralSide,
        single: bool,
    ) -> Result<(Vec<f64>, usize)> {
        let lat = self.lat;
        let levels = self.levels()?;
        let mut missing = 0;
        let col = (0..lat.len())
            .map(|c| {
                let j = level.resolve(levels.extent_size(c));
                if single {
                    levels.level(c, j).unwrap_or_else(|| {
                        missing += 1;
                        0.0
                    })
                } else {
                    let lv = levels.integral(c, j, side);
                    missing += lv.out_of_range as usize;
                    lv.value
                }
            })
            .collect();
        Ok((col, missing))
    }

    fn column(&mut self, spec: &IndexSpec) -> Result<(Vec<f64>, usize)> {
        use IndexSpec::*;
        let lat = self.lat;
        let ctx = lat.context();
        let n = ctx.n_objects() as f64;
        let per = |f: &(dyn Fn(usize) -> Result<f64> + Sync)| -> Result<Vec<f64>> {
            (0..lat.len()).into_par_iter().map(f).collect()
        };
        let col = match spec {
            Support => lat
                .concepts()
                .iter()
                .map(|c| c.extent.count() as f64 / n)
                .collect(),
            Stability { samples: None, .. } => self.stability()?.stabilities().to_vec(),
            Stability {
                samples: Some(s),
                seed,
            } => stability_montecarlo_all(lat, *s, *seed)?,
            LStab => self.bound_column(|b| b.lstab)?,
            LStabLower => self.bound_column(|b| b.lstab_lower)?,
            DeltaL => self.bound_column(|b| b.delta_l)?,
            DeltaH => (0..lat.len())
                .map(|c| super::bounds::delta_h(lat, c))
                .collect(),
            Stab2Noe => self.bound_column(|b| b.stab2noe)?,
            Stab2Oe => self.bound_column(|b| b.stab2oe)?,
            Stab2Oie => self.bound_column(|b| b.stab2oie)?,
            LevelwiseStability { level } => {
                return self.level_column(*level, IntegralSide::Full, true)
            }
            IntegralStabilityMinor { level } => {
                return self.level_column(*level, IntegralSide::Minor, false)
            }
            IntegralStabilityMajor { level } => {
                return self.level_column(*level, IntegralSide::Major, false)
            }
            IntegralStability => {
                return self.level_column(Level::Fixed(2), IntegralSide::Full, false)
            }
            Robustness { alpha } => robustness_all(lat, *alpha)?,
            ConceptProbability => {
                let model = ClosednessModel::new(ctx);
                lat.concepts()
                    .par_iter()
                    .map(|c| model.probability(&c.intent))
                    .collect()
            }
            Separation => lat.concepts().iter().map(|c| separation(ctx, c)).collect(),
            Monocle => {
                let w = MonocleWeights::new(lat, None)?;
                lat.concepts().iter().map(|c| w.weight(c)).collect()
            }
            DeltaTcfi { delta, literal } => {
                per(&|c| Ok(delta_tcfi(lat, c, *delta, *literal)? as u8 as f64))?
            }
            MarginClosed { alpha, min_support } => {
                per(&|c| Ok(margin_closed(lat, c, *alpha, *min_support)? as u8 as f64))?
            }
            MarginClosedRelaxed => per(&|c| margin_closed_relaxed(lat, c))?,
            Similarity(cfg) => basic_level_similarity_all(lat, cfg)?,
            Predictability(cfg) => predictability_all(lat, cfg)?,
            Cv => lat
                .concepts()
                .iter()
                .map(|c| cv_cfc_cu(ctx, c, false).cv)
                .collect(),
            Cfc => lat
                .concepts()
                .iter()
                .map(|c| cv_cfc_cu(ctx, c, false).cfc)
                .collect(),
            Cu { standard } => lat
                .concepts()
                .iter()
                .map(|c| cv_cfc_cu(ctx, c, *standard).cu)
                .collect(),
        };
        Ok((col, 0))
    }
}

/// One column per spec; errors name the offending spec.
pub fn compute_index_table(lat: &ConceptLattice, specs: &[IndexSpec]) -> Result<IndexTable> {
    let mut ev = Evaluator {
        lat,
        stability: None,
        levels: None,
        bounds: None,
    };
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(specs.len());
    let mut out_of_range = Vec::with_capacity(specs.len());
    // Identical specs share one evaluation.
    let mut seen: HashMap<String, usize> = HashMap::new();
    for spec in specs {
        let key = spec.to_string();
        if let Some(&i) = seen.get(&key) {
            columns.push(columns[i].clone());
            out_of_range.push(out_of_range[i]);
            continue;
        }
        let wrap = |e: Error| Error::Index {
            spec: key.clone(),
            source: Box::new(e),
        };
        spec.validate().map_err(wrap)?;
        let (col, missing) = ev.column(spec).map_err(wrap)?;
        seen.insert(key.clone(), columns.len());
        columns.push(col);
        out_of_range.push(missing);
    }
    Ok(IndexTable {
        extent_sizes: lat.concepts().iter().map(|c| c.extent.count()).collect(),
        intent_sizes: lat.concepts().iter().map(|c| c.intent.count()).collect(),
        specs: specs.to_vec(),
        columns,
        out_of_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::k1;
    use crate::indices::parse_spec_list;
    use crate::lattice::enumerate_concepts;

    #[test]
    fn k1_table() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        let specs =
            parse_spec_list("support,stability,robustness:alpha=0.3,robustness:alpha=0.5").unwrap();
        let t = compute_index_table(&lat, &specs).unwrap();
        assert_eq!(t.column(0), &[1.0, 2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(t.column(1), t.column(3));
        assert_ne!(t.column(2), t.column(3));
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "id,extent_size,intent_size,support,stability,robustness:alpha=0.3,robustness:alpha=0.5"
        );
        assert_eq!(lines.next().unwrap(), "0,3,0,1,0.25,0.09,0.25");
        assert_eq!(lines.next().unwrap(), "1,2,1,0.666666666667,0.5,0.3,0.5");
    }

    #[test]
    fn empty_spec_list() {
        let lat = enumerate_concepts(&k1(), 0).unwrap();
        let t = compute_index_table(&lat, &[]).unwrap();
        assert_eq!(t.n_concepts(), 4);
        assert!(t.columns().is_empty());
    }

    #[test]
    fn precondition_errors_name_the_spec() {
        let lat = enumerate_concepts(&k1(), 2).unwrap();
        let specs = parse_spec_list("support,stability").unwrap();
        let err = compute_index_table(&lat, &specs).unwrap_err();
        assert!(matches!(&err, Error::Index { spec, .. } if spec == "stability"));
        assert!(compute_index_table(&lat, &specs[..1]).is_ok());
    }

    #[test]
    fn infinity_and_formatting() {
        assert_eq!(format_g(f64::INFINITY), "inf");
        assert_eq!(format_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g(1e-7), "1e-07");
        assert_eq!(format_g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_g(-2.5), "-2.5");
        assert_eq!(format_g(12.0), "12");
        assert_eq!(format_g(0.0001), "0.0001");
    }
}
