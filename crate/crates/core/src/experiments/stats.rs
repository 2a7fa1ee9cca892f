//! Rank correlation, ROC AUC and simple linear regression.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauResult {
    pub tau: f64,
    /// One of the sequences is constant; `tau` is then 0.
    pub degenerate: bool,
}

/// Tie-corrected Kendall tau in `O(n log n)` (Knight's merge-sort count).
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Result<TauResult> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "tau needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::Degenerate(
            "tau needs at least two observations".into(),
        ));
    }
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    let n1 = tie_pairs(pairs.iter().map(|p| p.0));
    let n3 = tie_pairs_by(&pairs, |a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buf);
    let n2 = tie_pairs(ys.iter().copied());

    let s = n0 as i64 - n1 as i64 - n2 as i64 + n3 as i64 - 2 * swaps as i64;
    Ok(tau_from_counts(s, n0, n1, n2))
}

fn tau_from_counts(s: i64, n0: u64, n1: u64, n2: u64) -> TauResult {
    if n0 == n1 || n0 == n2 {
        return TauResult {
            tau: 0.0,
            degenerate: true,
        };
    }
    TauResult {
        tau: s as f64 / (((n0 - n1) as f64) * ((n0 - n2) as f64)).sqrt(),
        degenerate: false,
    }
}

/// Σ t(t−1)/2 over runs of equal values in a sorted sequence.
fn tie_pairs(sorted: impl Iterator<Item = f64>) -> u64 {
    let v: Vec<f64> = sorted.collect();
    tie_pairs_by(&v, |a, b| a.total_cmp(b))
}

fn tie_pairs_by<T>(sorted: &[T], cmp: impl Fn(&T, &T) -> Ordering) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if cmp(&w[0], &w[1]) == Ordering::Equal {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sorts `v` and returns the number of inversions (strictly greater earlier
/// elements).
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (l, r) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(l, bl) + merge_count(r, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j].total_cmp(&v[i]) == Ordering::Less {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half (Mann–Whitney U over midranks).
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "auc needs equal lengths, got {} scores and {} labels",
            scores.len(),
            labels.len()
        )));
    }
    let n_pos = labels.iter().filter(|&&l| l).count() as u64;
    let n_neg = labels.len() as u64 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Degenerate(
            "auc needs both positive and negative labels".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Twice the positive rank sum, using midranks so everything is integral.
    let mut twice_rank_sum = 0u64;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len()
            && scores[order[end]].total_cmp(&scores[order[start]]) == Ordering::Equal
        {
            end += 1;
        }
        // ranks start+1 ..= end, midrank (start + 1 + end) / 2
        let twice_mid = (start + 1 + end) as u64;
        let pos = order[start..end].iter().filter(|&&i| labels[i]).count() as u64;
        twice_rank_sum += pos * twice_mid;
        start = end;
    }
    let twice_u = twice_rank_sum - n_pos * (n_pos + 1);
    Ok(twice_u as f64 / (2 * n_pos * n_neg) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OlsFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// All `y` equal: the fit is exact and `r_squared` is 1 by convention.
    pub constant_y: bool,
}

/// Least-squares line `y = slope·x + intercept` with `R² = 1 − SSE/SST`.
pub fn ols_fit(x: &[f64], y: &[f64]) -> Result<OlsFit> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "ols needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Degenerate("ols needs at least two points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate(
            "ols needs a non-constant regressor".into(),
        ));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sst: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    if sst == 0.0 {
        return Ok(OlsFit {
            slope,
            intercept,
            r_squared: 1.0,
            constant_y: true,
        });
    }
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    Ok(OlsFit {
        slope,
        intercept,
        r_squared: 1.0 - sse / sst,
        constant_y: false,
    })
}

/// Mean and sample standard deviation; `(NaN, NaN)` for an empty slice and
/// sd 0 for a single value.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_examples() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall_tau_b(&a, &a).unwrap().tau, 1.0);
        assert_eq!(kendall_tau_b(&a, &[4.0, 3.0, 2.0, 1.0]).unwrap().tau, -1.0);
        let t = kendall_tau_b(&a, &[1.0, 3.0, 2.0, 4.0]).unwrap().tau;
        assert!((t - 2.0 / 3.0).abs() < 1e-15);
        let d = kendall_tau_b(&a, &[5.0; 4]).unwrap();
        assert!(d.degenerate && d.tau == 0.0);
        assert!(kendall_tau_b(&a, &a[..3]).is_err());
        assert!(kendall_tau_b(&a[..1], &a[..1]).is_err());
    }

    #[test]
    fn tau_with_ties() {
        // x ties (1,1), y ties (2,2): S = 4, n0 = 6, n1 = n2 = 1 → 4/5
        let x = [1.0, 1.0, 2.0, 3.0];
        let y = [1.0, 2.0, 2.0, 3.0];
        assert!((kendall_tau_b(&x, &y).unwrap().tau - 0.8).abs() < 1e-15);
    }

    #[test]
    fn auc_examples() {
        let l = [true, true, false, false];
        assert_eq!(auc(&[0.9, 0.8, 0.2, 0.1], &l).unwrap(), 1.0);
        assert_eq!(auc(&[0.9, 0.1, 0.8, 0.7], &l).unwrap(), 0.5);
        let inv: Vec<bool> = l.iter().map(|b| !b).collect();
        assert_eq!(auc(&[0.9, 0.1, 0.8, 0.7], &inv).unwrap(), 0.5);
        assert_eq!(auc(&[0.5, 0.5, 0.5, 0.5], &l).unwrap(), 0.5);
        assert!(auc(&[0.1, 0.2], &[true, true]).is_err());
    }

    #[test]
    fn ols_examples() {
        let f = ols_fit(&[0.0, 1.0], &[1.0, 3.0]).unwrap();
        assert_eq!((f.slope, f.intercept, f.r_squared), (2.0, 1.0, 1.0));
        let f = ols_fit(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((f.slope, f.intercept), (1.0, 0.0));
        assert!(ols_fit(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        let c = ols_fit(&[1.0, 2.0], &[4.0, 4.0]).unwrap();
        assert!(c.constant_y && c.r_squared == 1.0);
    }

    #[test]
    fn mean_sd_basics() {
        assert_eq!(mean_sd(&[1.0, 3.0]), (2.0, 2f64.sqrt()));
        assert_eq!(mean_sd(&[4.0]), (4.0, 0.0));
        assert!(mean_sd(&[]).0.is_nan());
    }
}
