use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::NormSeries;
use crate::diagnostics::criticality_exponents;
use crate::error::{Error, Result};
use crate::spectral::{ALPHA_CRITICAL, ALPHA_MIN};

/// Sorted, disjoint open intervals `(τ_i, s_i)` of regular times inside
/// `[0, tail_start]`; everything after `tail_start` is regular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
    tail_start: f64,
}

impl IntervalSet {
    pub fn new(intervals: Vec<(f64, f64)>, tail_start: f64) -> Result<Self> {
        if !(tail_start.is_finite() && tail_start >= 0.0) {
            return Err(Error::domain(format!("tail_start must be finite and >= 0, got {tail_start}")));
        }
        for (i, &(tau, s)) in intervals.iter().enumerate() {
            if !(tau.is_finite() && s.is_finite() && 0.0 <= tau && tau < s && s <= tail_start) {
                return Err(Error::domain(format!(
                    "interval {i} = ({tau}, {s}) is empty or outside [0, {tail_start}]"
                )));
            }
            if i > 0 && tau < intervals[i - 1].1 {
                return Err(Error::domain(format!("interval {i} overlaps or is out of order")));
            }
        }
        Ok(Self { intervals, tail_start })
    }

    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            tail_start: 0.0,
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn tail_start(&self) -> f64 {
        self.tail_start
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Right endpoints `s_i < tail_start`: candidate singular times.
    pub fn candidate_singular_times(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .map(|iv| iv.1)
            .filter(|&s| s < self.tail_start)
            .collect()
    }

    /// Lengths of the complement of the intervals within `[0, tail_start]`,
    /// zero-length gaps omitted.
    pub fn gaps(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(tau, s) in &self.intervals {
            if tau > cursor {
                out.push(tau - cursor);
            }
            cursor = s;
        }
        if self.tail_start > cursor {
            out.push(self.tail_start - cursor);
        }
        out
    }
}

/// Mark samples with `y ≤ threshold` as regular. Each maximal run of regular
/// samples becomes one interval reaching out to the neighbouring irregular
/// samples (or the ends of the series), so gaps span exactly the recorded
/// exceedances. `tail_start` is `eventual_time`, or the last sample time.
pub fn decompose_regular_set(
    series: &NormSeries,
    regular_threshold: f64,
    eventual_time: Option<f64>,
) -> Result<IntervalSet> {
    if !(regular_threshold > 0.0) {
        return Err(Error::domain(format!("threshold must be positive, got {regular_threshold}")));
    }
    let s = series.samples();
    let Some(&(t_end, _)) = s.last() else {
        return Ok(IntervalSet::empty());
    };
    let tail = eventual_time.unwrap_or(t_end).clamp(0.0, t_end.max(0.0));
    let mut intervals = Vec::new();
    let mut j = 0;
    while j < s.len() {
        if s[j].1 > regular_threshold {
            j += 1;
            continue;
        }
        let start = j;
        while j < s.len() && s[j].1 <= regular_threshold {
            j += 1;
        }
        let tau = if start > 0 { s[start - 1].0 } else { s[0].0 };
        let end = if j < s.len() { s[j].0 } else { s[s.len() - 1].0 };
        let (tau, end) = (tau.max(0.0), end.min(tail));
        if tau < end {
            intervals.push((tau, end));
        }
    }
    IntervalSet::new(intervals, tail)
}

/// Hausdorff normalisation `α(γ) = π^{γ/2} / Γ(γ/2 + 1)`.
pub fn hausdorff_normalization(gamma_exp: f64) -> f64 {
    std::f64::consts::PI.powf(gamma_exp / 2.0) / gamma(gamma_exp / 2.0 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverMeasure {
    pub gamma: f64,
    /// `Σ diam(r_j)^γ`
    pub raw_sum: f64,
    /// `Σ α(γ) 2^{-γ} diam(r_j)^γ`
    pub normalized_sum: f64,
}

/// Pre-Hausdorff sum over the gaps of `intervals`.
pub fn cover_sum(intervals: &IntervalSet, gamma_exp: f64) -> Result<CoverMeasure> {
    if !(gamma_exp > 0.0 && gamma_exp.is_finite()) {
        return Err(Error::domain(format!("gamma must be positive, got {gamma_exp}")));
    }
    let raw: f64 = intervals.gaps().iter().map(|g| g.powf(gamma_exp)).sum();
    Ok(CoverMeasure {
        gamma: gamma_exp,
        raw_sum: raw,
        normalized_sum: raw * hausdorff_normalization(gamma_exp) * (-gamma_exp).exp2(),
    })
}

/// `(α, (n+2-4α)/2α)` for each α.
pub fn dimension_curve(n: usize, alphas: &[f64]) -> Result<Vec<(f64, f64)>> {
    alphas
        .iter()
        .map(|&a| Ok((a, crate::diagnostics::hausdorff_exponent(a, n)?)))
        .collect()
}

/// Largest `‖Λ^α u‖` for which `Q < ν/C₁` at a fixed `‖u‖ = l2`.
pub fn suggest_regular_threshold(l2: f64, nu: f64, c1: f64, alpha: f64) -> Result<f64> {
    if !(alpha >= ALPHA_MIN - 1e-12 && alpha < ALPHA_CRITICAL) {
        return Err(Error::domain(format!(
            "threshold needs 5/6 <= alpha < 5/4 (Q is independent of the H^alpha norm at 5/4), got {alpha}"
        )));
    }
    if !(l2 > 0.0 && nu > 0.0 && c1 > 0.0) {
        return Err(Error::domain("l2, nu and C1 must be positive"));
    }
    let (p_l2, p_h) = criticality_exponents(alpha);
    Ok((nu / c1 / l2.powf(p_l2)).powf(1.0 / p_h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::criticality_quantity;

    fn series(samples: Vec<(f64, f64)>) -> NormSeries {
        NormSeries::new(1.0, 1.0, samples).unwrap()
    }

    #[test]
    fn all_regular_is_one_interval() {
        let s = series((0..=10).map(|i| (i as f64 / 10.0, 0.5)).collect());
        let set = decompose_regular_set(&s, 1.0, None).unwrap();
        assert_eq!(set.intervals(), &[(0.0, 1.0)]);
        assert!(set.gaps().is_empty());
    }

    #[test]
    fn exceedance_splits_span() {
        let s = series(
            (0..=10)
                .map(|i| {
                    let t = i as f64 / 10.0;
                    (t, if (4..=6).contains(&i) { 2.0 } else { 0.5 })
                })
                .collect(),
        );
        let set = decompose_regular_set(&s, 1.0, None).unwrap();
        assert_eq!(set.intervals(), &[(0.0, 0.4), (0.6, 1.0)]);
        assert_eq!(set.candidate_singular_times(), vec![0.4]);
        let m = cover_sum(&set, 1.0).unwrap();
        assert!((m.raw_sum - 0.2).abs() < 1e-15);
    }

    #[test]
    fn empty_series_gives_empty_set() {
        let s = series(Vec::new());
        assert!(decompose_regular_set(&s, 1.0, None).unwrap().is_empty());
        assert!(decompose_regular_set(&s, 0.0, None).is_err());
    }

    #[test]
    fn eventual_time_clips() {
        let s = series((0..=10).map(|i| (i as f64 / 10.0, 0.5)).collect());
        let set = decompose_regular_set(&s, 1.0, Some(0.5)).unwrap();
        assert_eq!(set.intervals(), &[(0.0, 0.5)]);
        assert_eq!(set.tail_start(), 0.5);
    }

    #[test]
    fn cover_examples() {
        let set = IntervalSet::new(vec![(0.1, 0.5), (0.51, 1.0)], 1.0).unwrap();
        let m = cover_sum(&set, 0.5).unwrap();
        assert!((m.raw_sum - (0.1f64.sqrt() + 0.01f64.sqrt())).abs() < 1e-15);
        assert!((m.raw_sum - 0.41623).abs() < 1e-5);
        let one = IntervalSet::new(vec![(0.25, 1.0)], 1.0).unwrap();
        assert_eq!(cover_sum(&one, 1.0).unwrap().raw_sum, 0.25);
        assert!(cover_sum(&one, 0.0).is_err());
    }

    #[test]
    fn normalization_known_values() {
        // α(1) = 2, α(2) = π: unit interval and unit disc measure
        assert!((hausdorff_normalization(1.0) - 2.0).abs() < 1e-14);
        assert!((hausdorff_normalization(2.0) - std::f64::consts::PI).abs() < 1e-14);
        let one = IntervalSet::new(vec![(0.25, 1.0)], 1.0).unwrap();
        let m = cover_sum(&one, 1.0).unwrap();
        assert!((m.normalized_sum - m.raw_sum).abs() < 1e-15);
    }

    #[test]
    fn invalid_sets_are_rejected() {
        assert!(IntervalSet::new(vec![(0.5, 0.4)], 1.0).is_err());
        assert!(IntervalSet::new(vec![(0.1, 0.5), (0.4, 0.6)], 1.0).is_err());
        assert!(IntervalSet::new(vec![(0.1, 1.5)], 1.0).is_err());
    }

    #[test]
    fn dimension_curve_values() {
        let d = dimension_curve(3, &[5.0 / 6.0, 1.0, 1.25]).unwrap();
        assert_eq!(d.iter().map(|p| p.1).collect::<Vec<_>>(), vec![1.0, 0.5, 0.0]);
        assert!(dimension_curve(3, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn suggested_threshold_inverts_q() {
        let (l2, nu, c1, alpha) = (0.7, 0.1, 2.0, 1.05);
        let h = suggest_regular_threshold(l2, nu, c1, alpha).unwrap();
        let q = criticality_quantity(l2, h, alpha).unwrap();
        assert!((q * c1 / nu - 1.0).abs() < 1e-12);
        assert!(suggest_regular_threshold(l2, nu, c1, 1.25).is_err());
    }
}
