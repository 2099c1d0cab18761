use serde::{Deserialize, Serialize};

use super::{criticality_quantity, local_horizon, EnergySeries};
use crate::error::{Error, Result};
use crate::spectral::{in_closed_range, SpectralField, ALPHA_CRITICAL, ALPHA_MIN};

/// Relative slack allowed when checking that `‖Λ^α u‖²` does not increase.
pub const MONOTONE_SLACK: f64 = 1e-8;

/// Defect of the strong energy inequality between records `tau_index` and
/// `t_index`: `‖u(t)‖² + 2ν∫_τ^t ‖Λ^α u‖² - ‖u(τ)‖²`.
///
/// The dissipation integral is the one accumulated by the integrator, so for
/// Galerkin data the defect is the integrator's energy error.
pub fn energy_inequality_residual(series: &EnergySeries, tau_index: usize, t_index: usize) -> Result<f64> {
    series.check_indices(tau_index, t_index)?;
    if tau_index == t_index {
        return Ok(0.0);
    }
    let a = &series.records[tau_index];
    let b = &series.records[t_index];
    Ok(b.l2_sq + (b.diss_integral - a.diss_integral) - a.l2_sq)
}

/// Same defect with the dissipation integral rebuilt by the trapezoid rule
/// over recorded `halpha_sq` samples.
pub fn energy_inequality_residual_trapezoid(
    series: &EnergySeries,
    tau_index: usize,
    t_index: usize,
) -> Result<f64> {
    let diss = series.trapezoid_dissipation(tau_index, t_index)?;
    let a = &series.records[tau_index];
    let b = &series.records[t_index];
    Ok(b.l2_sq + diss - a.l2_sq)
}

fn q_ratio_series(series: &EnergySeries, c1: f64, nu: f64) -> Result<Vec<f64>> {
    if !(c1 > 0.0 && nu > 0.0) {
        return Err(Error::domain("C1 and nu must be positive"));
    }
    series
        .records
        .iter()
        .map(|r| {
            let q = match r.q {
                Some(q) => q,
                None => criticality_quantity(r.l2_sq.sqrt(), r.halpha_sq.sqrt(), series.alpha)?,
            };
            Ok(q * c1 / nu)
        })
        .collect()
}

/// Output of [`monotone_decay_monitor`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneDecay {
    /// `sup_t Q(t) C₁ / ν`
    pub q_threshold_ratio: f64,
    /// The ratio stayed below 1 on every record.
    pub smallness_holds: bool,
    /// `halpha_sq` was non-increasing on every record pair starting in the small regime.
    pub monotone_decay_verified: bool,
    /// First record time with `Q C₁/ν < 1`.
    pub eventual_time: Option<f64>,
}

/// Watch the smallness condition `ν - C₁Q > 0` and check the decay of
/// `‖Λ^α u‖²` it implies. Only the implication "small ⇒ non-increasing" is
/// checked; large-Q stretches are ignored.
pub fn monotone_decay_monitor(series: &EnergySeries, c1: f64, nu: f64) -> Result<MonotoneDecay> {
    if series.is_empty() {
        return Err(Error::Index("empty series".into()));
    }
    let ratios = q_ratio_series(series, c1, nu)?;
    let sup = ratios.iter().copied().fold(0.0, f64::max);
    let monotone = series
        .records
        .windows(2)
        .zip(&ratios)
        .filter(|(_, &r)| r < 1.0)
        .all(|(w, _)| w[1].halpha_sq <= w[0].halpha_sq * (1.0 + MONOTONE_SLACK));
    let eventual_time = series
        .records
        .iter()
        .zip(&ratios)
        .find(|(_, &r)| r < 1.0)
        .map(|(rec, _)| rec.t);
    Ok(MonotoneDecay {
        q_threshold_ratio: sup,
        smallness_holds: sup < 1.0,
        monotone_decay_verified: monotone,
        eventual_time,
    })
}

/// First record time at which `Q(t) < ν/C₁`, if any.
pub fn eventual_regularity_time(series: &EnergySeries, c1: f64, nu: f64) -> Result<Option<f64>> {
    let ratios = q_ratio_series(series, c1, nu)?;
    Ok(series
        .records
        .iter()
        .zip(&ratios)
        .find(|(_, &r)| r < 1.0)
        .map(|(rec, _)| rec.t))
}

/// Same scan over a bare `(t, Q)` sequence.
pub fn first_crossing(samples: &[(f64, f64)], threshold: f64) -> Option<f64> {
    samples.iter().find(|(_, q)| *q < threshold).map(|(t, _)| *t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    pub lhs_max: f64,
    pub rhs_bound: f64,
    pub margin: f64,
    pub ok: bool,
}

fn require_critical(series: &EnergySeries) -> Result<()> {
    if (series.alpha - ALPHA_CRITICAL).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "growth bound applies only at alpha = 5/4, series has alpha = {}",
            series.alpha
        )));
    }
    if series.is_empty() {
        return Err(Error::Index("empty series".into()));
    }
    Ok(())
}

/// Critical-case bound `‖Λ^{5/4}u(t)‖² <= ‖Λ^{5/4}u(0)‖² exp(C‖u(0)‖²)`.
pub fn alpha54_growth_bound(series: &EnergySeries, c: f64) -> Result<GrowthBound> {
    require_critical(series)?;
    let first = &series.records[0];
    let lhs_max = series.records.iter().map(|r| r.halpha_sq).fold(0.0, f64::max);
    let rhs_bound = first.halpha_sq * (c * first.l2_sq).exp();
    Ok(GrowthBound {
        lhs_max,
        rhs_bound,
        margin: rhs_bound - lhs_max,
        ok: lhs_max <= rhs_bound,
    })
}

/// Smallest `C` for which [`alpha54_growth_bound`] holds on this series.
pub fn alpha54_required_constant(series: &EnergySeries) -> Result<f64> {
    require_critical(series)?;
    let first = &series.records[0];
    let lhs_max = series.records.iter().map(|r| r.halpha_sq).fold(0.0, f64::max);
    if first.halpha_sq <= 0.0 || first.l2_sq <= 0.0 {
        return Ok(0.0);
    }
    Ok(((lhs_max / first.halpha_sq).ln() / first.l2_sq).max(0.0))
}

/// Exponent `4α/(8α-5)` on `‖Λ^{2α}u‖` in the weak–strong stability estimate.
pub fn stability_exponent(alpha: f64) -> f64 {
    4.0 * alpha / (8.0 * alpha - 5.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub exponent: f64,
    /// `(t, ‖w(t)‖², envelope(t))`
    pub samples: Vec<(f64, f64, f64)>,
    /// `‖w(t)‖²` never exceeded the envelope.
    pub within_envelope: bool,
    /// `max_t ‖w(t)‖² / ‖u(0)‖²`
    pub max_relative_deviation: f64,
}

/// Grönwall envelope `‖w(0)‖² exp(C ∫₀^t ‖Λ^{2α}u‖^{4α/(8α-5)} ds)` for the
/// difference `w` of two runs, checked against the measured difference norms.
///
/// `w_l2_sq` holds `(t, ‖w(t)‖²)` at the record times of `reference`.
pub fn weak_strong_stability(
    reference: &EnergySeries,
    w_l2_sq: &[(f64, f64)],
    alpha: f64,
    c: f64,
) -> Result<StabilityReport> {
    if !in_closed_range(alpha, ALPHA_MIN, ALPHA_CRITICAL) {
        return Err(Error::domain(format!(
            "stability estimate needs alpha in [5/6, 5/4], got {alpha}"
        )));
    }
    if w_l2_sq.len() != reference.len() {
        return Err(Error::GridMismatch(format!(
            "{} difference samples for {} reference records",
            w_l2_sq.len(),
            reference.len()
        )));
    }
    for ((t, _), rec) in w_l2_sq.iter().zip(&reference.records) {
        if (t - rec.t).abs() > 1e-12 * rec.t.abs().max(1.0) {
            return Err(Error::GridMismatch(format!(
                "difference sample at t = {t} does not match record at t = {}",
                rec.t
            )));
        }
    }
    if reference.is_empty() {
        return Err(Error::Index("empty series".into()));
    }
    let exponent = stability_exponent(alpha);
    let w0 = w_l2_sq[0].1;
    let u0 = reference.records[0].l2_sq;
    let mut integral = 0.0;
    let mut samples = Vec::with_capacity(w_l2_sq.len());
    let mut prev: Option<(f64, f64)> = None;
    for (&(t, w), rec) in w_l2_sq.iter().zip(&reference.records) {
        let g = rec.h2alpha_sq.sqrt().powf(exponent);
        if let Some((tp, gp)) = prev {
            integral += 0.5 * (t - tp) * (g + gp);
        }
        prev = Some((t, g));
        samples.push((t, w, w0 * (c * integral).exp()));
    }
    let within = samples.iter().all(|&(_, w, env)| w <= env * (1.0 + 1e-12) || w == 0.0);
    let max_rel = if u0 > 0.0 {
        samples.iter().map(|s| s.1 / u0).fold(0.0, f64::max)
    } else {
        0.0
    };
    Ok(StabilityReport {
        exponent,
        samples,
        within_envelope: within,
        max_relative_deviation: max_rel,
    })
}

/// `‖u(t) - v(t)‖²` for paired snapshots of two runs on the same grid.
pub fn difference_series(
    u: &[(f64, &SpectralField)],
    v: &[(f64, &SpectralField)],
) -> Result<Vec<(f64, f64)>> {
    if u.len() != v.len() {
        return Err(Error::GridMismatch("snapshot counts differ".into()));
    }
    u.iter()
        .zip(v)
        .map(|((tu, fu), (tv, fv))| {
            if (tu - tv).abs() > 1e-12 * tu.abs().max(1.0) {
                return Err(Error::GridMismatch(format!("snapshot times {tu} and {tv} differ")));
            }
            Ok((*tu, fu.sub(fv)?.l2_sq()))
        })
        .collect()
}

/// Local horizon from the first record of a series.
pub fn series_local_horizon(series: &EnergySeries, c: f64) -> Result<f64> {
    let first = series
        .records
        .first()
        .ok_or_else(|| Error::Index("empty series".into()))?;
    local_horizon(first.halpha_sq.sqrt(), series.nu, series.alpha, c)
}
