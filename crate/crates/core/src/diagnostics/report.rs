use serde::{Deserialize, Serialize};

use super::{monotone_decay_monitor, series_local_horizon, EnergySeries};
use crate::error::Result;
use crate::spectral::{in_closed_range, ALPHA_CRITICAL, ALPHA_MIN};

/// Where the analysed series came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    GalerkinRun,
    Synthetic,
    Extrapolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_digest: String,
    pub constant_c: f64,
    pub constant_c1: f64,
    pub data_source: DataSource,
}

/// Regularity verdicts for one run. Quantities that need `α ∈ [5/6, 5/4]`
/// (or `α > 5/6` for the horizon) are `None` outside that range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub alpha: f64,
    pub nu: f64,
    pub q_threshold_ratio: Option<f64>,
    pub smallness_holds: Option<bool>,
    pub t_star_local: Option<f64>,
    pub eventual_time: Option<f64>,
    pub monotone_decay_verified: Option<bool>,
    /// Heuristic: `max ν/Q(t_j)` over record pairs where `‖Λ^α u‖²` grew.
    /// Growth forces `C₁ Q >= ν`, so this bounds `C₁` from below on this run.
    pub c1_lower_bound_heuristic: Option<f64>,
    pub provenance: Provenance,
}

impl RegularityReport {
    pub fn from_series(series: &EnergySeries, c: f64, c1: f64, source: DataSource) -> Result<Self> {
        let provenance = Provenance {
            config_digest: series.config_digest.clone(),
            constant_c: c,
            constant_c1: c1,
            data_source: source,
        };
        let mut report = RegularityReport {
            alpha: series.alpha,
            nu: series.nu,
            q_threshold_ratio: None,
            smallness_holds: None,
            t_star_local: None,
            eventual_time: None,
            monotone_decay_verified: None,
            c1_lower_bound_heuristic: None,
            provenance,
        };
        if series.is_empty() || !in_closed_range(series.alpha, ALPHA_MIN, ALPHA_CRITICAL) {
            return Ok(report);
        }
        let decay = monotone_decay_monitor(series, c1, series.nu)?;
        report.q_threshold_ratio = Some(decay.q_threshold_ratio);
        report.smallness_holds = Some(decay.smallness_holds);
        report.monotone_decay_verified = Some(decay.monotone_decay_verified);
        report.eventual_time = decay.eventual_time;
        report.t_star_local = series_local_horizon(series, c).ok();
        report.c1_lower_bound_heuristic = series
            .records
            .windows(2)
            .filter(|w| w[1].halpha_sq > w[0].halpha_sq * (1.0 + super::MONOTONE_SLACK))
            .filter_map(|w| w[0].q.filter(|q| *q > 0.0).map(|q| series.nu / q))
            .reduce(f64::max);
        Ok(report)
    }
}
