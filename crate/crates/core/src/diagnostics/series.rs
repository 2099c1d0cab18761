use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Energy diagnostics of one recorded state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub t: f64,
    /// `‖u‖²`
    pub l2_sq: f64,
    /// `‖Λ^α u‖²`
    pub halpha_sq: f64,
    /// `‖Λ^{2α} u‖²`
    pub h2alpha_sq: f64,
    /// `2ν ∫_0^t ‖Λ^α u‖² ds`
    pub diss_integral: f64,
    /// Criticality quantity; `None` when alpha is outside `[5/6, 5/4]`.
    pub q: Option<f64>,
    /// `l2_sq(t) + diss_integral(t) - l2_sq(0)`
    pub residual: f64,
    /// `⟨P(u·∇u), u⟩`
    pub nonlin_flux: f64,
}

/// Time-ordered energy records of one run plus the run's identifying metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySeries {
    pub alpha: f64,
    pub nu: f64,
    pub dim: usize,
    pub config_digest: String,
    pub records: Vec<EnergyRecord>,
}

impl EnergySeries {
    pub fn new(alpha: f64, nu: f64, dim: usize, config_digest: impl Into<String>) -> Self {
        Self {
            alpha,
            nu,
            dim,
            config_digest: config_digest.into(),
            records: Vec::new(),
        }
    }

    /// Append a record; times must be strictly increasing.
    pub fn push(&mut self, record: EnergyRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if record.t <= last.t {
                return Err(Error::Index(format!(
                    "record time {} does not follow {}",
                    record.t, last.t
                )));
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.t)
    }

    /// Trapezoid rule for `2ν ∫ ‖Λ^α u‖²` between two record indices.
    pub fn trapezoid_dissipation(&self, from: usize, to: usize) -> Result<f64> {
        self.check_indices(from, to)?;
        let sum: f64 = self.records[from..=to]
            .windows(2)
            .map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].halpha_sq + w[1].halpha_sq))
            .sum();
        Ok(2.0 * self.nu * sum)
    }

    pub(crate) fn check_indices(&self, from: usize, to: usize) -> Result<()> {
        if from > to {
            return Err(Error::Index(format!("start index {from} after end index {to}")));
        }
        if to >= self.records.len() {
            return Err(Error::Index(format!(
                "index {to} out of range for series of length {}",
                self.records.len()
            )));
        }
        Ok(())
    }

    /// Warnings for record pairs whose `halpha_sq` changes by more than 10 %,
    /// where trapezoid sampling of the dissipation integral gets coarse.
    pub fn sampling_advisories(&self) -> Vec<String> {
        self.records
            .windows(2)
            .filter_map(|w| {
                let (a, b) = (w[0].halpha_sq, w[1].halpha_sq);
                let scale = a.abs().max(b.abs());
                (scale > 0.0 && (b - a).abs() > 0.1 * scale).then(|| {
                    format!(
                        "halpha_sq changes by {:.1}% between t={} and t={}; record more often",
                        100.0 * (b - a).abs() / scale,
                        w[0].t,
                        w[1].t
                    )
                })
            })
            .collect()
    }
}
