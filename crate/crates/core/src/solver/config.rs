use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::spectral::{symbol_from_k_sq, TorusGrid, ALPHA_CRITICAL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Dealias {
    /// Keep only modes with `3|k_a| < N` on every axis.
    #[default]
    TwoThirds,
    None,
}

/// Parameters of one Galerkin integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid: TorusGrid,
    /// Dissipation index; the solver accepts `[0, 5/4]`.
    pub alpha: f64,
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: Dealias,
    pub record_every: usize,
    /// Optional spherical Galerkin cutoff `|k| <= cutoff` on top of dealiasing.
    pub cutoff: Option<f64>,
    /// Keep a field copy on every `snapshot_every`-th record.
    pub snapshot_every: Option<usize>,
}

impl SolverConfig {
    pub fn new(grid: TorusGrid, alpha: f64, nu: f64, dt: f64, t_end: f64) -> Self {
        Self {
            grid,
            alpha,
            nu,
            dt,
            t_end,
            dealias: Dealias::TwoThirds,
            record_every: 1,
            cutoff: None,
            snapshot_every: None,
        }
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn with_dealias(mut self, dealias: Dealias) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn with_snapshots(mut self, every: usize) -> Self {
        self.snapshot_every = Some(every);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0 && self.alpha <= ALPHA_CRITICAL) {
            return Err(Error::config(
                "alpha",
                format!("solver accepts alpha in [0, 5/4], got {}", self.alpha),
            ));
        }
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return Err(Error::config("nu", format!("viscosity must be positive, got {}", self.nu)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::config("dt", format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::config("t_end", format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(Error::config("record_every", "must be at least 1"));
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::config("snapshot_every", "must be at least 1"));
        }
        if let Some(c) = self.cutoff {
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::config("cutoff", format!("cutoff must be nonnegative, got {c}")));
            }
        }
        let k_sq_max = self.grid.dim() as f64 * (self.grid.resolution() as f64 / 2.0).powi(2);
        let stiffness = self.dt * self.nu * symbol_from_k_sq(k_sq_max, self.alpha);
        if !stiffness.is_finite() {
            return Err(Error::config("dt", "dt * nu * max |k|^{2 alpha} is not finite"));
        }
        Ok(())
    }

    /// Number of steps needed to reach `t_end` (the last one may be short).
    pub fn n_steps(&self) -> u64 {
        let ratio = self.t_end / self.dt;
        let rounded = ratio.round();
        if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
            rounded as u64
        } else {
            ratio.ceil() as u64
        }
    }

    /// Hex SHA-256 prefix of the canonical JSON form of this configuration.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        short_digest(&json)
    }
}

/// First 16 hex characters of the SHA-256 of `bytes`.
pub fn short_digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
