use std::path::PathBuf;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{short_digest, Dealias, SolverConfig};
use crate::spectral::{in_closed_range, random_divfree_field, taylor_green, SpectralField, TorusGrid, ALPHA_CRITICAL, ALPHA_MIN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    TaylorGreen,
    Random,
}

/// Initial velocity. `slope` and `seed` only affect `random`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(rename = "type")]
    pub kind: InitialKind,
    #[serde(default = "default_slope")]
    pub slope: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
}

fn default_slope() -> f64 {
    -2.0
}

fn default_amplitude() -> f64 {
    1.0
}

fn default_record_every() -> usize {
    1
}

impl InitialSpec {
    pub fn build(&self, grid: TorusGrid) -> SpectralField {
        let field = match self.kind {
            InitialKind::TaylorGreen => taylor_green(grid),
            InitialKind::Random => random_divfree_field(grid, self.slope, self.seed),
        };
        field.scaled(self.amplitude)
    }
}

/// On-disk run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dim: usize,
    #[serde(rename = "N")]
    pub resolution: usize,
    pub alpha: f64,
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub dealias: Dealias,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    pub initial: InitialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    /// Require `α ∈ [5/6, 5/4]` so every regularity diagnostic is defined.
    #[serde(default)]
    pub strict_diagnostics: bool,
}

/// Deserialize JSON, reporting failures as [`Error::Config`] with the
/// dotted path of the offending field.
pub(crate) fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner().to_string();
        let mut field = e.path().to_string();
        if let Some(name) = missing_field(&inner) {
            field = if field == "." { name } else { format!("{field}.{name}") };
        }
        Error::config(field, inner)
    })
}

fn missing_field(msg: &str) -> Option<String> {
    if !msg.starts_with("missing field") {
        return None;
    }
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = parse_json(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn grid(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.dim, self.resolution)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut cfg = SolverConfig::new(self.grid()?, self.alpha, self.nu, self.dt, self.t_end)
            .with_record_every(self.record_every)
            .with_dealias(self.dealias);
        if let Some(c) = self.cutoff {
            cfg = cfg.with_cutoff(c);
        }
        if let Some(every) = self.snapshot_every {
            cfg = cfg.with_snapshots(every);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.strict_diagnostics && !in_closed_range(self.alpha, ALPHA_MIN, ALPHA_CRITICAL) {
            return Err(Error::config(
                "alpha",
                format!("strict_diagnostics requires 5/6 <= alpha <= 5/4, got {}", self.alpha),
            ));
        }
        if !self.initial.amplitude.is_finite() {
            return Err(Error::config("initial.amplitude", "must be finite"));
        }
        if !self.initial.slope.is_finite() {
            return Err(Error::config("initial.slope", "must be finite"));
        }
        self.solver_config()?.validate()
    }

    /// Digest of everything that determines the numbers of a run; the output
    /// location is excluded.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        short_digest(&serde_json::to_vec(&c).expect("config serializes"))
    }

    pub fn initial_field(&self) -> Result<SpectralField> {
        Ok(self.initial.build(self.grid()?))
    }
}

/// A family of runs differing only in `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: RunConfig,
    pub alpha_list: Vec<f64>,
    pub output_root: PathBuf,
    #[serde(default = "default_width")]
    pub parallel_width: usize,
}

fn default_width() -> usize {
    1
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = parse_json(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_list.is_empty() {
            return Err(Error::config("alpha_list", "must not be empty"));
        }
        if self.parallel_width == 0 {
            return Err(Error::config("parallel_width", "must be positive"));
        }
        for &a in &self.alpha_list {
            if !in_closed_range(a, 0.0, ALPHA_CRITICAL) {
                return Err(Error::config("alpha_list", format!("{a} is outside [0, 5/4]")));
            }
        }
        Ok(())
    }

    /// The base config with `alpha` substituted.
    pub fn member(&self, alpha: f64) -> Result<RunConfig> {
        let mut cfg = self.base.clone();
        cfg.alpha = alpha;
        cfg.validate()?;
        Ok(cfg)
    }
}
