use super::nonlinear::apply_mask;
use super::{IfRk4, NonlinearTerm, NonlinearWorkspace, SolverConfig};
use crate::diagnostics::{criticality_quantity, EnergyRecord, EnergySeries};
use crate::error::{Error, Result};
use crate::spectral::{in_closed_range, FftPlan, NormSet, SpectralField, ALPHA_CRITICAL, ALPHA_MIN};

/// Norms and flux of one recorded state, optionally with the state itself.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub field: Option<SpectralField>,
    /// `‖·‖_{Ḣ^s}` at `s ∈ {0, α, 2α}`.
    pub norms: NormSet,
    pub nonlinear_flux: f64,
}

/// Everything a finished (or aborted) integration produced.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: EnergySeries,
    pub trajectory: Vec<TrajectoryRecord>,
    pub final_state: SpectralField,
    pub final_time: f64,
}

/// Single-writer integration of the truncated Galerkin system.
///
/// The initial data is projected onto the retained modes, then advanced with
/// [`IfRk4`]. A record is taken at `t = 0`, after every `record_every` steps
/// and at the final time.
pub struct Simulation {
    cfg: SolverConfig,
    stepper: IfRk4,
    nonlinear: NonlinearWorkspace,
    state: SpectralField,
    steps_done: u64,
    n_steps: u64,
    time: f64,
    diss_integral: f64,
    l2_sq_initial: f64,
    pending_advection: Option<SpectralField>,
    records_taken: usize,
    series: EnergySeries,
    trajectory: Vec<TrajectoryRecord>,
}

impl Simulation {
    pub fn new(cfg: SolverConfig, u0: &SpectralField) -> Result<Self> {
        cfg.validate()?;
        if u0.grid() != cfg.grid {
            return Err(Error::GridMismatch(format!(
                "initial field on {:?}, config on {:?}",
                u0.grid(),
                cfg.grid
            )));
        }
        if !u0.is_finite() {
            return Err(Error::domain("initial field has non-finite coefficients"));
        }
        let nonlinear = NonlinearWorkspace::new(&cfg);
        let mut state = u0.clone();
        apply_mask(&mut state, nonlinear.mask());

        let cfl = cfl_number(&state, cfg.dt);
        if cfl > 1.0 {
            log::warn!("advective CFL number {cfl:.3} exceeds 1; consider a smaller dt");
        }

        let stepper = IfRk4::new(cfg.grid, cfg.alpha, cfg.nu, cfg.dt);
        let series = EnergySeries::new(cfg.alpha, cfg.nu, cfg.grid.dim(), cfg.digest());
        let mut sim = Self {
            n_steps: cfg.n_steps(),
            l2_sq_initial: state.l2_sq(),
            cfg,
            stepper,
            nonlinear,
            state,
            steps_done: 0,
            time: 0.0,
            diss_integral: 0.0,
            pending_advection: None,
            records_taken: 0,
            series,
            trajectory: Vec::new(),
        };
        sim.record()?;
        Ok(sim)
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn state(&self) -> &SpectralField {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn series(&self) -> &EnergySeries {
        &self.series
    }

    pub fn is_finished(&self) -> bool {
        self.steps_done >= self.n_steps
    }

    fn record(&mut self) -> Result<()> {
        let alpha = self.cfg.alpha;
        let advection = self.nonlinear.eval(&self.state);
        let nonlinear_flux = advection.inner(&self.state)?;
        let norms = NormSet::compute(&self.state, &[0.0, alpha, 2.0 * alpha])?;
        let halpha = norms.hs[1].1;
        let q = if in_closed_range(alpha, ALPHA_MIN, ALPHA_CRITICAL) {
            Some(criticality_quantity(norms.l2, halpha, alpha)?)
        } else {
            None
        };
        let l2_sq = norms.l2 * norms.l2;
        self.series.push(EnergyRecord {
            t: self.time,
            l2_sq,
            halpha_sq: halpha * halpha,
            h2alpha_sq: norms.hs[2].1 * norms.hs[2].1,
            diss_integral: self.diss_integral,
            q,
            residual: l2_sq + self.diss_integral - self.l2_sq_initial,
            nonlin_flux: nonlinear_flux,
        })?;
        let keep_field = self
            .cfg
            .snapshot_every
            .is_some_and(|every| self.records_taken % every == 0);
        self.trajectory.push(TrajectoryRecord {
            t: self.time,
            field: keep_field.then(|| self.state.clone()),
            norms,
            nonlinear_flux,
        });
        self.records_taken += 1;
        self.pending_advection = Some(advection);
        Ok(())
    }

    /// Advance one step. Returns `Ok(false)` once `t_end` has been reached.
    pub fn advance(&mut self) -> Result<bool> {
        if self.is_finished() {
            return Ok(false);
        }
        let next_index = self.steps_done + 1;
        let is_last = next_index == self.n_steps;
        let target_time = if is_last {
            self.cfg.t_end
        } else {
            next_index as f64 * self.cfg.dt
        };
        let h = target_time - self.time;
        let advection = self.pending_advection.take();
        let out = if (h - self.cfg.dt).abs() <= 1e-12 * self.cfg.dt {
            self.stepper.step(&self.state, advection, &mut self.nonlinear)
        } else {
            let short = IfRk4::new(self.cfg.grid, self.cfg.alpha, self.cfg.nu, h);
            short.step(&self.state, advection, &mut self.nonlinear)
        };
        if !out.state.is_finite() || !out.dissipation.is_finite() {
            return Err(Error::Stability {
                step: next_index,
                last_good_time: self.time,
            });
        }
        self.state = out.state;
        self.diss_integral += out.dissipation;
        self.time = target_time;
        self.steps_done = next_index;
        if is_last || next_index % self.cfg.record_every as u64 == 0 {
            self.record()?;
        }
        Ok(true)
    }

    pub fn run_to_end(&mut self) -> Result<()> {
        while self.advance()? {}
        Ok(())
    }

    pub fn into_output(self) -> RunOutput {
        RunOutput {
            series: self.series,
            trajectory: self.trajectory,
            final_state: self.state,
            final_time: self.time,
        }
    }
}

/// Integrate `u0` to `cfg.t_end`.
pub fn run(cfg: &SolverConfig, u0: &SpectralField) -> Result<RunOutput> {
    let mut sim = Simulation::new(cfg.clone(), u0)?;
    sim.run_to_end()?;
    Ok(sim.into_output())
}

/// `dt · max|u| · k_max`, an advisory explicit-advection stability number.
pub fn cfl_number(u: &SpectralField, dt: f64) -> f64 {
    let grid = u.grid();
    let mut plan = FftPlan::new(grid);
    let phys = u.to_physical(&mut plan);
    let speed = (0..grid.len())
        .map(|i| phys.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let kmax = (0..grid.len())
        .filter(|&i| u.components().iter().any(|c| c[i].norm_sqr() > 0.0))
        .map(|i| grid.k_sq(i).sqrt())
        .fold(0.0, f64::max);
    dt * speed * kmax
}
