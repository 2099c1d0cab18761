//! Truncated Galerkin system with dealiased pseudo-spectral advection and an
//! integrating-factor RK4 time stepper.

mod config;
mod nonlinear;
mod run;
mod stepper;

pub use config::{short_digest, Dealias, SolverConfig};
pub use nonlinear::{galerkin_truncate, nonlinear_term, rhs, NonlinearTerm, NonlinearWorkspace};
pub use run::{cfl_number, run, RunOutput, Simulation, TrajectoryRecord};
pub use stepper::{step, IfRk4, StepOutput};

