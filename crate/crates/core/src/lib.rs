//! Pseudo-spectral Galerkin solver for the fractional Navier–Stokes system
//! `∂ₜu + ν(-Δ)^α u + P(u·∇u) = 0`, `∇·u = 0` on the periodic torus, with
//! energy, criticality, blow-up envelope and singular-set diagnostics.

pub mod diagnostics;
pub mod error;
pub mod io;
pub mod singular;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
