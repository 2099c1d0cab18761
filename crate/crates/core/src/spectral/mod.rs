//! Fourier representation of periodic vector fields: lattice, transforms,
//! fractional symbol, Leray projection, Sobolev norms and scaling.

mod fft;
mod field;
mod grid;
mod init;
mod ops;
pub mod snapshot;

pub use fft::FftPlan;
pub use field::SpectralField;
pub use grid::TorusGrid;
pub use init::{random_divfree_field, taylor_green};
pub use ops::{
    fractional_symbol, gn_interpolation_check, leray_project, scale_field, sobolev_norm, GnCheck,
    NormSet, ALPHA_CRITICAL, ALPHA_MIN,
};

pub(crate) use ops::{in_closed_range, leray_project_mut, symbol_from_k_sq};
