//! Blow-up envelope fitting, regular/irregular time decomposition and
//! Hausdorff pre-measure cover sums on norm time series.

mod cover;
mod envelope;

pub use cover::{
    cover_sum, decompose_regular_set, dimension_curve, hausdorff_normalization, suggest_regular_threshold,
    CoverMeasure, IntervalSet,
};
pub use envelope::{
    blowup_envelope, envelope_exponents, envelope_exponents_exact, fit_blowup, BlowupFit, NormSeries, FIT_T0_TOL,
};
