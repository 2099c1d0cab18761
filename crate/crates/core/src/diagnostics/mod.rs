//! Energy functionals, criticality and smallness monitors, local horizon,
//! growth and stability envelopes, and the scaling/dimension exponents.

mod criticality;
mod exponents;
mod monitors;
mod report;
mod series;

pub use criticality::{criticality_exponents, criticality_quantity, halpha_from_criticality, local_horizon};
pub use exponents::{hausdorff_exponent, hausdorff_exponent_exact, scaling_exponent, scaling_exponent_exact};
pub use monitors::{
    alpha54_growth_bound, alpha54_required_constant, difference_series, energy_inequality_residual,
    energy_inequality_residual_trapezoid, eventual_regularity_time, first_crossing,
    monotone_decay_monitor, series_local_horizon, stability_exponent, weak_strong_stability,
    GrowthBound, MonotoneDecay, StabilityReport, MONOTONE_SLACK,
};
pub use report::{DataSource, Provenance, RegularityReport};
pub use series::{EnergyRecord, EnergySeries};
