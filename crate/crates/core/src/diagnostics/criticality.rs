use crate::error::{Error, Result};
use crate::spectral::{in_closed_range, ALPHA_CRITICAL, ALPHA_MIN};

/// Exponents `((6α-5)/2α, (5-4α)/2α)` on `‖u‖` and `‖Λ^α u‖` in the
/// criticality quantity.
pub fn criticality_exponents(alpha: f64) -> (f64, f64) {
    (
        (6.0 * alpha - 5.0) / (2.0 * alpha),
        (5.0 - 4.0 * alpha) / (2.0 * alpha),
    )
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !in_closed_range(alpha, ALPHA_MIN, ALPHA_CRITICAL) {
        return Err(Error::domain(format!(
            "criticality quantity needs alpha in [5/6, 5/4], got {alpha}"
        )));
    }
    Ok(())
}

/// `Q = ‖u‖^{(6α-5)/2α} ‖Λ^α u‖^{(5-4α)/2α}`, the scale-invariant size of the
/// data whose smallness against `ν/C₁` gives global regularity.
///
/// Either norm being zero means the field is zero, so `Q = 0`.
pub fn criticality_quantity(l2: f64, halpha: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if l2 < 0.0 || halpha < 0.0 || !l2.is_finite() || !halpha.is_finite() {
        return Err(Error::domain("norms must be finite and nonnegative"));
    }
    if l2 == 0.0 || halpha == 0.0 {
        return Ok(0.0);
    }
    let (a, b) = criticality_exponents(alpha);
    Ok(l2.powf(a) * halpha.powf(b))
}

/// Invert `Q` for `‖Λ^α u‖` at fixed `‖u‖`; needs `α < 5/4`.
pub fn halpha_from_criticality(q: f64, l2: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (a, b) = criticality_exponents(alpha);
    if b <= 0.0 {
        return Err(Error::domain("Q does not depend on the H^alpha norm at alpha = 5/4"));
    }
    if l2 <= 0.0 {
        return Err(Error::domain("L2 norm must be positive"));
    }
    Ok((q / l2.powf(a)).powf(1.0 / b))
}

/// Local existence horizon
/// `T* = ν^{(5-2α)/(6α-5)} / ((2αC/(6α-5)) ‖Λ^α u₀‖^{4α/(6α-5)})`.
///
/// Defined only for `5/6 < α <= 5/4`: at `α = 5/6` the exponents diverge.
pub fn local_horizon(halpha0: f64, nu: f64, alpha: f64, c: f64) -> Result<f64> {
    if !(alpha > ALPHA_MIN) {
        return Err(Error::domain(format!(
            "local horizon requires the strict inequality 5/6 < alpha (exponents diverge at 5/6), got {alpha}"
        )));
    }
    if !in_closed_range(alpha, ALPHA_MIN, ALPHA_CRITICAL) {
        return Err(Error::domain(format!(
            "local horizon requires alpha <= 5/4, got {alpha}"
        )));
    }
    for (name, v) in [("halpha0", halpha0), ("nu", nu), ("C", c)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    let gap = 6.0 * alpha - 5.0;
    let prefactor = 2.0 * alpha * c / gap;
    Ok(nu.powf((5.0 - 2.0 * alpha) / gap) / (prefactor * halpha0.powf(4.0 * alpha / gap)))
}
