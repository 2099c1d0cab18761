use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::spectral::in_closed_range;

/// Power of `λ` by which the whole-space energy functional scales:
/// `E_α(u_λ) = λ^{4α-(n+2)} E_α(u)`. Zero marks the critical index.
pub fn scaling_exponent(alpha: f64, n: usize) -> f64 {
    4.0 * alpha - (n as f64 + 2.0)
}

/// Upper bound `(n+2-4α)/(2α)` on the Hausdorff dimension of the singular
/// time set, valid for `(n+2)/6 <= α <= (n+2)/4`.
pub fn hausdorff_exponent(alpha: f64, n: usize) -> Result<f64> {
    let m = n as f64 + 2.0;
    if n == 0 || !in_closed_range(alpha, m / 6.0, m / 4.0) {
        return Err(Error::domain(format!(
            "dimension bound needs (n+2)/6 <= alpha <= (n+2)/4 for n = {n}, got alpha = {alpha}"
        )));
    }
    // (n+2)/(2α) - 2 rounds exactly at the usual rational endpoints
    Ok((m / (2.0 * alpha) - 2.0).max(0.0))
}

/// Exact rational form of [`scaling_exponent`].
pub fn scaling_exponent_exact(alpha: Rational64, n: usize) -> Rational64 {
    Rational64::from_integer(4) * alpha - Rational64::from_integer(n as i64 + 2)
}

/// Exact rational form of [`hausdorff_exponent`].
pub fn hausdorff_exponent_exact(alpha: Rational64, n: usize) -> Result<Rational64> {
    let m = Rational64::from_integer(n as i64 + 2);
    let lo = m / Rational64::from_integer(6);
    let hi = m / Rational64::from_integer(4);
    if n == 0 || alpha < lo || alpha > hi {
        return Err(Error::domain(format!(
            "dimension bound needs (n+2)/6 <= alpha <= (n+2)/4 for n = {n}, got alpha = {alpha}"
        )));
    }
    Ok((m - Rational64::from_integer(4) * alpha) / (Rational64::from_integer(2) * alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn endpoint_values() {
        assert_eq!(hausdorff_exponent(1.0, 3).unwrap(), 0.5);
        assert_eq!(hausdorff_exponent(5.0 / 6.0, 3).unwrap(), 1.0);
        assert_eq!(hausdorff_exponent(5.0 / 4.0, 3).unwrap(), 0.0);
        assert_eq!(hausdorff_exponent(2.0 / 3.0, 2).unwrap(), 1.0);
        assert_eq!(hausdorff_exponent(1.0, 2).unwrap(), 0.0);
        assert_eq!(scaling_exponent(1.25, 3), 0.0);
        assert!(hausdorff_exponent(0.8, 3).is_err());
        assert!(hausdorff_exponent(1.3, 3).is_err());
    }

    #[test]
    fn exact_forms() {
        assert_eq!(hausdorff_exponent_exact(r(5, 6), 3).unwrap(), r(1, 1));
        assert_eq!(hausdorff_exponent_exact(r(1, 1), 3).unwrap(), r(1, 2));
        assert_eq!(hausdorff_exponent_exact(r(5, 4), 3).unwrap(), r(0, 1));
        assert_eq!(hausdorff_exponent_exact(r(2, 3), 2).unwrap(), r(1, 1));
        // 2D specialization (2 - 2α)/α
        assert_eq!(hausdorff_exponent_exact(r(4, 5), 2).unwrap(), r(1, 2));
        assert_eq!(scaling_exponent_exact(r(5, 4), 3), r(0, 1));
        assert_eq!(scaling_exponent_exact(r(1, 1), 3), r(-1, 1));
        assert!(hausdorff_exponent_exact(r(1, 2), 3).is_err());
    }

    #[test]
    fn strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let a = 5.0 / 6.0 + (5.0 / 4.0 - 5.0 / 6.0) * i as f64 / 100.0;
            let d = hausdorff_exponent(a, 3).unwrap();
            assert!(d < prev);
            prev = d;
        }
    }
}
