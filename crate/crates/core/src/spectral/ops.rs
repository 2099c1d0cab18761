use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SpectralField, TorusGrid};
use crate::error::{Error, Result};

/// Lower end of the dissipation range on which the critical-norm
/// interpolation holds.
pub const ALPHA_MIN: f64 = 5.0 / 6.0;
/// Critical dissipation index in three dimensions.
pub const ALPHA_CRITICAL: f64 = 5.0 / 4.0;

/// Relative slack used when comparing an `alpha` against a closed range.
pub(crate) const RANGE_SLACK: f64 = 1e-12;

pub(crate) fn in_closed_range(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo - RANGE_SLACK * lo.abs().max(1.0) && x <= hi + RANGE_SLACK * hi.abs().max(1.0)
}

/// Multiplier `|k|^{2α}` of the fractional Laplacian. The zero mode maps to 0
/// for every `α`, including `α = 0`.
pub fn fractional_symbol(k: &[i64], alpha: f64) -> f64 {
    let k_sq: i64 = k.iter().map(|c| c * c).sum();
    symbol_from_k_sq(k_sq as f64, alpha)
}

#[inline]
pub(crate) fn symbol_from_k_sq(k_sq: f64, alpha: f64) -> f64 {
    if k_sq == 0.0 {
        0.0
    } else {
        k_sq.powf(alpha)
    }
}

/// Orthogonal projection onto divergence-free fields:
/// `û(k) ↦ û(k) - k (k·û(k)) / |k|²`, with the zero mode cleared.
pub fn leray_project(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    leray_project_mut(&mut out);
    out
}

pub(crate) fn leray_project_mut(f: &mut SpectralField) {
    let grid = f.grid();
    let dim = grid.dim();
    for idx in 1..grid.len() {
        let k = grid.wavenumber(idx);
        let k_sq = grid.k_sq(idx);
        let mut dot = Complex64::new(0.0, 0.0);
        for a in 0..dim {
            dot += f.component(a)[idx] * k[a] as f64;
        }
        if dot == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ratio = dot / k_sq;
        for a in 0..dim {
            f.component_mut(a)[idx] -= ratio * k[a] as f64;
        }
    }
    f.clear_mean();
}

fn sobolev_sq(u: &SpectralField, s: f64) -> f64 {
    let grid = u.grid();
    let weights: Vec<f64> = (0..grid.len())
        .map(|idx| {
            let k_sq = grid.k_sq(idx);
            if k_sq == 0.0 {
                0.0
            } else {
                k_sq.powf(s)
            }
        })
        .collect();
    u.components()
        .iter()
        .map(|c| {
            c.iter()
                .zip(&weights)
                .map(|(z, w)| w * z.norm_sqr())
                .sum::<f64>()
        })
        .sum()
}

/// Homogeneous Sobolev seminorm `(Σ_{k≠0} |k|^{2s} |û(k)|²)^{1/2}`.
///
/// Exponents below `-n/2` are rejected.
pub fn sobolev_norm(u: &SpectralField, s: f64) -> Result<f64> {
    check_sobolev_exponent(u.grid(), s)?;
    Ok(sobolev_sq(u, s).sqrt())
}

fn check_sobolev_exponent(grid: TorusGrid, s: f64) -> Result<()> {
    let floor = -(grid.dim() as f64) / 2.0;
    if !s.is_finite() || s < floor {
        return Err(Error::domain(format!(
            "Sobolev exponent {s} below -n/2 = {floor}"
        )));
    }
    Ok(())
}

/// `L²` norm and a set of `Ḣ^s` seminorms of one field state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSet {
    pub l2: f64,
    /// `(s, ‖Λ^s u‖)` pairs in request order.
    pub hs: Vec<(f64, f64)>,
}

impl NormSet {
    pub fn compute(u: &SpectralField, exponents: &[f64]) -> Result<Self> {
        let l2 = sobolev_norm(u, 0.0)?;
        let hs = exponents
            .iter()
            .map(|&s| sobolev_norm(u, s).map(|v| (s, v)))
            .collect::<Result<_>>()?;
        Ok(Self { l2, hs })
    }

    pub fn get(&self, s: f64) -> Option<f64> {
        self.hs.iter().find(|(e, _)| *e == s).map(|(_, v)| *v)
    }
}

/// Outcome of the critical-norm interpolation check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnCheck {
    /// `‖u‖_{Ḣ^{(5-4α)/2}}`
    pub lhs: f64,
    /// `‖u‖^{(6α-5)/2α} ‖Λ^α u‖^{(5-4α)/2α}`
    pub rhs: f64,
    pub ratio: f64,
}

/// Compare the critical seminorm with its interpolation bound between `L²`
/// and `Ḣ^α`. On the torus with zero mean the constant is 1, so `ratio <= 1`.
pub fn gn_interpolation_check(u: &SpectralField, alpha: f64) -> Result<GnCheck> {
    if !in_closed_range(alpha, ALPHA_MIN, ALPHA_CRITICAL) {
        return Err(Error::domain(format!(
            "interpolation check needs alpha in [5/6, 5/4], got {alpha}"
        )));
    }
    let l2 = sobolev_norm(u, 0.0)?;
    if l2 == 0.0 {
        return Err(Error::domain("interpolation check on the zero field"));
    }
    let lhs = sobolev_norm(u, (5.0 - 4.0 * alpha) / 2.0)?;
    let halpha = sobolev_norm(u, alpha)?;
    let rhs = l2.powf((6.0 * alpha - 5.0) / (2.0 * alpha))
        * halpha.powf((5.0 - 4.0 * alpha) / (2.0 * alpha));
    Ok(GnCheck {
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}

/// Spatial part of the scaling symmetry at fixed time: the coefficient at
/// `λk` becomes `λ^{2α-1} û(k)`, every other coefficient is zero.
///
/// Fails when an active mode would land outside the lattice or on a Nyquist
/// plane.
pub fn scale_field(u: &SpectralField, lambda: u32, alpha: f64) -> Result<SpectralField> {
    if lambda == 0 {
        return Err(Error::domain("scale factor must be a positive integer"));
    }
    let grid = u.grid();
    let dim = grid.dim();
    let half = (grid.resolution() / 2) as i64;
    let factor = (lambda as f64).powf(2.0 * alpha - 1.0);
    let mut out = SpectralField::zeros(grid);
    for idx in 1..grid.len() {
        let v = u.at(idx);
        if v.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            continue;
        }
        let k = grid.wavenumber(idx);
        let scaled: Vec<i64> = k[..dim].iter().map(|c| c * lambda as i64).collect();
        if scaled.iter().any(|c| c.abs() >= half) {
            return Err(Error::Overflow(format!(
                "mode {:?} scaled by {lambda} leaves the lattice of resolution {}",
                &k[..dim],
                grid.resolution()
            )));
        }
        let target = grid.index_of(&scaled).expect("checked inside lattice");
        for (a, z) in v.iter().enumerate() {
            out.component_mut(a)[target] = z * factor;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(fractional_symbol(&[1, 0, 0], 1.0), 1.0);
        assert_eq!(fractional_symbol(&[0, 0], 0.7), 0.0);
        assert_eq!(fractional_symbol(&[0, 0, 0], 0.0), 0.0);
        // 3^{5/6} = exp(5/6 ln 3), written out independently
        let expected = (5.0 / 6.0 * 3.0f64.ln()).exp();
        assert!((fractional_symbol(&[1, 1, 1], 5.0 / 6.0) - expected).abs() < 1e-14);
        assert!((fractional_symbol(&[1, 1, 1], 5.0 / 6.0) - 2.498_049_533_3).abs() < 1e-9);
    }

    #[test]
    fn leray_hand_example() {
        let g = TorusGrid::new(2, 8).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_mode(&[1, 0], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let p = leray_project(&f);
        assert_eq!(p.coeff(&[1, 0]).unwrap(), vec![c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn leray_kills_gradients() {
        let g = TorusGrid::new(3, 8).unwrap();
        let mut f = SpectralField::zeros(g);
        for (i, k) in [[1i64, 2, -1], [0, 3, 1], [2, 0, 0]].iter().enumerate() {
            let phi = c(0.3 + i as f64, -0.2 * i as f64);
            let v: Vec<_> = k.iter().map(|&kc| c(0.0, kc as f64) * phi).collect();
            f.set_mode(k, &v).unwrap();
        }
        let p = leray_project(&f);
        assert!(p.max_abs() < 1e-15);
    }

    #[test]
    fn sobolev_single_mode_examples() {
        let g = TorusGrid::new(3, 8).unwrap();
        let a = c(0.6, -0.8); // |a| = 1
        let mut f = SpectralField::zeros(g);
        f.set_mode(&[1, 0, 0], &[a, c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        for s in [-1.0, 0.0, 0.5, 2.0] {
            assert!((sobolev_norm(&f, s).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        }
        let mut f2 = SpectralField::zeros(g);
        f2.set_mode(&[2, 0, 0], &[a * 3.0, c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((sobolev_norm(&f2, 1.0).unwrap() - 2.0 * 3.0 * 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(sobolev_norm(&SpectralField::zeros(g), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sobolev_rejects_low_exponent() {
        let g = TorusGrid::new(2, 8).unwrap();
        let f = SpectralField::zeros(g);
        assert!(sobolev_norm(&f, -1.0).is_ok());
        assert!(matches!(sobolev_norm(&f, -1.01), Err(Error::Domain(_))));
    }

    #[test]
    fn normset_zero_exponent_is_l2() {
        let g = TorusGrid::new(2, 8).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_mode(&[1, 2], &[c(0.2, 0.1), c(-0.1, 0.3)]).unwrap();
        f.set_mode(&[3, -1], &[c(0.5, 0.0), c(0.0, 0.7)]).unwrap();
        let n = NormSet::compute(&f, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(n.get(0.0).unwrap(), n.l2);
    }

    #[test]
    fn gn_endpoints() {
        let g = TorusGrid::new(3, 8).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_mode(&[1, 2, 0], &[c(0.2, 0.1), c(-0.1, 0.3), c(0.0, 0.1)]).unwrap();
        f.set_mode(&[0, 1, 0], &[c(0.5, 0.0), c(0.0, 0.0), c(0.2, 0.0)]).unwrap();
        let chk = gn_interpolation_check(&f, 1.25).unwrap();
        let l2 = sobolev_norm(&f, 0.0).unwrap();
        assert!((chk.lhs - l2).abs() < 1e-15);
        assert!((chk.rhs - l2).abs() < 1e-15);
        assert!(gn_interpolation_check(&f, 0.8).is_err());
        assert!(gn_interpolation_check(&SpectralField::zeros(g), 1.0).is_err());
    }

    #[test]
    fn scale_field_examples() {
        let g = TorusGrid::new(2, 16).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_mode(&[1, 0], &[c(0.0, 0.0), c(1.0, 0.5)]).unwrap();
        assert_eq!(scale_field(&f, 1, 1.3).unwrap(), f);
        let s = scale_field(&f, 2, 1.0).unwrap();
        let r0 = sobolev_norm(&s, 0.0).unwrap() / sobolev_norm(&f, 0.0).unwrap();
        let r1 = sobolev_norm(&s, 1.0).unwrap() / sobolev_norm(&f, 1.0).unwrap();
        assert!((r0 - 2.0).abs() < 1e-14);
        assert!((r1 - 4.0).abs() < 1e-14);
        let s = scale_field(&f, 2, 1.25).unwrap();
        let r = sobolev_norm(&s, 0.0).unwrap() / sobolev_norm(&f, 0.0).unwrap();
        assert!((r - 2f64.powf(1.5)).abs() < 1e-14);
        assert!(matches!(scale_field(&f, 8, 1.0), Err(Error::Overflow(_))));
    }
}
