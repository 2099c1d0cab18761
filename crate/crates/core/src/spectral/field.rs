use num_complex::Complex64;

use super::{FftPlan, TorusGrid};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated Fourier coefficients of a real vector field on the torus.
///
/// Components are stored separately, each in the grid's FFT ordering. The
/// zero mode is forced to zero by every constructor and arithmetic operation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    comps: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            comps: vec![vec![ZERO; grid.len()]; grid.dim()],
        }
    }

    /// Build from raw component arrays. The zero mode is cleared.
    pub fn from_components(grid: TorusGrid, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if comps.len() != grid.dim() || comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::GridMismatch(format!(
                "expected {} components of length {}",
                grid.dim(),
                grid.len()
            )));
        }
        let mut f = Self { grid, comps };
        f.clear_mean();
        Ok(f)
    }

    /// Transform physical samples (one real array per component) to a field.
    pub fn from_physical(grid: TorusGrid, plan: &mut FftPlan, samples: &[Vec<f64>]) -> Result<Self> {
        if samples.len() != grid.dim() || samples.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::GridMismatch("physical samples do not match grid".into()));
        }
        let comps = samples
            .iter()
            .map(|s| {
                let mut buf: Vec<Complex64> = s.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                plan.to_spectral(&mut buf);
                buf
            })
            .collect();
        Self::from_components(grid, comps)
    }

    /// Real parts of the physical samples of each component.
    pub fn to_physical(&self, plan: &mut FftPlan) -> Vec<Vec<f64>> {
        self.comps
            .iter()
            .map(|c| {
                let mut buf = c.clone();
                plan.to_physical(&mut buf);
                buf.into_iter().map(|z| z.re).collect()
            })
            .collect()
    }

    #[inline]
    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    #[inline]
    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    #[inline]
    pub(crate) fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    /// Coefficient vector at storage index `idx`.
    pub fn at(&self, idx: usize) -> Vec<Complex64> {
        self.comps.iter().map(|c| c[idx]).collect()
    }

    /// Coefficient vector at wavenumber `k`, or `None` outside the lattice.
    pub fn coeff(&self, k: &[i64]) -> Option<Vec<Complex64>> {
        self.grid.index_of(k).map(|idx| self.at(idx))
    }

    /// Set the coefficient at `k` and its conjugate partner at `-k`.
    pub fn set_mode(&mut self, k: &[i64], value: &[Complex64]) -> Result<()> {
        let idx = self
            .grid
            .index_of(k)
            .ok_or_else(|| Error::Index(format!("wavenumber {k:?} outside lattice")))?;
        if value.len() != self.grid.dim() {
            return Err(Error::GridMismatch("mode vector has wrong length".into()));
        }
        if self.grid.is_nyquist(idx) {
            return Err(Error::Index(format!("wavenumber {k:?} is an unpaired Nyquist mode")));
        }
        let cidx = self.grid.conjugate_index(idx);
        for (c, v) in self.comps.iter_mut().zip(value) {
            c[idx] = *v;
            c[cidx] = v.conj();
        }
        self.clear_mean();
        Ok(())
    }

    pub(crate) fn clear_mean(&mut self) {
        for c in &mut self.comps {
            c[0] = ZERO;
        }
    }

    /// Zero every coefficient on the `+N/2` planes.
    pub fn clear_nyquist(&mut self) {
        for idx in 0..self.grid.len() {
            if self.grid.is_nyquist(idx) {
                for c in &mut self.comps {
                    c[idx] = ZERO;
                }
            }
        }
    }

    /// Replace each coefficient pair by its Hermitian average so the field is
    /// exactly real; Nyquist modes are cleared.
    pub fn enforce_reality(&mut self) {
        let grid = self.grid;
        for c in &mut self.comps {
            for idx in 0..grid.len() {
                let cidx = grid.conjugate_index(idx);
                if cidx < idx {
                    continue;
                }
                if cidx == idx {
                    c[idx] = Complex64::new(c[idx].re, 0.0);
                    continue;
                }
                let avg = (c[idx] + c[cidx].conj()) * 0.5;
                c[idx] = avg;
                c[cidx] = avg.conj();
            }
        }
        self.clear_nyquist();
        self.clear_mean();
    }

    /// Largest `|û(-k) - conj(û(k))|` over the lattice.
    pub fn reality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.comps {
            for idx in 0..self.grid.len() {
                let cidx = self.grid.conjugate_index(idx);
                worst = worst.max((c[cidx] - c[idx].conj()).norm());
            }
        }
        worst
    }

    /// Largest `|k·û(k)| / (|k| |û(k)|)` over nonzero modes.
    pub fn divergence_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in 1..self.grid.len() {
            let k = self.grid.wavenumber(idx);
            let mut dot = ZERO;
            let mut mag_sq = 0.0;
            for (a, c) in self.comps.iter().enumerate() {
                dot += c[idx] * k[a] as f64;
                mag_sq += c[idx].norm_sqr();
            }
            if mag_sq > 0.0 {
                let kmag = self.grid.k_sq(idx).sqrt();
                worst = worst.max(dot.norm() / (kmag * mag_sq.sqrt()));
            }
        }
        worst
    }

    /// Real `L²` inner product `Re Σ_k f(k)·conj(g(k))`.
    pub fn inner(&self, other: &SpectralField) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).sum::<f64>())
            .sum())
    }

    /// `Σ_k |û(k)|²`.
    pub fn l2_sq(&self) -> f64 {
        self.comps
            .iter()
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> SpectralField {
        let mut out = self.clone();
        out.scale_mut(factor);
        out
    }

    pub fn scale_mut(&mut self, factor: f64) {
        for c in &mut self.comps {
            for z in c.iter_mut() {
                *z *= factor;
            }
        }
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &SpectralField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<SpectralField> {
        self.check_grid(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect())
            .collect();
        let mut out = SpectralField { grid: self.grid, comps };
        out.clear_mean();
        Ok(out)
    }

    pub(crate) fn check_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// Copy coefficients onto another grid of the same dimension, dropping
    /// modes that do not exist there (and any Nyquist modes of the target).
    pub fn resample(&self, target: TorusGrid) -> Result<SpectralField> {
        if target.dim() != self.grid.dim() {
            return Err(Error::GridMismatch("dimensions differ".into()));
        }
        let mut out = SpectralField::zeros(target);
        for idx in 0..self.grid.len() {
            let k = self.grid.wavenumber(idx);
            if let Some(t) = target.index_of(&k[..target.dim()]) {
                if target.is_nyquist(t) {
                    continue;
                }
                for (dst, src) in out.comps.iter_mut().zip(&self.comps) {
                    dst[t] = src[idx];
                }
            }
        }
        out.clear_mean();
        Ok(out)
    }

    /// Largest magnitude of any coefficient component.
    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_mode_writes_conjugate_partner() {
        let g = TorusGrid::new(2, 8).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_mode(&[1, 2], &[Complex64::new(1.0, 2.0), Complex64::new(0.5, -1.0)])
            .unwrap();
        let back = f.coeff(&[-1, -2]).unwrap();
        assert_eq!(back[0], Complex64::new(1.0, -2.0));
        assert_eq!(back[1], Complex64::new(0.5, 1.0));
        assert_eq!(f.reality_defect(), 0.0);
        assert!(f.set_mode(&[4, 0], &[ZERO, ZERO]).is_err());
    }

    #[test]
    fn mean_is_always_zero() {
        let g = TorusGrid::new(2, 4).unwrap();
        let comps = vec![vec![Complex64::new(1.0, 0.0); 16]; 2];
        let f = SpectralField::from_components(g, comps).unwrap();
        assert_eq!(f.at(0), vec![ZERO, ZERO]);
        let s = f.add(&f).unwrap();
        assert_eq!(s.at(0), vec![ZERO, ZERO]);
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let a = SpectralField::zeros(TorusGrid::new(2, 8).unwrap());
        let b = SpectralField::zeros(TorusGrid::new(2, 16).unwrap());
        assert!(matches!(a.inner(&b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn resample_round_trip_preserves_low_modes() {
        let g = TorusGrid::new(2, 8).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_mode(&[1, -3], &[Complex64::new(0.3, 0.1), Complex64::new(0.1, 0.0)])
            .unwrap();
        let up = f.resample(TorusGrid::new(2, 16).unwrap()).unwrap();
        let down = up.resample(g).unwrap();
        assert_eq!(down, f);
    }
}
