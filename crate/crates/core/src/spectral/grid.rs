use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wavenumber lattice of the `2π`-periodic torus in 2 or 3 dimensions.
///
/// Coefficients are stored in FFT order: along each axis index `i` maps to
/// wavenumber `i` for `i <= N/2` and to `i - N` otherwise, so the lattice is
/// exactly `{ k : -N/2 < k_a <= N/2 }`. Axis 0 varies slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusGrid {
    dim: usize,
    resolution: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, resolution: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::config("dim", format!("dimension must be 2 or 3, got {dim}")));
        }
        if resolution < 4 || resolution % 2 != 0 {
            return Err(Error::config(
                "N",
                format!("resolution must be even and at least 4, got {resolution}"),
            ));
        }
        Ok(Self { dim, resolution })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Number of lattice points, `N^dim`.
    #[inline]
    pub fn len(&self) -> usize {
        self.resolution.pow(self.dim as u32)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    fn axis_wavenumber(&self, i: usize) -> i64 {
        if i <= self.resolution / 2 {
            i as i64
        } else {
            i as i64 - self.resolution as i64
        }
    }

    #[inline]
    fn axis_index(&self, k: i64) -> Option<usize> {
        let half = (self.resolution / 2) as i64;
        if k <= -half || k > half {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.resolution as i64) as usize)
        }
    }

    /// Wavenumber of a storage index, padded with zeros to three components.
    pub fn wavenumber(&self, idx: usize) -> [i64; 3] {
        let n = self.resolution;
        let mut k = [0i64; 3];
        let mut rem = idx;
        for a in (0..self.dim).rev() {
            k[a] = self.axis_wavenumber(rem % n);
            rem /= n;
        }
        k
    }

    /// Storage index of a wavenumber, or `None` outside the lattice.
    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() < self.dim || k[self.dim..].iter().any(|&c| c != 0) {
            return None;
        }
        let mut idx = 0;
        for &c in &k[..self.dim] {
            idx = idx * self.resolution + self.axis_index(c)?;
        }
        Some(idx)
    }

    /// Index of `-k` (modulo the lattice period, so Nyquist modes map to themselves).
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let n = self.resolution;
        let mut out = 0;
        let mut stride = 1;
        let mut rem = idx;
        for _ in 0..self.dim {
            let i = rem % n;
            rem /= n;
            out += ((n - i) % n) * stride;
            stride *= n;
        }
        out
    }

    /// True when any component sits on the unpaired `+N/2` plane.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = (self.resolution / 2) as i64;
        self.wavenumber(idx)[..self.dim].iter().any(|&c| c == half)
    }

    /// `|k|^2` as an exact integer-valued float.
    #[inline]
    pub fn k_sq(&self, idx: usize) -> f64 {
        let k = self.wavenumber(idx);
        (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64
    }

    /// Largest retained wavenumber component under the two-thirds rule:
    /// the largest `K` with `3K < N`, so products of retained modes never alias
    /// back onto retained modes.
    pub fn dealias_cutoff(&self) -> i64 {
        ((self.resolution - 1) / 3) as i64
    }

    pub fn in_dealiased_band(&self, idx: usize) -> bool {
        let kmax = self.dealias_cutoff();
        self.wavenumber(idx)[..self.dim].iter().all(|c| c.abs() <= kmax)
    }

    /// Radius of the smallest ball containing the whole lattice.
    pub fn lattice_radius(&self) -> f64 {
        (self.resolution as f64 / 2.0) * (self.dim as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(TorusGrid::new(1, 8).is_err());
        assert!(TorusGrid::new(4, 8).is_err());
        assert!(TorusGrid::new(2, 7).is_err());
        assert!(TorusGrid::new(2, 2).is_err());
        assert!(TorusGrid::new(3, 4).is_ok());
    }

    #[test]
    fn lattice_is_half_open_box() {
        let g = TorusGrid::new(2, 8).unwrap();
        let mut seen = std::collections::HashSet::new();
        for idx in 0..g.len() {
            let k = g.wavenumber(idx);
            assert!(k[0] > -4 && k[0] <= 4 && k[1] > -4 && k[1] <= 4);
            assert_eq!(g.index_of(&k[..2]), Some(idx));
            seen.insert(k);
        }
        assert_eq!(seen.len(), 64);
        assert_eq!(g.index_of(&[-4, 0]), None);
        assert_eq!(g.index_of(&[0, 5]), None);
    }

    #[test]
    fn conjugate_index_negates() {
        let g = TorusGrid::new(3, 6).unwrap();
        for idx in 0..g.len() {
            let k = g.wavenumber(idx);
            let c = g.conjugate_index(idx);
            if g.is_nyquist(idx) {
                continue;
            }
            assert_eq!(g.wavenumber(c), [-k[0], -k[1], -k[2]]);
            assert_eq!(g.conjugate_index(c), idx);
        }
    }

    #[test]
    fn dealias_cutoff_is_strict_two_thirds() {
        assert_eq!(TorusGrid::new(2, 64).unwrap().dealias_cutoff(), 21);
        assert_eq!(TorusGrid::new(2, 8).unwrap().dealias_cutoff(), 2);
        // N divisible by 3: keeping |k| = N/3 would alias 2N/3 onto -N/3.
        assert_eq!(TorusGrid::new(2, 12).unwrap().dealias_cutoff(), 3);
    }
}
