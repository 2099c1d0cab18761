//! Initial-data generators.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SpectralField, TorusGrid};

/// Offset used to pack a wavenumber into a stream id; keeps components positive.
const STREAM_OFFSET: i64 = 1 << 20;

fn stream_id(k: [i64; 3]) -> u64 {
    let pack = |c: i64| (c + STREAM_OFFSET) as u64;
    (pack(k[0]) << 42) | (pack(k[1]) << 21) | pack(k[2])
}

/// One of each `±k` pair: the first nonzero component is positive.
fn is_canonical(k: [i64; 3]) -> bool {
    k.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// Random zero-mean, divergence-free, real field with coefficient magnitudes
/// proportional to `|k|^{spectrum_slope}`.
///
/// Each wavenumber draws from its own ChaCha stream keyed by `(seed, k)`, so
/// the same seed gives the same coefficients on every grid that contains `k`.
/// Nyquist modes are left at zero.
pub fn random_divfree_field(grid: TorusGrid, spectrum_slope: f64, seed: u64) -> SpectralField {
    let dim = grid.dim();
    let mut comps = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; dim];
    for idx in 1..grid.len() {
        let k = grid.wavenumber(idx);
        if grid.is_nyquist(idx) || !is_canonical(k) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id(k));
        let mag = grid.k_sq(idx).sqrt().powf(spectrum_slope);
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * mag)
            .collect();
        // remove the component along k
        let k_sq = grid.k_sq(idx);
        let dot: Complex64 = v.iter().zip(&k).map(|(z, &c)| z * c as f64).sum();
        for (z, &c) in v.iter_mut().zip(&k) {
            *z -= dot * (c as f64 / k_sq);
        }
        let cidx = grid.conjugate_index(idx);
        for (a, z) in v.into_iter().enumerate() {
            comps[a][idx] = z;
            comps[a][cidx] = z.conj();
        }
    }
    SpectralField::from_components(grid, comps).expect("shape matches grid")
}

/// Classical Taylor–Green vortex on the `|k_a| = 1` shell.
///
/// 2D: `(sin x cos y, -cos x sin y)`.
/// 3D: `(sin x cos y cos z, -cos x sin y cos z, 0)`.
pub fn taylor_green(grid: TorusGrid) -> SpectralField {
    let sin_c = |k: i64| Complex64::new(0.0, -0.5 * k as f64);
    let cos_c = |_: i64| Complex64::new(0.5, 0.0);
    let mut f = SpectralField::zeros(grid);
    let signs = [-1i64, 1];
    for &kx in &signs {
        for &ky in &signs {
            if grid.dim() == 2 {
                let v = [sin_c(kx) * cos_c(ky), -(cos_c(kx) * sin_c(ky))];
                for (a, z) in v.iter().enumerate() {
                    let idx = grid.index_of(&[kx, ky]).expect("shell inside lattice");
                    f.component_mut(a)[idx] = *z;
                }
            } else {
                for &kz in &signs {
                    let v = [
                        sin_c(kx) * cos_c(ky) * cos_c(kz),
                        -(cos_c(kx) * sin_c(ky) * cos_c(kz)),
                        Complex64::new(0.0, 0.0),
                    ];
                    let idx = grid.index_of(&[kx, ky, kz]).expect("shell inside lattice");
                    for (a, z) in v.iter().enumerate() {
                        f.component_mut(a)[idx] = *z;
                    }
                }
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{leray_project, FftPlan};

    #[test]
    fn taylor_green_matches_physical_formula() {
        for dim in [2, 3] {
            let grid = TorusGrid::new(dim, 8).unwrap();
            let tg = taylor_green(grid);
            assert!(tg.divergence_residual() < 1e-14);
            assert_eq!(tg.reality_defect(), 0.0);
            let mut plan = FftPlan::new(grid);
            let phys = tg.to_physical(&mut plan);
            let h = 2.0 * std::f64::consts::PI / 8.0;
            for idx in 0..grid.len() {
                let mut rem = idx;
                let mut x = [0.0; 3];
                for a in (0..dim).rev() {
                    x[a] = (rem % 8) as f64 * h;
                    rem /= 8;
                }
                let cz = if dim == 3 { x[2].cos() } else { 1.0 };
                let u = x[0].sin() * x[1].cos() * cz;
                let v = -x[0].cos() * x[1].sin() * cz;
                assert!((phys[0][idx] - u).abs() < 1e-14);
                assert!((phys[1][idx] - v).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn random_field_is_solenoidal_real_and_deterministic() {
        let grid = TorusGrid::new(3, 8).unwrap();
        let a = random_divfree_field(grid, -2.0, 7);
        let b = random_divfree_field(grid, -2.0, 7);
        assert_eq!(a, b);
        assert_ne!(a, random_divfree_field(grid, -2.0, 8));
        assert_eq!(a.reality_defect(), 0.0);
        assert!(a.divergence_residual() < 1e-14);
        let p = leray_project(&a);
        let diff = p.sub(&a).unwrap().l2_sq().sqrt();
        assert!(diff <= 1e-12 * a.l2_sq().sqrt());
    }

    #[test]
    fn random_field_is_resolution_consistent() {
        let small = TorusGrid::new(2, 8).unwrap();
        let big = TorusGrid::new(2, 16).unwrap();
        let a = random_divfree_field(small, -1.5, 3);
        let b = random_divfree_field(big, -1.5, 3).resample(small).unwrap();
        assert_eq!(a, b);
    }
}
