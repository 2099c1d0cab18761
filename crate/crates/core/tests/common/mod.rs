//! Reference implementations used as oracles by several test targets.
#![allow(dead_code)]

use fracns_core::spectral::{SpectralField, TorusGrid};
use num_complex::Complex64;

/// Lattice wavenumbers of a grid, by flat index, restricted to `dim` axes.
pub fn wavenumbers(grid: TorusGrid) -> Vec<Vec<i64>> {
    let n = grid.resolution() as i64;
    let dim = grid.dim();
    (0..grid.len())
        .map(|idx| {
            let mut rest = idx as i64;
            let mut k = vec![0; dim];
            for a in (0..dim).rev() {
                let j = rest % n;
                rest /= n;
                k[a] = if j > n / 2 { j - n } else { j };
            }
            k
        })
        .collect()
}

/// Modes kept by a two-thirds truncation: `3|k_a| < N`, no Nyquist plane, no mean.
pub fn retained(grid: TorusGrid, k: &[i64]) -> bool {
    let n = grid.resolution() as i64;
    k.iter().any(|&c| c != 0) && k.iter().all(|&c| 3 * c.abs() < n && 2 * c.abs() != n)
}

/// `Σ_k |k|^{2s} |û(k)|²` from the raw coefficients.
pub fn sobolev_sq(u: &SpectralField, s: f64) -> f64 {
    let ks = wavenumbers(u.grid());
    let mut total = 0.0;
    for (idx, k) in ks.iter().enumerate() {
        let k_sq: i64 = k.iter().map(|c| c * c).sum();
        if k_sq == 0 {
            continue;
        }
        let w = (k_sq as f64).powf(s);
        for a in 0..u.grid().dim() {
            total += w * u.component(a)[idx].norm_sqr();
        }
    }
    total
}

/// `P_k Σ_{p+q=k} (û(p)·iq) û(q)` over retained `p, q, k`, by direct summation.
pub fn dense_advection(u: &SpectralField) -> SpectralField {
    let grid = u.grid();
    let dim = grid.dim();
    let ks = wavenumbers(grid);
    let active: Vec<usize> = (0..grid.len()).filter(|&i| retained(grid, &ks[i])).collect();
    let mut comps = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; dim];
    for &kidx in &active {
        let k = &ks[kidx];
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        for &pidx in &active {
            let p = &ks[pidx];
            let q: Vec<i64> = k.iter().zip(p).map(|(a, b)| a - b).collect();
            if !retained(grid, &q) {
                continue;
            }
            let qidx = grid.index_of(&q).expect("retained modes are on the lattice");
            let up_dot_iq: Complex64 = (0..dim)
                .map(|j| u.component(j)[pidx] * Complex64::new(0.0, q[j] as f64))
                .sum();
            for (i, slot) in acc.iter_mut().enumerate() {
                *slot += up_dot_iq * u.component(i)[qidx];
            }
        }
        let k_sq: f64 = k.iter().map(|c| (c * c) as f64).sum();
        let k_dot: Complex64 = acc.iter().zip(k).map(|(z, &c)| z * c as f64).sum();
        for (i, z) in acc.iter().enumerate() {
            comps[i][kidx] = z - k_dot * (k[i] as f64 / k_sq);
        }
    }
    SpectralField::from_components(grid, comps).expect("oracle shape")
}

/// `u` with every non-retained mode removed.
pub fn truncate(u: &SpectralField) -> SpectralField {
    let grid = u.grid();
    let ks = wavenumbers(grid);
    let comps = u
        .components()
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .map(|(i, z)| if retained(grid, &ks[i]) { *z } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect();
    SpectralField::from_components(grid, comps).expect("same shape")
}

/// Multiply every coefficient by `exp(-σ|k|)`.
pub fn analytic_filter(u: &SpectralField, sigma: f64) -> SpectralField {
    let grid = u.grid();
    let ks = wavenumbers(grid);
    let comps = u
        .components()
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .map(|(i, z)| {
                    let k = ks[i].iter().map(|c| (c * c) as f64).sum::<f64>().sqrt();
                    z * (-sigma * k).exp()
                })
                .collect()
        })
        .collect();
    SpectralField::from_components(grid, comps).expect("same shape")
}

/// `Γ(x)` for `x > 0` from the Stirling series at `x + 20`, shifted back with
/// the recurrence. Relative accuracy is about 1e-14.
pub fn gamma_oracle(x: f64) -> f64 {
    assert!(x > 0.0);
    let shift = 20usize;
    let z = x + shift as f64;
    // Bernoulli terms B_{2m} / (2m(2m-1) z^{2m-1})
    let coeffs = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let series: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(m, c)| c / z.powi(2 * m as i32 + 1))
        .sum();
    let ln_gamma_z = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series;
    let prod: f64 = (0..shift).map(|j| x + j as f64).product();
    ln_gamma_z.exp() / prod
}

/// Total `Σ gap^γ` of the complement of `intervals` in `[0, tail]`, found by
/// testing the midpoint of every elementary segment between endpoints and
/// merging consecutive uncovered segments.
pub fn brute_force_cover(intervals: &[(f64, f64)], tail: f64, gamma: f64) -> f64 {
    let mut points = vec![0.0, tail];
    for &(a, b) in intervals {
        points.push(a);
        points.push(b);
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut gaps = Vec::new();
    let mut open: Option<f64> = None;
    for w in points.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let covered = intervals.iter().any(|&(a, b)| a < mid && mid < b);
        match (covered, open) {
            (false, None) => open = Some(w[0]),
            (true, Some(start)) => {
                gaps.push(w[0] - start);
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        gaps.push(tail - start);
    }
    gaps.iter().map(|g| g.powf(gamma)).sum()
}
