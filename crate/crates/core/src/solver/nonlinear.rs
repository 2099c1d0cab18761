use num_complex::Complex64;

use super::{Dealias, SolverConfig};
use crate::spectral::{leray_project_mut, symbol_from_k_sq, FftPlan, SpectralField, TorusGrid};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Anything that evaluates the projected advection term `P(u·∇u)`.
pub trait NonlinearTerm {
    fn eval(&mut self, u: &SpectralField) -> SpectralField;
}

impl<F> NonlinearTerm for F
where
    F: FnMut(&SpectralField) -> SpectralField,
{
    fn eval(&mut self, u: &SpectralField) -> SpectralField {
        self(u)
    }
}

/// Retained-mode mask: dealiasing band, optional spherical cutoff, no Nyquist
/// planes, no zero mode.
pub(crate) fn retained_mask(grid: TorusGrid, dealias: Dealias, cutoff: Option<f64>) -> Vec<bool> {
    (0..grid.len())
        .map(|idx| {
            if idx == 0 || grid.is_nyquist(idx) {
                return false;
            }
            let band = match dealias {
                Dealias::TwoThirds => grid.in_dealiased_band(idx),
                Dealias::None => true,
            };
            band && cutoff.is_none_or(|c| grid.k_sq(idx) <= c * c)
        })
        .collect()
}

/// Sharp spherical cutoff: coefficients with `|k| > cutoff` are zeroed.
pub fn galerkin_truncate(u: &SpectralField, cutoff: f64) -> SpectralField {
    let grid = u.grid();
    let mut out = u.clone();
    let c_sq = cutoff * cutoff;
    for idx in 0..grid.len() {
        if grid.k_sq(idx) > c_sq {
            for a in 0..grid.dim() {
                out.component_mut(a)[idx] = ZERO;
            }
        }
    }
    out
}

pub(crate) fn apply_mask(u: &mut SpectralField, mask: &[bool]) {
    for a in 0..u.grid().dim() {
        for (z, &keep) in u.component_mut(a).iter_mut().zip(mask) {
            if !keep {
                *z = ZERO;
            }
        }
    }
}

/// Pseudo-spectral evaluation of `P T(u·∇u)` with reusable buffers.
///
/// `T` is the retained-mode projection (dealiasing band and optional cutoff).
/// The input is projected with `T` first, derivatives are taken spectrally,
/// the advective product is formed on the grid, and the result is masked,
/// Leray-projected and symmetrized so it is exactly real.
#[derive(Debug, Clone)]
pub struct NonlinearWorkspace {
    grid: TorusGrid,
    plan: FftPlan,
    mask: Vec<bool>,
    conj: Vec<usize>,
    kvec: Vec<[f64; 3]>,
    velocity: Vec<Vec<Complex64>>,
    acc: Vec<Vec<Complex64>>,
    buf: Vec<Complex64>,
}

impl NonlinearWorkspace {
    pub fn new(cfg: &SolverConfig) -> Self {
        Self::with_mask(cfg.grid, retained_mask(cfg.grid, cfg.dealias, cfg.cutoff))
    }

    pub(crate) fn with_mask(grid: TorusGrid, mask: Vec<bool>) -> Self {
        let len = grid.len();
        let kvec = (0..len)
            .map(|idx| {
                let k = grid.wavenumber(idx);
                [k[0] as f64, k[1] as f64, k[2] as f64]
            })
            .collect();
        Self {
            grid,
            plan: FftPlan::new(grid),
            mask,
            conj: (0..len).map(|idx| grid.conjugate_index(idx)).collect(),
            kvec,
            velocity: vec![vec![ZERO; len]; grid.dim()],
            acc: vec![vec![ZERO; len]; grid.dim()],
            buf: vec![ZERO; len],
        }
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    fn symmetrize(&self, data: &mut [Complex64]) {
        for idx in 0..data.len() {
            let c = self.conj[idx];
            if c > idx {
                let avg = (data[idx] + data[c].conj()) * 0.5;
                data[idx] = avg;
                data[c] = avg.conj();
            } else if c == idx {
                data[idx] = Complex64::new(data[idx].re, 0.0);
            }
        }
    }
}

impl NonlinearTerm for NonlinearWorkspace {
    fn eval(&mut self, u: &SpectralField) -> SpectralField {
        assert_eq!(u.grid(), self.grid, "field does not match workspace grid");
        let dim = self.grid.dim();

        for j in 0..dim {
            let src = u.component(j);
            for ((dst, &z), &keep) in self.velocity[j].iter_mut().zip(src).zip(&self.mask) {
                *dst = if keep { z } else { ZERO };
            }
            self.plan.to_physical(&mut self.velocity[j]);
        }
        for acc in &mut self.acc {
            acc.fill(ZERO);
        }

        // (u·∇u)_i = Σ_j u_j ∂_j u_i
        for i in 0..dim {
            let ui = u.component(i);
            for j in 0..dim {
                for (idx, b) in self.buf.iter_mut().enumerate() {
                    *b = if self.mask[idx] {
                        Complex64::new(0.0, self.kvec[idx][j]) * ui[idx]
                    } else {
                        ZERO
                    };
                }
                self.plan.to_physical(&mut self.buf);
                for ((acc, vel), d) in self.acc[i].iter_mut().zip(&self.velocity[j]).zip(&self.buf) {
                    acc.re += vel.re * d.re;
                }
            }
        }

        let mut comps = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut data = std::mem::replace(&mut self.acc[i], vec![ZERO; self.grid.len()]);
            self.plan.to_spectral(&mut data);
            for (z, &keep) in data.iter_mut().zip(&self.mask) {
                if !keep {
                    *z = ZERO;
                }
            }
            self.symmetrize(&mut data);
            comps.push(data);
        }
        let mut out = SpectralField::from_components(self.grid, comps).expect("workspace shape");
        leray_project_mut(&mut out);
        out
    }
}

/// One-shot `P T(u·∇u)` for the configuration's grid and mask.
pub fn nonlinear_term(u: &SpectralField, cfg: &SolverConfig) -> SpectralField {
    NonlinearWorkspace::new(cfg).eval(u)
}

/// `du/dt = -ν Λ^{2α} u - P T(u·∇u)`.
pub fn rhs(u: &SpectralField, cfg: &SolverConfig) -> SpectralField {
    let mut out = nonlinear_term(u, cfg);
    let grid = u.grid();
    for a in 0..grid.dim() {
        let src = u.component(a);
        for (idx, z) in out.component_mut(a).iter_mut().enumerate() {
            let decay = cfg.nu * symbol_from_k_sq(grid.k_sq(idx), cfg.alpha);
            *z = -*z - src[idx] * decay;
        }
    }
    out
}
