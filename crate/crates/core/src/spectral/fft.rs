use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::TorusGrid;

/// Multi-dimensional complex FFT on a [`TorusGrid`], applied axis by axis.
///
/// Convention: `to_spectral` computes `û(k) = N^{-n} Σ_x u(x) e^{-ik·x}` and
/// `to_physical` the unnormalized inverse `u(x) = Σ_k û(k) e^{ik·x}`, so the
/// mean square on the grid equals `Σ |û(k)|²`.
///
/// A plan owns its scratch space; share plans across tasks only by cloning.
#[derive(Clone)]
pub struct FftPlan {
    grid: TorusGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    line: Vec<Complex64>,
}

impl std::fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPlan").field("grid", &self.grid).finish()
    }
}

impl FftPlan {
    pub fn new(grid: TorusGrid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.resolution();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            grid,
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            line: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    /// Physical samples to Fourier coefficients, in place.
    pub fn to_spectral(&mut self, data: &mut [Complex64]) {
        self.transform(data, true);
        let scale = 1.0 / self.grid.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    /// Fourier coefficients to physical samples, in place.
    pub fn to_physical(&mut self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    fn transform(&mut self, data: &mut [Complex64], forward: bool) {
        assert_eq!(data.len(), self.grid.len(), "buffer does not match grid");
        let n = self.grid.resolution();
        let dim = self.grid.dim();
        let fft = if forward { &self.forward } else { &self.inverse };

        // Contiguous last axis: rustfft handles the batch directly.
        fft.process_with_scratch(data, &mut self.scratch);

        // Remaining axes: gather each strided line, transform, scatter back.
        for axis in 0..dim - 1 {
            let stride = n.pow((dim - 1 - axis) as u32);
            let block = stride * n;
            for base in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (i, v) in self.line.iter_mut().enumerate() {
                        *v = data[start + i * stride];
                    }
                    fft.process_with_scratch(&mut self.line, &mut self.scratch);
                    for (i, v) in self.line.iter().enumerate() {
                        data[start + i * stride] = *v;
                    }
                }
            }
        }
    }
}
