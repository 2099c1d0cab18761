use std::ops::Range;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::EnergySeries;
use crate::error::{Error, Result};
use crate::spectral::{ALPHA_CRITICAL, ALPHA_MIN};

/// Sampled `y_j = ‖Λ^α u(t_j)‖` with the run parameters it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSeries {
    pub alpha: f64,
    pub nu: f64,
    samples: Vec<(f64, f64)>,
}

impl NormSeries {
    /// Times must be strictly increasing and values finite and non-negative.
    pub fn new(alpha: f64, nu: f64, samples: Vec<(f64, f64)>) -> Result<Self> {
        for (j, &(t, y)) in samples.iter().enumerate() {
            if !t.is_finite() || !y.is_finite() || y < 0.0 {
                return Err(Error::domain(format!("sample {j} = ({t}, {y}) is not a finite non-negative value")));
            }
            if j > 0 && t <= samples[j - 1].0 {
                return Err(Error::Index(format!("sample times not strictly increasing at index {j}")));
            }
        }
        Ok(Self { alpha, nu, samples })
    }

    pub fn from_energy_series(series: &EnergySeries) -> Result<Self> {
        let samples = series.records.iter().map(|r| (r.t, r.halpha_sq.sqrt())).collect();
        Self::new(series.alpha, series.nu, samples)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Powers `((5-2α)/4α, (6α-5)/4α)` of `ν` and `(t₀-t)^{-1}` in the envelope.
pub fn envelope_exponents(alpha: f64) -> (f64, f64) {
    let d = 4.0 * alpha;
    ((5.0 - 2.0 * alpha) / d, (6.0 * alpha - 5.0) / d)
}

/// Exact rational form of [`envelope_exponents`].
pub fn envelope_exponents_exact(alpha: Rational64) -> (Rational64, Rational64) {
    let int = Rational64::from_integer;
    let d = int(4) * alpha;
    ((int(5) - int(2) * alpha) / d, (int(6) * alpha - int(5)) / d)
}

/// Lower envelope `C ν^{(5-2α)/4α} (t₀-t)^{-(6α-5)/4α}` that `‖Λ^α u(t)‖`
/// must exceed as `t` approaches a singular time `t₀`.
pub fn blowup_envelope(t: f64, t0: f64, alpha: f64, nu: f64, c: f64) -> Result<f64> {
    if !(alpha > ALPHA_MIN && alpha < ALPHA_CRITICAL) {
        return Err(Error::domain(format!("envelope needs 5/6 < alpha < 5/4, got {alpha}")));
    }
    if !(t < t0) || !t.is_finite() || !t0.is_finite() {
        return Err(Error::domain(format!("envelope needs t < t0, got t = {t}, t0 = {t0}")));
    }
    if !(nu > 0.0 && c > 0.0) {
        return Err(Error::domain("nu and C must be positive"));
    }
    let (p_nu, p_t) = envelope_exponents(alpha);
    Ok(c * nu.powf(p_nu) * (t0 - t).powf(-p_t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupFit {
    pub t0: f64,
    pub beta: f64,
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub rms_log_error: f64,
    /// `(6α-5)/4α` for the series' alpha tag.
    pub beta_theory: f64,
    pub alpha: f64,
    /// `beta - beta_theory`
    pub beta_discrepancy: f64,
}

/// Golden-section tolerance in `t₀`.
pub const FIT_T0_TOL: f64 = 1e-10;
const PRESCAN_POINTS: usize = 200;
const BRACKET_FACTOR: f64 = 10.0;

struct LineFit {
    slope: f64,
    intercept: f64,
    sse: f64,
}

fn line_fit(x: &[f64], y: &[f64]) -> LineFit {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - intercept - slope * a;
            r * r
        })
        .sum();
    LineFit { slope, intercept, sse }
}

/// Least-squares fit of `log y = log A - β log(t₀ - t)` over `window`, with
/// `t₀` chosen by a log-spaced pre-scan of `(t_last, t_last + 10·span]`
/// followed by golden-section refinement.
pub fn fit_blowup(series: &NormSeries, window: Range<usize>) -> Result<BlowupFit> {
    if window.end > series.len() || window.start >= window.end {
        return Err(Error::Index(format!(
            "window {window:?} outside series of length {}",
            series.len()
        )));
    }
    let data = &series.samples[window];
    if data.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 samples, got {}", data.len())));
    }
    if data.iter().any(|&(_, y)| y <= 0.0) {
        return Err(Error::Fit("samples must be positive".into()));
    }
    if data.windows(2).any(|w| w[1].1 <= w[0].1) {
        return Err(Error::Fit("series is not strictly increasing over the window".into()));
    }
    let ts: Vec<f64> = data.iter().map(|s| s.0).collect();
    let logy: Vec<f64> = data.iter().map(|s| s.1.ln()).collect();
    let t_last = ts[ts.len() - 1];
    let span = t_last - ts[0];
    let d_max = BRACKET_FACTOR * span;
    let d_min = span * 1e-9;

    let mut x = vec![0.0; ts.len()];
    let mut sse_at = |t0: f64| -> f64 {
        for (xi, t) in x.iter_mut().zip(&ts) {
            *xi = -(t0 - t).ln();
        }
        line_fit(&x, &logy).sse
    };

    let ratio = (d_max / d_min).ln();
    let grid: Vec<f64> = (0..PRESCAN_POINTS)
        .map(|i| t_last + d_min * (ratio * i as f64 / (PRESCAN_POINTS - 1) as f64).exp())
        .collect();
    let scores: Vec<f64> = grid.iter().map(|&t0| sse_at(t0)).collect();
    let best = scores
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if best == 0 || best == PRESCAN_POINTS - 1 {
        return Err(Error::Fit(format!(
            "t0 search hit the bracket boundary at t0 = {}",
            grid[best]
        )));
    }

    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (sse_at(c), sse_at(d));
    while (b - a).abs() > FIT_T0_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sse_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sse_at(d);
        }
    }
    let t0 = 0.5 * (a + b);
    let x: Vec<f64> = ts.iter().map(|t| -(t0 - t).ln()).collect();
    let fit = line_fit(&x, &logy);
    if !(fit.slope > 0.0) {
        return Err(Error::Fit(format!("fitted exponent {} is not positive", fit.slope)));
    }
    let beta_theory = envelope_exponents(series.alpha).1;
    Ok(BlowupFit {
        t0,
        beta: fit.slope,
        amplitude: fit.intercept.exp(),
        rms_log_error: (fit.sse / ts.len() as f64).sqrt(),
        beta_theory,
        alpha: series.alpha,
        beta_discrepancy: fit.slope - beta_theory,
    })
}
