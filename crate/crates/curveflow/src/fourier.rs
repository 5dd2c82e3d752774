//! Periodic spectral differentiation and harmonic analysis on uniform grids.
//!
//! All transforms act on real samples of `2π`-periodic functions at the nodes
//! `θ_i = 2πi/M`. Differentiation multiplies the DFT bins by `(i n)^order`
//! with the signed frequency `n`; odd-order derivatives zero the Nyquist bin,
//! which is the standard choice that keeps real data real.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plan_pair(m: usize) -> PlanPair {
    static CACHE: OnceLock<Mutex<HashMap<usize, PlanPair>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("fft plan cache poisoned");
    cache
        .entry(m)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(m), planner.plan_fft_inverse(m))
        })
        .clone()
}

/// Cached forward/inverse FFT plans for one grid size.
#[derive(Clone)]
pub struct Differentiator {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Real harmonic coefficients of a sampled function: `f(θ) = mean +
/// Σ_{n=1}^{M/2} (cos[n-1]·cos nθ + sin[n-1]·sin nθ)`. The Nyquist sine
/// coefficient is identically zero on the grid and stored as such.
#[derive(Debug, Clone)]
pub struct Harmonics {
    pub mean: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl Differentiator {
    pub fn new(m: usize) -> Self {
        let (forward, inverse) = plan_pair(m);
        Self { m, forward, inverse }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    fn forward_bins(&self, values: &[f64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.m);
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Spectral derivative of the given order (order 0 returns a copy).
    pub fn derivative(&self, values: &[f64], order: u32) -> Vec<f64> {
        let m = self.m;
        let mut bins = self.forward_bins(values);
        for (k, bin) in bins.iter_mut().enumerate() {
            let n = signed_frequency(k, m);
            let factor = if k == m / 2 && order % 2 == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, n).powu(order)
            };
            *bin *= factor;
        }
        self.inverse.process(&mut bins);
        let scale = 1.0 / m as f64;
        bins.iter().map(|c| c.re * scale).collect()
    }

    /// Rescales each harmonic `n = |signed frequency|` by `weight(n)`.
    pub fn filter(&self, values: &[f64], weight: impl Fn(usize) -> f64) -> Vec<f64> {
        let m = self.m;
        let mut bins = self.forward_bins(values);
        for (k, bin) in bins.iter_mut().enumerate() {
            let n = signed_frequency(k, m).abs() as usize;
            *bin *= weight(n);
        }
        self.inverse.process(&mut bins);
        let scale = 1.0 / m as f64;
        bins.iter().map(|c| c.re * scale).collect()
    }

    /// Real cosine/sine coefficients for modes `n = 1..=M/2` plus the mean.
    pub fn analyze(&self, values: &[f64]) -> Harmonics {
        let m = self.m;
        let bins = self.forward_bins(values);
        let mean = bins[0].re / m as f64;
        let half = m / 2;
        let mut cos = vec![0.0; half];
        let mut sin = vec![0.0; half];
        for n in 1..half {
            cos[n - 1] = 2.0 * bins[n].re / m as f64;
            sin[n - 1] = -2.0 * bins[n].im / m as f64;
        }
        cos[half - 1] = bins[half].re / m as f64;
        sin[half - 1] = 0.0;
        Harmonics { mean, cos, sin }
    }
}

fn signed_frequency(k: usize, m: usize) -> f64 {
    if k <= m / 2 {
        k as f64
    } else {
        k as f64 - m as f64
    }
}

/// Evaluates `mean + Σ (cos[n-1] cos nθ + sin[n-1] sin nθ)` at one angle.
pub fn evaluate_harmonics(h: &Harmonics, theta: f64) -> f64 {
    let mut acc = h.mean;
    for (idx, (&a, &b)) in h.cos.iter().zip(&h.sin).enumerate() {
        let n = (idx + 1) as f64;
        acc += a * (n * theta).cos() + b * (n * theta).sin();
    }
    acc
}
