//! Dense FFT-based continuous wavelet transform on a time × scale grid.
//!
//! For every scale the signal is multiplied by the dilated window and an inverse
//! FFT over the frequency axis produces all time samples at once. The result is
//! the reference the window-signal computations are checked against, and the
//! baseline for the complexity benchmark.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Result, Wp4Error};
use crate::signal::FrequencySignal;
use crate::transform::PhasePoint;
use crate::window::SplineWindow;

/// Scale axis of a dense transform. Both variants produce increasing `g₂`.
#[derive(Clone, Debug)]
pub enum ScaleGrid {
    /// `count` log-scales evenly spaced on `[g2_min, g2_max]`.
    Exponential { g2_min: f64, g2_max: f64, count: usize },
    /// Scales whose atom frequency `reference * e^{-g₂}` is evenly spaced on
    /// `[freq_min, freq_max]`.
    LinearFrequency { freq_min: f64, freq_max: f64, count: usize, reference: f64 },
    /// Arbitrary strictly increasing log-scales.
    Explicit(Vec<f64>),
}

impl ScaleGrid {
    pub fn log_scales(&self) -> Result<Vec<f64>> {
        let out: Vec<f64> = match self {
            Self::Exponential { g2_min, g2_max, count } => {
                if *count == 0 {
                    return Err(Wp4Error::EmptyGrid("scale"));
                }
                if *count == 1 {
                    vec![*g2_min]
                } else {
                    let step = (g2_max - g2_min) / (*count - 1) as f64;
                    (0..*count).map(|m| g2_min + m as f64 * step).collect()
                }
            }
            Self::LinearFrequency { freq_min, freq_max, count, reference } => {
                if *count == 0 {
                    return Err(Wp4Error::EmptyGrid("scale"));
                }
                if freq_min.is_nan() || reference.is_nan() || *freq_min <= 0.0 || *reference <= 0.0 {
                    return Err(Wp4Error::InvalidParameter("frequencies must be positive".into()));
                }
                let step = if *count > 1 { (freq_max - freq_min) / (*count - 1) as f64 } else { 0.0 };
                (0..*count)
                    .rev()
                    .map(|m| (reference / (freq_min + m as f64 * step)).ln())
                    .collect()
            }
            Self::Explicit(v) => {
                if v.is_empty() {
                    return Err(Wp4Error::EmptyGrid("scale"));
                }
                v.clone()
            }
        };
        if out.iter().any(|g| !g.is_finite()) || out.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Wp4Error::InvalidParameter("scale grid must be finite and strictly increasing".into()));
        }
        Ok(out)
    }
}

/// Trapezoid weights on `g₂` times the Haar factor `e^{-g₂}`.
pub fn grid_weights(log_scales: &[f64]) -> Vec<f64> {
    let m = log_scales.len();
    if m == 1 {
        return vec![(-log_scales[0]).exp()];
    }
    (0..m)
        .map(|i| {
            let lo = log_scales[i.saturating_sub(1)];
            let hi = log_scales[(i + 1).min(m - 1)];
            0.5 * (hi - lo) * (-log_scales[i]).exp()
        })
        .collect()
}

/// `Σ_m W_m e^{g₂ᵐ} |f̂(e^{g₂ᵐ} ω)|²`, the discrete frame sum at frequency `omega`.
pub fn frame_sum(f: &SplineWindow, log_scales: &[f64], omega: f64) -> f64 {
    log_scales
        .iter()
        .zip(grid_weights(log_scales))
        .map(|(&g2, w)| w * g2.exp() * f.eval(g2.exp() * omega).powi(2))
        .sum()
}

#[derive(Clone, Debug)]
pub struct DenseCwt {
    times: Vec<f64>,
    log_scales: Vec<f64>,
    weights: Vec<f64>,
    time_step: f64,
    /// Row-major: `values[m * times.len() + k]`.
    values: Vec<Complex64>,
}

impl DenseCwt {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn log_scales(&self) -> &[f64] {
        &self.log_scales
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn time_step(&self) -> f64 {
        self.time_step
    }

    pub fn value(&self, scale: usize, time: usize) -> Complex64 {
        self.values[scale * self.times.len() + time]
    }

    pub fn row(&self, scale: usize) -> &[Complex64] {
        let k = self.times.len();
        &self.values[scale * k..(scale + 1) * k]
    }

    /// `Σ_m W_m Σ_k |V(g₁ᵏ, g₂ᵐ)|² Δg₁`.
    pub fn weighted_energy(&self) -> f64 {
        self.filtered_energy(|_, _| Complex64::new(1.0, 0.0))
    }

    /// Weighted energy of `gain(g₁, g₂) · V`.
    pub fn filtered_energy(&self, gain: impl Fn(f64, f64) -> Complex64) -> f64 {
        let mut total = 0.0;
        for (m, (&g2, &w)) in self.log_scales.iter().zip(&self.weights).enumerate() {
            let row: f64 = self
                .row(m)
                .iter()
                .zip(&self.times)
                .map(|(v, &t)| (v * gain(t, g2)).norm_sqr())
                .sum();
            total += w * row;
        }
        total * self.time_step
    }
}

struct ScaleRows {
    fft: Arc<dyn Fft<f64>>,
    times: usize,
    offset_cycles: f64,
    spacing: f64,
    buf: Vec<Complex64>,
}

impl ScaleRows {
    fn new(s: &FrequencySignal, times: usize) -> Self {
        let grid = s.grid();
        Self {
            fft: FftPlanner::new().plan_fft_inverse(times),
            times,
            offset_cycles: grid.start / grid.spacing,
            spacing: grid.spacing,
            buf: vec![Complex64::new(0.0, 0.0); times],
        }
    }

    /// Fills `self.buf` with `V(k T / times, g₂)` for all `k`.
    fn compute(&mut self, s: &FrequencySignal, f: &SplineWindow, g2: f64) {
        let grid = s.grid();
        self.buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let (lo, hi) = f.support();
        let dilate = g2.exp();
        let gain = (0.5 * g2).exp();
        let first = (((lo / dilate) - grid.start) / grid.spacing).floor().max(0.0) as usize;
        let last = ((((hi / dilate) - grid.start) / grid.spacing).ceil().max(0.0) as usize).min(grid.len - 1);
        let end = last.max(first).min(grid.len - 1);
        for (n, z) in s.samples().iter().enumerate().take(end + 1).skip(first) {
            let w = f.eval(dilate * grid.freq(n));
            if w != 0.0 {
                self.buf[n % self.times] += z * (gain * w);
            }
        }
        self.fft.process(&mut self.buf);
        for (k, z) in self.buf.iter_mut().enumerate() {
            let cycles = (k as f64 * self.offset_cycles / self.times as f64).rem_euclid(1.0);
            *z *= Complex64::from_polar(self.spacing, TAU * cycles);
        }
    }
}

/// Dense transform over `scales × times_per_scale` points, `g₁ᵏ = k T / times_per_scale`
/// with `T = 1/r`.
///
/// Window support outside the signal grid is silently truncated. With
/// `times_per_scale >= N + 1` the time sums are exact.
pub fn dense_cwt(
    s: &FrequencySignal,
    f: &SplineWindow,
    scales: &ScaleGrid,
    times_per_scale: usize,
) -> Result<DenseCwt> {
    if times_per_scale == 0 {
        return Err(Wp4Error::EmptyGrid("time"));
    }
    let log_scales = scales.log_scales()?;
    let weights = grid_weights(&log_scales);
    let period = s.grid().period();
    let time_step = period / times_per_scale as f64;
    let times = (0..times_per_scale).map(|k| k as f64 * time_step).collect();
    let mut rows = ScaleRows::new(s, times_per_scale);
    let mut values = Vec::with_capacity(log_scales.len() * times_per_scale);
    for &g2 in &log_scales {
        rows.compute(s, f, g2);
        values.extend_from_slice(&rows.buf);
    }
    Ok(DenseCwt { times, log_scales, weights, time_step, values })
}

/// Grid point of largest modulus; ties go to the smallest (scale, time) index.
pub fn dense_argmax(d: &DenseCwt) -> (PhasePoint, f64) {
    let k = d.times.len();
    let mut best = (0usize, 0.0f64);
    for (i, v) in d.values.iter().enumerate() {
        let m = v.norm();
        if m > best.1 {
            best = (i, m);
        }
    }
    let (m, t) = (best.0 / k, best.0 % k);
    (PhasePoint::new(d.times[t], d.log_scales[m]), best.1)
}

/// Streaming arg-max over a dense grid without storing the transform.
pub fn dense_search_max(
    s: &FrequencySignal,
    f: &SplineWindow,
    scales: &ScaleGrid,
    times_per_scale: usize,
) -> Result<(PhasePoint, f64)> {
    if times_per_scale == 0 {
        return Err(Wp4Error::EmptyGrid("time"));
    }
    let log_scales = scales.log_scales()?;
    let time_step = s.grid().period() / times_per_scale as f64;
    let mut rows = ScaleRows::new(s, times_per_scale);
    let mut best = (PhasePoint::new(0.0, log_scales[0]), 0.0f64);
    for &g2 in &log_scales {
        rows.compute(s, f, g2);
        for (k, v) in rows.buf.iter().enumerate() {
            let m = v.norm();
            if m > best.1 {
                best = (PhasePoint::new(k as f64 * time_step, g2), m);
            }
        }
    }
    Ok(best)
}
