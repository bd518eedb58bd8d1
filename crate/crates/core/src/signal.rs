//! Signals stored as uniform positive-frequency samples of their Fourier transform.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Result, Wp4Error};

/// Uniform frequency grid `ω_n = start + n * spacing`, `n = 0..len`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub start: f64,
    pub spacing: f64,
    pub len: usize,
}

impl FrequencyGrid {
    pub fn new(start: f64, spacing: f64, len: usize) -> Result<Self> {
        if !(start.is_finite() && start > 0.0) {
            return Err(Wp4Error::InvalidSignal(format!("start frequency must be > 0, got {start}")));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Wp4Error::InvalidSignal(format!("spacing must be > 0, got {spacing}")));
        }
        if len < 2 {
            return Err(Wp4Error::InvalidSignal("need at least two frequency samples".into()));
        }
        Ok(Self { start, spacing, len })
    }

    #[inline]
    pub fn freq(&self, n: usize) -> f64 {
        self.start + n as f64 * self.spacing
    }

    /// Highest frequency `ω_N`.
    pub fn last(&self) -> f64 {
        self.freq(self.len - 1)
    }

    /// Period of the time axis, `1 / spacing`.
    pub fn period(&self) -> f64 {
        1.0 / self.spacing
    }

    /// Grid extended by `extra` samples above `ω_N`.
    pub fn extended(&self, extra: usize) -> Self {
        Self { len: self.len + extra, ..*self }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrequencySignal {
    grid: FrequencyGrid,
    samples: Vec<Complex64>,
    /// Samples below `start`, at `k * spacing` for `k = 0..low_band.len()`.
    low_band: Vec<Complex64>,
}

impl FrequencySignal {
    pub fn new(grid: FrequencyGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len {
            return Err(Wp4Error::LengthMismatch { expected: grid.len, actual: samples.len() });
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Wp4Error::InvalidSignal("non-finite sample".into()));
        }
        Ok(Self { grid, samples, low_band: Vec::new() })
    }

    pub fn zeros(grid: FrequencyGrid) -> Self {
        Self { grid, samples: vec![Complex64::new(0.0, 0.0); grid.len], low_band: Vec::new() }
    }

    /// Attaches the discarded low-frequency samples. They must sit on the same
    /// spacing and end exactly one step below `start`.
    pub fn with_low_band(mut self, low_band: Vec<Complex64>) -> Result<Self> {
        let expected = self.grid.start / self.grid.spacing;
        if !low_band.is_empty() && (expected - low_band.len() as f64).abs() > 1e-9 * expected.max(1.0) {
            return Err(Wp4Error::InvalidSignal(format!(
                "low band of {} samples does not end below start frequency {}",
                low_band.len(),
                self.grid.start
            )));
        }
        self.low_band = low_band;
        Ok(self)
    }

    /// Spectrum of a real time series, `ŝ(k r) = X[k] / fs` with `r = fs / len`.
    /// Bins below `low_bins` go to the low band.
    pub fn from_real_samples(x: &[f64], sample_rate: f64, low_bins: usize) -> Result<Self> {
        let len = x.len();
        if len < 4 {
            return Err(Wp4Error::InvalidSignal(format!("need at least 4 time samples, got {len}")));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Wp4Error::InvalidSignal("sample rate must be positive".into()));
        }
        let half = len / 2;
        if low_bins == 0 || low_bins + 1 > half {
            return Err(Wp4Error::InvalidParameter(format!(
                "low band of {low_bins} bins does not fit a {len}-sample signal"
            )));
        }
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(len).process(&mut buf);
        let spacing = sample_rate / len as f64;
        let scale = 1.0 / sample_rate;
        let low_band = buf[..low_bins].iter().map(|z| z * scale).collect();
        let samples = buf[low_bins..=half].iter().map(|z| z * scale).collect();
        let grid = FrequencyGrid::new(low_bins as f64 * spacing, spacing, half + 1 - low_bins)?;
        Self::new(grid, samples)?.with_low_band(low_band)
    }

    fn bin_offset(&self) -> Result<usize> {
        let k = self.grid.start / self.grid.spacing;
        let rounded = k.round();
        if (k - rounded).abs() > 1e-6 {
            return Err(Wp4Error::InvalidSignal(
                "start frequency is not a multiple of the spacing".into(),
            ));
        }
        Ok(rounded as usize)
    }

    fn one_sided(&self, len: usize) -> Result<Vec<Complex64>> {
        let offset = self.bin_offset()?;
        if offset + self.grid.len > len / 2 + 1 {
            return Err(Wp4Error::InvalidParameter(format!(
                "{} frequency bins do not fit a {len}-sample signal",
                offset + self.grid.len
            )));
        }
        let fs = len as f64 * self.grid.spacing;
        let mut spec = vec![Complex64::new(0.0, 0.0); len];
        for (k, z) in self.low_band.iter().enumerate() {
            spec[k] = z * fs;
        }
        for (n, z) in self.samples.iter().enumerate() {
            spec[offset + n] = z * fs;
        }
        Ok(spec)
    }

    /// Real time series of length `len` whose positive spectrum is this signal.
    pub fn to_real_samples(&self, len: usize) -> Result<Vec<f64>> {
        let mut spec = self.one_sided(len)?;
        for k in 1..len.div_ceil(2) {
            spec[len - k] = spec[k].conj();
        }
        FftPlanner::new().plan_fft_inverse(len).process(&mut spec);
        Ok(spec.iter().map(|z| z.re / len as f64).collect())
    }

    /// Complex analytic time series of length `len` (positive frequencies doubled).
    pub fn analytic_samples(&self, len: usize) -> Result<Vec<Complex64>> {
        let mut spec = self.one_sided(len)?;
        for z in spec.iter_mut().skip(1) {
            *z *= 2.0;
        }
        FftPlanner::new().plan_fft_inverse(len).process(&mut spec);
        Ok(spec.iter().map(|z| z / len as f64).collect())
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn low_band(&self) -> &[Complex64] {
        &self.low_band
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `‖s‖_S` over the main band, `sqrt(r Σ |ŝ(ω_n)|²)`.
    pub fn norm(&self) -> f64 {
        (self.grid.spacing * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Appends `extra` zero samples above `ω_N`.
    pub fn zero_padded(&self, extra: usize) -> Self {
        let mut samples = self.samples.clone();
        samples.resize(self.samples.len() + extra, Complex64::new(0.0, 0.0));
        Self { grid: self.grid.extended(extra), samples, low_band: self.low_band.clone() }
    }

    /// Replaces the main-band samples, keeping grid and low band.
    pub fn with_samples(&self, samples: Vec<Complex64>) -> Result<Self> {
        let low = self.low_band.clone();
        let out = Self::new(self.grid, samples)?;
        Ok(Self { low_band: low, ..out })
    }

    /// `self - other` on the main band; the low band of `self` is kept.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Wp4Error::GridMismatch);
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        self.with_samples(samples)
    }
}
