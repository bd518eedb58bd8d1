//! Wavelet atoms on a frequency grid, the discrete inner product and synthesis.
//!
//! Atoms follow `[π̂(g) f̂](ω) = e^{-2πi g₁ ω} e^{g₂/2} f̂(e^{g₂} ω)`: `g₁` is the
//! time of the atom in seconds and `g₂` its log-scale. A window peaking at `ω'`
//! produces an atom centred on the frequency `ω' e^{-g₂}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, Wp4Error};
use crate::signal::{FrequencyGrid, FrequencySignal};
use crate::window::SplineWindow;

/// A point of the affine phase space: time `g1` (seconds), log-scale `g2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub g1: f64,
    pub g2: f64,
}

impl PhasePoint {
    pub fn new(g1: f64, g2: f64) -> Self {
        Self { g1, g2 }
    }

    /// Frequency an atom at this point is tuned to, for a window peaking at `peak`.
    pub fn frequency(&self, peak: f64) -> f64 {
        peak * (-self.g2).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: PhasePoint,
    pub coeff: Complex64,
}

/// `e^{-2πi t ω}` with the phase reduced before the multiplication by 2π.
#[inline]
pub(crate) fn unit_phase(t: f64, omega: f64) -> Complex64 {
    let cycles = (t * omega).rem_euclid(1.0);
    Complex64::from_polar(1.0, -TAU * cycles)
}

/// Nonzero part of an atom on a grid: `values[i]` sits at index `start + i`.
#[derive(Clone, Debug)]
pub struct SparseAtom {
    pub start: usize,
    pub values: Vec<Complex64>,
}

impl SparseAtom {
    pub fn new(f: &SplineWindow, g: PhasePoint, grid: &FrequencyGrid) -> Self {
        let (lo, hi) = f.support();
        let shrink = (-g.g2).exp();
        let (wlo, whi) = (lo * shrink, hi * shrink);
        let first = ((wlo - grid.start) / grid.spacing).floor().max(0.0);
        let last = ((whi - grid.start) / grid.spacing).ceil();
        if !first.is_finite() || !last.is_finite() || last < 0.0 || first >= grid.len as f64 {
            return Self { start: 0, values: Vec::new() };
        }
        let start = first as usize;
        let end = (last as usize).min(grid.len - 1);
        let gain = (0.5 * g.g2).exp();
        let dilate = g.g2.exp();
        let values = (start..=end)
            .map(|n| {
                let w = grid.freq(n);
                unit_phase(g.g1, w) * (gain * f.eval(dilate * w))
            })
            .collect();
        Self { start, values }
    }

    /// `r Σ s_n conj(v_n)`.
    pub fn correlate(&self, samples: &[Complex64], spacing: f64) -> Complex64 {
        let s = &samples[self.start..self.start + self.values.len()];
        s.iter().zip(&self.values).map(|(a, v)| a * v.conj()).sum::<Complex64>() * spacing
    }

    /// `sqrt(r Σ |v_n|²)`.
    pub fn norm(&self, spacing: f64) -> f64 {
        (spacing * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `samples += coeff * atom`.
    pub fn accumulate(&self, samples: &mut [Complex64], coeff: Complex64) {
        for (s, v) in samples[self.start..].iter_mut().zip(&self.values) {
            *s += coeff * v;
        }
    }
}

/// Samples of `π̂(g) f̂` on `grid`.
pub fn atom_sample(f: &SplineWindow, g: PhasePoint, grid: &FrequencyGrid) -> Vec<Complex64> {
    let atom = SparseAtom::new(f, g, grid);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len];
    atom.accumulate(&mut out, Complex64::new(1.0, 0.0));
    out
}

/// Riemann-sum inner product `⟨s, v⟩ = r Σ ŝ(ω_n) conj(v(ω_n))`.
pub fn inner_product(s: &FrequencySignal, v: &[Complex64]) -> Result<Complex64> {
    if v.len() != s.len() {
        return Err(Wp4Error::LengthMismatch { expected: s.len(), actual: v.len() });
    }
    let sum: Complex64 = s.samples().iter().zip(v).map(|(a, b)| a * b.conj()).sum();
    Ok(sum * s.grid().spacing)
}

/// `Σ_k c_k π̂(g_k) f̂` sampled on `grid`.
pub fn synthesize(atoms: &[Atom], f: &SplineWindow, grid: &FrequencyGrid) -> FrequencySignal {
    let mut samples = vec![Complex64::new(0.0, 0.0); grid.len];
    for atom in atoms {
        SparseAtom::new(f, atom.point, grid).accumulate(&mut samples, atom.coeff);
    }
    FrequencySignal::new(*grid, samples).expect("synthesized samples are finite")
}
