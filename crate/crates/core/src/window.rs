//! Piecewise-linear mother wavelets defined directly in the frequency domain.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, Wp4Error};
use crate::pwl;

/// A real, nonnegative, compactly supported window `f̂` given by its spline nodes.
///
/// The window is linear between consecutive nodes and zero outside
/// `[first, last]`. Endpoint values are zero, so the window is continuous.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct SplineWindow {
    abscissae: Vec<f64>,
    values: Vec<f64>,
}

impl SplineWindow {
    pub fn new(nodes: Vec<(f64, f64)>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Wp4Error::InvalidWindow(format!(
                "need at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        let mut prev = 0.0;
        for (i, &(x, v)) in nodes.iter().enumerate() {
            if !x.is_finite() || !v.is_finite() {
                return Err(Wp4Error::InvalidWindow(format!("node {i} is not finite")));
            }
            if x <= prev {
                return Err(Wp4Error::InvalidWindow(format!(
                    "abscissae must be positive and strictly increasing (node {i})"
                )));
            }
            if v < 0.0 {
                return Err(Wp4Error::InvalidWindow(format!("node {i} has a negative value")));
            }
            prev = x;
        }
        if nodes[0].1 != 0.0 || nodes[nodes.len() - 1].1 != 0.0 {
            return Err(Wp4Error::InvalidWindow("endpoint values must be zero".into()));
        }
        let (abscissae, values) = nodes.into_iter().unzip();
        Ok(Self { abscissae, values })
    }

    /// Three-node window rising from `lo` to `height` at `peak` and back to zero at `hi`.
    pub fn triangle(lo: f64, peak: f64, hi: f64, height: f64) -> Result<Self> {
        Self::new(vec![(lo, 0.0), (peak, height), (hi, 0.0)])
    }

    /// Default window for sample rate `fs`: a broad triangle from `fs/64` to
    /// `15 fs/64` peaking at `fs/8`. The low first node keeps the node count of
    /// the search near `N K L`.
    pub fn default_for_rate(fs: f64) -> Result<Self> {
        Self::triangle(fs / 64.0, fs / 8.0, 15.0 * fs / 64.0, 1.0)
    }

    pub fn len(&self) -> usize {
        self.abscissae.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissae.is_empty()
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nodes(&self) -> Vec<(f64, f64)> {
        self.abscissae.iter().copied().zip(self.values.iter().copied()).collect()
    }

    pub fn support(&self) -> (f64, f64) {
        (self.abscissae[0], self.abscissae[self.len() - 1])
    }

    /// Abscissa of the largest node value (first one on ties).
    pub fn peak_abscissa(&self) -> f64 {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        self.abscissae[best]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo || x >= hi {
            return 0.0;
        }
        let i = self.abscissae.partition_point(|&a| a <= x);
        let (x0, x1) = (self.abscissae[i - 1], self.abscissae[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }

    /// `‖f‖_S = sqrt(∫ |f̂|² dω)`, integrated exactly per segment.
    pub fn norm_signal(&self) -> f64 {
        self.segments()
            .map(|(x0, x1, v0, v1)| pwl::segment_energy(x0, x1, v0, v1))
            .sum::<f64>()
            .sqrt()
    }

    /// `sqrt(∫ |f̂(ω)|² / ω dω)`, the window norm under the Duflo-Moore weight.
    pub fn duflo_norm(&self) -> f64 {
        self.segments()
            .map(|(x0, x1, v0, v1)| pwl::segment_energy_weighted(x0, x1, v0, v1))
            .sum::<f64>()
            .sqrt()
    }

    fn segments(&self) -> impl Iterator<Item = (f64, f64, Complex64, Complex64)> + '_ {
        self.abscissae.windows(2).zip(self.values.windows(2)).map(|(x, v)| {
            (x[0], x[1], Complex64::new(v[0], 0.0), Complex64::new(v[1], 0.0))
        })
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abscissae: self.abscissae.clone(),
            values: self.values.iter().map(|v| v * factor.abs()).collect(),
        }
    }

    /// The window `ω ↦ e^{g₂/2} f̂(e^{g₂} ω)`.
    pub fn dilated(&self, g2: f64) -> Self {
        let shrink = (-g2).exp();
        let gain = (0.5 * g2).exp();
        Self {
            abscissae: self.abscissae.iter().map(|x| x * shrink).collect(),
            values: self.values.iter().map(|v| v * gain).collect(),
        }
    }

    /// Affinely contracts the abscissae about `center` by `factor` (0 < factor <= 1).
    pub fn contracted(&self, center: f64, factor: f64) -> Self {
        Self {
            abscissae: self.abscissae.iter().map(|x| center + (x - center) * factor).collect(),
            values: self.values.clone(),
        }
    }

    /// Rescaled copy with `‖f‖_S = 1`.
    pub fn normalized_signal(&self) -> Result<Self> {
        let n = self.norm_signal();
        if n == 0.0 {
            return Err(Wp4Error::InvalidWindow("window is identically zero".into()));
        }
        Ok(self.scaled(1.0 / n))
    }

    /// Rescaled copy with unit Duflo-Moore norm.
    pub fn normalized_duflo(&self) -> Result<Self> {
        let n = self.duflo_norm();
        if n == 0.0 {
            return Err(Wp4Error::InvalidWindow("window is identically zero".into()));
        }
        Ok(self.scaled(1.0 / n))
    }
}

impl TryFrom<Vec<(f64, f64)>> for SplineWindow {
    type Error = Wp4Error;

    fn try_from(nodes: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(nodes)
    }
}

impl From<SplineWindow> for Vec<(f64, f64)> {
    fn from(w: SplineWindow) -> Self {
        w.nodes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SplineWindow {
        SplineWindow::triangle(1.0, 2.0, 3.0, 1.0).unwrap()
    }

    fn riemann(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        (0..n).map(|i| f(a + (i as f64 + 0.5) * h) * h).sum()
    }

    #[test]
    fn triangle_signal_norm() {
        let f = triangle();
        assert!((f.norm_signal() - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        let w = f.clone();
        let fine = riemann(|x| w.eval(x).powi(2), 1.0, 3.0, 100_000).sqrt();
        assert!((f.norm_signal() - fine).abs() < 1e-8);
        assert!((f.norm_signal() - 0.8165).abs() < 1e-4);
    }

    #[test]
    fn triangle_duflo_norm() {
        let f = triangle();
        let closed = (-0.5 + 2f64.ln()) + (9.0 * 1.5f64.ln() - 3.5);
        assert!((f.duflo_norm().powi(2) - closed).abs() < 1e-14);
        assert!((f.duflo_norm() - 0.5851).abs() < 1e-4);
        let w = f.clone();
        let fine = riemann(|x| w.eval(x).powi(2) / x, 1.0, 3.0, 200_000);
        assert!((closed - fine).abs() < 1e-9);
    }

    #[test]
    fn zero_window_has_zero_norms() {
        let f = SplineWindow::new(vec![(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]).unwrap();
        assert_eq!(f.norm_signal(), 0.0);
        assert_eq!(f.duflo_norm(), 0.0);
        assert!(f.normalized_signal().is_err());
    }

    #[test]
    fn norms_are_homogeneous() {
        let f = triangle();
        let g = f.scaled(2.0);
        assert!((g.norm_signal() - 2.0 * f.norm_signal()).abs() < 1e-14);
        assert!((g.duflo_norm() - 2.0 * f.duflo_norm()).abs() < 1e-14);
    }

    #[test]
    fn dilation_scales_duflo_norm() {
        let f = triangle();
        for g2 in [-1.3, -0.2, 0.0, 0.7, 2.5] {
            let d = f.dilated(g2);
            let want = f.duflo_norm() * (0.5 * g2).exp();
            assert!((d.duflo_norm() - want).abs() < 1e-12 * want);
            // signal norm is preserved by the unitary dilation
            assert!((d.norm_signal() - f.norm_signal()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(SplineWindow::new(vec![(1.0, 0.0), (2.0, 0.0)]).is_err());
        assert!(SplineWindow::new(vec![(1.0, 0.0), (1.0, 1.0), (3.0, 0.0)]).is_err());
        assert!(SplineWindow::new(vec![(0.0, 0.0), (1.0, 1.0), (3.0, 0.0)]).is_err());
        assert!(SplineWindow::new(vec![(1.0, 0.5), (2.0, 1.0), (3.0, 0.0)]).is_err());
        assert!(SplineWindow::new(vec![(1.0, 0.0), (2.0, -1.0), (3.0, 0.0)]).is_err());
    }

    #[test]
    fn json_is_array_of_pairs() {
        let f = triangle();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[1.0,0.0],[2.0,1.0],[3.0,0.0]]");
        let back: SplineWindow = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<SplineWindow>("[[1.0,0.0],[2.0,1.0]]").is_err());
    }
}
