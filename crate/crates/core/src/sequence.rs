//! Spline sequences: the discretized window-signal space.
//!
//! A sequence holds, for every signal frequency `ω_n`, an optional cross-section
//! `ĥ_n(ω')`: a piecewise-linear complex function of the window variable,
//! linear between its nodes and zero outside `[first, last]`. Norms use the
//! weight `1/ω'` on the window variable, so
//!
//! `‖F‖² = r Σ_n ∫ |ĥ_n(ω')|² / ω' dω'`.
//!
//! In the slope variable `z = ω'/ω` a log-scale band is a fixed slope interval
//! and a time exponent transports every node along its ray through the origin.
//! Both operations map spline sequences to spline sequences.

use num_complex::Complex64;

use crate::error::{Result, Wp4Error};
use crate::filter::TrigFilter;
use crate::pwl;
use crate::signal::{FrequencyGrid, FrequencySignal};
use crate::transform::{unit_phase, PhasePoint};
use crate::window::SplineWindow;

/// Relative tolerance under which two abscissae are the same node.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// A band of slopes `z = ω'/ω ∈ [a, b]`, i.e. log-scales `g₂ ∈ [ln a, ln b]`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SlopeBand {
    pub a: f64,
    pub b: f64,
}

impl SlopeBand {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > a) {
            return Err(Wp4Error::InvalidParameter(format!("slope band needs 0 < a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    /// Harmonic mean `2 / (1/a + 1/b)`: the midpoint in `1/z`, which splits
    /// uniformly spaced frequency samples evenly.
    pub fn bisect(&self) -> f64 {
        2.0 / (1.0 / self.a + 1.0 / self.b)
    }

    pub fn lower(&self) -> Self {
        Self { a: self.a, b: self.bisect() }
    }

    pub fn upper(&self) -> Self {
        Self { a: self.bisect(), b: self.b }
    }

    pub fn contains(&self, z: f64) -> bool {
        z >= self.a && z <= self.b
    }

    /// Width in the reciprocal slope `1/z`.
    pub fn reciprocal_width(&self) -> f64 {
        1.0 / self.a - 1.0 / self.b
    }
}

pub fn slope_bisect(band: &SlopeBand) -> f64 {
    band.bisect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplineSequence {
    grid: FrequencyGrid,
    offsets: Vec<usize>,
    abscissae: Vec<f64>,
    values: Vec<Complex64>,
}

struct Builder {
    grid: FrequencyGrid,
    offsets: Vec<usize>,
    abscissae: Vec<f64>,
    values: Vec<Complex64>,
}

impl Builder {
    fn new(grid: FrequencyGrid, capacity: usize) -> Self {
        let mut offsets = Vec::with_capacity(grid.len + 1);
        offsets.push(0);
        Self { grid, offsets, abscissae: Vec::with_capacity(capacity), values: Vec::with_capacity(capacity) }
    }

    fn push_empty(&mut self) {
        self.offsets.push(self.abscissae.len());
    }

    fn push(&mut self, xs: impl IntoIterator<Item = f64>, vs: impl IntoIterator<Item = Complex64>) {
        let start = self.abscissae.len();
        self.abscissae.extend(xs);
        self.values.extend(vs);
        debug_assert_eq!(self.abscissae.len(), self.values.len());
        if self.abscissae.len() - start < 2 || self.values[start..].iter().all(|v| v.norm_sqr() == 0.0) {
            self.abscissae.truncate(start);
            self.values.truncate(start);
        }
        self.offsets.push(self.abscissae.len());
    }

    fn finish(self) -> SplineSequence {
        debug_assert_eq!(self.offsets.len(), self.grid.len + 1);
        SplineSequence { grid: self.grid, offsets: self.offsets, abscissae: self.abscissae, values: self.values }
    }
}

#[derive(Clone, Copy)]
struct Source<'a> {
    xs: &'a [f64],
    vs: &'a [Complex64],
    factor: f64,
    coeff: Complex64,
}

/// Scratch space for summing several transported cross-sections.
#[derive(Default)]
struct Merger {
    xs: Vec<f64>,
    ranges: Vec<(usize, usize)>,
    union: Vec<f64>,
    acc: Vec<Complex64>,
}

impl Merger {
    fn merge(&mut self, sources: &[Source<'_>], out: &mut Builder) {
        self.xs.clear();
        self.ranges.clear();
        for s in sources {
            let start = self.xs.len();
            self.xs.extend(s.xs.iter().map(|x| x * s.factor));
            self.ranges.push((start, self.xs.len()));
        }
        if sources.is_empty() {
            out.push_empty();
            return;
        }
        if sources.len() == 1 {
            let s = sources[0];
            out.push(self.xs.iter().copied(), s.vs.iter().map(|v| v * s.coeff));
            return;
        }
        self.union.clear();
        self.union.extend_from_slice(&self.xs);
        self.union.sort_unstable_by(|a, b| a.total_cmp(b));
        let mut kept = 0;
        for i in 0..self.union.len() {
            let x = self.union[i];
            if kept == 0 || x - self.union[kept - 1] > MERGE_TOLERANCE * x {
                self.union[kept] = x;
                kept += 1;
            }
        }
        self.union.truncate(kept);
        self.acc.clear();
        self.acc.resize(kept, Complex64::new(0.0, 0.0));
        for (s, &(lo, hi)) in sources.iter().zip(&self.ranges) {
            accumulate(&self.xs[lo..hi], s.vs, s.coeff, &self.union, &mut self.acc);
        }
        out.push(self.union.iter().copied(), self.acc.iter().copied());
    }
}

/// `acc[k] += coeff * h(union[k])` for the spline `h` given by `(xs, vs)`.
fn accumulate(xs: &[f64], vs: &[Complex64], coeff: Complex64, union: &[f64], acc: &mut [Complex64]) {
    let last = xs.len() - 1;
    let (first_x, last_x) = (xs[0], xs[last]);
    let start = union.partition_point(|&u| u < first_x - MERGE_TOLERANCE * u);
    let mut i = 0;
    for (k, &u) in union.iter().enumerate().skip(start) {
        let tol = MERGE_TOLERANCE * u;
        if u > last_x + tol {
            break;
        }
        while i < last && xs[i + 1] <= u + tol {
            i += 1;
        }
        let v = if (u - xs[i]).abs() <= tol || i == last {
            vs[i]
        } else {
            let t = (u - xs[i]) / (xs[i + 1] - xs[i]);
            vs[i] + (vs[i + 1] - vs[i]) * t
        };
        acc[k] += coeff * v;
    }
}

/// Restriction of one cross-section to `[lo, hi]`, with interpolated end nodes.
fn clip(xs: &[f64], vs: &[Complex64], lo: f64, hi: f64, out: &mut Builder) {
    let last = xs.len() - 1;
    let (tlo, thi) = (MERGE_TOLERANCE * lo, MERGE_TOLERANCE * hi);
    if hi <= xs[0] + thi || lo >= xs[last] - tlo {
        out.push_empty();
        return;
    }
    let i0 = xs.partition_point(|&x| x < lo - tlo);
    let i1 = xs.partition_point(|&x| x <= hi + thi); // exclusive
    let lo_cut = lo > xs[0] + tlo && !(i0 < i1 && (xs[i0] - lo).abs() <= tlo);
    let hi_cut = hi < xs[last] - thi && !(i0 < i1 && (xs[i1 - 1] - hi).abs() <= thi);
    let head = lo_cut.then(|| (lo, pwl::interp(xs, vs, lo)));
    let tail = hi_cut.then(|| (hi, pwl::interp(xs, vs, hi)));
    let nodes = head.into_iter().chain((i0..i1).map(|i| (xs[i], vs[i]))).chain(tail);
    out.push(nodes.clone().map(|p| p.0), nodes.map(|p| p.1));
}

impl SplineSequence {
    /// Sequence with no cross-sections.
    pub fn empty(grid: FrequencyGrid) -> Self {
        Self { grid, offsets: vec![0; grid.len + 1], abscissae: Vec::new(), values: Vec::new() }
    }

    /// Builds a sequence from explicit cross-sections (`None` or fewer than two
    /// nodes means absent).
    pub fn from_sections(grid: FrequencyGrid, sections: Vec<Option<Vec<(f64, Complex64)>>>) -> Result<Self> {
        if sections.len() != grid.len {
            return Err(Wp4Error::LengthMismatch { expected: grid.len, actual: sections.len() });
        }
        let mut b = Builder::new(grid, 0);
        for (n, sec) in sections.into_iter().enumerate() {
            match sec {
                None => b.push_empty(),
                Some(nodes) => {
                    let mut prev = 0.0;
                    for &(x, v) in &nodes {
                        if !(x.is_finite() && x > prev) || !v.re.is_finite() || !v.im.is_finite() {
                            return Err(Wp4Error::InvalidParameter(format!(
                                "cross-section {n}: abscissae must be finite, positive and increasing"
                            )));
                        }
                        prev = x;
                    }
                    b.push(nodes.iter().map(|p| p.0), nodes.iter().map(|p| p.1));
                }
            }
        }
        Ok(b.finish())
    }

    /// `f̂ ⊗ ŝ`: cross-section `n` is `ŝ(ω_n) · f̂` (the window is real).
    pub fn tensor(f: &SplineWindow, s: &FrequencySignal) -> Self {
        let grid = s.grid();
        let k = f.len();
        let mut b = Builder::new(grid, k * grid.len);
        for &z in s.samples() {
            if z.norm_sqr() == 0.0 {
                b.push_empty();
            } else {
                b.push(f.abscissae().iter().copied(), f.values().iter().map(|&v| z * v));
            }
        }
        b.finish()
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    /// Total number of nodes over all cross-sections.
    pub fn node_count(&self) -> usize {
        self.abscissae.len()
    }

    pub fn section(&self, n: usize) -> Option<(&[f64], &[Complex64])> {
        let (lo, hi) = (self.offsets[n], self.offsets[n + 1]);
        if lo == hi {
            None
        } else {
            Some((&self.abscissae[lo..hi], &self.values[lo..hi]))
        }
    }

    pub fn sections(&self) -> impl Iterator<Item = (usize, &[f64], &[Complex64])> + '_ {
        (0..self.grid.len).filter_map(move |n| self.section(n).map(|(x, v)| (n, x, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm_sqr() == 0.0)
    }

    /// Largest node abscissa over all cross-sections.
    pub fn max_abscissa(&self) -> f64 {
        self.sections().map(|(_, x, _)| x[x.len() - 1]).fold(0.0, f64::max)
    }

    /// `sqrt(r Σ_n ∫ |ĥ_n(ω')|² / ω' dω')`, exact per linear segment.
    pub fn norm(&self) -> f64 {
        let mut total = 0.0;
        for (_, xs, vs) in self.sections() {
            for i in 0..xs.len() - 1 {
                total += pwl::segment_energy_weighted(xs[i], xs[i + 1], vs[i], vs[i + 1]);
            }
        }
        (self.grid.spacing * total).sqrt()
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Wp4Error::GridMismatch);
        }
        Ok(())
    }

    /// Pointwise sum; nodes of both operands are kept (merged within tolerance).
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        Ok(self.combine(other, Complex64::new(1.0, 0.0)))
    }

    /// `self + coeff * other`.
    ///
    /// Cross-sections are summed as continuous splines on the union of their
    /// nodes. The result is exact when every operand vanishes at the ends of its
    /// support or when the operands share those ends, as sequences cut by the
    /// same slope band do.
    pub fn combine(&self, other: &Self, coeff: Complex64) -> Self {
        let mut b = Builder::new(self.grid, self.node_count() + other.node_count());
        let mut m = Merger::default();
        let mut srcs = Vec::with_capacity(2);
        for n in 0..self.grid.len {
            srcs.clear();
            if let Some((xs, vs)) = self.section(n) {
                srcs.push(Source { xs, vs, factor: 1.0, coeff: Complex64::new(1.0, 0.0) });
            }
            if let Some((xs, vs)) = other.section(n) {
                srcs.push(Source { xs, vs, factor: 1.0, coeff });
            }
            m.merge(&srcs, &mut b);
        }
        b.finish()
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        let mut b = Builder::new(self.grid, self.node_count());
        for n in 0..self.grid.len {
            match self.section(n) {
                Some((xs, vs)) => b.push(xs.iter().copied(), vs.iter().map(|v| v * lambda)),
                None => b.push_empty(),
            }
        }
        b.finish()
    }

    /// Perfect scale-pass: cross-section `n` restricted to `[a ω_n, b ω_n]`.
    pub fn scale_pass(&self, band: &SlopeBand) -> Self {
        let mut b = Builder::new(self.grid, self.node_count() + 2 * self.grid.len);
        for n in 0..self.grid.len {
            match self.section(n) {
                Some((xs, vs)) => {
                    let w = self.grid.freq(n);
                    clip(xs, vs, band.a * w, band.b * w, &mut b);
                }
                None => b.push_empty(),
            }
        }
        b.finish()
    }

    /// `‖scale_pass(band)‖` without building the restricted sequence.
    pub fn scale_pass_norm(&self, band: &SlopeBand) -> f64 {
        let mut total = 0.0;
        for (n, xs, vs) in self.sections() {
            let w = self.grid.freq(n);
            let (lo, hi) = (band.a * w, band.b * w);
            let last = xs.len() - 1;
            if hi <= xs[0] || lo >= xs[last] {
                continue;
            }
            let first = xs.partition_point(|&x| x <= lo).saturating_sub(1);
            for i in first..last {
                let (x0, x1) = (xs[i], xs[i + 1]);
                if x0 >= hi {
                    break;
                }
                if x1 <= lo {
                    continue;
                }
                let lerp = |x: f64| vs[i] + (vs[i + 1] - vs[i]) * ((x - x0) / (x1 - x0));
                let (a, va) = if x0 < lo { (lo, lerp(lo)) } else { (x0, vs[i]) };
                let (b, vb) = if x1 > hi { (hi, lerp(hi)) } else { (x1, vs[i + 1]) };
                total += pwl::segment_energy_weighted(a, b, va, vb);
            }
        }
        (self.grid.spacing * total).sqrt()
    }

    /// Time exponent by `steps` grid steps: cross-section `n` moves to `n + steps`
    /// with abscissae scaled by `ω_{n+steps}/ω_n`, so every node keeps its slope.
    /// Cross-sections leaving the grid are dropped; their count is returned.
    pub fn time_shift(&self, steps: i64) -> (Self, usize) {
        let len = self.grid.len as i64;
        let mut b = Builder::new(self.grid, self.node_count());
        let mut dropped = 0;
        for n in 0..len {
            if self.section(n as usize).is_some() && !(0..len).contains(&(n + steps)) {
                dropped += 1;
            }
        }
        for p in 0..len {
            let src = p - steps;
            match (0..len).contains(&src).then(|| self.section(src as usize)).flatten() {
                Some((xs, vs)) => {
                    let factor = self.grid.freq(p as usize) / self.grid.freq(src as usize);
                    b.push(xs.iter().map(|x| x * factor), vs.iter().copied());
                }
                None => b.push_empty(),
            }
        }
        (b.finish(), dropped)
    }

    /// `Σ_l c_l · time_shift(F, 2^j l)`, summed in ascending `l`. Shifts keep
    /// support ends on their rays, so the sum is exact under the conditions of
    /// [`combine`](Self::combine).
    pub fn time_pass(&self, filter: &TrigFilter) -> Self {
        let terms: Vec<(i64, Complex64)> = filter.terms().collect();
        let len = self.grid.len as i64;
        let mut b = Builder::new(self.grid, self.node_count() * terms.len());
        let mut m = Merger::default();
        let mut srcs = Vec::with_capacity(terms.len());
        for p in 0..len {
            srcs.clear();
            let wp = self.grid.freq(p as usize);
            for &(shift, coeff) in &terms {
                let src = p - shift;
                if !(0..len).contains(&src) {
                    continue;
                }
                if let Some((xs, vs)) = self.section(src as usize) {
                    let factor = if shift == 0 { 1.0 } else { wp / self.grid.freq(src as usize) };
                    srcs.push(Source { xs, vs, factor, coeff });
                }
            }
            m.merge(&srcs, &mut b);
        }
        b.finish()
    }

    /// `V[F](g) = r Σ_n e^{2πi g₁ ω_n} e^{g₂/2} ĥ_n(e^{g₂} ω_n)`.
    pub fn wavelet_coeff(&self, g: PhasePoint) -> Complex64 {
        let dilate = g.g2.exp();
        let gain = (0.5 * g.g2).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        for (n, xs, vs) in self.sections() {
            let w = self.grid.freq(n);
            let h = pwl::interp(xs, vs, dilate * w);
            if h.norm_sqr() != 0.0 {
                sum += unit_phase(g.g1, w).conj() * h;
            }
        }
        sum * (gain * self.grid.spacing)
    }
}
