//! Coefficient search by bisecting the phase space in time and scale.
//!
//! Each step splits the running window-signal sequence with a complementary
//! pair of time-pass filters and splits the slope band at its harmonic mean,
//! then keeps the child of largest norm. After `J` steps the surviving
//! quadrant pins down one atom to time resolution `T / 2^J`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, Wp4Error};
use crate::filter::TrigFilter;
use crate::sequence::{SlopeBand, SplineSequence};
use crate::signal::{FrequencyGrid, FrequencySignal};
use crate::transform::{PhasePoint, SparseAtom};
use crate::window::SplineWindow;

/// Child norms below this fraction of the initial norm count as empty.
const DEAD_BRANCH: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Filter order `L`.
    pub order: usize,
    /// Number of bisection steps; `None` means `⌊log₂ N⌋`.
    pub depth: Option<u32>,
    /// Half-width of the local refinement grid; 0 disables refinement.
    pub refine_radius: usize,
    pub refine_max_iter: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { order: 9, depth: None, refine_radius: 1, refine_max_iter: 64 }
    }
}

impl SearchConfig {
    pub fn depth_for(&self, len: usize) -> u32 {
        self.depth.unwrap_or_else(|| usize::BITS - 1 - len.leading_zeros())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: u32,
    /// Index of the kept child: `2 * time_bit + scale_half`, or the time bit alone
    /// once the scale band is saturated.
    pub quadrant: u8,
    pub child_norms: Vec<f64>,
    pub band: SlopeBand,
    pub time_bits: Vec<u8>,
    /// Nodes of the kept child.
    pub nodes: usize,
    /// Nodes of both time-pass outputs before the scale split.
    pub work_nodes: usize,
    pub scale_saturated: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchTrace {
    pub steps: Vec<StepRecord>,
}

impl SearchTrace {
    pub fn peak_nodes(&self) -> usize {
        self.steps.iter().map(|s| s.nodes).max().unwrap_or(0)
    }

    /// One JSON object per step, newline separated.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&serde_json::to_string(s).expect("step record serializes"));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub point: PhasePoint,
    pub band: SlopeBand,
    pub time_bits: Vec<u8>,
    /// Norm of the surviving quadrant.
    pub norm: f64,
    pub trace: SearchTrace,
}

/// Slopes for which the whole atom support fits inside `[ω_0, ω_N]`:
/// `[ω'_K / ω_N, ω'_1 / ω_0]`. Also returns how many zero samples must be
/// appended to the grid for that band to be non-empty.
pub fn initial_band(f: &SplineWindow, grid: &FrequencyGrid) -> (SlopeBand, usize) {
    let (lo, hi) = f.support();
    let b = lo / grid.start;
    let needed_last = hi / b;
    let mut padding = 0;
    if grid.last() * (1.0 + 1e-9) <= needed_last {
        // 5% margin plus two bins
        let target = needed_last * 1.05 + 2.0 * grid.spacing;
        padding = ((target - grid.last()) / grid.spacing).ceil() as usize;
    }
    let a = hi / grid.extended(padding).last();
    (SlopeBand { a, b }, padding)
}

/// Time in seconds encoded by the time bits of the final quadrant.
pub fn time_from_bits(bits: &[u8], period: f64) -> f64 {
    let mut u = 0.0;
    let mut w = 0.5;
    for &b in bits {
        if b == 0 {
            u += w;
        }
        w *= 0.5;
    }
    period * (u + w)
}

/// Runs the bisection search on an already formed sequence `F₀` restricted to `band`.
pub fn search_sequence(f0: &SplineSequence, band: SlopeBand, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let grid = f0.grid();
    let total = f0.norm();
    if total == 0.0 {
        return Err(Wp4Error::InvalidSignal("signal has no energy in the search band".into()));
    }
    let depth = cfg.depth_for(grid.len);
    let omega_max = f0.max_abscissa();
    let mut running = f0.scale_pass(&band);
    let mut band = band;
    let mut bits = Vec::with_capacity(depth as usize);
    let mut trace = SearchTrace::default();
    let mut norm = running.norm();
    for step in 0..depth {
        let filter = TrigFilter::indicator(cfg.order, step, 0)?;
        let t0 = running.time_pass(&filter);
        let t1 = running.combine(&t0, Complex64::new(-1.0, 0.0));
        let work_nodes = t0.node_count() + t1.node_count();
        let saturated = band.reciprocal_width() < grid.spacing / omega_max;
        let candidates: Vec<(bool, SlopeBand, u8)> = if saturated {
            vec![(false, band, 0), (true, band, 1)]
        } else {
            let (lo, hi) = (band.lower(), band.upper());
            vec![(false, lo, 0), (false, hi, 0), (true, lo, 1), (true, hi, 1)]
        };
        let norms: Vec<f64> = candidates
            .iter()
            .map(|&(upper, b, _)| {
                let t = if upper { &t1 } else { &t0 };
                if saturated { t.norm() } else { t.scale_pass_norm(&b) }
            })
            .collect();
        let mut best = 0;
        for (i, &n) in norms.iter().enumerate() {
            if n > norms[best] {
                best = i;
            }
        }
        if norms[best] < DEAD_BRANCH * total {
            return Err(Wp4Error::Search(format!("all children vanished at step {step}")));
        }
        let (upper, child_band, bit) = candidates[best];
        let chosen = if upper { t1 } else { t0 };
        let seq = if saturated { chosen } else { chosen.scale_pass(&child_band) };
        let nodes = seq.node_count();
        running = seq;
        band = child_band;
        norm = norms[best];
        bits.push(bit);
        trace.steps.push(StepRecord {
            step,
            quadrant: best as u8,
            child_norms: norms,
            band,
            time_bits: bits.clone(),
            nodes,
            work_nodes,
            scale_saturated: saturated,
        });
    }
    let point = PhasePoint::new(time_from_bits(&bits, grid.period()), band.bisect().ln());
    Ok(SearchOutcome { point, band, time_bits: bits, norm, trace })
}

/// Searches for the largest wavelet coefficient of `s` with window `f`.
pub fn search_coefficient(s: &FrequencySignal, f: &SplineWindow, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if s.norm() == 0.0 {
        return Err(Wp4Error::InvalidSignal("signal is identically zero".into()));
    }
    let (band, padding) = initial_band(f, &s.grid());
    let padded;
    let s = if padding > 0 {
        padded = s.zero_padded(padding);
        &padded
    } else {
        s
    };
    let f0 = SplineSequence::tensor(f, s);
    search_sequence(&f0, band, cfg)
}

/// A located atom with its projection coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Refined {
    pub point: PhasePoint,
    /// `⟨s, v⟩ / ‖v‖²` for the sampled atom `v`.
    pub coeff: Complex64,
    /// `|⟨s, v⟩| / ‖v‖`.
    pub correlation: f64,
}

fn score(s: &FrequencySignal, f: &SplineWindow, g: PhasePoint) -> Option<Refined> {
    let grid = s.grid();
    let atom = SparseAtom::new(f, g, &grid);
    let norm = atom.norm(grid.spacing);
    if norm == 0.0 {
        return None;
    }
    let ip = atom.correlate(s.samples(), grid.spacing);
    Some(Refined { point: g, coeff: ip / (norm * norm), correlation: ip.norm() / norm })
}

/// Hill-climbs `|⟨s, v⟩| / ‖v‖` on a `(2 radius + 1)²` grid of spacing
/// `(dt, dg2)` around `start`, recentring until the centre wins.
pub fn refine(
    s: &FrequencySignal,
    f: &SplineWindow,
    start: PhasePoint,
    dt: f64,
    dg2: f64,
    radius: usize,
    max_iter: usize,
) -> Result<Refined> {
    let mut best = score(s, f, start)
        .ok_or_else(|| Wp4Error::Search("starting atom does not meet the frequency grid".into()))?;
    if radius == 0 {
        return Ok(best);
    }
    let r = radius as i64;
    for _ in 0..max_iter {
        let center = best.point;
        let mut moved = false;
        for i in -r..=r {
            for k in -r..=r {
                if i == 0 && k == 0 {
                    continue;
                }
                let g = PhasePoint::new(center.g1 + i as f64 * dt, center.g2 + k as f64 * dg2);
                if let Some(c) = score(s, f, g) {
                    if c.correlation > best.correlation {
                        best = c;
                        moved = true;
                    }
                }
            }
        }
        if !moved {
            break;
        }
    }
    Ok(best)
}

/// Search followed by refinement at the resolution of the final quadrant.
pub fn find_atom(s: &FrequencySignal, f: &SplineWindow, cfg: &SearchConfig) -> Result<(Refined, SearchOutcome)> {
    let outcome = search_coefficient(s, f, cfg)?;
    let dt = s.grid().period() / f64::powi(2.0, outcome.time_bits.len() as i32);
    let dg2 = (outcome.band.b / outcome.band.a).ln();
    let refined = refine(s, f, outcome.point, dt, dg2, cfg.refine_radius, cfg.refine_max_iter)?;
    Ok((refined, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::atom_sample;

    fn setup() -> (FrequencyGrid, SplineWindow) {
        let grid = FrequencyGrid::new(4.0, 1.0, 512).unwrap();
        (grid, SplineWindow::triangle(32.0, 64.0, 96.0, 1.0).unwrap())
    }

    #[test]
    fn bits_to_time() {
        assert_eq!(time_from_bits(&[], 1.0), 0.5);
        assert_eq!(time_from_bits(&[0], 1.0), 0.75);
        assert_eq!(time_from_bits(&[1, 0], 2.0), 2.0 * (0.25 + 0.125));
    }

    #[test]
    fn default_depth_is_floor_log2() {
        let cfg = SearchConfig::default();
        assert_eq!(cfg.depth_for(512), 9);
        assert_eq!(cfg.depth_for(1000), 9);
        assert_eq!(cfg.depth_for(1024), 10);
    }

    #[test]
    fn initial_band_covers_inner_atoms() {
        let (grid, f) = setup();
        let (band, pad) = initial_band(&f, &grid);
        assert_eq!(pad, 0);
        assert!((band.a - 96.0 / grid.last()).abs() < 1e-15);
        assert!((band.b - 8.0).abs() < 1e-15);
        let narrow = FrequencyGrid::new(4.0, 1.0, 6).unwrap();
        let (band, pad) = initial_band(&f, &narrow);
        assert!(pad > 0);
        assert!(band.a < band.b);
    }

    #[test]
    fn zero_signal_is_rejected() {
        let (grid, f) = setup();
        let err = search_coefficient(&FrequencySignal::zeros(grid), &f, &SearchConfig::default());
        assert!(matches!(err, Err(Wp4Error::InvalidSignal(_))));
    }

    #[test]
    fn finds_a_single_planted_atom() {
        let (grid, f) = setup();
        let truth = PhasePoint::new(0.3 * grid.period(), -0.4);
        let s = FrequencySignal::new(grid, atom_sample(&f, truth, &grid)).unwrap();
        let (refined, outcome) = find_atom(&s, &f, &SearchConfig::default()).unwrap();
        assert_eq!(outcome.trace.steps.len(), 9);
        let dt = grid.period() / 512.0;
        assert!((outcome.point.g1 - truth.g1).abs() < 8.0 * dt, "{:?}", outcome.point);
        assert!((refined.coeff.norm() - 1.0).abs() < 0.05, "{:?}", refined);
        assert!((refined.point.g2 - truth.g2).abs() < 0.01);
        let lines = outcome.trace.to_json_lines();
        assert_eq!(lines.lines().count(), 9);
        assert!(lines.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
    }

    #[test]
    fn refine_radius_zero_keeps_point() {
        let (grid, f) = setup();
        let s = FrequencySignal::new(grid, atom_sample(&f, PhasePoint::new(0.1, 0.0), &grid)).unwrap();
        let g = PhasePoint::new(0.12, 0.05);
        let r = refine(&s, &f, g, 0.01, 0.01, 0, 10).unwrap();
        assert_eq!(r.point, g);
    }
}
