//! Phase vocoder time stretching driven by a wavelet pursuit.
//!
//! The signal is decomposed with a window `f₁`. Each selected atom `(α, β)` is
//! then re-measured with `f₂`, a copy of `f₁` contracted to half its bandwidth
//! about the peak, and resynthesized at time `Tα` with `f₃`, contracted by
//! `1/(2T)`. Since `f₃` is `T` times longer in time than `f₂` and the log-scale
//! is unchanged, durations stretch by `T` while frequencies stay put.

use num_complex::Complex64;

use crate::error::{Result, Wp4Error};
use crate::pursuit::{matching_pursuit, Decomposition, PursuitConfig};
use crate::signal::{FrequencyGrid, FrequencySignal};
use crate::transform::{synthesize, Atom, PhasePoint, SparseAtom};
use crate::window::SplineWindow;

#[derive(Clone, Debug, PartialEq)]
pub struct VocoderConfig {
    /// Integer stretch factor `T ≥ 1`.
    pub stretch: u32,
    pub pursuit: PursuitConfig,
}

/// Analysis, measurement and synthesis windows, each with unit signal norm.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowFamily {
    pub analysis: SplineWindow,
    pub measure: SplineWindow,
    pub synthesis: SplineWindow,
}

pub fn make_window_family(f: &SplineWindow, stretch: u32) -> Result<WindowFamily> {
    if stretch == 0 {
        return Err(Wp4Error::InvalidParameter("stretch factor must be at least 1".into()));
    }
    let stretch = f64::from(stretch);
    let peak = f.peak_abscissa();
    Ok(WindowFamily {
        analysis: f.normalized_signal()?,
        measure: f.contracted(peak, 0.5).normalized_signal()?,
        synthesis: f.contracted(peak, 0.5 / stretch).normalized_signal()?,
    })
}

#[derive(Clone, Debug)]
pub struct VocoderOutput {
    pub signal: FrequencySignal,
    pub windows: WindowFamily,
    pub analysis: Decomposition,
    /// Atoms of the output, relative to `windows.synthesis`.
    pub atoms: Vec<Atom>,
}

/// Grid with spacing `r/T` from the same start frequency up to `ω_N`.
pub fn stretched_grid(grid: &FrequencyGrid, stretch: u32) -> Result<FrequencyGrid> {
    if stretch == 0 {
        return Err(Wp4Error::InvalidParameter("stretch factor must be at least 1".into()));
    }
    let t = stretch as usize;
    FrequencyGrid::new(grid.start, grid.spacing / f64::from(stretch), (grid.len - 1) * t + 1)
}

/// Low band on the stretched grid: original bins copied to the same frequency
/// with gain `T`, the new bins in between left at zero.
fn stretched_low_band(low: &[Complex64], stretch: u32) -> Vec<Complex64> {
    let t = stretch as usize;
    let mut band = vec![Complex64::new(0.0, 0.0); low.len() * t];
    for (slot, z) in band.iter_mut().zip(low) {
        *slot = z * f64::from(stretch);
    }
    band
}

pub fn vocoder_stretch(s: &FrequencySignal, f: &SplineWindow, cfg: &VocoderConfig) -> Result<VocoderOutput> {
    let t = cfg.stretch;
    let windows = make_window_family(f, t)?;
    let grid = s.grid();
    let out_grid = stretched_grid(&grid, t)?;
    let analysis = if s.norm() == 0.0 {
        Decomposition {
            window: windows.analysis.clone(),
            grid,
            atoms: Vec::new(),
            atom_norms: Vec::new(),
            residual_norms: vec![0.0],
            residual: s.clone(),
        }
    } else {
        matching_pursuit(s, &windows.analysis, &cfg.pursuit)?
    };
    let tf = f64::from(t);
    let atoms: Vec<Atom> = analysis
        .atoms
        .iter()
        .map(|a| {
            let c = SparseAtom::new(&windows.measure, a.point, &grid).correlate(s.samples(), grid.spacing);
            let coeff = Complex64::from_polar(c.norm(), tf * c.arg());
            Atom { point: PhasePoint::new(tf * a.point.g1, a.point.g2), coeff }
        })
        .collect();
    let mut signal = synthesize(&atoms, &windows.synthesis, &out_grid);
    if !s.low_band().is_empty() {
        signal = signal.with_low_band(stretched_low_band(s.low_band(), t))?;
    }
    Ok(VocoderOutput { signal, windows, analysis, atoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::SearchConfig;
    use crate::transform::atom_sample;

    fn window() -> SplineWindow {
        SplineWindow::triangle(48.0, 64.0, 80.0, 1.0).unwrap()
    }

    #[test]
    fn family_shapes() {
        let fam = make_window_family(&window(), 2).unwrap();
        assert_eq!(fam.measure.support(), (56.0, 72.0));
        assert_eq!(fam.synthesis.support(), (60.0, 68.0));
        for w in [&fam.analysis, &fam.measure, &fam.synthesis] {
            assert!((w.norm_signal() - 1.0).abs() < 1e-12);
            assert_eq!(w.peak_abscissa(), 64.0);
        }
        assert!(make_window_family(&window(), 0).is_err());
    }

    #[test]
    fn stretched_grid_halves_spacing() {
        let g = FrequencyGrid::new(4.0, 1.0, 9).unwrap();
        let out = stretched_grid(&g, 2).unwrap();
        assert_eq!((out.start, out.spacing, out.len), (4.0, 0.5, 17));
        assert_eq!(out.last(), g.last());
    }

    #[test]
    fn unit_stretch_matches_direct_synthesis() {
        let grid = FrequencyGrid::new(4.0, 1.0, 256).unwrap();
        let f = window();
        let s = FrequencySignal::new(grid, atom_sample(&f, PhasePoint::new(0.4, -0.2), &grid)).unwrap();
        let cfg = VocoderConfig {
            stretch: 1,
            pursuit: PursuitConfig { atoms: 3, search: SearchConfig::default(), tolerance: 1e-12 },
        };
        let out = vocoder_stretch(&s, &f, &cfg).unwrap();
        assert_eq!(out.signal.grid(), grid);
        let direct: Vec<Atom> = out
            .analysis
            .atoms
            .iter()
            .map(|a| Atom {
                point: a.point,
                coeff: SparseAtom::new(&out.windows.measure, a.point, &grid).correlate(s.samples(), grid.spacing),
            })
            .collect();
        let want = synthesize(&direct, &out.windows.measure, &grid);
        let diff = out.signal.sub(&want).unwrap();
        assert!(diff.norm() <= 1e-10 * want.norm().max(1e-300));
    }

    #[test]
    fn silence_stays_silent() {
        let grid = FrequencyGrid::new(4.0, 1.0, 64).unwrap();
        let s = FrequencySignal::zeros(grid).with_low_band(vec![Complex64::new(0.0, 0.0); 4]).unwrap();
        let cfg = VocoderConfig { stretch: 3, pursuit: PursuitConfig::default() };
        let out = vocoder_stretch(&s, &window(), &cfg).unwrap();
        assert!(out.atoms.is_empty());
        assert_eq!(out.signal.len(), 190);
        assert_eq!(out.signal.low_band().len(), 12);
        assert_eq!(out.signal.norm(), 0.0);
    }
}
