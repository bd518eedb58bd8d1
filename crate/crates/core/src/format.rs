//! Line-delimited JSON files holding a decomposition.
//!
//! The first line is a header with the window, the frequency grid and the time
//! series metadata; every following line is one atom.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, Wp4Error};
use crate::signal::{FrequencyGrid, FrequencySignal};
use crate::transform::{synthesize, Atom, PhasePoint};
use crate::window::SplineWindow;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomHeader {
    /// Window the coefficients refer to, as `[[hz, value], ...]`.
    pub window: SplineWindow,
    pub grid: FrequencyGrid,
    pub sample_rate: f64,
    /// Number of samples of the time series the grid came from.
    pub time_len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub g1_seconds: f64,
    pub g2_logscale: f64,
    pub coeff_re: f64,
    pub coeff_im: f64,
}

impl From<&Atom> for AtomRecord {
    fn from(a: &Atom) -> Self {
        Self { g1_seconds: a.point.g1, g2_logscale: a.point.g2, coeff_re: a.coeff.re, coeff_im: a.coeff.im }
    }
}

impl From<AtomRecord> for Atom {
    fn from(r: AtomRecord) -> Self {
        Self { point: PhasePoint::new(r.g1_seconds, r.g2_logscale), coeff: Complex64::new(r.coeff_re, r.coeff_im) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomFile {
    pub header: AtomHeader,
    pub atoms: Vec<Atom>,
}

impl AtomFile {
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = serde_json::to_string(&self.header).map_err(|e| Wp4Error::Format(e.to_string()))?;
        out.push('\n');
        for a in &self.atoms {
            out.push_str(&serde_json::to_string(&AtomRecord::from(a)).map_err(|e| Wp4Error::Format(e.to_string()))?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| Wp4Error::Format("empty atom file".into()))?;
        let header: AtomHeader =
            serde_json::from_str(first).map_err(|e| Wp4Error::Format(format!("line 1: {e}")))?;
        let atoms = lines
            .map(|(i, l)| {
                let r: AtomRecord =
                    serde_json::from_str(l).map_err(|e| Wp4Error::Format(format!("line {}: {e}", i + 1)))?;
                let finite = [r.g1_seconds, r.g2_logscale, r.coeff_re, r.coeff_im].iter().all(|v| v.is_finite());
                if !finite {
                    return Err(Wp4Error::Format(format!("line {}: non-finite atom field", i + 1)));
                }
                Ok(Atom::from(r))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { header, atoms })
    }

    /// The model `Σ c_k π̂(g_k) f̂` on the header grid.
    pub fn synthesize(&self) -> FrequencySignal {
        synthesize(&self.atoms, &self.header.window, &self.header.grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> AtomFile {
        AtomFile {
            header: AtomHeader {
                window: SplineWindow::triangle(500.0, 1000.0, 1500.0, 1.0).unwrap(),
                grid: FrequencyGrid::new(15.625, 3.90625, 2045).unwrap(),
                sample_rate: 16000.0,
                time_len: 4096,
            },
            atoms: vec![
                Atom { point: PhasePoint::new(0.125, -0.5), coeff: Complex64::new(0.1, -0.2) },
                Atom { point: PhasePoint::new(0.2, 0.3), coeff: Complex64::new(1.0 / 3.0, 0.0) },
            ],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let f = sample();
        let text = f.to_jsonl().unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().contains("\"g1_seconds\":0.125"));
        assert_eq!(AtomFile::from_jsonl(&text).unwrap(), f);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(AtomFile::from_jsonl("").is_err());
        let mut text = sample().to_jsonl().unwrap();
        text.push_str("{\"g1_seconds\":1.0}\n");
        assert!(matches!(AtomFile::from_jsonl(&text), Err(Wp4Error::Format(_))));
    }
}
