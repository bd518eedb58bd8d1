//! Timing of the bisection search against the dense transform.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::dense::{dense_search_max, ScaleGrid};
use crate::error::{Result, Wp4Error};
use crate::search::{search_coefficient, SearchConfig};
use crate::signal::FrequencySignal;
use crate::window::SplineWindow;

pub const CSV_HEADER: &str = "N,method,median_ms,nodes_peak";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Wp4,
    Dense,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Wp4 => "wp4",
            Self::Dense => "dense",
        })
    }
}

impl FromStr for Method {
    type Err = Wp4Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wp4" => Ok(Self::Wp4),
            "dense" => Ok(Self::Dense),
            other => Err(Wp4Error::InvalidParameter(format!("unknown bench method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub method: Method,
    pub median_ms: f64,
    /// Peak node count of the search; zero for the dense method.
    pub nodes_peak: usize,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        format!("{},{},{:.3},{}", self.n, self.method, self.median_ms, self.nodes_peak)
    }
}

/// Synthetic multi-tone input with `n` frequency samples starting four bins
/// above zero (spacing 1 Hz), together with the default window for the
/// matching sample rate. The tones sit between bins so their leakage populates
/// every frequency sample.
pub fn bench_input(n: usize) -> Result<(FrequencySignal, SplineWindow)> {
    let len = 2 * (n + 3);
    let fs = len as f64;
    let tones = [(0.071, 1.0, 0.3), (0.113, 0.7, 1.1), (0.187, 0.5, 2.0), (0.262, 0.8, 0.7), (0.341, 0.4, 2.9)];
    let x: Vec<f64> = (0..len)
        .map(|t| {
            let t = t as f64 / fs;
            tones.iter().map(|&(rel, amp, phase)| amp * (TAU * (rel * fs + 0.37) * t + phase).cos()).sum()
        })
        .collect();
    let signal = FrequencySignal::from_real_samples(&x, fs, 4)?;
    let window = SplineWindow::default_for_rate(fs)?;
    Ok((signal, window))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Times one method at size `n`, `reps` repetitions.
pub fn run(n: usize, method: Method, reps: usize, cfg: &SearchConfig) -> Result<BenchRow> {
    if reps == 0 {
        return Err(Wp4Error::InvalidParameter("need at least one repetition".into()));
    }
    let (s, f) = bench_input(n)?;
    let mut times = Vec::with_capacity(reps);
    let mut nodes_peak = 0;
    for _ in 0..reps {
        let start = Instant::now();
        match method {
            Method::Wp4 => {
                let out = search_coefficient(&s, &f, cfg)?;
                nodes_peak = nodes_peak.max(out.trace.peak_nodes());
            }
            Method::Dense => {
                let grid = s.grid();
                let scales = ScaleGrid::LinearFrequency {
                    freq_min: grid.start,
                    freq_max: grid.last(),
                    count: n,
                    reference: f.peak_abscissa(),
                };
                dense_search_max(&s, &f, &scales, n)?;
            }
        }
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(BenchRow { n, method, median_ms: median(times), nodes_peak })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Wp4Error::InvalidParameter("slope fit needs two points".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Wp4Error::InvalidParameter("slope fit needs distinct sizes".into()));
    }
    Ok(sxy / sxx)
}
