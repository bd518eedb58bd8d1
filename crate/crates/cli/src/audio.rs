//! Reading and writing time series: mono WAV, or raw little-endian `f64` with
//! a JSON sidecar `<file>.json` holding `{"sample_rate": ...}`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub samples: Vec<f64>,
    pub sample_rate: f64,
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    sample_rate: f64,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn is_wav(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("wav"))
}

pub fn read(path: &Path) -> Result<TimeSeries, CliError> {
    let series = if is_wav(path) { read_wav(path)? } else { read_raw(path)? };
    if series.samples.is_empty() {
        return Err(CliError::Usage(format!("{} contains no samples", path.display())));
    }
    Ok(series)
}

fn read_wav(path: &Path) -> Result<TimeSeries, CliError> {
    let reader = hound::WavReader::open(path).map_err(|e| match e {
        hound::Error::IoError(io) => CliError::io(path, io),
        other => CliError::Usage(format!("{}: {other}", path.display())),
    })?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(CliError::Usage(format!(
            "{}: {} channels, only mono input is supported",
            path.display(),
            spec.channels
        )));
    }
    let bad = |e: hound::Error| CliError::Usage(format!("{}: {e}", path.display()));
    let samples = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| f64::from(v) / 32768.0))
            .collect::<Result<Vec<_>, _>>()
            .map_err(bad)?,
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<Result<Vec<_>, _>>()
            .map_err(bad)?,
        (format, bits) => {
            return Err(CliError::Usage(format!(
                "{}: unsupported WAV encoding {format:?} {bits}-bit (use PCM16 or float32)",
                path.display()
            )))
        }
    };
    Ok(TimeSeries { samples, sample_rate: f64::from(spec.sample_rate) })
}

fn read_raw(path: &Path) -> Result<TimeSeries, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    if bytes.len() % 8 != 0 {
        return Err(CliError::Usage(format!("{}: length is not a multiple of 8 bytes", path.display())));
    }
    let side = sidecar_path(path);
    let text = fs::read_to_string(&side).map_err(|e| CliError::io(&side, e))?;
    let sidecar: Sidecar =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", side.display())))?;
    let samples = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect();
    Ok(TimeSeries { samples, sample_rate: sidecar.sample_rate })
}

pub fn write(path: &Path, series: &TimeSeries) -> Result<(), CliError> {
    if is_wav(path) {
        let rate = series.sample_rate.round();
        if rate < 1.0 || rate > f64::from(u32::MAX) || (rate - series.sample_rate).abs() > 1e-9 {
            return Err(CliError::Usage(format!("sample rate {} cannot be stored in WAV", series.sample_rate)));
        }
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: rate as u32,
            bits_per_sample: 32,
            sample_format: hound::SampleFormat::Float,
        };
        let wrap = |e: hound::Error| match e {
            hound::Error::IoError(io) => CliError::io(path, io),
            other => CliError::Usage(format!("{}: {other}", path.display())),
        };
        let mut writer = hound::WavWriter::create(path, spec).map_err(wrap)?;
        for &v in &series.samples {
            writer.write_sample(v as f32).map_err(wrap)?;
        }
        writer.finalize().map_err(wrap)
    } else {
        let bytes: Vec<u8> = series.samples.iter().flat_map(|v| v.to_le_bytes()).collect();
        fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
        let side = sidecar_path(path);
        let text = serde_json::to_string(&Sidecar { sample_rate: series.sample_rate }).expect("sidecar serializes");
        fs::write(&side, text).map_err(|e| CliError::io(&side, e))
    }
}
