mod audio;
mod error;
mod manifest;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wp4::bench::{self, Method, CSV_HEADER};
use wp4::dense::{dense_search_max, ScaleGrid};
use wp4::format::{AtomFile, AtomHeader};
use wp4::search::{find_atom, initial_band};
use wp4::vocoder::{vocoder_stretch, VocoderConfig};
use wp4::{
    matching_pursuit, orthogonal_matching_pursuit, FrequencySignal, PursuitConfig, SearchConfig, SplineWindow,
};

use audio::TimeSeries;
use error::CliError;
use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "wp4", version, about = "Sparse wavelet decomposition by bisection search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a signal into wavelet atoms (JSON lines).
    Decompose(DecomposeArgs),
    /// Synthesize a time series from a decomposition file.
    Reconstruct(ReconstructArgs),
    /// Time-stretch a signal while keeping its frequencies.
    Vocoder(VocoderArgs),
    /// Compare the searched coefficient with a dense-grid maximum.
    OracleCompare(OracleArgs),
    /// Time the search against the dense transform over a range of sizes.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum PursuitMethod {
    Mp,
    Omp,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    /// Window file: JSON array of [abscissa_hz, value] pairs.
    #[arg(long)]
    window: Option<PathBuf>,
    /// Trigonometric filter order L.
    #[arg(long, default_value_t = 9)]
    order: usize,
    /// Bisection depth J (default: floor(log2 N)).
    #[arg(long)]
    depth: Option<u32>,
    /// Number of lowest FFT bins set aside from the search.
    #[arg(long, default_value_t = 4)]
    low_bins: usize,
    /// Half-width of the local refinement grid (0 disables refinement).
    #[arg(long, default_value_t = 1)]
    refine_radius: usize,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig { order: self.order, depth: self.depth, refine_radius: self.refine_radius, ..Default::default() }
    }

    fn window(&self, sample_rate: f64) -> Result<SplineWindow, CliError> {
        match &self.window {
            None => Ok(SplineWindow::default_for_rate(sample_rate)?),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("{}: malformed window file: {e}", path.display())))
            }
        }
    }
}

#[derive(Args, Serialize)]
struct DecomposeArgs {
    input: PathBuf,
    /// Output decomposition (JSON lines).
    #[arg(short, long)]
    output: PathBuf,
    /// Number of atoms to extract.
    #[arg(long, default_value_t = 10)]
    atoms: usize,
    #[arg(long, value_enum, default_value_t = PursuitMethod::Mp)]
    method: PursuitMethod,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Serialize)]
struct ReconstructArgs {
    coeffs: PathBuf,
    /// Output time series (.wav, otherwise raw f64 with sidecar).
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct VocoderArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Integer stretch factor T.
    #[arg(long)]
    stretch: u32,
    #[arg(long, default_value_t = 20)]
    atoms: usize,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Serialize)]
struct OracleArgs {
    input: PathBuf,
    /// Optional JSON report path (the report is always printed).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Optional search trace output (JSON lines, one step per line).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Number of log-scales of the dense grid.
    #[arg(long, default_value_t = 512)]
    scales: usize,
    /// Number of time samples of the dense grid (default: smallest power of two above N).
    #[arg(long)]
    times: Option<usize>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Serialize)]
struct BenchArgs {
    /// Output CSV report.
    #[arg(short, long)]
    output: PathBuf,
    /// Sizes for the search: comma list of N or 2^k, or a doubling range 2^a..2^b.
    #[arg(long, default_value = "2^12..2^17")]
    sizes: String,
    /// Sizes for the dense N×N baseline.
    #[arg(long, default_value = "2^9..2^13")]
    dense_sizes: String,
    /// Searches per size; the median time is reported.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 9)]
    order: usize,
}

fn params<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn load_signal(path: &Path, low_bins: usize) -> Result<(TimeSeries, FrequencySignal), CliError> {
    let series = audio::read(path)?;
    let signal = FrequencySignal::from_real_samples(&series.samples, series.sample_rate, low_bins)?;
    Ok((series, signal))
}

fn decompose(args: &DecomposeArgs) -> Result<(), CliError> {
    let mut m = RunManifest::new("decompose", params(args));
    m.inputs.push(args.input.display().to_string());
    let (series, signal) = m.time("read", || load_signal(&args.input, args.search.low_bins))?;
    let window = args.search.window(series.sample_rate)?;
    let cfg = PursuitConfig { atoms: args.atoms, search: args.search.config(), ..Default::default() };
    let d = m.time("pursuit", || match args.method {
        PursuitMethod::Mp => matching_pursuit(&signal, &window, &cfg),
        PursuitMethod::Omp => orthogonal_matching_pursuit(&signal, &window, &cfg),
    })?;
    let file = AtomFile {
        header: AtomHeader {
            window: d.window.clone(),
            grid: d.grid,
            sample_rate: series.sample_rate,
            time_len: series.samples.len(),
        },
        atoms: d.atoms.clone(),
    };
    let text = file.to_jsonl()?;
    m.time("write", || fs::write(&args.output, text)).map_err(|e| CliError::io(&args.output, e))?;
    m.outputs.push(args.output.display().to_string());
    m.write(&args.output)?;
    Ok(())
}

fn reconstruct(args: &ReconstructArgs) -> Result<(), CliError> {
    let mut m = RunManifest::new("reconstruct", params(args));
    m.inputs.push(args.coeffs.display().to_string());
    let text = fs::read_to_string(&args.coeffs).map_err(|e| CliError::io(&args.coeffs, e))?;
    let file = AtomFile::from_jsonl(&text)?;
    let samples = m.time("synthesize", || file.synthesize().to_real_samples(file.header.time_len))?;
    let series = TimeSeries { samples, sample_rate: file.header.sample_rate };
    m.time("write", || audio::write(&args.output, &series))?;
    m.outputs.push(args.output.display().to_string());
    m.write(&args.output)?;
    Ok(())
}

fn vocoder(args: &VocoderArgs) -> Result<(), CliError> {
    let mut m = RunManifest::new("vocoder", params(args));
    m.inputs.push(args.input.display().to_string());
    let (series, signal) = m.time("read", || load_signal(&args.input, args.search.low_bins))?;
    let window = args.search.window(series.sample_rate)?;
    let cfg = VocoderConfig {
        stretch: args.stretch,
        pursuit: PursuitConfig { atoms: args.atoms, search: args.search.config(), ..Default::default() },
    };
    let out = m.time("vocoder", || vocoder_stretch(&signal, &window, &cfg))?;
    let len = series.samples.len() * args.stretch as usize;
    let samples = out.signal.to_real_samples(len)?;
    m.time("write", || audio::write(&args.output, &TimeSeries { samples, sample_rate: series.sample_rate }))?;
    m.outputs.push(args.output.display().to_string());
    m.write(&args.output)?;
    Ok(())
}

fn oracle_compare(args: &OracleArgs) -> Result<(), CliError> {
    let mut m = RunManifest::new("oracle-compare", params(args));
    m.inputs.push(args.input.display().to_string());
    let (series, signal) = m.time("read", || load_signal(&args.input, args.search.low_bins))?;
    let window = args.search.window(series.sample_rate)?.normalized_signal()?;
    let (found, outcome) = m.time("search", || find_atom(&signal, &window, &args.search.config()))?;
    let (band, padding) = initial_band(&window, &signal.grid());
    let padded = signal.zero_padded(padding);
    let times = args.times.unwrap_or_else(|| (padded.len() + 1).next_power_of_two());
    let scales = ScaleGrid::Exponential { g2_min: band.a.ln(), g2_max: band.b.ln(), count: args.scales };
    let (dense_point, dense_max) = m.time("dense", || dense_search_max(&padded, &window, &scales, times))?;
    let report = json!({
        "wp4": {
            "g1_seconds": found.point.g1,
            "g2_logscale": found.point.g2,
            "coeff_abs": found.correlation,
            "nodes_peak": outcome.trace.peak_nodes(),
        },
        "dense": {
            "g1_seconds": dense_point.g1,
            "g2_logscale": dense_point.g2,
            "max_abs": dense_max,
            "scales": args.scales,
            "times": times,
        },
        "ratio": found.correlation / dense_max,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{text}");
    if let Some(path) = &args.trace {
        fs::write(path, outcome.trace.to_json_lines()).map_err(|e| CliError::io(path, e))?;
        m.outputs.push(path.display().to_string());
    }
    if let Some(path) = &args.output {
        fs::write(path, &text).map_err(|e| CliError::io(path, e))?;
        m.outputs.push(path.display().to_string());
        m.write(path)?;
    }
    Ok(())
}

/// Parses `4096`, `2^12`, comma lists of those, or a doubling range `2^a..2^b`.
fn parse_sizes(spec: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse size list {spec:?}"));
    let one = |s: &str| -> Result<usize, CliError> {
        let s = s.trim();
        match s.split_once('^') {
            Some(("2", k)) => k.trim().parse::<u32>().ok().and_then(|k| 1usize.checked_shl(k)).ok_or_else(bad),
            Some(_) => Err(bad()),
            None => s.parse().map_err(|_| bad()),
        }
    };
    let sizes: Vec<usize> = if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (one(lo)?, one(hi)?);
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        std::iter::successors(Some(lo), |&n| n.checked_mul(2)).take_while(|&n| n <= hi).collect()
    } else {
        spec.split(',').map(one).collect::<Result<_, _>>()?
    };
    if sizes.is_empty() || sizes.iter().any(|&n| n < 16) {
        return Err(CliError::Usage(format!("sizes must be at least 16: {spec:?}")));
    }
    Ok(sizes)
}

fn run_bench(args: &BenchArgs) -> Result<(), CliError> {
    let mut m = RunManifest::new("bench", params(args));
    let sizes = parse_sizes(&args.sizes)?;
    let dense_sizes = parse_sizes(&args.dense_sizes)?;
    let cfg = SearchConfig { order: args.order, ..Default::default() };
    let mut rows = Vec::new();
    for &n in &sizes {
        rows.push(m.time(&format!("wp4 N={n}"), || bench::run(n, Method::Wp4, args.reps, &cfg))?);
    }
    for &n in &dense_sizes {
        rows.push(m.time(&format!("dense N={n}"), || bench::run(n, Method::Dense, args.reps, &cfg))?);
    }
    let mut text = format!("{CSV_HEADER}\n");
    for row in &rows {
        text.push_str(&row.csv_line());
        text.push('\n');
    }
    fs::write(&args.output, text).map_err(|e| CliError::io(&args.output, e))?;
    let mut stdout = std::io::stdout().lock();
    for method in [Method::Wp4, Method::Dense] {
        let pts: Vec<(f64, f64)> =
            rows.iter().filter(|r| r.method == method).map(|r| (r.n as f64, r.median_ms)).collect();
        if let Ok(slope) = bench::log_log_slope(&pts) {
            let _ = writeln!(stdout, "{method}: log-log slope {slope:.3}");
        }
    }
    m.outputs.push(args.output.display().to_string());
    m.write(&args.output)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Vocoder(a) => vocoder(a),
        Command::OracleCompare(a) => oracle_compare(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wp4: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
