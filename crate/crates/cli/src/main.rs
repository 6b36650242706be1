//! `covertime`: run cover-time experiments from JSON configs and emit
//! bit-reproducible CSV/JSONL records plus predictor-comparison summaries.
//!
//! Exit codes: 0 success, 2 configuration error, 3 acceptance-band failure
//! under `--check`, 1 other runtime failure.

use clap::Parser;
use covertime_core::harness::{
    aggregate, compare_to_predictor, default_band, predictor_for, run_experiment, write_csv,
    write_jsonl, write_summary_csv, ExperimentConfig, ExperimentKind, ReportRow, Statistic,
};
use covertime_core::Error;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "covertime", version, about = "Cover-time experiment harness")]
struct Cli {
    /// Experiment name (cover-torus, gamma-cover, alpha-radius, cover-disk,
    /// bm-cover, chain-mc, chain-exact, green-selftest, predict-table)
    experiment: String,

    /// JSON config file mirroring the experiment-config schema
    #[arg(long)]
    config: Option<PathBuf>,

    /// Set or override a single parameter, e.g. --param n=64
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,

    /// Number of replicates (overrides the config)
    #[arg(long)]
    replicates: Option<u64>,

    /// Master seed (overrides the config)
    #[arg(long)]
    seed: Option<u64>,

    /// Records CSV output path (overrides the config's output_path)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker-pool size; output is byte-identical for any value
    #[arg(long)]
    workers: Option<usize>,

    /// Also write a JSON-lines mirror of the records
    #[arg(long)]
    jsonl: Option<PathBuf>,

    /// Compare the aggregate against the predictor band; exit 3 on failure
    #[arg(long)]
    check: bool,

    /// Statistic for --check (mean or median; default depends on experiment)
    #[arg(long)]
    stat: Option<String>,

    /// Override the acceptance band for --check, e.g. --band 0.3,1.1
    #[arg(long)]
    band: Option<String>,

    /// Emit measured per-replicate runtimes instead of zeros (breaks
    /// byte-reproducibility of output files)
    #[arg(long)]
    timings: bool,
}

fn parse_experiment(name: &str) -> Result<ExperimentKind, Error> {
    serde_json::from_value(serde_json::Value::String(name.to_string()))
        .map_err(|_| Error::Config(format!("unknown experiment `{name}`")))
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let experiment = parse_experiment(&cli.experiment)?;
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let cfg: ExperimentConfig =
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad config: {e}")))?;
            if cfg.experiment != experiment {
                return Err(Error::Config(format!(
                    "config is for `{}` but the command line names `{}`",
                    cfg.experiment.name(),
                    cli.experiment
                )));
            }
            cfg
        }
        None => ExperimentConfig {
            experiment,
            params: serde_json::Map::new(),
            replicates: 1,
            master_seed: 0,
            output_path: None,
        },
    };
    for kv in &cli.params {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--param wants KEY=VALUE, got `{kv}`")))?;
        let parsed: serde_json::Value = serde_json::from_str(value)
            .unwrap_or_else(|_| serde_json::Value::String(value.to_string()));
        config.params.insert(key.to_string(), parsed);
    }
    if let Some(r) = cli.replicates {
        config.replicates = r;
    }
    if let Some(s) = cli.seed {
        config.master_seed = s;
    }
    if let Some(out) = &cli.out {
        config.output_path = Some(out.display().to_string());
    }
    Ok(config)
}

fn parse_band(text: &str) -> Result<(f64, f64), Error> {
    let (lo, hi) = text
        .split_once(',')
        .ok_or_else(|| Error::Config(format!("--band wants LO,HI, got `{text}`")))?;
    let lo: f64 = lo.trim().parse().map_err(|_| Error::Config("bad band low".to_string()))?;
    let hi: f64 = hi.trim().parse().map_err(|_| Error::Config("bad band high".to_string()))?;
    Ok((lo, hi))
}

fn run(cli: &Cli) -> Result<Vec<ReportRow>, Error> {
    let config = build_config(cli)?;
    let started = std::time::Instant::now();
    let records = run_experiment(&config, cli.workers)?;
    eprintln!(
        "{}: {} replicate(s) in {:.1} ms",
        config.experiment.name(),
        records.len(),
        started.elapsed().as_secs_f64() * 1e3
    );

    if let Some(path) = &config.output_path {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write_csv(&records, &mut file, cli.timings)?;
        file.flush()?;
    } else if !cli.check {
        let mut stdout = std::io::stdout().lock();
        write_csv(&records, &mut stdout, cli.timings)?;
    }
    if let Some(path) = &cli.jsonl {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write_jsonl(&records, &mut file, cli.timings)?;
        file.flush()?;
    }

    if !cli.check {
        return Ok(Vec::new());
    }
    let statistic = match cli.stat.as_deref() {
        Some("mean") => Statistic::Mean,
        Some("median") => Statistic::Median,
        Some(other) => return Err(Error::Config(format!("--stat wants mean or median, got `{other}`"))),
        // the largest-unvisited-disk law is stated for medians
        None if config.experiment == ExperimentKind::AlphaRadius => Statistic::Median,
        None => Statistic::Mean,
    };
    let predictor = predictor_for(&config)
        .ok_or_else(|| Error::Config(format!("`{}` has no predictor to check against", config.experiment.name())))?;
    let band = match &cli.band {
        Some(text) => parse_band(text)?,
        None => default_band(config.experiment)
            .ok_or_else(|| Error::Config(format!("no default band for `{}`; pass --band", config.experiment.name())))?,
    };
    let summary = aggregate(&records, statistic, Some(predictor))?;
    let report = compare_to_predictor(&summary, band)?;
    let rows = vec![report];
    let mut stdout = std::io::stdout().lock();
    write_summary_csv(&rows, &mut stdout)?;
    if let Some(path) = &config.output_path {
        let mut file = std::io::BufWriter::new(std::fs::File::create(format!("{path}.summary.csv"))?);
        write_summary_csv(&rows, &mut file)?;
        file.flush()?;
    }
    Ok(rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rows) => {
            if rows.iter().any(|r| !r.pass) {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e @ (Error::Config(_) | Error::Domain { .. })) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
