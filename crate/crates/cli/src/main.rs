use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use coexsim::montecarlo::{empirical_cdf, run_campaign_range, RunOptions};
use coexsim::{CampaignConfig, CampaignResult, EntrantVariant, FigurePreset, Population};
use thiserror::Error;

/// Monte Carlo coexistence campaigns for legacy Wi-Fi and entrant
/// LTE / Wi-Fi access points sharing unlicensed spectrum.
#[derive(Debug, Parser)]
#[command(name = "coexsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one or more campaigns and write result files and median CSVs.
    Run {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
        /// Output directory; created when missing.
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Omit the timestamp comment line from the median CSVs.
        #[arg(long)]
        no_timestamp: bool,
        /// Keep per-realization AP reports in the result files.
        #[arg(long)]
        keep_reports: bool,
    },
    /// Empirical CDF of AP throughput from a result file.
    Cdf {
        /// Result file written by `run`.
        result: PathBuf,
        /// Population tag: legacy or entrant.
        #[arg(long)]
        population: String,
        /// Restrict to one entrant variant.
        #[arg(long)]
        mac: Option<String>,
        /// Restrict to one entrant count.
        #[arg(long)]
        sweep: Option<usize>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the resolved configuration with every default filled in.
    Validate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Campaign configuration (TOML).
    config: Option<PathBuf>,
    /// Built-in figure preset.
    #[arg(long)]
    preset: Option<FigurePreset>,
}

#[derive(Debug, Args)]
struct Overrides {
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Realizations per campaign.
    #[arg(long)]
    realizations: Option<usize>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Runtime(_) => ExitCode::from(3),
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl ToString) -> CliError {
    CliError::Runtime(e.to_string())
}

fn campaigns(source: &Source, overrides: &Overrides) -> Result<Vec<CampaignConfig>, CliError> {
    let mut list = match (&source.config, source.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let cfg = CampaignConfig::from_toml(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            vec![cfg]
        }
        (None, Some(preset)) => preset.campaigns(),
        (None, None) => unreachable!("clap requires a source"),
    };
    for c in &mut list {
        if let Some(seed) = overrides.seed {
            c.master_seed = seed;
        }
        if let Some(r) = overrides.realizations {
            c.realizations = Some(r);
        }
        if let Some(w) = overrides.workers {
            c.workers = w;
        }
        c.validate().map_err(|e| usage(format!("{}: {e}", c.name)))?;
    }
    Ok(list)
}

/// Write to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<(), CliError> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(runtime(e)),
        _ => Ok(()),
    }
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    format!("unix {secs}")
}

fn cmd_run(
    source: &Source,
    overrides: &Overrides,
    out: &Path,
    no_timestamp: bool,
    keep_reports: bool,
) -> Result<(), CliError> {
    let list = campaigns(source, overrides)?;
    for c in &list {
        let total = c.realization_count();
        eprintln!(
            "{}: {} / {}, {} legacy APs, entrants {:?}, {} variants, {total} realizations, seed {}",
            c.name,
            c.scenario.name(),
            c.channel_scheme.name(),
            c.legacy_aps(),
            c.entrant_sweep,
            c.variants.len(),
            c.master_seed
        );
        for w in c.density_warnings() {
            eprintln!("  warning: {w}");
        }
        let step = (total / 10).max(1);
        let progress = |done: usize| {
            if done.is_multiple_of(step) || done == total {
                eprintln!("  {done}/{total}");
            }
        };
        let options = RunOptions {
            retain_reports: keep_reports,
            progress: Some(&progress),
        };
        let result = run_campaign_range(c, 0, total, options).map_err(runtime)?;

        let dir = out.join(&c.name);
        fs::create_dir_all(&dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))?;
        for &n in &c.entrant_sweep {
            let path = dir.join(format!("n{n:02}.json"));
            result
                .sweep_point(n)
                .persist(&path)
                .map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        }
        let csv_path = dir.join("medians.csv");
        let mut buf = Vec::new();
        let ts = (!no_timestamp).then(timestamp);
        result.write_median_csv(&mut buf, ts.as_deref()).map_err(runtime)?;
        fs::write(&csv_path, buf).map_err(|e| runtime(format!("{}: {e}", csv_path.display())))?;
        emit(&format!("{}\n", csv_path.display()))?;
    }
    Ok(())
}

fn cmd_cdf(
    result: &Path,
    population: &str,
    mac: Option<&str>,
    sweep: Option<usize>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let population: Population = population.parse().map_err(usage)?;
    let variant: Option<EntrantVariant> = mac.map(str::parse).transpose().map_err(usage)?;
    let loaded = CampaignResult::load(result).map_err(|e| usage(format!("{}: {e}", result.display())))?;
    let mut samples: Vec<f64> = loaded
        .points
        .iter()
        .filter(|p| p.population == population)
        .filter(|p| variant.is_none_or(|v| v == p.variant))
        .filter(|p| sweep.is_none_or(|n| n == p.n_entrant))
        .flat_map(|p| p.samples_mbps.iter().copied())
        .collect();
    if samples.is_empty() {
        return Err(usage("no samples match the selection"));
    }
    samples.sort_by(f64::total_cmp);

    let mut text = String::from("throughput_mbps,cumulative_prob\n");
    for (x, p) in empirical_cdf(&samples) {
        text.push_str(&format!("{x},{p}\n"));
    }
    match out {
        Some(path) => fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display()))),
        None => emit(&text),
    }
}

fn cmd_validate(source: &Source, overrides: &Overrides) -> Result<(), CliError> {
    let mut text = String::new();
    for c in campaigns(source, overrides)? {
        text.push_str(&format!("# campaign {}\n", c.name));
        text.push_str(&c.to_toml().map_err(runtime)?);
        for w in c.density_warnings() {
            text.push_str(&format!("# warning: {w}\n"));
        }
        text.push('\n');
    }
    emit(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run {
            source,
            overrides,
            out,
            no_timestamp,
            keep_reports,
        } => cmd_run(source, overrides, out, *no_timestamp, *keep_reports),
        Command::Cdf {
            result,
            population,
            mac,
            sweep,
            out,
        } => cmd_cdf(result, population, mac.as_deref(), *sweep, out.as_deref()),
        Command::Validate { source, overrides } => cmd_validate(source, overrides),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
