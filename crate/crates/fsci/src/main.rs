use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fsci::pipeline::{run_pipeline, Task, EXIT_VALIDATION};
use fsci::{Format, RunConfig};
use fsci_core::Grouping;

/// Builds country-indicator baselines and their descriptive statistics from
/// long-format CSV panels, and writes deterministic report bundles.
#[derive(Parser)]
#[command(name = "fsci", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Latest observation per country-indicator, with drops and vintages.
    Baseline,
    /// Observation counts per country-indicator in the coverage window.
    Coverage,
    /// Weighted group means, global summaries, and normalized distances.
    Means,
    /// Percent deviations from the global mean with robust inference.
    Deviations,
    /// Country points and per-region smoothed curves against GDP per capita.
    GdpRelation,
    /// Exposure/capacity resilience snapshot.
    Resilience,
    /// Every table.
    All,
}

impl Command {
    fn task(&self) -> Task {
        match self {
            Command::Baseline => Task::Baseline,
            Command::Coverage => Task::Coverage,
            Command::Means => Task::Means,
            Command::Deviations => Task::Deviations,
            Command::GdpRelation => Task::GdpRelation,
            Command::Resilience => Task::Resilience,
            Command::All => Task::All,
        }
    }
}

/// Flags overriding their config-file counterparts.
#[derive(Args)]
struct Overrides {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Codebook CSV (path or http(s) URL).
    #[arg(long, global = true)]
    codebook: Option<String>,
    /// Country table CSV (path or http(s) URL).
    #[arg(long, global = true)]
    countries: Option<String>,
    /// Observations CSV (path or http(s) URL).
    #[arg(long, global = true)]
    observations: Option<String>,
    /// Directory receiving the report bundle.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Oldest acceptable year for a baseline cell.
    #[arg(long, global = true)]
    min_year: Option<i32>,
    /// First year of the coverage window.
    #[arg(long, global = true)]
    coverage_start: Option<i32>,
    /// Last year of the coverage window.
    #[arg(long, global = true)]
    coverage_end: Option<i32>,
    /// Restrict grouped tables to one grouping.
    #[arg(long, value_enum, global = true)]
    group: Option<GroupArg>,
    /// Output format(s).
    #[arg(long, value_enum, global = true)]
    format: Option<FormatArg>,
    /// Span of the local-regression smoother, in (0, 1].
    #[arg(long, global = true)]
    loess_span: Option<f64>,
    /// Degree of the local-regression polynomial (1 or 2).
    #[arg(long, global = true)]
    loess_degree: Option<usize>,
    /// Worker threads for per-indicator computation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Region,
    Income,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

fn main() {
    let cli = Cli::parse();
    let mut config = match &cli.overrides.config {
        Some(path) => match RunConfig::from_file(path) {
            Ok(config) => config,
            Err(e) => {
                eprintln!("error [config] {}: {e}", path.display());
                std::process::exit(EXIT_VALIDATION);
            }
        },
        None => RunConfig::default(),
    };
    let overrides = cli.overrides;
    if let Some(v) = overrides.codebook {
        config.codebook = Some(v);
    }
    if let Some(v) = overrides.countries {
        config.countries = Some(v);
    }
    if let Some(v) = overrides.observations {
        config.observations = Some(v);
    }
    if let Some(v) = overrides.output {
        config.output_dir = v;
    }
    if let Some(v) = overrides.min_year {
        config.min_year = v;
    }
    if let Some(v) = overrides.coverage_start {
        config.coverage.0 = v;
    }
    if let Some(v) = overrides.coverage_end {
        config.coverage.1 = v;
    }
    if let Some(v) = overrides.group {
        config.groupings = vec![match v {
            GroupArg::Region => Grouping::Region,
            GroupArg::Income => Grouping::Income,
        }];
    }
    if let Some(v) = overrides.format {
        config.formats = match v {
            FormatArg::Csv => BTreeSet::from([Format::Csv]),
            FormatArg::Json => BTreeSet::from([Format::Json]),
            FormatArg::Both => BTreeSet::from([Format::Csv, Format::Json]),
        };
    }
    if let Some(v) = overrides.loess_span {
        config.loess_span = v;
    }
    if let Some(v) = overrides.loess_degree {
        config.loess_degree = v;
    }
    std::process::exit(run_pipeline(&config, cli.command.task(), overrides.threads));
}
