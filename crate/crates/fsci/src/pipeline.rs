//! The end-to-end run behind the CLI: load and validate inputs, build the
//! baseline, compute the requested tables, and emit the report bundle
//! atomically (write to a staging directory, swap on success).
//!
//! Exit codes: 0 for success, 2 when inputs or configuration are invalid,
//! 3 when a computation fails on valid inputs. Failures leave any previous
//! bundle's tables untouched and write the reasons to
//! `<output_dir>/errors.log`; warnings go to stderr and, per table, into the
//! JSON `warnings` block.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use fsci_core::analysis::{
    indicator_deviations, indicator_group_means, DeviationRow, IndicatorGroupMeans,
    ResilienceSpec,
};
use fsci_core::{
    build_baseline, coverage_matrix, gdp_relation_dataset, normalized_distance_table,
    resilience_snapshot, AnalysisError, Baseline, CountryTable, DeviationTable, GroupMeansTable,
    Grouping, IndicatorMeta, IndicatorRegistry, Panel,
};

use crate::config::{Format, RunConfig};
use crate::fetch::{default_cache_dir, fetch_source};
use crate::ingest::{load_codebook, load_countries, load_panel, ValidationReport};
use crate::report::{self, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ANALYSIS: i32 = 3;

/// Auxiliary series holding GDP per capita; its latest value per country
/// feeds the GDP-relation plots.
pub const GDP_PER_CAPITA_SERIES: &str = "_gdp_per_capita";

/// Cached remote inputs refresh after a day.
const FETCH_MAX_AGE: Duration = Duration::from_secs(24 * 60 * 60);

/// What the run computes. Every task also writes `manifest.json`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Baseline,
    Coverage,
    Means,
    Deviations,
    GdpRelation,
    Resilience,
    All,
}

impl Task {
    pub fn key(self) -> &'static str {
        match self {
            Task::Baseline => "baseline",
            Task::Coverage => "coverage",
            Task::Means => "means",
            Task::Deviations => "deviations",
            Task::GdpRelation => "gdp-relation",
            Task::Resilience => "resilience",
            Task::All => "all",
        }
    }

    fn includes(self, step: Task) -> bool {
        self == step || self == Task::All
    }
}

/// Terminal failure: the exit code and the lines for stderr + errors.log.
struct Failure {
    code: i32,
    lines: Vec<String>,
}

impl Failure {
    fn validation(line: String) -> Failure {
        Failure { code: EXIT_VALIDATION, lines: vec![line] }
    }

    fn analysis(error: AnalysisError) -> Failure {
        // Model errors mean the inputs were inconsistent; everything else
        // is a computation that cannot proceed.
        let code = match error {
            AnalysisError::Model(_) => EXIT_VALIDATION,
            _ => EXIT_ANALYSIS,
        };
        Failure { code, lines: vec![format!("error [analysis] {error}")] }
    }
}

/// Runs one task end to end and returns the process exit code.
pub fn run_pipeline(config: &RunConfig, task: Task, threads: Option<usize>) -> i32 {
    match execute(config, task, threads) {
        Ok(warnings) => {
            for warning in &warnings {
                eprintln!("warning: {warning}");
            }
            EXIT_OK
        }
        Err(failure) => {
            for line in &failure.lines {
                eprintln!("{line}");
            }
            if let Err(e) = write_error_log(&config.output_dir, &failure.lines) {
                eprintln!("error [io] cannot write errors.log: {e}");
            }
            failure.code
        }
    }
}

fn write_error_log(dir: &Path, lines: &[String]) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = lines.join("\n");
    text.push('\n');
    fs::write(dir.join("errors.log"), text)
}

fn execute(config: &RunConfig, task: Task, threads: Option<usize>) -> Result<Vec<String>, Failure> {
    config
        .validate()
        .map_err(|e| Failure::validation(format!("error [config] {e}")))?;

    let mut inputs = BTreeMap::new();
    let codebook_bytes = read_input(required(&config.codebook, "codebook")?, &mut inputs)?;
    let countries_bytes = read_input(required(&config.countries, "countries")?, &mut inputs)?;
    let observation_bytes =
        read_input(required(&config.observations, "observations")?, &mut inputs)?;

    let registry = load_codebook(&codebook_bytes[..])
        .map_err(|e| Failure::validation(format!("error [load] codebook: {e}")))?;
    let countries = load_countries(&countries_bytes[..])
        .map_err(|e| Failure::validation(format!("error [load] countries: {e}")))?;
    let (panel, validation) = load_panel(&observation_bytes[..], &registry, &countries)
        .map_err(|e| Failure::validation(format!("error [load] observations: {e}")))?;
    if !validation.is_ok() {
        return Err(Failure { code: EXIT_VALIDATION, lines: issue_lines(&validation) });
    }
    let mut warnings: Vec<String> = validation
        .warnings
        .iter()
        .map(|issue| format!("observations [{}] row {}: {}", issue.rule, issue.row, issue.message))
        .collect();

    let baseline = build_baseline(&panel, &registry, config.min_year);
    let coverage = coverage_matrix(&panel, &registry, config.coverage)
        .map_err(|e| Failure::validation(format!("error [config] {e}")))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure {
            code: EXIT_ANALYSIS,
            lines: vec![format!("error [threads] {e}")],
        })?;

    let mut tables: Vec<(String, Table)> = Vec::new();
    if task.includes(Task::Baseline) {
        tables.push(("baseline".into(), report::baseline_table(&baseline, &registry)));
        tables.push((
            "baseline_dropped".into(),
            report::baseline_dropped_table(&baseline, &registry),
        ));
        tables.push(("baseline_vintage".into(), report::vintage_table(&baseline)));
    }
    if task.includes(Task::Coverage) {
        tables.push(("coverage".into(), report::coverage_table(&coverage, &registry)));
    }
    if task.includes(Task::Means) {
        let mut first = true;
        for &grouping in &config.groupings {
            let means = group_means(&pool, &baseline, &panel, &registry, &countries, grouping)?;
            if first {
                // Global columns are grouping-independent; emit them once.
                tables.push(("summary_global".into(), report::summary_table(&means)));
                first = false;
            }
            let distances =
                normalized_distance_table(&means, &registry).map_err(Failure::analysis)?;
            tables.push((report::grouped_stem("means", grouping), report::means_table(&means)));
            tables.push((
                report::grouped_stem("distances", grouping),
                report::distances_table(&distances),
            ));
        }
    }
    if task.includes(Task::Deviations) {
        for &grouping in &config.groupings {
            let table = deviations(&pool, &baseline, &panel, &registry, &countries, grouping)?;
            tables.push((
                report::grouped_stem("deviations", grouping),
                report::deviations_table(&table),
            ));
        }
    }
    if task.includes(Task::GdpRelation) {
        let gdp = latest_gdp(&panel);
        let dataset = gdp_relation_dataset(
            &baseline,
            &gdp,
            &registry,
            &countries,
            &panel,
            config.loess_span,
            config.loess_degree,
        )
        .map_err(Failure::analysis)?;
        tables.push(("gdp_relation_points".into(), report::gdp_points_table(&dataset)));
        tables.push(("gdp_relation_curves".into(), report::gdp_curves_table(&dataset)));
    }
    if task.includes(Task::Resilience) {
        tables.push(("resilience".into(), resilience(config, task, &panel, &baseline, &registry)?));
    }

    for (stem, table) in &tables {
        for warning in &table.warnings {
            warnings.push(format!("{stem}: {warning}"));
        }
    }

    let manifest = report::manifest_value(&inputs, settings_value(config, task), &started_at());
    emit_bundle(&config.output_dir, &tables, &manifest, &config.formats)
        .map_err(|e| Failure::validation(format!("error [io] {e}")))?;
    Ok(warnings)
}

fn required<'a>(value: &'a Option<String>, key: &str) -> Result<&'a str, Failure> {
    value.as_deref().ok_or_else(|| {
        Failure::validation(format!(
            "error [config] no {key} input; set `{key}` in the config file or pass --{key}"
        ))
    })
}

/// Resolves one input to bytes, fetching and caching `http(s)://` sources,
/// and records its content hash under the path or URL as given.
fn read_input(source: &str, inputs: &mut BTreeMap<String, String>) -> Result<Vec<u8>, Failure> {
    let path = if source.starts_with("http://") || source.starts_with("https://") {
        fetch_source(source, &default_cache_dir(), FETCH_MAX_AGE)
            .map_err(|e| Failure::validation(format!("error [fetch] {source}: {e}")))?
    } else {
        PathBuf::from(source)
    };
    let bytes = fs::read(&path)
        .map_err(|e| Failure::validation(format!("error [io] {source}: {e}")))?;
    inputs.insert(source.to_string(), hex::encode(Sha256::digest(&bytes)));
    Ok(bytes)
}

fn issue_lines(validation: &ValidationReport) -> Vec<String> {
    let mut lines = Vec::new();
    for issue in &validation.errors {
        lines.push(format!("error [{}] row {}: {}", issue.rule, issue.row, issue.message));
    }
    for issue in &validation.warnings {
        lines.push(format!("warning [{}] row {}: {}", issue.rule, issue.row, issue.message));
    }
    lines
}

/// Group means with the per-indicator work fanned out on the pool; rows are
/// collected back in codebook order, so results do not depend on the
/// schedule or thread count.
fn group_means(
    pool: &rayon::ThreadPool,
    baseline: &Baseline,
    panel: &Panel,
    registry: &IndicatorRegistry,
    countries: &CountryTable,
    grouping: Grouping,
) -> Result<GroupMeansTable, Failure> {
    let metas: Vec<&IndicatorMeta> = registry.iter().collect();
    let results: Vec<Result<Option<IndicatorGroupMeans>, AnalysisError>> = pool.install(|| {
        metas
            .par_iter()
            .map(|&meta| indicator_group_means(meta, baseline, panel, countries, grouping))
            .collect()
    });
    let mut rows = Vec::new();
    for result in results {
        if let Some(row) = result.map_err(Failure::analysis)? {
            rows.push(row);
        }
    }
    Ok(GroupMeansTable { grouping, rows })
}

fn deviations(
    pool: &rayon::ThreadPool,
    baseline: &Baseline,
    panel: &Panel,
    registry: &IndicatorRegistry,
    countries: &CountryTable,
    grouping: Grouping,
) -> Result<DeviationTable, Failure> {
    let metas: Vec<&IndicatorMeta> = registry.iter().collect();
    let results: Vec<Result<Option<DeviationRow>, AnalysisError>> = pool.install(|| {
        metas
            .par_iter()
            .map(|&meta| indicator_deviations(meta, baseline, panel, countries, grouping))
            .collect()
    });
    let mut rows = Vec::new();
    for result in results {
        if let Some(row) = result.map_err(Failure::analysis)? {
            rows.push(row);
        }
    }
    Ok(DeviationTable { grouping, rows })
}

fn resilience(
    config: &RunConfig,
    task: Task,
    panel: &Panel,
    baseline: &Baseline,
    registry: &IndicatorRegistry,
) -> Result<Table, Failure> {
    let Some(keys) = &config.resilience else {
        // A dedicated `resilience` run demands the configuration; inside
        // `all` the snapshot is simply skipped.
        if task == Task::Resilience {
            return Err(Failure::validation(
                "error [config] resilience indicators are not configured; set the \
                 resilience_* keys in the config file"
                    .into(),
            ));
        }
        let mut table = report::resilience_header();
        table
            .warnings
            .push("resilience indicators not configured; table left empty".into());
        return Ok(table);
    };
    let spec = ResilienceSpec {
        exposure: keys.exposure.clone(),
        social_capital: keys.social_capital.clone(),
        diet_flexibility: keys.diet_flexibility.clone(),
        price_volatility: keys.price_volatility.clone(),
        supply_variability: keys.supply_variability.clone(),
        window: config.resilience_window,
    };
    match resilience_snapshot(panel, baseline, registry, &spec) {
        Ok(snapshot) => Ok(report::resilience_table(&snapshot)),
        Err(AnalysisError::EmptySubset) => {
            let mut table = report::resilience_header();
            table
                .warnings
                .push("no country qualifies for the resilience subset; table left empty".into());
            Ok(table)
        }
        Err(e) => Err(Failure::analysis(e)),
    }
}

/// Latest GDP per capita per country from the auxiliary series.
fn latest_gdp(panel: &Panel) -> BTreeMap<String, f64> {
    let mut gdp = BTreeMap::new();
    if let Some(per_country) = panel.indicator(GDP_PER_CAPITA_SERIES) {
        for (iso3, series) in per_country {
            if let Some((_, &value)) = series.iter().next_back() {
                gdp.insert(iso3.clone(), value);
            }
        }
    }
    gdp
}

/// Effective settings recorded in the manifest. Thread count is excluded:
/// results are independent of it by construction.
fn settings_value(config: &RunConfig, task: Task) -> serde_json::Value {
    let mut settings = serde_json::Map::new();
    settings.insert("task".into(), task.key().into());
    settings.insert("min_year".into(), config.min_year.into());
    settings.insert("coverage_start".into(), config.coverage.0.into());
    settings.insert("coverage_end".into(), config.coverage.1.into());
    settings.insert(
        "groupings".into(),
        config
            .groupings
            .iter()
            .map(|g| serde_json::Value::from(g.key()))
            .collect::<Vec<_>>()
            .into(),
    );
    settings.insert("loess_span".into(), config.loess_span.into());
    settings.insert("loess_degree".into(), (config.loess_degree as i64).into());
    settings.insert(
        "formats".into(),
        config
            .formats
            .iter()
            .map(|f| serde_json::Value::from(f.key()))
            .collect::<Vec<_>>()
            .into(),
    );
    settings.insert(
        "resilience_window_start".into(),
        config.resilience_window.0.into(),
    );
    settings.insert("resilience_window_end".into(), config.resilience_window.1.into());
    let resilience = match &config.resilience {
        Some(keys) => {
            let mut map = serde_json::Map::new();
            map.insert("exposure".into(), keys.exposure.as_str().into());
            map.insert("social_capital".into(), keys.social_capital.as_str().into());
            map.insert("diet_flexibility".into(), keys.diet_flexibility.as_str().into());
            map.insert("price_volatility".into(), keys.price_volatility.as_str().into());
            map.insert(
                "supply_variability".into(),
                keys.supply_variability.as_str().into(),
            );
            serde_json::Value::Object(map)
        }
        None => serde_json::Value::Null,
    };
    settings.insert("resilience".into(), resilience);
    serde_json::Value::Object(settings)
}

/// Run start in RFC 3339, pinned by `SOURCE_DATE_EPOCH` when set (the
/// timestamp is informational; it does not participate in any determinism
/// guarantee).
fn started_at() -> String {
    let stamp = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse::<i64>().ok())
        .and_then(|secs| time::OffsetDateTime::from_unix_timestamp(secs).ok())
        .unwrap_or_else(time::OffsetDateTime::now_utc);
    stamp
        .format(&time::format_description::well_known::Rfc3339)
        .expect("RFC 3339 formatting cannot fail for valid timestamps")
}

/// Writes the bundle into a staging sibling of the target, then swaps it in.
fn emit_bundle(
    output_dir: &Path,
    tables: &[(String, Table)],
    manifest: &serde_json::Value,
    formats: &BTreeSet<Format>,
) -> io::Result<()> {
    let staging = staging_dir(output_dir);
    if staging.exists() {
        fs::remove_dir_all(&staging)?;
    }
    fs::create_dir_all(&staging)?;
    let written = (|| {
        for (stem, table) in tables {
            report::write_table(table, &staging, stem, formats)?;
        }
        report::write_manifest(manifest, &staging.join("manifest.json"))
    })();
    if let Err(e) = written {
        let _ = fs::remove_dir_all(&staging);
        return Err(e);
    }
    if output_dir.exists() {
        fs::remove_dir_all(output_dir)?;
    }
    fs::rename(&staging, output_dir)
}

fn staging_dir(output_dir: &Path) -> PathBuf {
    let name = output_dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "reports".into());
    output_dir.with_file_name(format!("{name}.staging-{}", std::process::id()))
}
