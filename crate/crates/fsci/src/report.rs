//! Table emission: every result rendered as CSV, JSON, or both, plus the
//! run manifest.
//!
//! Each table carries two parallel views of its rows: raw values at full
//! precision, and display strings rounded to the table's convention (one
//! decimal for means and percent deviations, four for p-values, fractions
//! and normalized coordinates). CSV files contain the display strings; JSON
//! files contain both. Row and column order is fixed — codebook sequence
//! first, then iso3 — so emitting the same table twice yields identical
//! bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use fsci_core::baseline::DroppedCell;
use fsci_core::kernels::FTestResult;
use fsci_core::{
    Baseline, CoverageMatrix, DeviationTable, GdpRelationDataset, GroupMeansTable, Grouping,
    IndicatorRegistry, NormalizedDistanceTable, ResilienceSnapshot,
};

use crate::config::Format;

/// Raw (unrounded) value of one cell, as it appears in the JSON `rows`
/// block. Blank display cells and '--' markers are both `Null` here; the
/// display string keeps them apart.
#[derive(Debug, Clone, PartialEq)]
pub enum Raw {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Text(String),
}

impl Raw {
    fn to_json(&self) -> serde_json::Value {
        match self {
            Raw::Null => serde_json::Value::Null,
            Raw::Bool(b) => serde_json::Value::Bool(*b),
            Raw::Int(i) => serde_json::Value::from(*i),
            Raw::Num(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Raw::Text(s) => serde_json::Value::from(s.as_str()),
        }
    }
}

/// One cell: the raw value and its CSV rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub raw: Raw,
    pub display: String,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        let s = s.into();
        Cell { raw: Raw::Text(s.clone()), display: s }
    }

    pub fn int(v: i64) -> Self {
        Cell { raw: Raw::Int(v), display: v.to_string() }
    }

    pub fn boolean(v: bool) -> Self {
        Cell { raw: Raw::Bool(v), display: v.to_string() }
    }

    /// Full-precision number: the display string is the shortest decimal
    /// that parses back to the same value.
    pub fn num(v: f64) -> Self {
        Cell { raw: Raw::Num(v), display: fmt_raw(v) }
    }

    /// Number displayed with a fixed decimal count; the raw value stays
    /// unrounded.
    pub fn fixed(v: f64, decimals: usize) -> Self {
        Cell { raw: Raw::Num(v), display: fmt_fixed(v, decimals) }
    }

    pub fn opt_fixed(v: Option<f64>, decimals: usize) -> Self {
        match v {
            Some(v) => Cell::fixed(v, decimals),
            None => Cell::blank(),
        }
    }

    /// Empty cell: a group with no observations.
    pub fn blank() -> Self {
        Cell { raw: Raw::Null, display: String::new() }
    }

    /// '--' marker: a statistic that could not be run (as opposed to a
    /// group with no data, which renders blank).
    pub fn dashes() -> Self {
        Cell { raw: Raw::Null, display: "--".into() }
    }
}

/// A finished table: fixed columns, rows in emission order, warnings
/// attached during its computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub warnings: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Full-precision rendering; `Display` for `f64` is the shortest string
/// that round-trips.
pub fn fmt_raw(v: f64) -> String {
    format!("{v}")
}

/// Fixed-decimal rendering, with negative zero normalized so `-0.04` at one
/// decimal prints `0.0`, not `-0.0`.
pub fn fmt_fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if let Some(rest) = s.strip_prefix('-') {
        if rest.chars().all(|c| c == '0' || c == '.') {
            return rest.to_string();
        }
    }
    s
}

pub fn write_csv(table: &Table, path: &Path) -> io::Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(|cell| cell.display.as_str()))?;
    }
    writer.flush()
}

/// JSON form: column order, raw rows, display rows mirroring the CSV, and
/// the table's warnings. Key order is fixed, so parse → re-emit is
/// byte-stable.
pub fn json_value(table: &Table) -> serde_json::Value {
    let columns: Vec<serde_json::Value> =
        table.columns.iter().map(|c| c.as_str().into()).collect();
    let mut rows = Vec::with_capacity(table.rows.len());
    let mut display = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let mut raw = serde_json::Map::new();
        let mut shown = serde_json::Map::new();
        for (column, cell) in table.columns.iter().zip(row) {
            raw.insert(column.clone(), cell.raw.to_json());
            shown.insert(column.clone(), cell.display.as_str().into());
        }
        rows.push(serde_json::Value::Object(raw));
        display.push(serde_json::Value::Object(shown));
    }
    let mut root = serde_json::Map::new();
    root.insert("columns".into(), columns.into());
    root.insert("rows".into(), rows.into());
    root.insert("display".into(), display.into());
    root.insert(
        "warnings".into(),
        table
            .warnings
            .iter()
            .map(|w| serde_json::Value::from(w.as_str()))
            .collect::<Vec<_>>()
            .into(),
    );
    serde_json::Value::Object(root)
}

pub fn write_json(table: &Table, path: &Path) -> io::Result<()> {
    let text = serde_json::to_string_pretty(&json_value(table))
        .map_err(io::Error::other)?;
    fs::write(path, text + "\n")
}

/// Writes `<dir>/<stem>.csv` / `<dir>/<stem>.json` per the format set and
/// returns the paths written.
pub fn write_table(
    table: &Table,
    dir: &Path,
    stem: &str,
    formats: &std::collections::BTreeSet<Format>,
) -> io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for format in formats {
        let path = dir.join(format!("{stem}.{}", format.key()));
        match format {
            Format::Csv => write_csv(table, &path)?,
            Format::Json => write_json(table, &path)?,
        }
        written.push(path);
    }
    Ok(written)
}

/// Latest kept observation per (country, indicator), codebook order then
/// iso3.
pub fn baseline_table(baseline: &Baseline, registry: &IndicatorRegistry) -> Table {
    let mut table = Table::new(["iso3", "indicator_id", "year", "value"]);
    for meta in registry.iter() {
        let Some(cells) = baseline.indicator(&meta.id) else {
            continue;
        };
        for (iso3, cell) in cells {
            table.push(vec![
                Cell::text(iso3.clone()),
                Cell::text(meta.id.clone()),
                Cell::int(cell.year.into()),
                Cell::num(cell.value),
            ]);
        }
    }
    table
}

/// Pairs whose latest observation predates the recency floor.
pub fn baseline_dropped_table(baseline: &Baseline, registry: &IndicatorRegistry) -> Table {
    let position: BTreeMap<&str, usize> = registry
        .iter()
        .enumerate()
        .map(|(i, meta)| (meta.id.as_str(), i))
        .collect();
    let mut dropped: Vec<&DroppedCell> = baseline.dropped.iter().collect();
    dropped.sort_by(|a, b| {
        (position[a.indicator.as_str()], &a.iso3).cmp(&(position[b.indicator.as_str()], &b.iso3))
    });
    let mut table = Table::new(["iso3", "indicator_id", "year"]);
    for cell in dropped {
        table.push(vec![
            Cell::text(cell.iso3.clone()),
            Cell::text(cell.indicator.clone()),
            Cell::int(cell.latest_year.into()),
        ]);
    }
    table
}

/// Share of baseline cells per year band; header-only when the baseline has
/// no cells (the fractions would be 0/0).
pub fn vintage_table(baseline: &Baseline) -> Table {
    let mut table = Table::new(["band_start", "band_end", "count", "fraction"]);
    if baseline.is_empty() {
        return table;
    }
    for band in &baseline.vintage.bands {
        table.push(vec![
            Cell::int(band.start.into()),
            Cell::int(band.end.into()),
            Cell::int(band.count as i64),
            Cell::fixed(band.fraction, 4),
        ]);
    }
    table
}

/// Observation counts per (country, indicator) within the coverage window.
pub fn coverage_table(coverage: &CoverageMatrix, registry: &IndicatorRegistry) -> Table {
    let per_indicator: BTreeMap<&String, &BTreeMap<String, usize>> = coverage.iter().collect();
    let mut table = Table::new(["iso3", "indicator_id", "count"]);
    for meta in registry.iter() {
        let Some(counts) = per_indicator.get(&meta.id) else {
            continue;
        };
        for (iso3, count) in *counts {
            table.push(vec![
                Cell::text(iso3.clone()),
                Cell::text(meta.id.clone()),
                Cell::int(*count as i64),
            ]);
        }
    }
    table
}

/// Global weighted statistics and unweighted quantiles per indicator.
pub fn summary_table(means: &GroupMeansTable) -> Table {
    let mut table = Table::new([
        "indicator_id",
        "n_values",
        "n_weighted",
        "weighted_mean",
        "weighted_sd",
        "min",
        "p25",
        "median",
        "p75",
        "max",
    ]);
    for row in &means.rows {
        table.push(vec![
            Cell::text(row.indicator.clone()),
            Cell::int(row.n_values as i64),
            Cell::int(row.n_weighted as i64),
            Cell::fixed(row.global_mean, 1),
            Cell::opt_fixed(row.global_sd, 1),
            Cell::fixed(row.minimum, 1),
            Cell::fixed(row.p25, 1),
            Cell::fixed(row.median, 1),
            Cell::fixed(row.p75, 1),
            Cell::fixed(row.maximum, 1),
        ]);
    }
    table
}

/// Weighted means per grouping cell; one column per cell, blank where the
/// cell has no data.
pub fn means_table(means: &GroupMeansTable) -> Table {
    let mut columns = vec!["indicator_id".to_string(), "n".into(), "global_mean".into()];
    columns.extend(means.grouping.cells().iter().map(|c| c.to_string()));
    let mut table = Table::new(columns);
    for row in &means.rows {
        let mut cells = vec![
            Cell::text(row.indicator.clone()),
            Cell::int(row.n_values as i64),
            Cell::fixed(row.global_mean, 1),
        ];
        cells.extend(row.cells.iter().map(|c| Cell::opt_fixed(c.mean, 1)));
        table.push(cells);
    }
    table
}

/// Percent deviations with significance stars and the joint F test. Empty
/// cells render blank; an F test that could not run renders '--' in both F
/// columns.
pub fn deviations_table(deviations: &DeviationTable) -> Table {
    let mut columns = vec![
        "indicator_id".to_string(),
        "direction".into(),
        "global_mean".into(),
        "small_denominator".into(),
    ];
    for cell in deviations.grouping.cells() {
        columns.push(cell.to_string());
        columns.push(format!("{cell}_stars"));
    }
    columns.push("f_stat".into());
    columns.push("f_p".into());
    let mut table = Table::new(columns);
    for row in &deviations.rows {
        let mut cells = vec![
            Cell::text(row.indicator.clone()),
            Cell::text(row.direction.label()),
            Cell::fixed(row.global_mean, 1),
            Cell::boolean(row.small_denominator),
        ];
        for cell in &row.cells {
            cells.push(Cell::opt_fixed(cell.percent, 1));
            cells.push(if cell.percent.is_some() {
                Cell::text(cell.stars)
            } else {
                Cell::blank()
            });
        }
        match row.f_test {
            FTestResult::Computed { statistic, p_value, .. } => {
                cells.push(Cell::fixed(statistic, 4));
                cells.push(Cell::fixed(p_value, 4));
            }
            FTestResult::Insufficient => {
                cells.push(Cell::dashes());
                cells.push(Cell::dashes());
            }
        }
        table.push(cells);
    }
    table
}

/// Normalized distances in [-1, 1] per grouping cell.
pub fn distances_table(distances: &NormalizedDistanceTable) -> Table {
    let mut columns = vec!["indicator_id".to_string()];
    columns.extend(distances.grouping.cells().iter().map(|c| c.to_string()));
    let mut table = Table::new(columns);
    table.warnings = distances.warnings.clone();
    for row in &distances.rows {
        let mut cells = vec![Cell::text(row.indicator.clone())];
        cells.extend(row.cells.iter().map(|v| Cell::opt_fixed(*v, 4)));
        table.push(cells);
    }
    table
}

/// Country points of the GDP-relation plots. Carries the dataset warnings;
/// the curves table shares them and stays silent.
pub fn gdp_points_table(dataset: &GdpRelationDataset) -> Table {
    let mut table = Table::new(["indicator_id", "iso3", "gdp_per_capita", "value", "display"]);
    table.warnings = dataset.warnings.clone();
    for row in &dataset.rows {
        for point in &row.points {
            table.push(vec![
                Cell::text(row.indicator.clone()),
                Cell::text(point.iso3.clone()),
                Cell::num(point.gdp),
                Cell::fixed(point.value, 4),
                Cell::boolean(point.display),
            ]);
        }
    }
    table
}

/// Fitted local-regression curves, one block per (indicator, region).
pub fn gdp_curves_table(dataset: &GdpRelationDataset) -> Table {
    let mut table = Table::new(["indicator_id", "region", "gdp_per_capita", "fitted"]);
    for row in &dataset.rows {
        for curve in &row.curves {
            for &(gdp, fitted) in &curve.points {
                table.push(vec![
                    Cell::text(row.indicator.clone()),
                    Cell::text(curve.region),
                    Cell::num(gdp),
                    Cell::fixed(fitted, 4),
                ]);
            }
        }
    }
    table
}

/// Resilience snapshot: five rows per qualifying country, field order
/// fixed.
pub fn resilience_table(snapshot: &ResilienceSnapshot) -> Table {
    let mut table = resilience_header();
    table.warnings = snapshot.warnings.clone();
    for country in &snapshot.countries {
        for field in &country.fields {
            table.push(vec![
                Cell::text(country.iso3.clone()),
                Cell::text(field.field),
                Cell::text(field.indicator.clone()),
                Cell::num(field.value),
                Cell::fixed(field.size, 4),
                Cell::fixed(field.color, 4),
            ]);
        }
    }
    table
}

/// Header-only resilience table, for runs where the snapshot is skipped or
/// its subset is empty.
pub fn resilience_header() -> Table {
    Table::new(["iso3", "field", "indicator_id", "value", "size", "color"])
}

/// Names the emitted file stems for one grouping, e.g. `means_region`.
pub fn grouped_stem(base: &str, grouping: Grouping) -> String {
    format!("{base}_{}", grouping.key())
}

/// Run manifest: input hashes, effective settings, engine version, start
/// time. The start time is informational and excluded from any determinism
/// comparison (override it via `SOURCE_DATE_EPOCH` when byte-stable bundles
/// matter).
pub fn manifest_value(
    inputs: &BTreeMap<String, String>,
    settings: serde_json::Value,
    started_at: &str,
) -> serde_json::Value {
    let mut input_map = serde_json::Map::new();
    for (path, digest) in inputs {
        input_map.insert(path.clone(), digest.as_str().into());
    }
    let mut root = serde_json::Map::new();
    root.insert("inputs".into(), serde_json::Value::Object(input_map));
    root.insert("settings".into(), settings);
    root.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    root.insert("started_at".into(), started_at.into());
    serde_json::Value::Object(root)
}

pub fn write_manifest(value: &serde_json::Value, path: &Path) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    fs::write(path, text + "\n")
}
