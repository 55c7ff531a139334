//! CSV loaders for the three input files, with row-level validation.
//!
//! The codebook and country table are strict: the first bad row fails the
//! load with its row number. The observation file is lenient: bad rows are
//! collected into a [`ValidationReport`] and the rest of the panel loads, so
//! one report shows everything wrong with an upstream extract.
//!
//! Row numbers in errors count data rows from 1 (the header is row 0).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io;

use fsci_core::{CountryMeta, CountryTable, IndicatorMeta, IndicatorRegistry, Observation, Panel};

pub const CODEBOOK_HEADER: &str = "indicator_id,name,unit,theme,domain,direction,weight_key,value_added";
pub const COUNTRIES_HEADER: &str = "iso3,name,region,income_group,un_member";
pub const OBSERVATIONS_HEADER: &str = "iso3,indicator_id,year,value";

/// Fraction of registry indicators a non-member territory must cover to be
/// retained (inclusive), as a ratio so the comparison stays exact.
pub const TERRITORY_COVERAGE: (usize, usize) = (4, 5);

const MIN_PANEL_YEAR: i32 = 1960;

#[derive(Debug)]
pub enum IngestError {
    Csv(csv::Error),
    Header {
        expected: &'static str,
        found: String,
    },
    /// Hard per-row failure in a strict loader (codebook, countries).
    Row {
        row: usize,
        message: String,
    },
}

impl fmt::Display for IngestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IngestError::Csv(e) => write!(f, "{e}"),
            IngestError::Header { expected, found } => {
                write!(f, "bad header: expected `{expected}`, found `{found}`")
            }
            IngestError::Row { row, message } => write!(f, "row {row}: {message}"),
        }
    }
}

impl std::error::Error for IngestError {}

impl From<csv::Error> for IngestError {
    fn from(e: csv::Error) -> Self {
        IngestError::Csv(e)
    }
}

/// One recorded problem with one input row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowIssue {
    pub row: usize,
    pub rule: &'static str,
    pub message: String,
}

/// Outcome of a lenient load. `errors` empty means the load succeeded;
/// warnings alone never fail a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<RowIssue>,
    pub warnings: Vec<RowIssue>,
    pub rows_accepted: usize,
    pub rows_rejected: usize,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

fn check_header<R: io::Read>(
    reader: &mut csv::Reader<R>,
    expected: &'static str,
) -> Result<(), IngestError> {
    let found = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if found != expected {
        return Err(IngestError::Header { expected, found });
    }
    Ok(())
}

fn strict_reader<R: io::Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(source)
}

/// Loads the indicator codebook. Every row must parse; errors carry the
/// offending data row number.
pub fn load_codebook<R: io::Read>(source: R) -> Result<IndicatorRegistry, IngestError> {
    let mut reader = strict_reader(source);
    check_header(&mut reader, CODEBOOK_HEADER)?;
    let mut registry = IndicatorRegistry::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("").to_string();
        let fail = |message: String| IngestError::Row { row, message };
        let meta = IndicatorMeta {
            id: field(0),
            name: field(1),
            unit: field(2),
            theme: field(3).parse().map_err(|e| fail(format!("{e}")))?,
            domain: field(4),
            direction: field(5).parse().map_err(|e| fail(format!("{e}")))?,
            weight_key: field(6).parse().map_err(|e| fail(format!("{e}")))?,
            value_added: parse_bool(&field(7)).map_err(fail)?,
        };
        registry.insert(meta).map_err(|e| fail(format!("{e}")))?;
    }
    Ok(registry)
}

/// Loads the country table (UN member states plus candidate territories).
pub fn load_countries<R: io::Read>(source: R) -> Result<CountryTable, IngestError> {
    let mut reader = strict_reader(source);
    check_header(&mut reader, COUNTRIES_HEADER)?;
    let mut table = CountryTable::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("").to_string();
        let fail = |message: String| IngestError::Row { row, message };
        let meta = CountryMeta {
            iso3: field(0),
            name: field(1),
            region: field(2).parse().map_err(|e| fail(format!("{e}")))?,
            income_group: field(3).parse().map_err(|e| fail(format!("{e}")))?,
            un_member: parse_bool(&field(4)).map_err(fail)?,
        };
        table.insert(meta).map_err(|e| fail(format!("{e}")))?;
    }
    Ok(table)
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("expected `true` or `false`, got `{other}`")),
    }
}

/// Which non-member territories have data for at least
/// [`TERRITORY_COVERAGE`] of the registry's indicator ids. `observed` maps
/// each candidate territory to the distinct registry indicators it has rows
/// for. An empty registry retains nothing.
pub fn territory_filter(
    observed: &BTreeMap<String, BTreeSet<String>>,
    registry: &IndicatorRegistry,
) -> BTreeSet<String> {
    let total = registry.len();
    if total == 0 {
        return BTreeSet::new();
    }
    let (num, den) = TERRITORY_COVERAGE;
    observed
        .iter()
        .filter(|(_, ids)| ids.len() * den >= total * num)
        .map(|(iso3, _)| iso3.clone())
        .collect()
}

/// Parsed observation row held until the territory pass decides its fate.
struct PendingRow {
    row: usize,
    iso3: String,
    indicator: String,
    year: i32,
    value: f64,
    /// Binary-unit indicator with a value outside {0, 1}.
    binary_mismatch: bool,
    /// Row belongs to a non-member territory (subject to the coverage rule).
    territory: bool,
}

/// Loads the long-format observation file.
///
/// Row rules: years before 1960 are rejected with a warning; unparseable or
/// non-finite values, unknown indicators, unknown countries, and duplicate
/// (country, indicator, year) cells are errors; rows of non-member
/// territories failing the coverage rule are rejected with warnings. Series
/// whose indicator id starts with `_` are auxiliary (weights, GDP per
/// capita) and skip the registry and country checks. A binary-unit
/// indicator with a value outside {0, 1} is accepted with a warning.
pub fn load_panel<R: io::Read>(
    source: R,
    registry: &IndicatorRegistry,
    countries: &CountryTable,
) -> Result<(Panel, ValidationReport), IngestError> {
    let mut reader = strict_reader(source);
    check_header(&mut reader, OBSERVATIONS_HEADER)?;

    let mut report = ValidationReport::default();
    let mut pending: Vec<PendingRow> = Vec::new();
    let mut territory_ids: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();

    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record?;
        let iso3 = record.get(0).unwrap_or("").to_string();
        let indicator = record.get(1).unwrap_or("").to_string();
        let year_text = record.get(2).unwrap_or("");
        let value_text = record.get(3).unwrap_or("");

        let reject = |report: &mut ValidationReport, rule, message, is_error| {
            report.rows_rejected += 1;
            let issue = RowIssue { row, rule, message };
            if is_error {
                report.errors.push(issue);
            } else {
                report.warnings.push(issue);
            }
        };

        let Ok(year) = year_text.parse::<i32>() else {
            reject(
                &mut report,
                "unparseable-value",
                format!("year `{year_text}` is not an integer"),
                true,
            );
            continue;
        };
        let value = match value_text.parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => {
                reject(
                    &mut report,
                    "unparseable-value",
                    format!("value `{value_text}` is not a finite number"),
                    true,
                );
                continue;
            }
        };
        if year < MIN_PANEL_YEAR {
            reject(
                &mut report,
                "pre-1960",
                format!("{iso3}/{indicator}: year {year} predates {MIN_PANEL_YEAR}"),
                false,
            );
            continue;
        }

        // Auxiliary series bypass registry and country checks entirely.
        let reserved = indicator.starts_with('_');
        let mut binary_mismatch = false;
        let mut territory = false;
        if !reserved {
            let Some(meta) = registry.get(&indicator) else {
                reject(
                    &mut report,
                    "unknown-indicator",
                    format!("`{indicator}` is not in the codebook"),
                    true,
                );
                continue;
            };
            let Some(country) = countries.get(&iso3) else {
                reject(
                    &mut report,
                    "unknown-country",
                    format!("`{iso3}` is not in the country table"),
                    true,
                );
                continue;
            };
            binary_mismatch = meta.unit == "binary" && value != 0.0 && value != 1.0;
            territory = !country.un_member;
            if territory {
                territory_ids
                    .entry(iso3.clone())
                    .or_default()
                    .insert(indicator.clone());
            }
        }
        pending.push(PendingRow {
            row,
            iso3,
            indicator,
            year,
            value,
            binary_mismatch,
            territory,
        });
    }

    let retained = territory_filter(&territory_ids, registry);

    let mut panel = Panel::new();
    for item in pending {
        if item.territory && !retained.contains(&item.iso3) {
            report.rows_rejected += 1;
            let observed = territory_ids[&item.iso3].len();
            report.warnings.push(RowIssue {
                row: item.row,
                rule: "territory-coverage",
                message: format!(
                    "{}: non-member territory with {observed} of {} indicators; dropped",
                    item.iso3,
                    registry.len()
                ),
            });
            continue;
        }
        match panel.insert(Observation {
            iso3: item.iso3,
            indicator: item.indicator,
            year: item.year,
            value: item.value,
        }) {
            Ok(()) => {
                report.rows_accepted += 1;
                if item.binary_mismatch {
                    report.warnings.push(RowIssue {
                        row: item.row,
                        rule: "binary-unit",
                        message: format!(
                            "value {} for a binary-unit indicator is outside {{0, 1}}",
                            item.value
                        ),
                    });
                }
            }
            Err(e) => {
                report.rows_rejected += 1;
                report.errors.push(RowIssue {
                    row: item.row,
                    rule: "duplicate-cell",
                    message: format!("{e}"),
                });
            }
        }
    }

    Ok((panel, report))
}
