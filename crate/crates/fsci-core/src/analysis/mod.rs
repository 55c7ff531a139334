//! Descriptive analysis over a baseline: weighted group means with global
//! summaries, percent deviations from the global mean with robust inference,
//! and normalized distance tables. Submodules add the GDP-relation dataset
//! and the resilience snapshot.
//!
//! Tables iterate indicators in codebook order and countries in sorted iso3
//! order; cells follow the grouping's presentation order. Countries without
//! a resolvable weight are excluded pairwise from weighted statistics and
//! from the regressions, but still contribute to unweighted quantiles.

mod gdp;
mod resilience;

pub use gdp::{gdp_relation_dataset, GdpPoint, GdpRelationDataset, IndicatorGdpRelation,
    RegionCurve, GDP_DISPLAY_CAP};
pub use resilience::{
    resilience_snapshot, CountrySnapshot, FieldSnapshot, ResilienceSnapshot, ResilienceSpec,
    RESILIENCE_FIELDS,
};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::baseline::Baseline;
use crate::kernels::{
    cluster_robust_f, quantiles, weighted_mean, weighted_sd, wls_group_fit, FTestResult,
    KernelError,
};
use crate::model::{
    resolve_weight, CountryTable, Direction, Grouping, IndicatorMeta, IndicatorRegistry,
    ModelError, Panel,
};

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    Kernel(KernelError),
    Model(ModelError),
    /// Percent deviations are undefined against a zero global mean.
    ZeroGlobalMean,
    /// No country qualifies for the resilience subset.
    EmptySubset,
    /// Window start is after its end.
    InvalidWindow { start: i32, end: i32 },
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::Kernel(e) => write!(f, "{e}"),
            AnalysisError::Model(e) => write!(f, "{e}"),
            AnalysisError::ZeroGlobalMean => {
                write!(f, "global weighted mean is zero; percent deviation undefined")
            }
            AnalysisError::EmptySubset => write!(f, "no country qualifies for the subset"),
            AnalysisError::InvalidWindow { start, end } => {
                write!(f, "invalid window [{start}, {end}]")
            }
        }
    }
}

impl core::error::Error for AnalysisError {}

impl From<KernelError> for AnalysisError {
    fn from(e: KernelError) -> Self {
        AnalysisError::Kernel(e)
    }
}

impl From<ModelError> for AnalysisError {
    fn from(e: ModelError) -> Self {
        AnalysisError::Model(e)
    }
}

/// Per-indicator observation set, assembled once and shared by the means
/// and deviation paths so both see identical inputs in identical order.
struct IndicatorPairs {
    /// Countries with a baseline value and a resolved weight, iso3-sorted.
    iso3: Vec<String>,
    values: Vec<f64>,
    weights: Vec<f64>,
    /// Grouping cell per weighted country.
    cells: Vec<&'static str>,
    /// Values of every country with a baseline cell (weights or not).
    all_values: Vec<f64>,
}

/// Collects the indicator's baseline countries with weights resolved at each
/// country's own baseline year. Returns `None` when the indicator has no
/// baseline cells at all.
fn collect_pairs(
    meta: &IndicatorMeta,
    baseline: &Baseline,
    panel: &Panel,
    countries: &CountryTable,
    grouping: Grouping,
) -> Result<Option<IndicatorPairs>, AnalysisError> {
    let Some(cells) = baseline.indicator(&meta.id) else {
        return Ok(None);
    };
    let mut pairs = IndicatorPairs {
        iso3: Vec::new(),
        values: Vec::new(),
        weights: Vec::new(),
        cells: Vec::new(),
        all_values: Vec::with_capacity(cells.len()),
    };
    for (iso3, cell) in cells {
        pairs.all_values.push(cell.value);
        let Some(weight) = resolve_weight(meta.weight_key, panel, iso3, cell.year)? else {
            continue;
        };
        let country = countries
            .get(iso3)
            .ok_or_else(|| ModelError::UnknownCountry(iso3.clone()))?;
        pairs.iso3.push(iso3.clone());
        pairs.values.push(cell.value);
        pairs.weights.push(weight);
        pairs.cells.push(grouping.cell_of(country));
    }
    Ok(Some(pairs))
}

/// Weighted mean and count for one grouping cell; `mean` is `None` when the
/// cell has no weighted observations.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMean {
    pub cell: &'static str,
    pub mean: Option<f64>,
    pub n: usize,
}

/// One indicator's summary row: weighted global statistics, unweighted
/// quantiles over every country with a value, and per-cell weighted means.
#[derive(Debug, Clone)]
pub struct IndicatorGroupMeans {
    pub indicator: String,
    /// Countries contributing to the weighted statistics.
    pub n_weighted: usize,
    /// Countries with a baseline value (the quantile population).
    pub n_values: usize,
    pub global_mean: f64,
    /// `None` with fewer than two weighted observations.
    pub global_sd: Option<f64>,
    pub minimum: f64,
    pub p25: f64,
    pub median: f64,
    pub p75: f64,
    pub maximum: f64,
    pub cells: Vec<CellMean>,
}

#[derive(Debug, Clone)]
pub struct GroupMeansTable {
    pub grouping: Grouping,
    pub rows: Vec<IndicatorGroupMeans>,
}

/// Computes one indicator's group-means row. `Ok(None)` when the indicator
/// has no baseline data (the row is omitted from the table).
pub fn indicator_group_means(
    meta: &IndicatorMeta,
    baseline: &Baseline,
    panel: &Panel,
    countries: &CountryTable,
    grouping: Grouping,
) -> Result<Option<IndicatorGroupMeans>, AnalysisError> {
    let Some(pairs) = collect_pairs(meta, baseline, panel, countries, grouping)? else {
        return Ok(None);
    };
    let global_mean = weighted_mean(&pairs.values, &pairs.weights)?;
    let global_sd = if pairs.values.len() >= 2 {
        Some(weighted_sd(&pairs.values, &pairs.weights)?)
    } else {
        None
    };
    let q = quantiles(&pairs.all_values, &[0.0, 0.25, 0.5, 0.75, 1.0])?;

    let mut cells = Vec::new();
    for cell in grouping.cells() {
        let values: Vec<f64> = pairs
            .values
            .iter()
            .zip(&pairs.cells)
            .filter(|(_, &c)| c == cell)
            .map(|(&v, _)| v)
            .collect();
        let weights: Vec<f64> = pairs
            .weights
            .iter()
            .zip(&pairs.cells)
            .filter(|(_, &c)| c == cell)
            .map(|(&w, _)| w)
            .collect();
        let mean = if values.is_empty() {
            None
        } else {
            Some(weighted_mean(&values, &weights)?)
        };
        cells.push(CellMean {
            cell,
            mean,
            n: values.len(),
        });
    }

    Ok(Some(IndicatorGroupMeans {
        indicator: meta.id.clone(),
        n_weighted: pairs.values.len(),
        n_values: pairs.all_values.len(),
        global_mean,
        global_sd,
        minimum: q[0],
        p25: q[1],
        median: q[2],
        p75: q[3],
        maximum: q[4],
        cells,
    }))
}

/// Builds the full group-means table in codebook order. Indicators without
/// baseline data are omitted.
pub fn group_weighted_means(
    baseline: &Baseline,
    panel: &Panel,
    registry: &IndicatorRegistry,
    countries: &CountryTable,
    grouping: Grouping,
) -> Result<GroupMeansTable, AnalysisError> {
    let mut rows = Vec::new();
    for meta in registry.iter() {
        if let Some(row) = indicator_group_means(meta, baseline, panel, countries, grouping)? {
            rows.push(row);
        }
    }
    Ok(GroupMeansTable { grouping, rows })
}

/// Percent deviation of a cell mean from the global mean, aligned with the
/// indicator's desirable direction: positive is better. The denominator is
/// the signed global mean, which must be nonzero.
pub fn percent_deviation(
    cell_mean: f64,
    global_mean: f64,
    direction: Direction,
) -> Result<f64, AnalysisError> {
    if global_mean == 0.0 {
        return Err(AnalysisError::ZeroGlobalMean);
    }
    Ok(direction.sign() * (cell_mean - global_mean) / global_mean * 100.0)
}

/// One cell of the deviation table; blank (`None` fields, n = 0) when the
/// cell has no weighted observations.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationCell {
    pub cell: &'static str,
    pub n: usize,
    pub percent: Option<f64>,
    pub se: Option<f64>,
    pub p_value: Option<f64>,
    pub stars: &'static str,
}

#[derive(Debug, Clone)]
pub struct DeviationRow {
    pub indicator: String,
    pub direction: Direction,
    pub global_mean: f64,
    /// Set when |global mean| is below one display unit; percent deviations
    /// on such a thin denominator are numerically unstable.
    pub small_denominator: bool,
    pub cells: Vec<DeviationCell>,
    pub f_test: FTestResult,
}

#[derive(Debug, Clone)]
pub struct DeviationTable {
    pub grouping: Grouping,
    pub rows: Vec<DeviationRow>,
}

/// Computes one indicator's deviation row by regressing the direction-
/// aligned, demeaned response on the full set of cell dummies by WLS.
///
/// The percent deviation for a cell is the regression coefficient divided by
/// the signed global mean (times 100); standard errors are HC1, scaled the
/// same way; the joint F test clusters on the cells themselves. `Ok(None)`
/// when the indicator has no baseline data.
pub fn indicator_deviations(
    meta: &IndicatorMeta,
    baseline: &Baseline,
    panel: &Panel,
    countries: &CountryTable,
    grouping: Grouping,
) -> Result<Option<DeviationRow>, AnalysisError> {
    let Some(pairs) = collect_pairs(meta, baseline, panel, countries, grouping)? else {
        return Ok(None);
    };
    let global_mean = weighted_mean(&pairs.values, &pairs.weights)?;
    if global_mean == 0.0 {
        return Err(AnalysisError::ZeroGlobalMean);
    }
    let sign = meta.direction.sign();
    let response: Vec<f64> = pairs.values.iter().map(|v| sign * (v - global_mean)).collect();

    // Map occupied cells to dense group indices in presentation order.
    let scheme = grouping.cells();
    let occupied: Vec<&'static str> = scheme
        .iter()
        .copied()
        .filter(|cell| pairs.cells.contains(cell))
        .collect();
    let group_idx: Vec<usize> = pairs
        .cells
        .iter()
        .map(|c| occupied.iter().position(|o| o == c).expect("occupied cell"))
        .collect();

    let fit = wls_group_fit(&response, &group_idx, occupied.len(), &pairs.weights)?;
    let f_test = cluster_robust_f(&response, &group_idx, occupied.len(), &pairs.weights)?;

    let pct_scale = 100.0 / global_mean;
    let se_scale = 100.0 / global_mean.abs();
    let mut cells = Vec::new();
    for cell in scheme {
        match occupied.iter().position(|o| *o == cell) {
            Some(g) => cells.push(DeviationCell {
                cell,
                n: fit.group_n[g],
                percent: Some(fit.coefficients[g] * pct_scale),
                se: Some(fit.std_errors[g] * se_scale),
                p_value: Some(fit.p_values[g]),
                stars: fit.stars[g],
            }),
            None => cells.push(DeviationCell {
                cell,
                n: 0,
                percent: None,
                se: None,
                p_value: None,
                stars: "",
            }),
        }
    }

    Ok(Some(DeviationRow {
        indicator: meta.id.clone(),
        direction: meta.direction,
        global_mean,
        small_denominator: global_mean.abs() < 1.0,
        cells,
        f_test,
    }))
}

/// Builds the percent-deviation table in codebook order.
pub fn deviation_table(
    baseline: &Baseline,
    panel: &Panel,
    registry: &IndicatorRegistry,
    countries: &CountryTable,
    grouping: Grouping,
) -> Result<DeviationTable, AnalysisError> {
    let mut rows = Vec::new();
    for meta in registry.iter() {
        if let Some(row) = indicator_deviations(meta, baseline, panel, countries, grouping)? {
            rows.push(row);
        }
    }
    Ok(DeviationTable { grouping, rows })
}

/// One indicator's normalized distances: cell deviations from the global
/// mean scaled by the spread of the cell means, direction-aligned so
/// positive is better. Blank cells mirror the means table; a row whose cell
/// means have zero spread is emitted with every cell blank.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceRow {
    pub indicator: String,
    pub cells: Vec<Option<f64>>,
    /// False when the spread of cell means was zero (nothing computed).
    pub computed: bool,
}

#[derive(Debug, Clone)]
pub struct NormalizedDistanceTable {
    pub grouping: Grouping,
    pub rows: Vec<DistanceRow>,
    pub warnings: Vec<String>,
}

/// Scales each cell mean's deviation from the global mean by the range of
/// the cell means: `sign * (cell - global) / (max - min)`. With the global
/// mean inside the cell-mean range every value lands in [-1, 1] and the
/// global mean itself renders at zero.
pub fn normalized_distance_table(
    means: &GroupMeansTable,
    registry: &IndicatorRegistry,
) -> Result<NormalizedDistanceTable, AnalysisError> {
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for row in &means.rows {
        let meta = registry
            .get(&row.indicator)
            .ok_or_else(|| ModelError::UnknownIndicator(row.indicator.clone()))?;
        let present: Vec<f64> = row.cells.iter().filter_map(|c| c.mean).collect();
        let lo = present.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = present.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let range = hi - lo;
        if present.len() < 2 || !(range > 0.0) {
            warnings.push(alloc::format!(
                "{}: cell means have no spread; distances left blank",
                row.indicator
            ));
            rows.push(DistanceRow {
                indicator: row.indicator.clone(),
                cells: row.cells.iter().map(|_| None).collect(),
                computed: false,
            });
            continue;
        }
        let sign = meta.direction.sign();
        let cells = row
            .cells
            .iter()
            .map(|c| c.mean.map(|m| sign * (m - row.global_mean) / range))
            .collect();
        rows.push(DistanceRow {
            indicator: row.indicator.clone(),
            cells,
            computed: true,
        });
    }
    Ok(NormalizedDistanceTable {
        grouping: means.grouping,
        rows,
        warnings,
    })
}
