//! Indicator-against-GDP dataset: per-country normalized values and smoothed
//! per-region curves, mirroring the chart that plots every indicator against
//! GDP per capita.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{collect_pairs, AnalysisError};
use crate::baseline::Baseline;
use crate::kernels::{loess, min_max_normalize, weighted_mean, KernelError};
use crate::model::{CountryTable, Grouping, IndicatorRegistry, ModelError, Panel};

/// Countries above this GDP per capita keep their statistics but are marked
/// not-for-display in charts.
pub const GDP_DISPLAY_CAP: f64 = 100_000.0;

/// One plotted country.
#[derive(Debug, Clone, PartialEq)]
pub struct GdpPoint {
    pub iso3: String,
    pub gdp: f64,
    /// Indicator value normalized by min-max over the plotted countries,
    /// centered on the global weighted mean.
    pub value: f64,
    /// False above [`GDP_DISPLAY_CAP`].
    pub display: bool,
}

/// Smoothed curve for one region, fitted at the region's own GDP values.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionCurve {
    pub region: &'static str,
    /// `(gdp, fitted)` pairs in ascending GDP order.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct IndicatorGdpRelation {
    pub indicator: String,
    pub points: Vec<GdpPoint>,
    pub curves: Vec<RegionCurve>,
}

#[derive(Debug, Clone)]
pub struct GdpRelationDataset {
    pub rows: Vec<IndicatorGdpRelation>,
    pub warnings: Vec<String>,
}

/// Builds the GDP-relation dataset.
///
/// Per indicator (codebook order): countries with both a baseline value and
/// a GDP value are normalized by min-max over exactly those countries,
/// centered on the indicator's global weighted mean (so the global mean
/// plots at zero); each region with at least three such countries gets a
/// local-regression curve over (GDP, normalized value) using `span` and
/// `degree`. Constant indicators cannot be normalized and are skipped with a
/// warning, as are indicators with no plottable countries. High-GDP
/// countries stay in the curves but carry `display = false`.
pub fn gdp_relation_dataset(
    baseline: &Baseline,
    gdp: &BTreeMap<String, f64>,
    registry: &IndicatorRegistry,
    countries: &CountryTable,
    panel: &Panel,
    span: f64,
    degree: usize,
) -> Result<GdpRelationDataset, AnalysisError> {
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for meta in registry.iter() {
        let Some(pairs) = collect_pairs(meta, baseline, panel, countries, Grouping::Region)?
        else {
            continue;
        };
        let global_mean = weighted_mean(&pairs.values, &pairs.weights)?;

        let cells = baseline.indicator(&meta.id).expect("pairs imply cells");
        let mut iso3s = Vec::new();
        let mut values = Vec::new();
        let mut gdps = Vec::new();
        for (iso3, cell) in cells {
            let Some(&g) = gdp.get(iso3) else { continue };
            iso3s.push(iso3.clone());
            values.push(cell.value);
            gdps.push(g);
        }
        if iso3s.is_empty() {
            warnings.push(alloc::format!(
                "{}: no country has both a value and GDP per capita; skipped",
                meta.id
            ));
            continue;
        }
        let normalized = match min_max_normalize(&values, global_mean) {
            Ok(n) => n,
            Err(KernelError::ZeroRange) => {
                warnings.push(alloc::format!(
                    "{}: constant across countries; cannot normalize, skipped",
                    meta.id
                ));
                continue;
            }
            Err(e) => return Err(e.into()),
        };

        let points: Vec<GdpPoint> = iso3s
            .iter()
            .zip(&gdps)
            .zip(&normalized)
            .map(|((iso3, &g), &v)| GdpPoint {
                iso3: iso3.clone(),
                gdp: g,
                value: v,
                display: g <= GDP_DISPLAY_CAP,
            })
            .collect();

        let mut curves = Vec::new();
        for region in Grouping::Region.cells() {
            // Points of this region, in the (iso3-sorted) point order.
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut order_keys = Vec::new();
            for point in &points {
                let country = countries
                    .get(&point.iso3)
                    .ok_or_else(|| ModelError::UnknownCountry(point.iso3.clone()))?;
                if country.region.label() == region {
                    xs.push(point.gdp);
                    ys.push(point.value);
                    order_keys.push(point.iso3.clone());
                }
            }
            if xs.len() < 3 {
                continue;
            }
            let fit = loess(&xs, &ys, span, degree)?;
            let mut curve: Vec<(f64, f64, String)> = xs
                .into_iter()
                .zip(fit.fitted)
                .zip(order_keys)
                .map(|((x, y), k)| (x, y, k))
                .collect();
            curve.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
            curves.push(RegionCurve {
                region,
                points: curve.into_iter().map(|(x, y, _)| (x, y)).collect(),
            });
        }

        rows.push(IndicatorGdpRelation {
            indicator: meta.id.clone(),
            points,
            curves,
        });
    }
    Ok(GdpRelationDataset { rows, warnings })
}
