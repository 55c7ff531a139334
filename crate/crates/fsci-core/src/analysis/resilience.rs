//! Resilience snapshot: a per-country view of climate exposure against four
//! coping-capacity fields, with visualization scalings (dot size on [0, 1],
//! diverging color on [-1, 1]) computed over the qualifying subset.

use alloc::string::String;
use alloc::vec::Vec;

use super::AnalysisError;
use crate::baseline::Baseline;
use crate::kernels::{top_k_mean, winsorize_upper_third};
use crate::model::{IndicatorRegistry, ModelError, Panel};

/// Field labels in presentation order.
pub const RESILIENCE_FIELDS: [&str; 5] = [
    "exposure",
    "social_capital",
    "dietary_sourcing_flexibility",
    "food_price_volatility",
    "food_supply_variability",
];

/// Indicator ids backing the snapshot's five fields, plus the exposure
/// window.
#[derive(Debug, Clone)]
pub struct ResilienceSpec {
    /// Annual climate-damage exposure series (read from the panel, not the
    /// baseline).
    pub exposure: String,
    pub social_capital: String,
    pub diet_flexibility: String,
    pub price_volatility: String,
    pub supply_variability: String,
    /// Inclusive years over which exposure is assessed.
    pub window: (i32, i32),
}

impl ResilienceSpec {
    fn capacity_ids(&self) -> [&String; 4] {
        [
            &self.social_capital,
            &self.diet_flexibility,
            &self.price_volatility,
            &self.supply_variability,
        ]
    }
}

/// One field of one country: the underlying value plus its visual scalings.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub field: &'static str,
    pub indicator: String,
    /// Exposure: winsorized top-3 mean of window years. Capacity fields:
    /// the baseline value.
    pub value: f64,
    /// Min-max over the subset, on [0, 1]; 0.5 for a degenerate field.
    pub size: f64,
    /// Direction-aligned deviation from the subset mean, min-max scaled to
    /// [-1, 1] (the subset mean itself does not map to zero); 0 for a
    /// degenerate field.
    pub color: f64,
}

#[derive(Debug, Clone)]
pub struct CountrySnapshot {
    pub iso3: String,
    /// Five fields in [`RESILIENCE_FIELDS`] order.
    pub fields: Vec<FieldSnapshot>,
}

#[derive(Debug, Clone)]
pub struct ResilienceSnapshot {
    pub window: (i32, i32),
    /// Qualifying countries in sorted iso3 order.
    pub countries: Vec<CountrySnapshot>,
    pub warnings: Vec<String>,
}

/// Builds the snapshot.
///
/// A country qualifies when it has at least seven exposure years inside the
/// window and baseline values for all four capacity fields. Exposure is the
/// mean of the three highest annual values in the window, winsorized across
/// the subset at the subset's third-highest exposure. Sizes and colors are
/// normalized over the subset per field; a field with no spread gets size
/// 0.5 and color 0 everywhere, with a warning.
pub fn resilience_snapshot(
    panel: &Panel,
    baseline: &Baseline,
    registry: &IndicatorRegistry,
    spec: &ResilienceSpec,
) -> Result<ResilienceSnapshot, AnalysisError> {
    let (start, end) = spec.window;
    if start > end {
        return Err(AnalysisError::InvalidWindow { start, end });
    }
    let field_ids = [
        &spec.exposure,
        &spec.social_capital,
        &spec.diet_flexibility,
        &spec.price_volatility,
        &spec.supply_variability,
    ];
    let mut signs = [0.0f64; 5];
    for (i, id) in field_ids.iter().enumerate() {
        let meta = registry
            .get(id)
            .ok_or_else(|| ModelError::UnknownIndicator((*id).clone()))?;
        signs[i] = meta.direction.sign();
    }

    // Qualifying subset, iso3-sorted by panel iteration order.
    let mut subset: Vec<String> = Vec::new();
    let mut exposures: Vec<f64> = Vec::new();
    if let Some(exposure_map) = panel.indicator(&spec.exposure) {
        'country: for (iso3, series) in exposure_map {
            let window_values: Vec<f64> = series.range(start..=end).map(|(_, &v)| v).collect();
            if window_values.len() < 7 {
                continue;
            }
            for id in spec.capacity_ids() {
                if baseline.get(id, iso3).is_none() {
                    continue 'country;
                }
            }
            subset.push(iso3.clone());
            exposures.push(top_k_mean(&window_values, 3)?);
        }
    }
    if subset.is_empty() {
        return Err(AnalysisError::EmptySubset);
    }
    let exposures = winsorize_upper_third(&exposures)?;

    // Per-field value vectors over the subset, field order fixed.
    let mut field_values: [Vec<f64>; 5] = Default::default();
    field_values[0] = exposures;
    for (slot, id) in field_ids.iter().enumerate().skip(1) {
        field_values[slot] = subset
            .iter()
            .map(|iso3| baseline.get(id, iso3).expect("qualified country").value)
            .collect();
    }

    let mut warnings = Vec::new();
    let mut scalings: Vec<(f64, f64, bool)> = Vec::new(); // (min, range, degenerate)
    for (slot, values) in field_values.iter().enumerate() {
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let range = hi - lo;
        let degenerate = !(range > 0.0);
        if degenerate {
            warnings.push(alloc::format!(
                "{}: no spread across the subset; size fixed at 0.5, color at 0",
                RESILIENCE_FIELDS[slot]
            ));
        }
        scalings.push((lo, range, degenerate));
    }

    let countries = subset
        .iter()
        .enumerate()
        .map(|(row, iso3)| {
            let fields = (0..5)
                .map(|slot| {
                    let value = field_values[slot][row];
                    let (lo, range, degenerate) = scalings[slot];
                    let (size, color) = if degenerate {
                        (0.5, 0.0)
                    } else {
                        let unit = (value - lo) / range;
                        (unit, signs[slot] * (2.0 * unit - 1.0))
                    };
                    FieldSnapshot {
                        field: RESILIENCE_FIELDS[slot],
                        indicator: field_ids[slot].clone(),
                        value,
                        size,
                        color,
                    }
                })
                .collect();
            CountrySnapshot {
                iso3: iso3.clone(),
                fields,
            }
        })
        .collect();

    Ok(ResilienceSnapshot {
        window: spec.window,
        countries,
        warnings,
    })
}
