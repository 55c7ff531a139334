//! Baseline construction: one cell per (country, indicator) holding the most
//! recent observation, with a recency floor, a vintage summary, and a
//! coverage matrix over a reporting window.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{IndicatorRegistry, Panel};

/// Bands the vintage summary reports over, newest first.
pub const VINTAGE_BANDS: [(i32, i32); 3] = [(2017, 2022), (2010, 2016), (2000, 2009)];

/// Most recent observation of one (country, indicator).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineCell {
    pub year: i32,
    pub value: f64,
}

/// A (country, indicator) pair excluded because its most recent observation
/// predates the baseline floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DroppedCell {
    pub iso3: String,
    pub indicator: String,
    pub latest_year: i32,
}

/// Share of kept cells per vintage band. Cells whose baseline year falls
/// outside every band (possible only with a non-default floor or
/// post-band years) are counted in none of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VintageBand {
    pub start: i32,
    pub end: i32,
    pub count: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VintageSummary {
    pub bands: [VintageBand; 3],
}

/// The baseline: indicator -> country -> most recent cell, plus the pairs
/// dropped by the recency floor and the vintage summary of kept cells.
#[derive(Debug, Clone)]
pub struct Baseline {
    cells: BTreeMap<String, BTreeMap<String, BaselineCell>>,
    pub dropped: Vec<DroppedCell>,
    pub vintage: VintageSummary,
    pub min_year: i32,
}

impl Baseline {
    /// Country cells of one indicator, keyed by iso3.
    pub fn indicator(&self, indicator: &str) -> Option<&BTreeMap<String, BaselineCell>> {
        self.cells.get(indicator)
    }

    pub fn get(&self, indicator: &str, iso3: &str) -> Option<&BaselineCell> {
        self.cells.get(indicator).and_then(|m| m.get(iso3))
    }

    /// Iterates indicators in sorted order with their country cells.
    pub fn iter(
        &self,
    ) -> impl Iterator<Item = (&String, &BTreeMap<String, BaselineCell>)> {
        self.cells.iter()
    }

    /// Number of kept cells.
    pub fn len(&self) -> usize {
        self.cells.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Builds the baseline from a panel: for every (country, indicator) with the
/// indicator in the registry, the most recent observation is kept unless its
/// year is below `min_year`, in which case the pair lands in `dropped`.
/// Reserved auxiliary series are not part of the baseline.
pub fn build_baseline(panel: &Panel, registry: &IndicatorRegistry, min_year: i32) -> Baseline {
    let mut cells: BTreeMap<String, BTreeMap<String, BaselineCell>> = BTreeMap::new();
    let mut dropped = Vec::new();
    let mut band_counts = [0usize; 3];
    let mut kept_total = 0usize;

    for meta in registry.iter() {
        let Some(countries) = panel.indicator(&meta.id) else {
            continue;
        };
        for (iso3, series) in countries {
            let (&year, &value) = series.iter().next_back().expect("series is nonempty");
            if year < min_year {
                dropped.push(DroppedCell {
                    iso3: iso3.clone(),
                    indicator: meta.id.clone(),
                    latest_year: year,
                });
                continue;
            }
            kept_total += 1;
            for (band, count) in VINTAGE_BANDS.iter().zip(band_counts.iter_mut()) {
                if (band.0..=band.1).contains(&year) {
                    *count += 1;
                }
            }
            cells
                .entry(meta.id.clone())
                .or_default()
                .insert(iso3.clone(), BaselineCell { year, value });
        }
    }

    dropped.sort_by(|a, b| (&a.indicator, &a.iso3).cmp(&(&b.indicator, &b.iso3)));
    let bands = [0, 1, 2].map(|i| VintageBand {
        start: VINTAGE_BANDS[i].0,
        end: VINTAGE_BANDS[i].1,
        count: band_counts[i],
        fraction: if kept_total == 0 {
            0.0
        } else {
            band_counts[i] as f64 / kept_total as f64
        },
    });

    Baseline {
        cells,
        dropped,
        vintage: VintageSummary { bands },
        min_year,
    }
}

/// Observation counts per (indicator, country) within an inclusive year
/// window.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageMatrix {
    pub window: (i32, i32),
    counts: BTreeMap<String, BTreeMap<String, usize>>,
}

impl CoverageMatrix {
    pub fn get(&self, indicator: &str, iso3: &str) -> usize {
        self.counts
            .get(indicator)
            .and_then(|m| m.get(iso3))
            .copied()
            .unwrap_or(0)
    }

    /// Iterates indicators in sorted order with per-country counts.
    pub fn iter(&self) -> impl Iterator<Item = (&String, &BTreeMap<String, usize>)> {
        self.counts.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineError {
    /// Window start is after its end.
    InvalidWindow { start: i32, end: i32 },
}

impl fmt::Display for BaselineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaselineError::InvalidWindow { start, end } => {
                write!(f, "invalid window [{start}, {end}]")
            }
        }
    }
}

impl core::error::Error for BaselineError {}

/// Counts observations per (indicator, country) inside `[start, end]`.
/// Pairs with no observations in the window are omitted (their count is 0).
pub fn coverage_matrix(
    panel: &Panel,
    registry: &IndicatorRegistry,
    window: (i32, i32),
) -> Result<CoverageMatrix, BaselineError> {
    let (start, end) = window;
    if start > end {
        return Err(BaselineError::InvalidWindow { start, end });
    }
    let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for meta in registry.iter() {
        let Some(countries) = panel.indicator(&meta.id) else {
            continue;
        };
        for (iso3, series) in countries {
            let in_window = series.range(start..=end).count();
            if in_window > 0 {
                counts
                    .entry(meta.id.clone())
                    .or_default()
                    .insert(iso3.clone(), in_window);
            }
        }
    }
    Ok(CoverageMatrix { window, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Direction, IndicatorMeta, Observation, Theme, WeightKey};
    use alloc::string::ToString;
    use alloc::vec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn meta(id: &str) -> IndicatorMeta {
        IndicatorMeta {
            id: id.into(),
            name: id.to_string(),
            unit: "percent".into(),
            theme: Theme::Diets,
            domain: "food environments".into(),
            direction: Direction::HigherBetter,
            weight_key: WeightKey::None,
            value_added: false,
        }
    }

    fn registry(ids: &[&str]) -> IndicatorRegistry {
        let mut reg = IndicatorRegistry::new();
        for id in ids {
            reg.insert(meta(id)).unwrap();
        }
        reg
    }

    fn panel(rows: &[(&str, &str, i32, f64)]) -> Panel {
        let mut p = Panel::new();
        for &(iso3, indicator, year, value) in rows {
            p.insert(Observation {
                iso3: iso3.into(),
                indicator: indicator.into(),
                year,
                value,
            })
            .unwrap();
        }
        p
    }

    #[test]
    fn keeps_latest_and_drops_stale_series() {
        let reg = registry(&["a"]);
        let p = panel(&[
            // Latest observation predates the floor: dropped.
            ("AAA", "a", 1995, 3.0),
            ("AAA", "a", 1999, 4.0),
            // Straddles the floor: the 2004 value is kept.
            ("BBB", "a", 1998, 1.0),
            ("BBB", "a", 2004, 2.0),
            // Plain modern series.
            ("CCC", "a", 2014, 5.0),
            ("CCC", "a", 2021, 6.0),
        ]);
        let base = build_baseline(&p, &reg, 2000);
        assert!(base.get("a", "AAA").is_none());
        assert_eq!(
            base.dropped,
            vec![DroppedCell {
                iso3: "AAA".into(),
                indicator: "a".into(),
                latest_year: 1999,
            }]
        );
        assert_eq!(base.get("a", "BBB"), Some(&BaselineCell { year: 2004, value: 2.0 }));
        assert_eq!(base.get("a", "CCC"), Some(&BaselineCell { year: 2021, value: 6.0 }));
        assert_eq!(base.len(), 2);
    }

    #[test]
    fn vintage_bands_fraction_kept_cells() {
        let reg = registry(&["a"]);
        let p = panel(&[
            ("AAA", "a", 2021, 1.0), // [2017, 2022]
            ("BBB", "a", 2017, 1.0), // [2017, 2022]
            ("CCC", "a", 2012, 1.0), // [2010, 2016]
            ("DDD", "a", 2003, 1.0), // [2000, 2009]
        ]);
        let base = build_baseline(&p, &reg, 2000);
        let fractions: Vec<f64> = base.vintage.bands.iter().map(|b| b.fraction).collect();
        assert_relative_eq!(fractions[0], 0.5);
        assert_relative_eq!(fractions[1], 0.25);
        assert_relative_eq!(fractions[2], 0.25);
        assert_relative_eq!(fractions.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn reserved_series_and_unregistered_ids_stay_out() {
        let reg = registry(&["a"]);
        let p = panel(&[
            ("AAA", "a", 2020, 1.0),
            ("AAA", "_population", 2020, 9.0),
            ("AAA", "other", 2020, 9.0),
        ]);
        let base = build_baseline(&p, &reg, 2000);
        assert_eq!(base.len(), 1);
        assert!(base.indicator("_population").is_none());
        assert!(base.indicator("other").is_none());
    }

    #[test]
    fn coverage_counts_window_years_only() {
        let reg = registry(&["a"]);
        let p = panel(&[
            ("KEN", "a", 1999, 1.0),
            ("KEN", "a", 2000, 1.0),
            ("KEN", "a", 2005, 1.0),
            ("KEN", "a", 2021, 1.0),
        ]);
        let cov = coverage_matrix(&p, &reg, (2000, 2021)).unwrap();
        assert_eq!(cov.get("a", "KEN"), 3);
        assert_eq!(cov.get("a", "FRA"), 0);
        assert_eq!(
            coverage_matrix(&p, &reg, (2021, 2000)),
            Err(BaselineError::InvalidWindow { start: 2021, end: 2000 })
        );
    }

    #[test]
    fn empty_panel_yields_empty_baseline() {
        let reg = registry(&["a"]);
        let base = build_baseline(&Panel::new(), &reg, 2000);
        assert!(base.is_empty());
        assert!(base.dropped.is_empty());
        assert_eq!(base.vintage.bands.iter().map(|b| b.fraction).sum::<f64>(), 0.0);
    }

    proptest! {
        /// Every (registered indicator, country) pair ends up kept or
        /// dropped, never both; coverage counts never exceed the window
        /// length.
        #[test]
        fn kept_plus_dropped_partitions_pairs(
            rows in proptest::collection::btree_set(
                (0u8..6, 0u8..6, 1990i32..2024),
                1..60,
            ),
        ) {
            let reg = registry(&["i0", "i1", "i2"]);
            let mut p = Panel::new();
            let mut pairs = std::collections::BTreeSet::new();
            for (c, i, year) in &rows {
                let iso3 = format!("C{c:02}");
                let indicator = format!("i{}", i % 3);
                // btree_set dedupes full rows; (country, indicator, year)
                // can still repeat across different u8 i values mapping to
                // the same indicator, so tolerate duplicates.
                if p.insert(Observation {
                    iso3: iso3.clone(),
                    indicator: indicator.clone(),
                    year: *year,
                    value: 1.0,
                }).is_ok() {
                    pairs.insert((indicator, iso3));
                }
            }
            let base = build_baseline(&p, &reg, 2000);
            prop_assert_eq!(base.len() + base.dropped.len(), pairs.len());
            for d in &base.dropped {
                prop_assert!(base.get(&d.indicator, &d.iso3).is_none());
                prop_assert!(d.latest_year < 2000);
            }

            let cov = coverage_matrix(&p, &reg, (2000, 2021)).unwrap();
            for (_, counts) in cov.iter() {
                for (_, &count) in counts {
                    prop_assert!(count >= 1 && count <= 22);
                }
            }
        }
    }
}
