//! Core engine for building country-indicator baselines and the descriptive
//! statistics derived from them: weighted group means, percent deviations with
//! heteroskedasticity-robust inference, normalized distance tables, local
//! regression curves against GDP per capita, and a resilience snapshot.
//!
//! Everything in this crate is pure computation over in-memory data: no IO,
//! no clocks, no global state. Collections are ordered (`BTreeMap` / sorted
//! `Vec`), so every result iterates in a stable order and repeated runs are
//! bit-identical. The crate is `no_std` (with `alloc`); file formats, HTTP
//! and the command line live in the companion `fsci` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod analysis;
pub mod baseline;
pub mod derived;
pub mod kernels;
pub mod model;

pub use analysis::{
    deviation_table, gdp_relation_dataset, group_weighted_means, normalized_distance_table,
    percent_deviation, resilience_snapshot, AnalysisError, DeviationTable, GdpRelationDataset,
    GroupMeansTable, NormalizedDistanceTable, ResilienceSnapshot,
};
pub use baseline::{build_baseline, coverage_matrix, Baseline, CoverageMatrix, VintageSummary};
pub use model::{
    CountryMeta, CountryTable, Direction, Grouping, IncomeGroup, IndicatorMeta,
    IndicatorRegistry, ModelError, Observation, Panel, Region, Theme, WeightKey,
};
