//! Std companion to [`fsci_core`]: file ingestion and validation, a small
//! fetch-and-cache client, run configuration, report emission, and the
//! end-to-end pipeline behind the `fsci` binary.

pub mod config;
pub mod fetch;
pub mod ingest;
pub mod pipeline;
pub mod report;

pub use config::{ConfigError, Format, RunConfig};
pub use fetch::{default_cache_dir, fetch_source, FetchError};
pub use ingest::{load_codebook, load_countries, load_panel, IngestError, RowIssue, ValidationReport};
pub use pipeline::{run_pipeline, Task, EXIT_ANALYSIS, EXIT_OK, EXIT_VALIDATION};
