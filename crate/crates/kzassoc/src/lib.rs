//! Command line, JSON series format and the on-disk ideal-basis cache on top of
//! [`kzassoc_core`].

pub mod cache;
pub mod commands;
pub mod config;
pub mod format;
pub mod report;

pub use cache::{BasisCache, CacheError, CacheStats, CACHE_ENV};
pub use commands::{cmd_associator, cmd_classify, cmd_flatness, cmd_transport, cmd_verify, CliError};
pub use config::{parse_grid, ConfigError, RunConfig, ScalarKind};
pub use format::{series_from_str, series_to_string, FormatError, SeriesJson};
pub use report::{body_of, Outcome, RunReport};
