//! Standard-library companion to `qha-core`: text file formats, seeded random
//! ensembles, suite configuration, the finite and sampled-continuum
//! verification suites, and the building blocks of the `qha` command line.

pub mod checks;
pub mod commands;
pub mod config;
pub mod continuum_suite;
pub mod ensembles;
pub mod formats;
pub mod report;
pub mod verify;

pub use config::{ConfigError, SuiteConfig};
pub use formats::FormatError;
pub use report::{CheckResult, Status, SuiteReport};
