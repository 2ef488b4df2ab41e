//! File formats, the four-tier test harness and the `karyotest` command
//! line over `karyotype-core`.

pub mod bands;
pub mod cli;
pub mod error;
pub mod facets;
pub mod harness;
pub mod suite;

pub use error::{Error, Result};
