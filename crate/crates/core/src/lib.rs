//! Karyotype ontology toolkit: the allocation-only core.
//!
//! Everything here is pure. File formats, the test harness runner and the
//! command line live in the `karyotest` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod axioms;
pub mod band;
pub mod error;
pub mod iscn;
pub mod ontology;
pub mod reasoner;

pub use error::{Error, Result};
