use alloc::string::String;

use thiserror::Error;

use crate::iscn::ParseError;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("band {label} appears more than once on chromosome {chromosome}")]
    DuplicateBand { chromosome: String, label: String },
    #[error("band {label} does not belong on the {arm} arm of chromosome {chromosome}")]
    ArmMismatch {
        chromosome: String,
        arm: char,
        label: String,
    },
    #[error("band {label} is not a sub-band of {parent} on chromosome {chromosome}")]
    SubBandMismatch {
        chromosome: String,
        parent: String,
        label: String,
    },
    #[error("unknown entity: {0}")]
    UnknownEntity(String),
    #[error("{name} is already declared as a {existing}")]
    KindClash {
        name: String,
        existing: &'static str,
    },
    #[error("invalid entity name {0:?}")]
    ReservedName(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unsupported ploidy {0} (expected 1 to 4)")]
    UnsupportedPloidy(u32),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
