use thiserror::Error;

use crate::fock::Occupation4;

/// Errors raised by the numerical engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate occupation {0} in state construction")]
    DuplicateOccupation(Occupation4),

    #[error("negative photon count {count} in mode {mode}")]
    NegativeCount { mode: usize, count: i64 },

    #[error("occupation {occupation} carries {total} photons, above 2 * n_max = {limit}")]
    OccupationTooLarge {
        occupation: Occupation4,
        total: u32,
        limit: u32,
    },

    #[error("state norm {0} exceeds 1")]
    NormExceeded(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("capacity exceeded: {what} needs {required}, cap is {cap}")]
    Capacity {
        what: &'static str,
        required: usize,
        cap: usize,
    },

    #[error("undefined ratio: denominator is {denominator}")]
    UndefinedRatio { denominator: f64 },

    #[error("undefined visibility: reference value f(pi/2) = {reference}")]
    UndefinedVisibility { reference: f64 },

    #[error("non-finite sample in run {run}: {detail}")]
    NonFinite { run: u64, detail: String },

    #[error("at gamma = {gamma}: {source}")]
    AtGamma {
        gamma: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
