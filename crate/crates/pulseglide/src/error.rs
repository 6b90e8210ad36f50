//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by analysis and integration routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated its domain (e.g. a non-positive penalty weight).
    #[error("{name} must be strictly positive, got {value}")]
    Domain { name: &'static str, value: f64 },

    /// Integration produced a non-finite state component.
    #[error("state became non-finite at t = {t} s")]
    NonFinite { t: f64 },

    /// The characteristic polynomial of a supposedly Hamiltonian-structured
    /// matrix carried odd-power terms beyond tolerance.
    #[error(
        "characteristic polynomial has odd-power terms (relative magnitude {rel:.3e}); \
         the matrix lacks the expected symmetry"
    )]
    OddPolyTerms { rel: f64 },

    /// No jerk penalty in the searched interval yields purely oscillatory
    /// modes; pulse-and-glide is not locally optimal at this speed.
    #[error("not PnG-capable at {v} m/s: no oscillatory regime for R in [{r_lo:e}, {r_hi:e}]")]
    NotPngCapable { v: f64, r_lo: f64, r_hi: f64 },

    /// The capability predicate did not change across the speed interval,
    /// so no critical speed can be bracketed.
    #[error("PnG capability does not change sign over [{v_lo}, {v_hi}] m/s")]
    NoCapabilityBracket { v_lo: f64, v_hi: f64 },

    /// A trajectory-based computation needs more samples than were given.
    #[error("need at least {min} trajectory samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    /// The decision vector could not be evaluated even once.
    #[error("initial decision vector is not evaluable: {detail}")]
    BadInitialPoint { detail: String },

    /// Configuration document failed to parse or validate.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A renderer or writer was handed an empty dataset.
    #[error("empty dataset for {what}")]
    EmptyData { what: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
