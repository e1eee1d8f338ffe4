//! Algorithms for two-dimensional product codes whose component codes are
//! precoded (dynamic-frozen) polar codes.
//!
//! The crate covers the full decoding pipeline: GF(2) linear algebra and
//! precoding-matrix handling ([`gf2`]), component-code encoding ([`polar`]),
//! successive cancellation list decoding with two soft-output generators
//! ([`scl`]), an extrinsic list-decoder variant ([`escl`]), the iterative
//! row/column product decoder ([`product`]), a biAWGN channel model
//! ([`channel`], [`sim`]), GMI-based optimization of the extrinsic scaling
//! coefficients ([`gmi`]), and Monte-Carlo density evolution for decoding
//! thresholds ([`mcde`]).
//!
//! Everything in here is `no_std`-compatible (allocation required) and
//! deterministic under caller-provided seeds. IO, file formats, the CLI,
//! and parallel simulation drivers live in the companion `polarforge`
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod channel;
pub mod escl;
pub mod gf2;
pub mod gmi;
pub mod grid;
pub mod math;
pub mod mcde;
pub mod oracle;
pub mod polar;
pub mod product;
pub mod scl;
pub mod sim;

use alloc::string::String;
use core::fmt;

/// Errors surfaced by the algorithmic layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A vector or grid does not have the length the operation requires.
    DimensionMismatch { expected: usize, got: usize },
    /// Kronecker power request exceeds the configured memory limit.
    KronExponentTooLarge { requested: u32, max: u32 },
    /// Precoding-matrix text is malformed; `line` is 1-based.
    Parse { line: usize, reason: String },
    /// A parameter is outside its documented domain.
    InvalidParameter(&'static str),
    /// Sample collection produced fewer samples than the configured minimum.
    InsufficientSamples { have: usize, need: usize },
    /// Threshold bisection needs one diverging and one converging endpoint.
    InvalidBracket { lo_converged: bool, hi_converged: bool },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::KronExponentTooLarge { requested, max } => {
                write!(f, "kronecker exponent {requested} exceeds limit {max}")
            }
            Error::Parse { line, reason } => write!(f, "parse error at line {line}: {reason}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::InsufficientSamples { have, need } => {
                write!(f, "insufficient samples: have {have}, need {need}")
            }
            Error::InvalidBracket {
                lo_converged,
                hi_converged,
            } => write!(
                f,
                "invalid bracket: lower endpoint converged = {lo_converged}, \
                 upper endpoint converged = {hi_converged}"
            ),
        }
    }
}

impl core::error::Error for Error {}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;
