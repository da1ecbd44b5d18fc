use thiserror::Error;

/// Errors produced by the braid, loop, classification and simulation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("token {position} ({token:?}): {reason}")]
    BraidParse {
        position: usize,
        token: String,
        reason: String,
    },
    #[error("generator index {index} out of range for {strands} strands")]
    GeneratorOutOfRange { index: usize, strands: usize },
    #[error("strand counts differ: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("need at least {required} punctures, got {got}")]
    TooFewPunctures { required: usize, got: usize },
    #[error("loop coordinates must have {expected} entries per block, got a={a}, b={b}")]
    CoordinateLength { expected: usize, a: usize, b: usize },
    #[error("the all-zero coordinate vector is not an essential multicurve")]
    EmptyMulticurve,
    #[error("invalid rotor radii r0={r0}, r1={r1}: need 0.5 < r0 < r1 < 1.5")]
    InvalidRotor { r0: f64, r1: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("fit window [{first}, {last}] invalid for a series of length {len}")]
    FitWindow {
        first: usize,
        last: usize,
        len: usize,
    },
    #[error("protocol: {0}")]
    Protocol(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
