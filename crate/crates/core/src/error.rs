use thiserror::Error;

/// Errors raised by capacity computations, region construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument {value} outside the domain {domain}")]
    Domain { value: String, domain: &'static str },

    #[error("{what} is not supported for {region}")]
    Unsupported { what: &'static str, region: String },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("value is not exactly representable: {0}")]
    NotExact(String),

    #[error("bound not applicable: {0}")]
    NotApplicable(String),

    #[error("conjectural value used where a certified value is required: {0}")]
    Conjectural(String),

    #[error("evaluation outside the validity interval {validity} at a = {at}")]
    OutOfValidity { at: String, validity: String },

    #[error("invalid expression: {0}")]
    InvalidExpr(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("spectrum prefix too short to decide the ellipsoid")]
    NeedsMoreData,

    #[error("malformed spectrum: {0}")]
    MalformedSpectrum(String),

    #[error("prefix cap of {0} elements exceeded")]
    CapExceeded(usize),

    #[error("index {0} exceeds the supported maximum {1}")]
    TooLarge(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
