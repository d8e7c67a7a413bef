use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no fixed boundary point ({0} element)")]
    NoFixedBoundaryPoint(&'static str),
    #[error("empty shadow: no limit point inside the arc")]
    EmptyShadow,
    #[error("non-elementary group required: {0}")]
    NonElementaryRequired(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("not positive at stage {stage} (multiplier {value:e}, marginal: {marginal})")]
    NotPositive { stage: usize, value: f64, marginal: bool },
    #[error("flags are not transverse")]
    NotTransverse,
    #[error("spectrum not loxodromic: {0}")]
    SpectrumNotLoxodromic(String),
    #[error("degenerate singular value gap at index {0}")]
    DegenerateGap(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("sum is not positive definite (min eigenvalue {0:e})")]
    SumNotPd(f64),
    #[error("no removable index")]
    NoneRemovable,
    #[error("boundary axes overlap: {0}")]
    OverlappingAxes(String),
    #[error("element is not hyperbolic")]
    NonHyperbolic,
    #[error("index {index} out of range 1..={max}")]
    IndexRange { index: usize, max: usize },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("insufficient scales: {0}")]
    InsufficientScales(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by bad configuration rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Parse(_)
                | Error::TypeMismatch(_)
                | Error::DimensionMismatch(_)
                | Error::IndexRange { .. }
                | Error::InsufficientScales(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
