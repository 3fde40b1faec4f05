use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("axis must be a unit vector (norm {norm})")]
    NonUnitAxis { norm: f64 },
    #[error("axes must be perpendicular (dot product {dot})")]
    NotPerpendicular { dot: f64 },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not on the unit sphere (norm {norm})")]
    NotUnitNorm { norm: f64 },
    #[error("parameter {name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("point lies on the chart boundary: {0}")]
    ChartBoundary(String),
    #[error("stereographic projection is undefined at the south pole")]
    SouthPole,
    #[error("rotation rate {rate} exceeds the bound {bound}")]
    RateBound { rate: f64, bound: f64 },
    #[error("no root of the matching condition was found")]
    RootNotFound,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
