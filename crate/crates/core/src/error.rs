use crate::qseries::QSeriesError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters n={n}, s={s}: need n >= 2 and s >= n-1")]
    InvalidParams { n: u32, s: u32 },
    #[error("component index {i} out of range for n={n}, s={s}")]
    InvalidComponent { i: u32, n: u32, s: u32 },
    #[error("pair ({i},{j}) out of range for n={n}, s={s}")]
    InvalidPair { i: u32, j: u32, n: u32, s: u32 },
    #[error("basis index {index} out of range 1..={dim}")]
    BasisIndexOutOfRange { index: u32, dim: u32 },
    #[error("variable index {index} out of range 1..={nvars}")]
    InvalidVariable { index: usize, nvars: usize },
    #[error("generator {label} is not homogeneous of degree {degree}")]
    NotHomogeneous { label: String, degree: u32 },
    #[error("invalid filling: {0}")]
    InvalidFilling(String),
    #[error("{0} needs a nonempty input")]
    EmptyInput(&'static str),
    #[error("inputs refer to different (n, s)")]
    MismatchedParams,
    #[error("{0} is only available for s = n-1")]
    RequiresMinimalS(&'static str),
    #[error("too many pairs for inclusion-exclusion: {got} > {cap}")]
    TooManyPairs { got: usize, cap: usize },
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("enumeration budget of {cap} candidate lines exceeded")]
    BudgetExceeded { cap: u64 },
    #[error(transparent)]
    QSeries(#[from] QSeriesError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
