use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample entry {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("probability {0} is outside (0, 1)")]
    InvalidProbability(f64),
    #[error("order {q} is out of range 1..={max}")]
    OrderOutOfRange { q: usize, max: usize },
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("degree {0} must be an even integer >= 2")]
    InvalidDegree(i64),
    #[error("degree {q} exceeds the supported maximum {max}")]
    DegreeTooLarge { q: u32, max: u32 },
    #[error(
        "degenerate regime: q_max = {q_max} for n = {n}, Chebyshev-Laplace estimator undefined"
    )]
    DegenerateRegime { n: usize, q_max: i64 },
    #[error("degree {q} is outside the admissible range 2..={q_max}")]
    DegreeOutOfRegime { q: i64, q_max: i64 },
    #[error("sample of size {n} is too small: need at least {min}")]
    SampleTooSmall { n: usize, min: usize },
    #[error("contamination bound k0 = {k0} exceeds floor(0.9 n) = {max}")]
    ContaminationBound { k0: usize, max: usize },
    #[error("sparsity k = {k} is outside 1..={max} for n = {n}")]
    SparsityOutOfRange { k: usize, n: usize, max: usize },
    #[error("scale estimate is degenerate: {0}")]
    DegenerateScale(String),
    #[error("index {index} is out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
