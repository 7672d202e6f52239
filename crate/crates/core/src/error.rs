use thiserror::Error;

/// Errors raised by the exact and numeric kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("prime {0} is too small (need p >= 5)")]
    PrimeTooSmall(i64),
    #[error("index {g} is divisible by the level {level}")]
    ZeroIndex { g: String, level: u64 },
    #[error("index {g} is not in [1, {max}]")]
    UnreducedIndex { g: i64, max: u64 },
    #[error("level must be at least 2, got {0}")]
    BadLevel(u64),
    #[error("series has no nonzero term below its truncation order")]
    ZeroSeries,
    #[error("series is not invertible: no nonzero leading coefficient")]
    NotInvertible,
    #[error("requested bound {bound} exceeds truncation order {truncation}")]
    InsufficientPrecision { bound: String, truncation: String },
    #[error("matrix has determinant {0}, expected 1")]
    Determinant(String),
    #[error("matrix is not in {0}")]
    NotInGroup(&'static str),
    #[error("chi is only defined for p = 1 mod 4 (got p = {0})")]
    ChiUndefined(u64),
    #[error("p = {0} is not 11 mod 12")]
    NotElevenModTwelve(u64),
    #[error("triplet entry {0} is divisible by p")]
    TripletZeroEntry(i64),
    #[error("triplet sum of squares {0} is not divisible by p")]
    TripletNotIsotropic(i64),
    #[error("F-branch requires ell != 1 (p = {0} is 11 mod 12); use the G-branch")]
    FBranchUnavailable(u64),
    #[error("imaginary part {im} is below the floor {floor}")]
    BelowFloor { im: f64, floor: f64 },
    #[error("not in the upper half-plane: imaginary part {0}")]
    NotUpperHalf(f64),
    #[error("subgroup {0} is not supported by this operation")]
    UnsupportedSubgroup(&'static str),
    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },
}

impl Error {
    /// True for errors caused by bad input rather than by a computation
    /// that could not be completed.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::ZeroSeries | Error::NotInvertible | Error::InsufficientPrecision { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
