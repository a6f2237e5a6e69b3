use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitError {
    #[error("invalid bit character {0:?} (expected '0' or '1')")]
    BadChar(char),
    #[error("bit string of length {0} exceeds the 128-bit word width")]
    TooWide(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance must be at least 2, got {0}")]
    DistanceTooSmall(usize),
    #[error("distance {0} needs more than 128 data qubits")]
    DistanceTooLarge(usize),
    #[error(transparent)]
    Bits(#[from] BitError),
    #[error("expected {expected} {what} bits, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("weight {weight} outside 0..={num_data}")]
    WeightOutOfRange { weight: usize, num_data: usize },
    #[error("coefficient overflow at weight {0}")]
    CoefficientOverflow(usize),
    #[error("polynomials have different degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("injection state cannot be normalised (|alpha|^2 + |beta|^2 = {0})")]
    NotNormalisable(f64),
    #[error("logical state is not normalised (norm^2 = {0})")]
    NotNormalised(f64),
    #[error("trajectory has zero probability for this injection state")]
    ZeroProbabilityTrajectory,
    #[error("stabiliser {0} has no qubits outside earlier supports; cannot stream its coset")]
    NoFreshQubits(usize),
    #[error("coset element {0} is not reachable from the frame representative")]
    FrameMismatch(String),
    #[error("statevector oracle supports at most {max} qubits, got {got}")]
    OracleTooLarge { max: usize, got: usize },
    #[error("projected state leaves the code space (residual {0:e})")]
    OracleResidual(f64),
    #[error("distance {distance} too large for {what} (maximum {max})")]
    TooLargeFor { what: &'static str, distance: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
