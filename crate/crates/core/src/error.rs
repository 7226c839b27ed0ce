use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("base must satisfy |q| < 1, got |q| = {0}")]
    InvalidBase(f64),
    #[error("invalid product policy: {0}")]
    InvalidPolicy(&'static str),
    #[error("infinite product did not reach its tail bound within {0} factors")]
    TruncationLimit(usize),
    #[error("gamma function has a pole at {0}")]
    PoleAtNonpositiveInteger(f64),
    #[error("series diverges: {0}")]
    Diverged(String),
    #[error("series denominator vanishes at index {0}")]
    DenominatorPole(i64),
    #[error("argument |z| = {modulus} lies outside the convergence annulus ({inner}, {outer})")]
    OutsideAnnulus { modulus: f64, inner: f64, outer: f64 },
    #[error("unsupported series shape: {0}")]
    UnsupportedSeries(String),
    #[error("series terms decay too slowly: {0}")]
    SlowConvergence(String),
    #[error("q-derivative requires a nonzero parameter")]
    ZeroParameter,
    #[error("operator series terms are not decaying")]
    NoDecay,
    #[error("operator series exceeded depth {0}")]
    DepthLimit(usize),
    #[error("point is outside the admissible region: {0}")]
    InadmissiblePoint(String),
    #[error("point is too close to a pole or cancellation: {0}")]
    PoleAdjacent(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("no admissible point found after {0} attempts")]
    SamplingExhausted(usize),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("report serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T, E = QError> = std::result::Result<T, E>;
