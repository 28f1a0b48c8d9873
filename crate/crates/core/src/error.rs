use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntourageError {
    #[error("point {0} lies outside the carrier space `{1}`")]
    OutsideCarrier(String, String),
    #[error("composition power must be at least 1, got {0}")]
    ZeroPower(usize),
    #[error("compact witness has no boxes")]
    EmptyWitness,
    #[error("cross-section at sample {index} is the whole space")]
    WholeCrossSection { index: usize },
    #[error("empty sample set")]
    NoSamples,
    #[error("malformed pair list at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("matrix is not hyperbolic: eigenvalue of modulus {0}")]
    NotHyperbolic(f64),
    #[error("matrix is singular")]
    Singular,
    #[error("integer matrix has determinant {0}, expected +-1")]
    NotUnimodular(i64),
    #[error("symbol {0} is stranded (missing in- or out-edge)")]
    StrandedSymbol(usize),
    #[error("transition matrix must be square and non-empty")]
    BadTransitionMatrix,
    #[error("word is not admissible: transition {0} -> {1} forbidden")]
    Inadmissible(usize, usize),
    #[error("symbol {0} outside alphabet of size {1}")]
    BadSymbol(usize, usize),
    #[error("iteration exponent must be nonzero")]
    ZeroIterate,
    #[error("conjugacy inverse check failed at sample {index} (error {error:e})")]
    InverseCheck { index: usize, error: f64 },
    #[error("perturbation too large: magnitude x lipschitz x |A^-1| = {0} >= 1")]
    PerturbationTooLarge(f64),
    #[error("permutation is invalid")]
    BadPermutation,
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("a chain needs at least two points, got {0}")]
    TooShort(usize),
    #[error("ladder graphs have inconsistent node sets")]
    InconsistentNodes,
    #[error("empty ladder")]
    EmptyLadder,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("node {0} lies on no cycle")]
    NoCycle(usize),
    #[error("component is not strongly connected")]
    NotStronglyConnected,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("pseudo-orbit window is empty")]
    EmptyWindow,
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("diagonal word hits forbidden transition {0} -> {1} at index {2}")]
    ForbiddenDiagonal(usize, usize, usize),
    #[error("defect {0} violates the precondition bound {1}")]
    DefectTooLarge(f64, f64),
    #[error("periodic closing system is singular")]
    SingularPeriodic,
    #[error("period {period} does not divide window length {len}")]
    BadPeriod { period: usize, len: usize },
    #[error("malformed pseudo-orbit file at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("pair at sample {0} lies outside the domain entourage")]
    OutsideDomain(usize),
    #[error("splice seam {0} -> {1} is not admissible")]
    InadmissibleSeam(usize, usize),
    #[error("lift ambiguity: pair separated by {0} (limit {1})")]
    LiftAmbiguity(f64, f64),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("system `{0}` has no chain-graph discretization")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown demo `{0}`")]
    UnknownDemo(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
}
