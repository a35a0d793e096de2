use thiserror::Error;

/// Errors produced by state construction, rank analysis, and the
/// disentangling constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude vector is identically zero")]
    ZeroVector,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("local dimension {0} is not allowed; every party needs dimension >= 2")]
    InvalidDimension(usize),

    #[error("product factor {0} has zero norm")]
    ZeroFactor(usize),

    #[error("invalid bipartition: {0}")]
    InvalidPartition(String),

    #[error("rank tolerance must lie strictly between 0 and 1, got {0}")]
    InvalidTolerance(f64),

    #[error("need at least {required} parties, got {got}")]
    TooFewParties { required: usize, got: usize },

    #[error("lead coefficient of a superposition must be nonzero")]
    TrivialLead,

    #[error("superposition cancelled to the zero vector")]
    CancellationToZero,

    #[error("operation requires a bipartite state, got {0} parties")]
    NotBipartite(usize),

    #[error("Schmidt rank {0} is too low for this construction")]
    RankTooLow(usize),

    #[error("coefficient pair has |a0| = |a1|; no orthogonal eliminating product state exists")]
    MaximallyEntangledPair,

    #[error("angle search exhausted its grid without a feasible root")]
    NoRootFound,

    #[error("all Schmidt coefficients equal 1/sqrt(r); the construction has no solution")]
    MaximallyEntangled,

    #[error("every merge ordering hits two equal intermediate coefficients")]
    DegenerateMergeUnavoidable,

    #[error("state is not of diagonal GHZ form in the computational basis")]
    NotGhzForm,

    #[error("search base state is not entangled")]
    BaseNotEntangled,
}

pub type Result<T> = std::result::Result<T, Error>;
