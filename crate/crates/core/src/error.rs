use thiserror::Error;

/// Failures raised by the algebraic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("term {term} is not divisible by x{index}")]
    NonDivisible { index: usize, term: String },

    #[error("scaling factor at coordinate {0} is zero")]
    ZeroScaling(usize),

    #[error("input is not homogeneous of the requested weight")]
    InhomogeneousInput,

    #[error("no coordinate outside the border of weight {0} has a nonzero log-Hamiltonian coefficient")]
    NoValidIndex(String),

    #[error("homotopy output does not reproduce its input at weight {0}")]
    NotClosed(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration exceeded the level cap {cap}")]
    CapExceeded { cap: usize },

    #[error("tail weights occur at unboundedly many levels")]
    UnboundedTail,

    #[error("weight set violates W1: tail weight {0} has at most one negative entry")]
    W1Violated(String),

    #[error("Jacobi identity fails: {0}")]
    JacobiResidue(String),

    #[error("rank condition fails: {0}")]
    NotFullRank(String),

    #[error("root {0} is isotropic")]
    IsotropicVector(usize),

    #[error("action datum is not distinguished")]
    NotDistinguished,

    #[error("malformed vector: {0}")]
    MalformedVector(String),

    #[error("matrix is not a generalized Cartan matrix: {0}")]
    InvalidCartanMatrix(String),

    #[error("generalized Cartan matrix is not symmetrizable: {0}")]
    NotSymmetrizable(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
