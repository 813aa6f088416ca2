use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("unknown group preset `{0}`")]
    UnknownPreset(String),

    #[error("objects live over different groups: {0}")]
    GroupMismatch(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid module map: {0}")]
    InvalidMap(String),

    #[error("module has torsion; a lattice is required")]
    TorsionPresent,

    #[error("cohomological degree {degree} exceeds configured maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("pairing is degenerate on the torsion-free quotient")]
    DegeneratePairing,

    #[error("not a Brauer relation")]
    NotARelation,

    #[error("relation is zero")]
    ZeroRelation,

    #[error("no injective map P1 -> P2 found after {attempts} attempts (seed {seed})")]
    PhiSearchExhausted { seed: u64, attempts: usize },

    #[error("infinite kernel or cokernel: {0}")]
    InfiniteOrder(String),

    #[error("sequence is not exact: {0}")]
    NotExact(String),

    #[error("module fails the cohomological triviality test: {0}")]
    NotCohomologicallyTrivial(String),

    #[error("invalid local Galois datum: {0}")]
    InvalidDatum(String),

    #[error("identity check failed: {0}")]
    CheckFailed(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
