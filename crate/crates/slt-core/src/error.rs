use crate::subspace::Subspace;
use thiserror::Error;

/// Errors surfaced by the lattice and operator-algebra operations.
///
/// `CapExceeded` carries the partially computed element set together with
/// the pair of subspaces whose meet/join would have pushed past the cap,
/// so callers can report a concrete witness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("lattice closure cap of {cap} exceeded ({} elements computed)", partial.len())]
    CapExceeded {
        cap: usize,
        partial: Vec<Subspace>,
        witness: Box<(Subspace, Subspace)>,
    },

    #[error("product dimension {requested} exceeds the cap of {cap}")]
    ProductDimExceeded { cap: usize, requested: usize },

    #[error("subspace is not an element of the lattice")]
    NotInLattice,

    #[error("operation requires a lattice closed under meet and join")]
    NotClosed,

    #[error("operation requires an atomic Boolean subspace lattice")]
    NotAbsl,

    #[error("operation requires the rank one density property")]
    DensityRequired,

    #[error("operator space is not an algebra")]
    NotAlgebra,

    #[error("atom list length {atoms} does not match value list length {values}")]
    LengthMismatch { atoms: usize, values: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Process exit code used by the CLI: 2 for malformed input,
    /// 3 for cap overflow. Check failures map to 1 at the call site.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } | Error::ProductDimExceeded { .. } => 3,
            _ => 2,
        }
    }
}
