use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} states, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("input variable `{0}` is not bound by the assignment")]
    MissingAssignment(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),

    #[error("invalid state mapping: {0}")]
    InvalidMapping(String),

    #[error("invalid clamp range [{lo}, {hi}]")]
    InvalidRange { lo: usize, hi: usize },

    #[error("invalid cut point {0}: must lie strictly between 0 and 1")]
    InvalidCut(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("switch set is missing the {0} switch")]
    InsufficientSwitchSet(String),

    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Capacity errors are reported separately by the command-line front end.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}
