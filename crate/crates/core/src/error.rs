use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// One reason a candidate POVM was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum PovmViolation {
    NonHermitian { label: String, deviation: f64 },
    NegativeEigenvalue { label: String, min_eigenvalue: f64 },
    IdentityResidual { residual: f64 },
    DimensionMismatch { label: String, dim: usize, expected: usize },
}

impl std::fmt::Display for PovmViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NonHermitian { label, deviation } => {
                write!(f, "element {label} is not hermitian (deviation {deviation:.3e})")
            }
            Self::NegativeEigenvalue { label, min_eigenvalue } => {
                write!(f, "element {label} has eigenvalue {min_eigenvalue:.3e}")
            }
            Self::IdentityResidual { residual } => {
                write!(f, "elements do not sum to the identity (residual {residual:.3e})")
            }
            Self::DimensionMismatch { label, dim, expected } => {
                write!(f, "element {label} has dimension {dim}, expected {expected}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("operator is not hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("not a density operator: trace {trace:.12}, min eigenvalue {min_eigenvalue:.3e}")]
    NotDensity { trace: f64, min_eigenvalue: f64 },

    #[error("layout error: {0}")]
    Layout(String),

    #[error("eigensolver failed to converge on a {dim}x{dim} matrix (max entry {max_entry:.3e})")]
    EigenNonConvergence { dim: usize, max_entry: f64 },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("refusing to enumerate {what}: {size} exceeds the cap {cap}")]
    CostGuard { what: &'static str, size: u128, cap: u128 },

    #[error("alphabet mismatch: {0} vs {1} symbols")]
    AlphabetMismatch(usize, usize),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("empty tuple")]
    EmptyTuple,

    #[error("conditioning event has zero probability")]
    ZeroProbability,

    #[error("invalid hypergeometric parameters n={n}, m={m}, k={k}")]
    InvalidHypergeometric { n: u64, m: u64, k: u64 },

    #[error("invalid POVM: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidPovm(Vec<PovmViolation>),

    #[error(
        "POVM is not informationally complete (span dimension {rank} < {required}); no dual exists, C1 is infinite"
    )]
    NotInformationallyComplete { rank: usize, required: usize },

    #[error("overcomplete POVM ({outcomes} outcomes > {basis} = d^2) is not supported for dual computation")]
    Overcomplete { outcomes: usize, basis: usize },

    #[error("Gram matrix is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("unsupported dimension {dim} for {what}")]
    UnsupportedDimension { what: &'static str, dim: usize },

    #[error("construction failed: {identity} violated (deviation {deviation:.3e})")]
    Construction { identity: &'static str, deviation: f64 },

    #[error("state is not symmetric relative to the ancilla (deviation {0:.3e})")]
    NotSymmetric(f64),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
