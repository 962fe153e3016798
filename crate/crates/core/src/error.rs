use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular (smallest |eigenvalue| = {min_abs_eigenvalue:e})")]
    SingularMatrix { min_abs_eigenvalue: f64 },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("entry ({row}, {col}) = {value} is not binary")]
    NonBinaryInput { row: usize, col: usize, value: f64 },
    #[error("voltage diagonal entry {index} is zero")]
    ZeroDiagonal { index: usize },
    #[error("not a voltage graph: {0}")]
    NotVoltageGraph(String),
    #[error("spectrum has no positive eigenvalue")]
    NoPositiveEigenvalue,
    #[error("spectrum has no negative eigenvalue")]
    NoNegativeEigenvalue,
    #[error("graph is not invertible (eigenvalue {value:e} is numerically zero)")]
    ZeroEigenvalue { value: f64 },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("graph is not arbitrarily bridgeable: inverse entry ({row}, {col}) = {value:e}")]
    NotBridgeable { row: usize, col: usize, value: f64 },
    #[error("bridge uses vertex {col} of G_B outside the bridge set (row {row})")]
    ColumnConstraintViolated { row: usize, col: usize },
    #[error("adjacency matrix is definite; the gap needs eigenvalues of both signs")]
    DefiniteMatrix,
    #[error("LMI block {block} is infeasible (margin {margin:e} < {threshold:e})")]
    InfeasiblePoint { block: usize, margin: f64, threshold: f64 },
    #[error("invalid search specification: {0}")]
    SpecInvalid(String),
    #[error("no feasible bridging exists under the given constraints")]
    NoFeasibleCandidate,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown builtin graph `{0}`")]
    UnknownBuiltin(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::SingularMatrix { .. } => "singular_matrix",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NonBinaryInput { .. } => "non_binary_input",
            Error::ZeroDiagonal { .. } => "zero_diagonal",
            Error::NotVoltageGraph(_) => "not_voltage_graph",
            Error::NoPositiveEigenvalue => "no_positive_eigenvalue",
            Error::NoNegativeEigenvalue => "no_negative_eigenvalue",
            Error::ZeroEigenvalue { .. } => "zero_eigenvalue",
            Error::NotAPermutation(_) => "not_a_permutation",
            Error::NotBridgeable { .. } => "not_bridgeable",
            Error::ColumnConstraintViolated { .. } => "column_constraint_violated",
            Error::DefiniteMatrix => "definite_matrix",
            Error::InfeasiblePoint { .. } => "infeasible_point",
            Error::SpecInvalid(_) => "spec_invalid",
            Error::NoFeasibleCandidate => "no_feasible_candidate",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse_error",
            Error::UnknownBuiltin(_) => "unknown_builtin",
            Error::Io(_) => "io_error",
        }
    }

    /// True for malformed input (as opposed to a well-formed but mathematically
    /// unsuitable instance).
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::UnknownBuiltin(_) | Error::Io(_))
    }
}
