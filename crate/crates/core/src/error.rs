use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude vector has (near) zero norm")]
    ZeroVector,
    #[error("{requested} qubits exceeds the supported maximum of {max}")]
    CapacityExceeded { requested: usize, max: usize },
    #[error("qubit index {index} out of range for a {n_qubits}-qubit system")]
    IndexOutOfRange { index: usize, n_qubits: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected a {expected}-qubit state, got {found} qubits")]
    WrongArity { expected: usize, found: usize },
    #[error("control and target are the same wire ({0})")]
    SameWire(usize),
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid Pauli index {0} (expected 0..=3)")]
    InvalidPauli(usize),
    #[error("not a density matrix: {0}")]
    InvalidDensity(String),
    #[error("circuit contains a non-classical gate; no basis permutation exists")]
    NotClassical,
    #[error("density matrix is not diagonal in the {{psi0, psi2}} basis (residual {residual:.3e})")]
    NotDecomposable { residual: f64 },
    #[error("coefficients are not normalized (sum of squares {0})")]
    NotNormalized(f64),
    #[error("no angle triple reproduces the coefficients (best residual {best_residual:.3e})")]
    NoSolution { best_residual: f64 },
    #[error("degenerate denominator in the closed-form angle solution and the fallback failed")]
    DegenerateDenominator,
    #[error("optimizer did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("coefficient label multisets differ between input and output")]
    LabelMismatch,
    #[error("output bit {bit} has nonlinear algebraic normal form {anf}")]
    NonAffine { bit: usize, anf: String },
    #[error("linear part of the map is singular over GF(2)")]
    Singular,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
}
