//! Error types shared by every module.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in construction, simulation, or search.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two states (or a state and an operator) disagree on qubit count.
    #[error("qubit count mismatch: expected {expected}, got {actual}")]
    QubitCountMismatch { expected: usize, actual: usize },

    /// Basis-state index outside `[0, 2^n)`.
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: u64, num_qubits: usize },

    /// Qubit position outside `1..=n`, or repeated where distinct positions
    /// are required.
    #[error("invalid qubit position {position} for {num_qubits} qubits")]
    InvalidPosition { position: usize, num_qubits: usize },

    /// Placement list is not a bijection on `1..=n`.
    #[error("placement is not a bijection on 1..={num_qubits}")]
    InvalidPermutation { num_qubits: usize },

    /// Qubit count must be at least one.
    #[error("qubit count must be positive")]
    EmptySystem,

    /// Bit string length differs from what the operation requires.
    #[error("bit string length mismatch: expected {expected}, got {actual}")]
    BitLengthMismatch { expected: usize, actual: usize },

    /// Measurement basis failed its orthonormality check.
    #[error("basis `{label}` is not orthonormal: max Gram deviation {deviation:e}")]
    NonOrthonormalBasis { label: String, deviation: f64 },

    /// The state has weight outside the span of the measurement basis.
    #[error("state lies outside the measurement basis span: residual weight {residual:e}")]
    IncompleteSupport { residual: f64 },

    /// Exhaustive Pauli search found no correction reaching the target.
    #[error("no Pauli correction on the candidate qubits reaches the target")]
    CorrectionNotFound,

    /// Exhaustive Pauli search found several corrections (degenerate target).
    #[error("correction search is ambiguous: {count} strings reach the target")]
    CorrectionAmbiguous { count: usize },

    /// Matrix handed to an eigenvalue-based operation is not a density matrix.
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// Matrix entries are not Hermitian within tolerance.
    #[error("matrix is not Hermitian: max deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    /// Matrix trace differs from one.
    #[error("matrix trace is not 1: got {trace}")]
    BadTrace { trace: f64 },

    /// Matrix side length is not a power of two.
    #[error("matrix dimension {dim} is not a power of two")]
    BadDimension { dim: usize },
}
