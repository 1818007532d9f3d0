use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid gate targets {targets:?} for a {n_qubits}-qubit register")]
    InvalidTargets { targets: Vec<usize>, n_qubits: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit budget exceeded: {requested} qubits requested, limit is {limit}")]
    BudgetExceeded { requested: usize, limit: usize },

    #[error("empty qubit subset")]
    EmptySubset,

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Hamiltonian is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("analog evolution did not converge: doubling the step count changed the final fidelity by {infidelity:.3e}")]
    NotConverged { infidelity: f64 },

    #[error("singular confusion matrix on qubit {qubit}: readout fidelities must exceed 0.5")]
    SingularConfusion { qubit: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
