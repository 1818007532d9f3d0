//! Exact linear-algebra engine: pure and mixed states, Pauli-term
//! Hamiltonians with matrix-free action, dense spectra.

mod density;
mod evolve;
pub(crate) mod kernel;
pub mod linalg;
mod pauli;
mod state;

pub use density::DensityMatrix;
pub use evolve::expm_multiply;
pub use linalg::{dense_and_eigensystem, Eigensystem, DENSE_QUBIT_BUDGET};
pub use pauli::{Axis, HamiltonianSpec, PauliTerm};
pub use state::{Spin, StateVector};

pub type C64 = num_complex::Complex64;
pub type Mat2 = nalgebra::Matrix2<C64>;
pub type Mat4 = nalgebra::Matrix4<C64>;
pub type DMat = nalgebra::DMatrix<C64>;

/// Either representation of a quantum state; observables accept both.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn n_qubits(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.n_qubits(),
            QuantumState::Mixed(r) => r.n_qubits(),
        }
    }

    pub fn expectation(&self, obs: &HamiltonianSpec) -> crate::Result<f64> {
        match self {
            QuantumState::Pure(s) => s.expectation(obs),
            QuantumState::Mixed(r) => r.expectation(obs),
        }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> crate::Result<DensityMatrix> {
        match self {
            QuantumState::Pure(s) => s.partial_trace(keep),
            QuantumState::Mixed(r) => r.partial_trace(keep),
        }
    }

    /// Born probabilities of the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        match self {
            QuantumState::Pure(s) => s.probabilities(),
            QuantumState::Mixed(r) => r.diagonal(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            QuantumState::Pure(s) => DensityMatrix::from_pure(s),
            QuantumState::Mixed(r) => r.clone(),
        }
    }

    pub fn apply_1q(&mut self, q: usize, u: &Mat2) {
        match self {
            QuantumState::Pure(s) => s.apply_1q(q, u),
            QuantumState::Mixed(r) => r.apply_1q(q, u),
        }
    }
}

impl From<StateVector> for QuantumState {
    fn from(s: StateVector) -> Self {
        QuantumState::Pure(s)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(r: DensityMatrix) -> Self {
        QuantumState::Mixed(r)
    }
}

/// Second-order Rényi entropy `-log2 Tr(rho^2)` in bits.
pub fn renyi2_exact(rho: &DensityMatrix) -> f64 {
    -rho.purity().log2()
}
