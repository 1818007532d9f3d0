use nalgebra::DMatrix;
use num_complex::Complex64;

use super::kernel;
use super::{DensityMatrix, HamiltonianSpec, Mat2, Mat4, C64};
use crate::error::{Error, Result};

/// Single-spin orientation. `Up` is |0> (sigma_z = +1), `Down` is |1>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub fn sigma_z(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }
}

/// Pure state of `n` qubits; amplitude `i` belongs to the bitstring of `i`
/// with qubit 0 as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

pub(crate) const NORM_TOL: f64 = 1e-9;
pub(crate) const UNITARY_TOL: f64 = 1e-10;

impl StateVector {
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 30 {
            return Err(Error::InvalidArgument(format!("unsupported qubit count {n_qubits}")));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_bits(bits: &[Spin]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("empty bit sequence".into()));
        }
        let index = bits
            .iter()
            .fold(0usize, |acc, s| (acc << 1) | usize::from(*s == Spin::Down));
        Self::basis(bits.len(), index)
    }

    /// Takes raw amplitudes; the length must be a power of two and the vector
    /// normalized within 1e-9.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("length {dim} is not a power of two")));
        }
        let s = Self { n_qubits: dim.trailing_zeros() as usize, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(s)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Self::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |<self|other>|^2.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        let bad = targets.iter().any(|&t| t >= self.n_qubits)
            || (targets.len() == 2 && targets[0] == targets[1]);
        if bad || targets.is_empty() || targets.len() > 2 {
            return Err(Error::InvalidTargets { targets: targets.to_vec(), n_qubits: self.n_qubits });
        }
        Ok(())
    }

    /// Applies a 2x2 (one target) or 4x4 (two targets) unitary. The matrix
    /// is checked against `u^dagger u = I` within 1e-10.
    pub fn apply_gate(&mut self, targets: &[usize], u: &DMatrix<C64>) -> Result<()> {
        self.check_targets(targets)?;
        let dim = 1usize << targets.len();
        if u.nrows() != dim || u.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: u.nrows() });
        }
        let deviation = super::linalg::unitarity_deviation(u);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        match targets {
            [q] => self.apply_1q(*q, &Mat2::from_fn(|r, c| u[(r, c)])),
            [q1, q2] => self.apply_2q(*q1, *q2, &Mat4::from_fn(|r, c| u[(r, c)])),
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Unchecked single-qubit application; panics on an out-of-range target.
    pub fn apply_1q(&mut self, q: usize, u: &Mat2) {
        assert!(q < self.n_qubits, "target {q} out of range");
        kernel::apply_1q(&mut self.amps, self.n_qubits, q, u);
    }

    pub fn apply_2q(&mut self, q1: usize, q2: usize, u: &Mat4) {
        assert!(q1 < self.n_qubits && q2 < self.n_qubits && q1 != q2, "bad targets ({q1}, {q2})");
        kernel::apply_2q(&mut self.amps, self.n_qubits, q1, q2, u);
    }

    pub fn apply_diag_1q(&mut self, q: usize, d0: C64, d1: C64) {
        assert!(q < self.n_qubits, "target {q} out of range");
        kernel::apply_diag_1q(&mut self.amps, self.n_qubits, q, d0, d1);
    }

    /// <psi|H|psi>, evaluated matrix-free.
    pub fn expectation(&self, obs: &HamiltonianSpec) -> Result<f64> {
        if obs.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: obs.n_qubits() });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for term in obs.terms() {
            let compiled = term.compile(self.n_qubits);
            for (i, a) in self.amps.iter().enumerate() {
                if let Some((j, amp)) = compiled.action(i) {
                    acc += self.amps[j].conj() * amp * a;
                }
            }
        }
        Ok(acc.re)
    }

    /// Reduced density matrix on `keep` (sorted ascending; the smallest kept
    /// qubit is the most significant bit of the reduced index).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = IndexSplit::new(self.n_qubits, keep)?;
        let da = 1usize << split.keep.len();
        let db = 1usize << (self.n_qubits - split.keep.len());
        // psi reshaped as (a, b)
        let mut m = vec![C64::new(0.0, 0.0); da * db];
        for (i, amp) in self.amps.iter().enumerate() {
            let (a, b) = split.split(i);
            m[a * db + b] = *amp;
        }
        let mut rho = vec![C64::new(0.0, 0.0); da * da];
        for a in 0..da {
            for a2 in a..da {
                let v: C64 = (0..db).map(|b| m[a * db + b] * m[a2 * db + b].conj()).sum();
                rho[a * da + a2] = v;
                rho[a2 * da + a] = v.conj();
            }
        }
        Ok(DensityMatrix::from_raw(split.keep.len(), rho))
    }
}

/// Maps full basis indices to (kept, traced) sub-indices.
pub(crate) struct IndexSplit {
    pub n_qubits: usize,
    pub keep: Vec<usize>,
    pub rest: Vec<usize>,
}

impl IndexSplit {
    pub fn new(n_qubits: usize, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut k = keep.to_vec();
        k.sort_unstable();
        k.dedup();
        if k.len() != keep.len() || k.iter().any(|&q| q >= n_qubits) {
            return Err(Error::InvalidTargets { targets: keep.to_vec(), n_qubits });
        }
        let rest = (0..n_qubits).filter(|q| !k.contains(q)).collect();
        Ok(Self { n_qubits, keep: k, rest })
    }

    fn gather(&self, i: usize, qubits: &[usize]) -> usize {
        qubits.iter().fold(0, |acc, &q| (acc << 1) | ((i >> (self.n_qubits - 1 - q)) & 1))
    }

    pub fn split(&self, i: usize) -> (usize, usize) {
        (self.gather(i, &self.keep), self.gather(i, &self.rest))
    }
}
