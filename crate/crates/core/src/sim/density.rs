use nalgebra::DMatrix;
use num_complex::Complex64;

use super::kernel;
use super::state::IndexSplit;
use super::{HamiltonianSpec, Mat2, Mat4, StateVector, C64};
use crate::error::{Error, Result};

/// Mixed state of `n` qubits, stored row-major.
///
/// Gates act on the vectorized form: the flat index `row * dim + col` is a
/// basis index of a `2n`-qubit register whose first `n` qubits are the row
/// (ket) and last `n` the column (bra). `U rho U^dagger` is then `U` on
/// qubit `q` and `conj(U)` on qubit `n + q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        let dim = a.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(a[r] * a[c].conj());
            }
        }
        Self { n_qubits: psi.n_qubits(), entries }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Self { n_qubits, entries }
    }

    /// Validates Hermiticity (1e-9), unit trace (1e-9) and eigenvalues >= -1e-8.
    pub fn from_matrix(m: &DMatrix<C64>) -> Result<Self> {
        let dim = m.nrows();
        if dim != m.ncols() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("{}x{} is not a qubit density matrix", m.nrows(), m.ncols())));
        }
        let entries = (0..dim * dim).map(|k| m[(k / dim, k % dim)]).collect();
        let rho = Self { n_qubits: dim.trailing_zeros() as usize, entries };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_raw(n_qubits: usize, entries: Vec<C64>) -> Self {
        debug_assert_eq!(entries.len(), 1 << (2 * n_qubits));
        Self { n_qubits, entries }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        for r in 0..dim {
            for c in r..dim {
                if (self.get(r, c) - self.get(c, r).conj()).norm() > 1e-9 {
                    return Err(Error::InvalidArgument(format!("not Hermitian at ({r}, {c})")));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("trace {tr} != 1")));
        }
        if self.n_qubits <= super::DENSE_QUBIT_BUDGET {
            let eig = super::linalg::eigh(&self.to_matrix());
            if let Some(min) = eig.values.first() {
                if *min < -1e-8 {
                    return Err(Error::InvalidArgument(format!("negative eigenvalue {min}")));
                }
            }
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.entries[r * self.dim() + c]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn to_matrix(&self) -> DMatrix<C64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |r, c| self.entries[r * dim + c])
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }

    /// Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn apply_1q(&mut self, q: usize, u: &Mat2) {
        assert!(q < self.n_qubits, "target {q} out of range");
        let n2 = 2 * self.n_qubits;
        kernel::apply_1q(&mut self.entries, n2, q, u);
        kernel::apply_1q(&mut self.entries, n2, self.n_qubits + q, &u.map(|z| z.conj()));
    }

    pub fn apply_2q(&mut self, q1: usize, q2: usize, u: &Mat4) {
        assert!(q1 < self.n_qubits && q2 < self.n_qubits && q1 != q2, "bad targets ({q1}, {q2})");
        let n = self.n_qubits;
        kernel::apply_2q(&mut self.entries, 2 * n, q1, q2, u);
        kernel::apply_2q(&mut self.entries, 2 * n, n + q1, n + q2, &u.map(|z| z.conj()));
    }

    pub fn apply_diag_1q(&mut self, q: usize, d0: C64, d1: C64) {
        let n = self.n_qubits;
        kernel::apply_diag_1q(&mut self.entries, 2 * n, q, d0, d1);
        kernel::apply_diag_1q(&mut self.entries, 2 * n, n + q, d0.conj(), d1.conj());
    }

    /// rho -> sum_k K rho K^dagger on qubit `q`.
    pub fn apply_kraus_1q(&mut self, q: usize, kraus: &[Mat2]) {
        assert!(q < self.n_qubits, "target {q} out of range");
        let mut sup = Mat4::zeros();
        for k in kraus {
            let kc = k.map(|z| z.conj());
            sup += k.kronecker(&kc);
        }
        let n = self.n_qubits;
        kernel::apply_2q(&mut self.entries, 2 * n, q, n + q, &sup);
    }

    /// Tr(rho H), evaluated matrix-free.
    pub fn expectation(&self, obs: &HamiltonianSpec) -> Result<f64> {
        if obs.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: obs.n_qubits() });
        }
        let dim = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for term in obs.terms() {
            let compiled = term.compile(self.n_qubits);
            for i in 0..dim {
                if let Some((j, amp)) = compiled.action(i) {
                    acc += amp * self.entries[i * dim + j];
                }
            }
        }
        Ok(acc.re)
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = IndexSplit::new(self.n_qubits, keep)?;
        let na = split.keep.len();
        let da = 1usize << na;
        let db = 1usize << (self.n_qubits - na);
        let mut full_index = vec![0usize; da * db];
        for i in 0..self.dim() {
            let (a, b) = split.split(i);
            full_index[a * db + b] = i;
        }
        let dim = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); da * da];
        for a in 0..da {
            for a2 in 0..da {
                out[a * da + a2] = (0..db)
                    .map(|b| self.entries[full_index[a * db + b] * dim + full_index[a2 * db + b]])
                    .sum();
            }
        }
        Ok(DensityMatrix::from_raw(na, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{renyi2_exact, Axis, PauliTerm, Spin};
    use approx::assert_abs_diff_eq;

    #[test]
    fn pure_round_trip_and_validity() {
        let psi = StateVector::normalized(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.5, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        rho.validate().unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(renyi2_exact(&rho), 0.0, epsilon = 1e-12);
        let again = DensityMatrix::from_matrix(&rho.to_matrix()).unwrap();
        assert_eq!(again, rho);
    }

    #[test]
    fn maximally_mixed_qubit_has_one_bit() {
        assert_abs_diff_eq!(renyi2_exact(&DensityMatrix::maximally_mixed(1)), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gate_on_density_matches_pure() {
        let mut psi = StateVector::from_bits(&[Spin::Up, Spin::Down, Spin::Up]).unwrap();
        let mut rho = DensityMatrix::from_pure(&psi);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = Mat2::new(C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0));
        let mut cz = Mat4::identity();
        cz[(3, 3)] = C64::new(-1.0, 0.0);
        psi.apply_1q(1, &had);
        psi.apply_2q(1, 2, &cz);
        rho.apply_1q(1, &had);
        rho.apply_2q(1, 2, &cz);
        let expected = DensityMatrix::from_pure(&psi);
        for (a, b) in rho.entries().iter().zip(expected.entries()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn mixed_expectation_and_partial_trace() {
        let psi = StateVector::from_bits(&[Spin::Down, Spin::Up]).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let z0 = HamiltonianSpec::new(2, vec![PauliTerm::new(1.0, vec![(0, Axis::Z)])]).unwrap();
        assert_abs_diff_eq!(rho.expectation(&z0).unwrap(), -1.0, epsilon = 1e-12);
        let r1 = rho.partial_trace(&[1]).unwrap();
        assert_abs_diff_eq!(r1.get(0, 0).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r1.trace().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_invalid_matrices() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 0)] = C64::new(1.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(DensityMatrix::from_matrix(&m).is_err());
    }
}
