//! Dense helpers for small registers: Hermitian eigensystems, exponentials,
//! norms.

use nalgebra::{DMatrix, SymmetricEigen};

use super::{DMat, HamiltonianSpec, C64};
use crate::error::{Error, Result};

/// Largest register for which dense 2^n x 2^n diagonalization is allowed.
pub const DENSE_QUBIT_BUDGET: usize = 12;

#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub matrix: DMat,
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: DMat,
}

impl Eigensystem {
    /// ||H - V diag(values) V^dagger||_F.
    pub fn reconstruction_residual(&self) -> f64 {
        let lambda = DMat::from_diagonal(&nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&v| C64::new(v, 0.0)),
        ));
        (&self.matrix - &self.vectors * lambda * self.vectors.adjoint()).norm()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k).iter().copied().collect()
    }
}

/// Eigen-decomposition of a Hermitian matrix with ascending eigenvalues.
pub fn eigh(m: &DMat) -> Eigensystem {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMat::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Eigensystem { matrix: m.clone(), values, vectors }
}

pub fn dense_and_eigensystem(h: &HamiltonianSpec) -> Result<Eigensystem> {
    check_budget(h.n_qubits(), DENSE_QUBIT_BUDGET)?;
    Ok(eigh(&h.to_dense()))
}

pub(crate) fn check_budget(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::BudgetExceeded { requested: n, limit });
    }
    Ok(())
}

/// exp(-i t H) for Hermitian `h`, via its eigensystem.
pub fn expm_hermitian(h: &DMat, t: f64) -> DMat {
    let eig = eigh(h);
    let phases = nalgebra::DVector::from_iterator(
        eig.values.len(),
        eig.values.iter().map(|&l| C64::from_polar(1.0, -t * l)),
    );
    &eig.vectors * DMat::from_diagonal(&phases) * eig.vectors.adjoint()
}

/// ||u^dagger u - I||_max.
pub fn unitarity_deviation(u: &DMat) -> f64 {
    let p = u.adjoint() * u;
    let n = p.nrows();
    let mut dev: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c { 1.0 } else { 0.0 };
            dev = dev.max((p[(r, c)] - C64::new(target, 0.0)).norm());
        }
    }
    dev
}

/// Largest singular value.
pub fn spectral_norm(m: &DMat) -> f64 {
    if m.iter().all(|z| z.norm() == 0.0) {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// sqrt(tr(A^dagger A)).
pub fn hs_norm(m: &DMat) -> f64 {
    m.norm()
}

pub fn commutator(a: &DMat, b: &DMat) -> DMat {
    a * b - b * a
}

/// Spectral distance after aligning `a` to `b` with the phase that
/// maximizes Re tr(e^{-i phi} a^dagger b).
pub fn distance_up_to_phase(a: &DMat, b: &DMat) -> f64 {
    let overlap: C64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 1e-300 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
    spectral_norm(&(a * phase - b))
}

pub fn kron(a: &DMat, b: &DMat) -> DMat {
    a.kronecker(b)
}

pub fn identity(dim: usize) -> DMat {
    DMatrix::identity(dim, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Axis, PauliTerm};
    use approx::assert_abs_diff_eq;

    #[test]
    fn sigma_z_spectrum() {
        let h = HamiltonianSpec::single(1, 1.0, vec![(0, Axis::Z)]).unwrap();
        let e = dense_and_eigensystem(&h).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        assert!(e.reconstruction_residual() < 1e-12);
    }

    #[test]
    fn budget_enforced() {
        let h = HamiltonianSpec::single(13, 1.0, vec![(0, Axis::Z)]).unwrap();
        assert!(matches!(dense_and_eigensystem(&h), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn exponential_of_x_is_rotation() {
        let x = HamiltonianSpec::new(1, vec![PauliTerm::new(1.0, vec![(0, Axis::X)])]).unwrap().to_dense();
        let t = 0.37;
        let u = expm_hermitian(&x, t);
        assert_abs_diff_eq!(u[(0, 0)].re, t.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(u[(0, 1)].im, -t.sin(), epsilon = 1e-14);
        assert!(unitarity_deviation(&u) < 1e-14);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let x = HamiltonianSpec::new(1, vec![PauliTerm::new(1.0, vec![(0, Axis::X)])]).unwrap().to_dense();
        let u = expm_hermitian(&x, 0.9);
        let v = &u * C64::from_polar(1.0, 1.3);
        assert!(distance_up_to_phase(&u, &v) < 1e-14);
        assert!(distance_up_to_phase(&u, &identity(2)) > 0.1);
    }
}
