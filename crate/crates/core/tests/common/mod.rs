//! Dense reference operators built from Kronecker products, independent of
//! the matrix-free engine.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C;

pub type M = DMatrix<C>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli(axis: char) -> M {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match axis {
        'I' => M::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => M::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => M::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => M::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("unknown axis {axis}"),
    }
}

/// Product of single-qubit operators placed on `n` qubits, qubit 0 leftmost.
pub fn embed(n: usize, ops: &[(usize, M)]) -> M {
    let mut out = M::identity(1, 1);
    for q in 0..n {
        let factor = ops.iter().find(|(k, _)| *k == q).map(|(_, m)| m.clone()).unwrap_or_else(|| pauli('I'));
        out = out.kronecker(&factor);
    }
    out
}

pub fn string(n: usize, factors: &[(usize, char)]) -> M {
    embed(n, &factors.iter().map(|&(q, a)| (q, pauli(a))).collect::<Vec<_>>())
}

/// Edges of the three-generation tree.
pub const TREE_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)];
pub const TREE_GENERATIONS: [usize; 7] = [0, 1, 1, 2, 2, 2, 2];

pub fn staggered_field(generations: &[usize], omega0: f64) -> M {
    let n = generations.len();
    let mut h = M::zeros(1 << n, 1 << n);
    for (q, &l) in generations.iter().enumerate() {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        h += string(n, &[(q, 'Z')]) * c(sign * omega0, 0.0);
    }
    h
}

/// sum J (XX + YY) / 2 over `pairs`, which equals the flip-flop form.
pub fn flip_flop(n: usize, pairs: &[(usize, usize, f64)]) -> M {
    let mut h = M::zeros(1 << n, 1 << n);
    for &(a, b, j) in pairs {
        h += (string(n, &[(a, 'X'), (b, 'X')]) + string(n, &[(a, 'Y'), (b, 'Y')])) * c(j / 2.0, 0.0);
    }
    h
}

pub fn tree_xy(j0: f64) -> M {
    flip_flop(7, &TREE_EDGES.map(|(a, b)| (a, b, j0)))
}

pub fn magnetization(n: usize) -> M {
    let mut m = M::zeros(1 << n, 1 << n);
    for q in 0..n {
        m += string(n, &[(q, 'Z')]) * c(0.5, 0.0);
    }
    m
}

pub fn parity(n: usize) -> M {
    string(n, &(0..n).map(|q| (q, 'Z')).collect::<Vec<_>>())
}

/// Ascending eigenvalues and matching eigenvector columns.
pub fn eig(h: &M) -> (Vec<f64>, M) {
    let e = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = order.iter().map(|&k| e.eigenvalues[k]).collect();
    let vectors = M::from_fn(h.nrows(), h.ncols(), |r, k| e.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// exp(-i t H) by the Padé exponential.
pub fn propagator(h: &M, t: f64) -> M {
    (h * c(0.0, -t)).exp()
}

pub fn basis(n: usize, index: usize) -> Vec<C> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[index] = c(1.0, 0.0);
    v
}

pub fn apply(m: &M, v: &[C]) -> Vec<C> {
    (m * nalgebra::DVector::from_column_slice(v)).iter().copied().collect()
}

pub fn overlap(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn expect(m: &M, v: &[C]) -> f64 {
    overlap(v, &apply(m, v)).re
}

/// min over global phases of the spectral norm of `a - e^{i phi} b`, via the
/// phase of tr(b^dag a).
pub fn phase_distance(a: &M, b: &M) -> f64 {
    let t: C = (b.adjoint() * a).trace();
    let phase = if t.norm() > 0.0 { t / t.norm() } else { c(1.0, 0.0) };
    (a - b * phase).singular_values().max()
}

/// Index of the tree ground Néel state: generations 0 and 2 down.
pub fn ground_neel_index() -> usize {
    TREE_GENERATIONS.iter().fold(0, |acc, &l| (acc << 1) | usize::from(l % 2 == 0))
}
