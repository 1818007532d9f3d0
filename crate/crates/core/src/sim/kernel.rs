//! Bit-indexed amplitude kernels shared by state vectors and vectorized
//! density matrices.
//!
//! Qubit 0 is the most significant bit of a basis index, so on an `n`-qubit
//! register qubit `q` lives at bit position `n - 1 - q`.

use super::{Mat2, Mat4, C64};

#[inline]
pub(crate) fn bit_of(n_qubits: usize, q: usize) -> usize {
    1usize << (n_qubits - 1 - q)
}

/// Applies `u` to qubit `q` of a register of `n_qubits` qubits stored in `amps`.
/// No unitarity requirement: Kraus superoperators go through here too.
pub(crate) fn apply_1q(amps: &mut [C64], n_qubits: usize, q: usize, u: &Mat2) {
    let bit = bit_of(n_qubits, q);
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let len = amps.len();
    let mut base = 0;
    while base < len {
        for i in base..base + bit {
            let a = amps[i];
            let b = amps[i | bit];
            amps[i] = u00 * a + u01 * b;
            amps[i | bit] = u10 * a + u11 * b;
        }
        base += bit << 1;
    }
}

/// Applies a diagonal single-qubit operator (phases on |0> and |1>).
pub(crate) fn apply_diag_1q(amps: &mut [C64], n_qubits: usize, q: usize, d0: C64, d1: C64) {
    let bit = bit_of(n_qubits, q);
    for (i, a) in amps.iter_mut().enumerate() {
        *a *= if i & bit == 0 { d0 } else { d1 };
    }
}

/// Applies `u` to the ordered pair `(q1, q2)`; the 4x4 matrix is indexed by
/// `2 * b(q1) + b(q2)`.
pub(crate) fn apply_2q(amps: &mut [C64], n_qubits: usize, q1: usize, q2: usize, u: &Mat4) {
    let b1 = bit_of(n_qubits, q1);
    let b2 = bit_of(n_qubits, q2);
    let mask = b1 | b2;
    for i in 0..amps.len() {
        if i & mask != 0 {
            continue;
        }
        let idx = [i, i | b2, i | b1, i | b1 | b2];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &out) in idx.iter().enumerate() {
            amps[out] = u[(r, 0)] * v[0] + u[(r, 1)] * v[1] + u[(r, 2)] * v[2] + u[(r, 3)] * v[3];
        }
    }
}
