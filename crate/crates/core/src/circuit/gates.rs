use crate::error::{Error, Result};
use crate::sim::{linalg, DMat, Mat2, Mat4, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Rx { qubit: usize, angle: f64 },
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Cz { a: usize, b: usize },
    Iswap { a: usize, b: usize },
    /// Arbitrary 2x2 or 4x4 unitary; targets in matrix order.
    RawUnitary { matrix: DMat, targets: Vec<usize> },
}

pub fn rx(theta: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    Mat2::new(ONE * c, -I * s, -I * s, ONE * c)
}

pub fn ry(theta: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    Mat2::new(ONE * c, -ONE * s, ONE * s, ONE * c)
}

pub fn rz(theta: f64) -> Mat2 {
    Mat2::new(C64::from_polar(1.0, -theta / 2.0), ZERO, ZERO, C64::from_polar(1.0, theta / 2.0))
}

pub fn cz() -> Mat4 {
    Mat4::from_diagonal(&nalgebra::Vector4::new(ONE, ONE, ONE, -ONE))
}

/// |01> -> i|10>, |10> -> i|01>.
pub fn iswap() -> Mat4 {
    let mut m = Mat4::zeros();
    m[(0, 0)] = ONE;
    m[(1, 2)] = I;
    m[(2, 1)] = I;
    m[(3, 3)] = ONE;
    m
}

/// exp(-i phi (s+s- + s-s+)): identity on |00>, |11>, a rotation on |01>, |10>.
pub fn u_xy(phi: f64) -> Mat4 {
    let mut m = Mat4::zeros();
    m[(0, 0)] = ONE;
    m[(3, 3)] = ONE;
    m[(1, 1)] = ONE * phi.cos();
    m[(2, 2)] = ONE * phi.cos();
    m[(1, 2)] = -I * phi.sin();
    m[(2, 1)] = -I * phi.sin();
    m
}

impl Gate {
    pub fn targets(&self) -> Vec<usize> {
        match self {
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => vec![*qubit],
            Gate::Cz { a, b } | Gate::Iswap { a, b } => vec![*a, *b],
            Gate::RawUnitary { targets, .. } => targets.clone(),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.targets().len() == 2
    }

    /// Matrix on the gate's own targets (2x2 or 4x4).
    pub fn matrix(&self) -> DMat {
        let from2 = |m: Mat2| DMat::from_iterator(2, 2, m.iter().copied());
        let from4 = |m: Mat4| DMat::from_iterator(4, 4, m.iter().copied());
        match self {
            Gate::Rx { angle, .. } => from2(rx(*angle)),
            Gate::Ry { angle, .. } => from2(ry(*angle)),
            Gate::Rz { angle, .. } => from2(rz(*angle)),
            Gate::Cz { .. } => from4(cz()),
            Gate::Iswap { .. } => from4(iswap()),
            Gate::RawUnitary { matrix, .. } => matrix.clone(),
        }
    }

    pub(crate) fn validate(&self, n_qubits: usize) -> Result<()> {
        let t = self.targets();
        if t.is_empty() || t.len() > 2 || t.iter().any(|&q| q >= n_qubits) || (t.len() == 2 && t[0] == t[1]) {
            return Err(Error::InvalidTargets { targets: t, n_qubits });
        }
        if let Gate::RawUnitary { matrix, .. } = self {
            let dim = 1usize << t.len();
            if matrix.nrows() != dim || matrix.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows() });
            }
            let deviation = linalg::unitarity_deviation(matrix);
            if deviation > 1e-10 {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(())
    }
}

pub(crate) fn to_mat2(m: &DMat) -> Mat2 {
    Mat2::from_fn(|r, c| m[(r, c)])
}

pub(crate) fn to_mat4(m: &DMat) -> Mat4 {
    Mat4::from_fn(|r, c| m[(r, c)])
}
