use std::fmt;

use serde::{Deserialize, Serialize};

use super::kernel::bit_of;
use super::{DMat, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
    /// sigma^+ = |0><1| (raises a down spin)
    Plus,
    /// sigma^- = |1><0|
    Minus,
}

impl Axis {
    fn adjoint(self) -> Axis {
        match self {
            Axis::Plus => Axis::Minus,
            Axis::Minus => Axis::Plus,
            a => a,
        }
    }
}

/// Real coefficient times a product of single-qubit operators on distinct
/// qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub factors: Vec<(usize, Axis)>,
}

impl PauliTerm {
    pub fn new(coefficient: f64, mut factors: Vec<(usize, Axis)>) -> Self {
        factors.sort_by_key(|f| f.0);
        Self { coefficient, factors }
    }

    pub fn adjoint(&self) -> PauliTerm {
        PauliTerm::new(self.coefficient, self.factors.iter().map(|&(q, a)| (q, a.adjoint())).collect())
    }

    fn is_self_adjoint(&self) -> bool {
        self.factors.iter().all(|(_, a)| !matches!(a, Axis::Plus | Axis::Minus))
    }

    pub(crate) fn compile(&self, n_qubits: usize) -> CompiledTerm {
        let mut c = CompiledTerm { base: C64::new(self.coefficient, 0.0), flip: 0, sign: 0, require: 0, expect: 0 };
        for &(q, a) in &self.factors {
            let bit = bit_of(n_qubits, q);
            // Y|b> = i (-1)^b |1-b>
            match a {
                Axis::X => c.flip |= bit,
                Axis::Y => {
                    c.flip |= bit;
                    c.sign |= bit;
                    c.base *= C64::new(0.0, 1.0);
                }
                Axis::Z => c.sign |= bit,
                Axis::Plus => {
                    c.flip |= bit;
                    c.require |= bit;
                    c.expect |= bit;
                }
                Axis::Minus => {
                    c.flip |= bit;
                    c.require |= bit;
                }
            }
        }
        c
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        for (q, a) in &self.factors {
            let s = match a {
                Axis::X => "X",
                Axis::Y => "Y",
                Axis::Z => "Z",
                Axis::Plus => "+",
                Axis::Minus => "-",
            };
            write!(f, " {s}{q}")?;
        }
        Ok(())
    }
}

/// Bit-mask form of a term: `term |i> = amp |i ^ flip>` with
/// `amp = base * (-1)^{popcount(i & sign)}`, or zero unless
/// `i & require == expect` (ladder operators).
#[derive(Debug, Clone)]
pub(crate) struct CompiledTerm {
    base: C64,
    flip: usize,
    sign: usize,
    require: usize,
    expect: usize,
}

impl CompiledTerm {
    fn is_diagonal(&self) -> bool {
        self.flip == 0 && self.require == 0
    }

    /// `term |i> = amp |j>`; `None` if the term annihilates `|i>`.
    #[inline]
    pub fn action(&self, i: usize) -> Option<(usize, C64)> {
        if i & self.require != self.expect {
            return None;
        }
        let amp = if (i & self.sign).count_ones() % 2 == 0 { self.base } else { -self.base };
        Some((i ^ self.flip, amp))
    }
}

/// Hermitian weighted sum of Pauli/ladder products on `n_qubits` qubits.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    compiled: Vec<CompiledTerm>,
    /// Sum of all Z-only terms as a diagonal, built on first use.
    diagonal: std::sync::OnceLock<Vec<f64>>,
}

impl PartialEq for HamiltonianSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.terms == other.terms
    }
}

impl HamiltonianSpec {
    /// Validates qubit ranges, distinct qubits per term, balanced ladder
    /// operators, and that every ladder term's adjoint is also present.
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("zero qubits".into()));
        }
        for t in &terms {
            let mut qs: Vec<usize> = t.factors.iter().map(|f| f.0).collect();
            if qs.iter().any(|&q| q >= n_qubits) {
                return Err(Error::InvalidTargets { targets: qs, n_qubits });
            }
            let len = qs.len();
            qs.dedup();
            if qs.len() != len {
                return Err(Error::InvalidArgument(format!("repeated qubit in term {t}")));
            }
            if !t.coefficient.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite coefficient in term {t}")));
            }
            let plus = t.factors.iter().filter(|f| f.1 == Axis::Plus).count();
            let minus = t.factors.iter().filter(|f| f.1 == Axis::Minus).count();
            if plus != minus {
                return Err(Error::NotHermitian(format!("unpaired ladder operators in {t}")));
            }
        }
        // multiset check: adjoint terms must pair up
        let ladder: Vec<&PauliTerm> = terms.iter().filter(|t| !t.is_self_adjoint()).collect();
        let mut used = vec![false; ladder.len()];
        for i in 0..ladder.len() {
            if used[i] {
                continue;
            }
            let adj = ladder[i].adjoint();
            let partner = (0..ladder.len()).find(|&j| j != i && !used[j] && *ladder[j] == adj);
            match partner {
                Some(j) => {
                    used[i] = true;
                    used[j] = true;
                }
                None => return Err(Error::NotHermitian(format!("missing adjoint of {}", ladder[i]))),
            }
        }
        let compiled = terms.iter().map(|t| t.compile(n_qubits)).collect();
        Ok(Self { n_qubits, terms, compiled, diagonal: std::sync::OnceLock::new() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Sum of |coefficient|, an upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    pub fn scaled(&self, c: f64) -> HamiltonianSpec {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm::new(t.coefficient * c, t.factors.clone()))
            .collect();
        HamiltonianSpec::new(self.n_qubits, terms).expect("scaling preserves validity")
    }

    /// `out += scale * H * psi`, without materializing H.
    pub fn apply_add(&self, psi: &[C64], scale: C64, out: &mut [C64]) {
        debug_assert_eq!(psi.len(), 1 << self.n_qubits);
        if self.compiled.iter().any(CompiledTerm::is_diagonal) {
            let diag = self.diagonal.get_or_init(|| {
                let mut d = vec![0.0; psi.len()];
                for term in self.compiled.iter().filter(|t| t.is_diagonal()) {
                    for (i, x) in d.iter_mut().enumerate() {
                        *x += term.action(i).map_or(0.0, |(_, amp)| amp.re);
                    }
                }
                d
            });
            for ((o, a), d) in out.iter_mut().zip(psi).zip(diag) {
                *o += scale * a * *d;
            }
        }
        for term in self.compiled.iter().filter(|t| !t.is_diagonal()) {
            let w = scale * term.base;
            for (i, a) in psi.iter().enumerate() {
                if i & term.require != term.expect {
                    continue;
                }
                let z = w * a;
                if (i & term.sign).count_ones() % 2 == 0 {
                    out[i ^ term.flip] += z;
                } else {
                    out[i ^ term.flip] -= z;
                }
            }
        }
    }

    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        self.apply_add(psi, C64::new(1.0, 0.0), &mut out);
        out
    }

    /// Dense 2^n x 2^n matrix. Callers are responsible for the size budget.
    pub fn to_dense(&self) -> DMat {
        let dim = 1usize << self.n_qubits;
        let mut m = DMat::zeros(dim, dim);
        for term in &self.compiled {
            for i in 0..dim {
                if let Some((j, amp)) = term.action(i) {
                    m[(j, i)] += amp;
                }
            }
        }
        m
    }

    /// Total magnetization (1/2) sum_n sigma^z_n, with hbar = 1.
    pub fn magnetization(n_qubits: usize) -> HamiltonianSpec {
        let terms = (0..n_qubits).map(|q| PauliTerm::new(0.5, vec![(q, Axis::Z)])).collect();
        HamiltonianSpec::new(n_qubits, terms).expect("valid by construction")
    }

    /// Z-parity: product of sigma^z over every qubit.
    pub fn parity_z(n_qubits: usize) -> HamiltonianSpec {
        let term = PauliTerm::new(1.0, (0..n_qubits).map(|q| (q, Axis::Z)).collect());
        HamiltonianSpec::new(n_qubits, vec![term]).expect("valid by construction")
    }

    pub fn single(n_qubits: usize, coefficient: f64, factors: Vec<(usize, Axis)>) -> Result<HamiltonianSpec> {
        HamiltonianSpec::new(n_qubits, vec![PauliTerm::new(coefficient, factors)])
    }
}
