use super::decompose::{decompose_xy, TwoQubitBasis};
use super::gates::{to_mat2, to_mat4, Gate};
use crate::annealing::DigitizedPlan;
use crate::error::{Error, Result};
use crate::model::Lattice;
use crate::sim::{linalg, DMat, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Gate(Gate),
    /// Start of block `n` (1-based).
    Block(usize),
}

/// How the interaction layer of one block is cut into edge gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSplitting {
    /// Each edge once with the full angle.
    Single,
    /// The whole edge layer `r` times with angle `phi / r`.
    Repeated(usize),
    /// `r` rounds of a forward pass then a reversed pass, each with `phi / 2r`.
    Symmetric(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Op>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ops: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.ops.iter().filter_map(|op| match op {
            Op::Gate(g) => Some(g),
            Op::Block(_) => None,
        })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.ops.push(Op::Gate(gate));
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn mark_block(&mut self, n: usize) {
        self.ops.push(Op::Block(n));
    }

    /// Appends `other`'s operations.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    /// Dense matrix of the whole circuit.
    pub fn unitary(&self) -> Result<DMat> {
        linalg::check_budget(self.n_qubits, crate::annealing::DENSE_BLOCK_BUDGET)?;
        let dim = 1usize << self.n_qubits;
        let mut out = linalg::identity(dim);
        for c in 0..dim {
            let mut col = StateVector::basis(self.n_qubits, c)?;
            for g in self.gates() {
                apply_gate_unchecked(&mut col, g);
            }
            out.set_column(c, &nalgebra::DVector::from_column_slice(col.amplitudes()));
        }
        Ok(out)
    }

    /// One `KIND args` line per gate and `#BLOCK n` markers; angles carry 17
    /// significant digits so a parse of the output reproduces the circuit.
    pub fn to_text(&self) -> Result<String> {
        let mut out = format!("#QUBITS {}\n", self.n_qubits);
        for op in &self.ops {
            let line = match op {
                Op::Block(n) => format!("#BLOCK {n}"),
                Op::Gate(Gate::Rx { qubit, angle }) => format!("RX {qubit} {angle:.16e}"),
                Op::Gate(Gate::Ry { qubit, angle }) => format!("RY {qubit} {angle:.16e}"),
                Op::Gate(Gate::Rz { qubit, angle }) => format!("RZ {qubit} {angle:.16e}"),
                Op::Gate(Gate::Cz { a, b }) => format!("CZ {a} {b}"),
                Op::Gate(Gate::Iswap { a, b }) => format!("ISWAP {a} {b}"),
                Op::Gate(Gate::RawUnitary { .. }) => {
                    return Err(Error::InvalidArgument("raw unitaries have no text form".into()))
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let int = |k: usize| -> Result<usize> {
                words
                    .get(k)
                    .ok_or_else(|| err(format!("missing field {k}")))?
                    .parse()
                    .map_err(|e| err(format!("{e}")))
            };
            let float = |k: usize| -> Result<f64> {
                words
                    .get(k)
                    .ok_or_else(|| err(format!("missing field {k}")))?
                    .parse()
                    .map_err(|e| err(format!("{e}")))
            };
            if words[0] == "#QUBITS" {
                circuit = Some(Circuit::new(int(1)?));
                continue;
            }
            let c = circuit.as_mut().ok_or_else(|| err("expected a #QUBITS header first".into()))?;
            let expected = if words[0] == "#BLOCK" { 2 } else { 3 };
            if words.len() != expected {
                return Err(err(format!("expected {expected} fields, found {}", words.len())));
            }
            let gate = match words[0] {
                "#BLOCK" => {
                    c.mark_block(int(1)?);
                    continue;
                }
                "RX" => Gate::Rx { qubit: int(1)?, angle: float(2)? },
                "RY" => Gate::Ry { qubit: int(1)?, angle: float(2)? },
                "RZ" => Gate::Rz { qubit: int(1)?, angle: float(2)? },
                "CZ" => Gate::Cz { a: int(1)?, b: int(2)? },
                "ISWAP" => Gate::Iswap { a: int(1)?, b: int(2)? },
                other => return Err(err(format!("unknown gate {other}"))),
            };
            c.push(gate).map_err(|e| err(e.to_string()))?;
        }
        circuit.ok_or(Error::Parse { line: 0, message: "empty circuit text".into() })
    }
}

pub(crate) fn apply_gate_unchecked(psi: &mut StateVector, g: &Gate) {
    match g {
        Gate::Cz { a, b } | Gate::Iswap { a, b } => psi.apply_2q(*a, *b, &to_mat4(&g.matrix())),
        Gate::RawUnitary { matrix, targets } if targets.len() == 2 => {
            psi.apply_2q(targets[0], targets[1], &to_mat4(matrix))
        }
        _ => psi.apply_1q(g.targets()[0], &to_mat2(&g.matrix())),
    }
}

/// Gates of block `n`: the staggered field layer `R_z((-1)^l 2 phi_z)`, then
/// one decomposed `u_xy(phi_J)` per lattice edge in the lattice's edge order.
pub fn build_block_circuit(
    plan: &DigitizedPlan,
    n: usize,
    lat: &Lattice,
    basis: TwoQubitBasis,
    splitting: EdgeSplitting,
) -> Result<Circuit> {
    let block = plan.block(n)?;
    let mut c = Circuit::new(lat.n_nodes());
    c.mark_block(n);
    for q in 0..lat.n_nodes() {
        let sign = if lat.generation(q) % 2 == 0 { 1.0 } else { -1.0 };
        c.push(Gate::Rz { qubit: q, angle: sign * 2.0 * block.phi_z })?;
    }
    let edges = lat.edges();
    let reversed: Vec<_> = edges.iter().rev().copied().collect();
    let (passes, phi): (Vec<&[(usize, usize)]>, f64) = match splitting {
        EdgeSplitting::Single => (vec![edges], block.phi_j),
        EdgeSplitting::Repeated(r) if r >= 1 => (vec![edges; r], block.phi_j / r as f64),
        EdgeSplitting::Symmetric(r) if r >= 1 => {
            ([edges, &reversed[..]].repeat(r), block.phi_j / (2 * r) as f64)
        }
        _ => return Err(Error::InvalidArgument("edge repetition must be >= 1".into())),
    };
    for pass in passes {
        for &(a, b) in pass {
            c.extend(decompose_xy(basis, phi, a, b))?;
        }
    }
    Ok(c)
}

/// All blocks of `plan` back to back, each preceded by its `#BLOCK` marker.
pub fn build_digitized_circuit(
    plan: &DigitizedPlan,
    lat: &Lattice,
    basis: TwoQubitBasis,
    splitting: EdgeSplitting,
) -> Result<Circuit> {
    let mut c = Circuit::new(lat.n_nodes());
    for n in 1..=plan.n_blocks() {
        c.append(&build_block_circuit(plan, n, lat, basis, splitting)?)?;
    }
    Ok(c)
}
