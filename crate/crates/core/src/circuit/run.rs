use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::circuit::{apply_gate_unchecked, Circuit, Op};
use super::gates::{to_mat2, to_mat4, Gate};
use super::noise::{perturb_gate, NoiseModel};
use crate::error::{Error, Result};
use crate::sim::QuantumState;

/// Runs `c` on `input`. With decoherence enabled a pure input is promoted to
/// a density matrix; coherent-only noise keeps it pure.
pub fn run_circuit(input: &QuantumState, c: &Circuit, noise: Option<&NoiseModel>) -> Result<QuantumState> {
    Ok(run_circuit_snapshots(input, c, noise)?.pop().expect("final state"))
}

/// As [`run_circuit`], also returning the state at every `#BLOCK` marker:
/// one snapshot per marker (the state entering that block) plus the final state.
pub fn run_circuit_snapshots(input: &QuantumState, c: &Circuit, noise: Option<&NoiseModel>) -> Result<Vec<QuantumState>> {
    if input.n_qubits() != c.n_qubits() {
        return Err(Error::DimensionMismatch { expected: c.n_qubits(), found: input.n_qubits() });
    }
    let noise = noise.filter(|m| !m.is_noiseless());
    if let Some(m) = noise {
        m.validate()?;
    }
    let mut state = match (input, noise) {
        (QuantumState::Pure(psi), Some(m)) if m.decoherence => QuantumState::Mixed(crate::sim::DensityMatrix::from_pure(psi)),
        _ => input.clone(),
    };
    let mut rng = noise.map(|m| ChaCha8Rng::seed_from_u64(m.seed));
    let kraus = noise.filter(|m| m.decoherence).map(|m| (m.kraus_for(m.single_qubit_duration), m.kraus_for(m.two_qubit_duration)));
    let mut snaps = Vec::new();
    for op in c.ops() {
        let gate = match op {
            Op::Block(_) => {
                snaps.push(state.clone());
                continue;
            }
            Op::Gate(g) => g,
        };
        match (noise, &mut rng) {
            (Some(m), Some(r)) if m.epsilon > 0.0 => {
                let u = perturb_gate(&gate.matrix(), m.epsilon, r);
                apply_matrix(&mut state, &gate.targets(), &u);
            }
            _ => apply(&mut state, gate),
        }
        if let Some((single, two)) = &kraus {
            let (ad, dp) = if gate.is_two_qubit() { two } else { single };
            if let QuantumState::Mixed(rho) = &mut state {
                for q in gate.targets() {
                    rho.apply_kraus_1q(q, ad);
                    rho.apply_kraus_1q(q, dp);
                }
            }
        }
    }
    snaps.push(state);
    Ok(snaps)
}

fn apply(state: &mut QuantumState, g: &Gate) {
    match state {
        QuantumState::Pure(psi) => apply_gate_unchecked(psi, g),
        QuantumState::Mixed(_) => apply_matrix(state, &g.targets(), &g.matrix()),
    }
}

fn apply_matrix(state: &mut QuantumState, targets: &[usize], u: &crate::sim::DMat) {
    match (state, targets) {
        (QuantumState::Pure(psi), [q]) => psi.apply_1q(*q, &to_mat2(u)),
        (QuantumState::Pure(psi), [a, b]) => psi.apply_2q(*a, *b, &to_mat4(u)),
        (QuantumState::Mixed(rho), [q]) => rho.apply_1q(*q, &to_mat2(u)),
        (QuantumState::Mixed(rho), [a, b]) => rho.apply_2q(*a, *b, &to_mat4(u)),
        _ => unreachable!("gates are validated to one or two targets"),
    }
}
