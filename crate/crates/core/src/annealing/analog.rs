use super::AnnealingProblem;
use crate::error::{Error, Result};
use crate::sim::{expm_multiply, StateVector};

pub const MIN_ANALOG_STEPS: usize = 100;
/// Allowed infidelity between the `n` and `2n` step final states.
pub const CONVERGENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct AnalogTrajectory {
    /// One state per requested `s`, in request order.
    pub states: Vec<StateVector>,
    pub record_at: Vec<f64>,
    /// 1 - |<psi_n|psi_2n>|^2 for the final states.
    pub convergence_infidelity: f64,
}

impl AnalogTrajectory {
    pub fn last(&self) -> &StateVector {
        self.states.last().expect("at least one recorded state")
    }
}

/// Reference integrator: psi <- exp(-i tau ds H(s_mid)) psi on a uniform grid
/// of `n_steps` cells, with extra breakpoints at every requested `s`.
///
/// The run is repeated with `2 n_steps`; if the final states differ in
/// fidelity by more than [`CONVERGENCE_TOL`] the call fails instead of
/// returning an unconverged trajectory.
pub fn analog_evolve(
    prob: &AnnealingProblem,
    psi0: &StateVector,
    n_steps: usize,
    record_at: &[f64],
) -> Result<AnalogTrajectory> {
    if n_steps < MIN_ANALOG_STEPS {
        return Err(Error::InvalidArgument(format!("n_steps must be >= {MIN_ANALOG_STEPS}, got {n_steps}")));
    }
    if psi0.n_qubits() != prob.n_qubits() {
        return Err(Error::DimensionMismatch { expected: prob.n_qubits(), found: psi0.n_qubits() });
    }
    let norm = psi0.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm });
    }
    if record_at.iter().any(|s| !(0.0..=1.0).contains(s)) || record_at.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("record_at must be ascending within [0, 1]".into()));
    }
    let mut record: Vec<f64> = record_at.to_vec();
    if record.last() != Some(&1.0) {
        record.push(1.0);
    }
    let coarse = propagate(prob, psi0, n_steps, &record);
    let fine = propagate(prob, psi0, 2 * n_steps, &[1.0]);
    let infidelity = 1.0 - coarse.last().unwrap().fidelity(&fine[0]);
    if infidelity > CONVERGENCE_TOL {
        return Err(Error::NotConverged { infidelity });
    }
    let mut states = coarse;
    states.truncate(record_at.len());
    Ok(AnalogTrajectory { states, record_at: record_at.to_vec(), convergence_infidelity: infidelity })
}

/// Unchecked propagation; `record` must be ascending.
pub(crate) fn propagate(prob: &AnnealingProblem, psi0: &StateVector, n_steps: usize, record: &[f64]) -> Vec<StateVector> {
    let mut out = Vec::with_capacity(record.len());
    let mut psi = psi0.clone();
    let mut s = 0.0;
    let mut next_record = 0;
    let mut k = 0usize;
    while next_record < record.len() {
        // flush any records sitting at the current time
        while next_record < record.len() && record[next_record] <= s {
            out.push(psi.clone());
            next_record += 1;
        }
        if next_record == record.len() {
            break;
        }
        let grid_next = (k + 1) as f64 / n_steps as f64;
        let target = grid_next.min(record[next_record]);
        if target > s {
            let mid = 0.5 * (s + target);
            let v = prob.schedule.eval_unchecked(mid);
            psi = expm_multiply(&[(&prob.h_ini, v.f), (&prob.h_fin, v.g)], &psi, prob.tau * (target - s));
            s = target;
        }
        if s >= grid_next {
            k += 1;
        }
    }
    out
}
