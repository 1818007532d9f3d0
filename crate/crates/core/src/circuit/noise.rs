use rand::Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{linalg, DMat, Mat2, C64};

/// Gate error and decoherence parameters. Times share one unit
/// (microseconds in the defaults).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseModel {
    /// Coherent over-rotation angle in radians (0.01 is a "1%" error).
    pub epsilon: f64,
    /// Apply amplitude damping and dephasing after every gate.
    pub decoherence: bool,
    pub t1: f64,
    pub t2: f64,
    pub single_qubit_duration: f64,
    pub two_qubit_duration: f64,
    /// Per-qubit (P(read 0 | 0), P(read 1 | 1)); empty means ideal readout.
    pub readout: Vec<(f64, f64)>,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            decoherence: false,
            t1: 51.9,
            t2: 9.9,
            single_qubit_duration: 0.030,
            two_qubit_duration: 0.060,
            readout: Vec::new(),
            seed: 0,
        }
    }
}

impl NoiseModel {
    pub fn coherent(epsilon: f64, seed: u64) -> Self {
        Self { epsilon, seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be >= 0, got {}", self.epsilon));
        }
        if !(self.t1 > 0.0 && self.t2 > 0.0) {
            return bad("T1 and T2 must be positive".into());
        }
        if self.t2 > 2.0 * self.t1 {
            return bad(format!("T2 = {} exceeds 2 T1 = {}", self.t2, 2.0 * self.t1));
        }
        if !(self.single_qubit_duration >= 0.0 && self.two_qubit_duration >= 0.0) {
            return bad("gate durations must be >= 0".into());
        }
        for &(f0, f1) in &self.readout {
            if !(0.0..=1.0).contains(&f0) || !(0.0..=1.0).contains(&f1) {
                return bad(format!("readout fidelities ({f0}, {f1}) outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub(crate) fn is_noiseless(&self) -> bool {
        self.epsilon == 0.0 && !self.decoherence
    }

    /// Kraus operators for a gate of length `duration` on one qubit:
    /// amplitude damping followed by pure dephasing.
    pub fn kraus_for(&self, duration: f64) -> (Vec<Mat2>, Vec<Mat2>) {
        (amplitude_damping(1.0 - (-duration / self.t1).exp()), dephasing(self.dephasing_probability(duration)))
    }

    /// p with 1 - 2p = exp(-t / T_phi), 1/T_phi = 1/T2 - 1/(2 T1).
    pub fn dephasing_probability(&self, duration: f64) -> f64 {
        let rate = (1.0 / self.t2 - 0.5 / self.t1).max(0.0);
        0.5 * (1.0 - (-duration * rate).exp())
    }
}

pub fn amplitude_damping(gamma: f64) -> Vec<Mat2> {
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    vec![Mat2::new(r(1.0), z, z, r((1.0 - gamma).sqrt())), Mat2::new(z, r(gamma.sqrt()), z, z)]
}

pub fn dephasing(p: f64) -> Vec<Mat2> {
    let z = C64::new(0.0, 0.0);
    let a = C64::new((1.0 - p).sqrt(), 0.0);
    let b = C64::new(p.sqrt(), 0.0);
    vec![Mat2::new(a, z, z, a), Mat2::new(b, z, z, -b)]
}

/// Deviation of sum K^dag K from the identity.
pub fn kraus_completeness(kraus: &[Mat2]) -> f64 {
    let sum: Mat2 = kraus.iter().map(|k| k.adjoint() * k).sum();
    (sum - Mat2::identity()).norm()
}

/// exp(i eps d.sigma) for a unit vector `d`.
pub fn error_rotation(eps: f64, d: [f64; 3]) -> Mat2 {
    let (c, s) = (eps.cos(), eps.sin());
    let i = C64::new(0.0, 1.0);
    Mat2::new(
        C64::new(c, 0.0) + i * s * d[2],
        i * s * C64::new(d[0], -d[1]),
        i * s * C64::new(d[0], d[1]),
        C64::new(c, 0.0) - i * s * d[2],
    )
}

/// R U R^dag with an independent uniformly random axis per involved qubit.
/// `eps == 0` returns `u` untouched and draws nothing from `rng`.
pub fn perturb_gate<R: Rng + ?Sized>(u: &DMat, eps: f64, rng: &mut R) -> DMat {
    if eps == 0.0 {
        return u.clone();
    }
    let n_targets = u.nrows().trailing_zeros() as usize;
    let mut r = linalg::identity(1);
    for _ in 0..n_targets {
        let d: [f64; 3] = UnitSphere.sample(rng);
        let rot = error_rotation(eps, d);
        r = linalg::kron(&r, &DMat::from_iterator(2, 2, rot.iter().copied()));
    }
    &r * u * r.adjoint()
}
