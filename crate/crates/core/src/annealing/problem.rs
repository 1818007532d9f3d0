use crate::error::{Error, Result};
use crate::model::{neel_field_hamiltonian, xy_hamiltonian, Lattice, Schedule, ScheduleValue};
use crate::sim::{linalg, DMat, HamiltonianSpec, StateVector, C64};

/// `H(s) = f(s) H_ini + g(s) H_fin` run for total time `tau` (hbar = 1).
#[derive(Debug, Clone)]
pub struct AnnealingProblem {
    pub h_ini: HamiltonianSpec,
    pub h_fin: HamiltonianSpec,
    pub schedule: Schedule,
    pub tau: f64,
}

impl AnnealingProblem {
    pub fn new(h_ini: HamiltonianSpec, h_fin: HamiltonianSpec, schedule: Schedule, tau: f64) -> Result<Self> {
        if h_ini.n_qubits() != h_fin.n_qubits() {
            return Err(Error::DimensionMismatch { expected: h_ini.n_qubits(), found: h_fin.n_qubits() });
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("total time must be positive, got {tau}")));
        }
        Ok(Self { h_ini, h_fin, schedule, tau })
    }

    /// Staggered field to nearest-neighbour XY on `lat`.
    pub fn neel_to_xy(lat: &Lattice, omega0: f64, j0: f64, tau: f64, schedule: Schedule) -> Result<Self> {
        Self::new(neel_field_hamiltonian(lat, omega0)?, xy_hamiltonian(lat, j0)?, schedule, tau)
    }

    pub fn n_qubits(&self) -> usize {
        self.h_ini.n_qubits()
    }

    pub fn schedule_at(&self, s: f64) -> Result<ScheduleValue> {
        self.schedule.eval(s)
    }

    pub(crate) fn dense_pair(&self, limit: usize) -> Result<(DMat, DMat)> {
        linalg::check_budget(self.n_qubits(), limit)?;
        Ok((self.h_ini.to_dense(), self.h_fin.to_dense()))
    }

    /// Both Hamiltonians compressed onto `sub`; fails if either one leaks out of it.
    pub(crate) fn dense_pair_on(&self, sub: &Subspace, limit: usize) -> Result<(DMat, DMat)> {
        if sub.n_qubits != self.n_qubits() {
            return Err(Error::DimensionMismatch { expected: self.n_qubits(), found: sub.n_qubits });
        }
        let (hi, hf) = self.dense_pair(limit)?;
        if sub.indices.len() == hi.nrows() {
            return Ok((hi, hf));
        }
        for h in [&hi, &hf] {
            let inside = |k: usize| sub.indices.binary_search(&k).is_ok();
            let leak = (0..h.nrows())
                .filter(|&r| !inside(r))
                .flat_map(|r| sub.indices.iter().map(move |&c| (r, c)))
                .map(|(r, c)| h[(r, c)].norm())
                .fold(0.0, f64::max);
            if leak > 1e-12 {
                return Err(Error::InvalidArgument(format!("Hamiltonian couples the subspace to its complement ({leak:e})")));
            }
        }
        Ok((sub.compress(&hi), sub.compress(&hf)))
    }

    /// Dense H(s); budget-limited.
    pub fn dense_at(&self, s: f64) -> Result<DMat> {
        let v = self.schedule.eval(s)?;
        let (hi, hf) = self.dense_pair(linalg::DENSE_QUBIT_BUDGET)?;
        Ok(hi * C64::new(v.f, 0.0) + hf * C64::new(v.g, 0.0))
    }
}

/// Span of a set of computational-basis states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    n_qubits: usize,
    indices: Vec<usize>,
}

impl Subspace {
    pub fn full(n_qubits: usize) -> Self {
        Self { n_qubits, indices: (0..1usize << n_qubits).collect() }
    }

    /// Basis states with exactly `n_down` spins down (fixed total magnetization).
    pub fn magnetization(n_qubits: usize, n_down: usize) -> Self {
        let indices = (0..1usize << n_qubits).filter(|i| i.count_ones() as usize == n_down).collect();
        Self { n_qubits, indices }
    }

    /// Magnetization sector holding `psi`, which must lie in a single sector.
    pub fn sector_of(psi: &StateVector) -> Result<Self> {
        let mut counts = psi
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 1e-24)
            .map(|(i, _)| i.count_ones() as usize);
        let first = counts.next().ok_or(Error::NotNormalized { norm: 0.0 })?;
        if counts.any(|c| c != first) {
            return Err(Error::InvalidArgument("state spans several magnetization sectors".into()));
        }
        Ok(Self::magnetization(psi.n_qubits(), first))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn compress(&self, m: &DMat) -> DMat {
        DMat::from_fn(self.dim(), self.dim(), |r, c| m[(self.indices[r], self.indices[c])])
    }
}
