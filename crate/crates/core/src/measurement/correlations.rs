use crate::circuit::{ry, rz};
use crate::error::{Error, Result};
use crate::model::{xy_hamiltonian, Lattice};
use crate::sim::{Axis, HamiltonianSpec, PauliTerm, QuantumState};

use super::readout::apply_confusion;

/// Connected correlations `C(i, j)` of `sigma_theta = cos(theta) X + sin(theta) Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub n: usize,
    pub theta: f64,
    /// Row-major; the diagonal holds `1 - <sigma_theta>^2`.
    pub values: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Columns `i, j, c_value`, off-diagonal entries only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,c_value\n");
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    out.push_str(&format!("{i},{j},{:.16e}\n", self.get(i, j)));
                }
            }
        }
        out
    }
}

/// `(E, E_pairs)` where `E = <sum_edges J0 (s+s- + s-s+)>` and
/// `E_pairs = J0 sum_edges (<XX> + <YY>) = 2 E`.
pub fn energy_xy(state: &QuantumState, lat: &Lattice, j0: f64) -> Result<(f64, f64)> {
    let h = xy_hamiltonian(lat, j0)?;
    let e = state.expectation(&h)?;
    let pairs: Vec<PauliTerm> = lat
        .edges()
        .iter()
        .flat_map(|&(a, b)| {
            [Axis::X, Axis::Y].map(|ax| PauliTerm::new(j0, vec![(a, ax), (b, ax)]))
        })
        .collect();
    let e_pairs = state.expectation(&HamiltonianSpec::new(lat.n_nodes(), pairs)?)?;
    Ok((e, e_pairs))
}

fn sigma_theta_terms(theta: f64) -> Vec<(f64, Axis)> {
    let (s, c) = theta.sin_cos();
    [(c, Axis::X), (s, Axis::Y)].into_iter().filter(|(w, _)| *w != 0.0).collect()
}

fn local(n: usize, q: usize, theta: f64) -> Result<HamiltonianSpec> {
    let terms = sigma_theta_terms(theta).into_iter().map(|(w, ax)| PauliTerm::new(w, vec![(q, ax)])).collect();
    HamiltonianSpec::new(n, terms)
}

fn pair(n: usize, i: usize, j: usize, theta: f64) -> Result<HamiltonianSpec> {
    let mut terms = Vec::new();
    for (wi, ai) in sigma_theta_terms(theta) {
        for (wj, aj) in sigma_theta_terms(theta) {
            terms.push(PauliTerm::new(wi * wj, vec![(i, ai), (j, aj)]));
        }
    }
    HamiltonianSpec::new(n, terms)
}

/// `<s_i s_j> - <s_i><s_j>` for `s = cos(theta) X + sin(theta) Y`.
pub fn connected_correlation(state: &QuantumState, i: usize, j: usize, theta: f64) -> Result<f64> {
    let n = state.n_qubits();
    if i == j {
        return Err(Error::InvalidArgument(format!("correlation needs two distinct sites, got {i} twice")));
    }
    if i >= n || j >= n {
        return Err(Error::InvalidTargets { targets: vec![i, j], n_qubits: n });
    }
    let ij = state.expectation(&pair(n, i, j, theta)?)?;
    Ok(ij - state.expectation(&local(n, i, theta)?)? * state.expectation(&local(n, j, theta)?)?)
}

pub fn correlation_matrix(state: &QuantumState, theta: f64) -> Result<CorrelationMatrix> {
    let n = state.n_qubits();
    let singles: Vec<f64> = (0..n).map(|q| state.expectation(&local(n, q, theta)?)).collect::<Result<_>>()?;
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = 1.0 - singles[i] * singles[i];
        for j in i + 1..n {
            let c = state.expectation(&pair(n, i, j, theta)?)? - singles[i] * singles[j];
            values[i * n + j] = c;
            values[j * n + i] = c;
        }
    }
    Ok(CorrelationMatrix { n, theta, values })
}

/// Correlations from simulated projective measurements: every qubit is
/// rotated so that `sigma_theta` maps to Z, the Born distribution is passed
/// through the per-qubit readout confusion `(P(0|0), P(1|1))`, and the
/// moments are read off the resulting bitstring distribution. `post` is
/// applied to the noisy distribution first (e.g. readout correction).
pub fn correlation_matrix_measured(
    state: &QuantumState,
    theta: f64,
    readout: &[(f64, f64)],
    post: Option<&dyn Fn(&[f64]) -> Result<Vec<f64>>>,
) -> Result<CorrelationMatrix> {
    let n = state.n_qubits();
    let mut rotated = state.clone();
    let basis_change = ry(-std::f64::consts::FRAC_PI_2) * rz(-theta);
    for q in 0..n {
        rotated.apply_1q(q, &basis_change);
    }
    let mut p = rotated.probabilities();
    if !readout.is_empty() {
        p = apply_confusion(&p, readout)?;
    }
    if let Some(f) = post {
        p = f(&p)?;
    }
    let z = |i: usize, q: usize| if i >> (n - 1 - q) & 1 == 0 { 1.0 } else { -1.0 };
    let singles: Vec<f64> = (0..n).map(|q| p.iter().enumerate().map(|(i, w)| w * z(i, q)).sum()).collect();
    let mut values = vec![0.0; n * n];
    for a in 0..n {
        values[a * n + a] = 1.0 - singles[a] * singles[a];
        for b in a + 1..n {
            let zz: f64 = p.iter().enumerate().map(|(i, w)| w * z(i, a) * z(i, b)).sum();
            let c = zz - singles[a] * singles[b];
            values[a * n + b] = c;
            values[b * n + a] = c;
        }
    }
    Ok(CorrelationMatrix { n, theta, values })
}

/// `1 - max_{i != j} |A_ij - B_ij| / 2`.
pub fn similarity(a: &CorrelationMatrix, b: &CorrelationMatrix) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { expected: a.n, found: b.n });
    }
    let mut worst = 0.0f64;
    for i in 0..a.n {
        for j in 0..a.n {
            if i != j {
                worst = worst.max((a.get(i, j) - b.get(i, j)).abs());
            }
        }
    }
    Ok(1.0 - worst / 2.0)
}

/// Mean of `C(reference, j)` grouped by tree distance, in units of `spacing`.
/// Rows are sorted by distance; the reference itself is left out.
pub fn distance_profile(lat: &Lattice, c: &CorrelationMatrix, reference: usize, spacing: f64) -> Result<Vec<(f64, f64)>> {
    if reference >= lat.n_nodes() || c.n != lat.n_nodes() {
        return Err(Error::InvalidTargets { targets: vec![reference], n_qubits: lat.n_nodes() });
    }
    let dist = lat.graph_distances(reference);
    let mut groups: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for (j, d) in dist.iter().enumerate() {
        if let (Some(d), true) = (d, j != reference) {
            let e = groups.entry(*d).or_insert((0.0, 0));
            e.0 += c.get(reference, j);
            e.1 += 1;
        }
    }
    Ok(groups.into_iter().map(|(d, (sum, k))| (d as f64 * spacing, sum / k as f64)).collect())
}

/// `<prod_q Z_q>`.
pub fn parity_z(state: &QuantumState) -> f64 {
    state
        .probabilities()
        .iter()
        .enumerate()
        .map(|(i, p)| if i.count_ones() % 2 == 0 { *p } else { -*p })
        .sum()
}
