use serde::{Deserialize, Serialize};

use super::{Lattice, LatticeKind};
use crate::error::{Error, Result};
use crate::sim::{Axis, HamiltonianSpec, PauliTerm, Spin, StateVector};

/// Which classical Néel state seeds the anneal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Lowest eigenstate of the staggered field: generation 0 down.
    Ground,
    /// Highest eigenstate: generation 0 up.
    Excited,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Ground, Branch::Excited];

    pub fn name(self) -> &'static str {
        match self {
            Branch::Ground => "ground",
            Branch::Excited => "excited",
        }
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// sum_n (-1)^{l(n)} omega0 sigma^z_n with `l` the generation label.
pub fn neel_field_hamiltonian(lat: &Lattice, omega0: f64) -> Result<HamiltonianSpec> {
    require_positive("omega0", omega0)?;
    let terms = (0..lat.n_nodes())
        .map(|n| {
            let sign = if lat.generation(n) % 2 == 0 { 1.0 } else { -1.0 };
            PauliTerm::new(sign * omega0, vec![(n, Axis::Z)])
        })
        .collect();
    HamiltonianSpec::new(lat.n_nodes(), terms)
}

fn flip_flop(i: usize, j: usize, c: f64) -> [PauliTerm; 2] {
    [
        PauliTerm::new(c, vec![(i, Axis::Plus), (j, Axis::Minus)]),
        PauliTerm::new(c, vec![(i, Axis::Minus), (j, Axis::Plus)]),
    ]
}

fn check_conserves_magnetization(h: &HamiltonianSpec) -> Result<()> {
    // every term must map basis states to basis states of equal popcount
    let ok = h.terms().iter().all(|t| {
        let plus = t.factors.iter().filter(|f| f.1 == Axis::Plus).count();
        let minus = t.factors.iter().filter(|f| f.1 == Axis::Minus).count();
        plus == minus && t.factors.iter().all(|f| matches!(f.1, Axis::Z | Axis::Plus | Axis::Minus))
    });
    if !ok {
        return Err(Error::InvalidArgument("interaction does not conserve M_z".into()));
    }
    Ok(())
}

/// Nearest-neighbour flip-flop coupling J0 (s+_n s-_k + s-_n s+_k) on every
/// lattice edge.
pub fn xy_hamiltonian(lat: &Lattice, j0: f64) -> Result<HamiltonianSpec> {
    require_positive("J0", j0)?;
    let terms = lat.edges().iter().flat_map(|&(a, b)| flip_flop(a, b, j0)).collect();
    let h = HamiltonianSpec::new(lat.n_nodes(), terms)?;
    check_conserves_magnetization(&h)?;
    Ok(h)
}

/// All-pairs flip-flop with 1/|i - j| decay on a chain.
pub fn slowly_decaying_hamiltonian(chain: &Lattice, j0: f64) -> Result<HamiltonianSpec> {
    require_positive("J0", j0)?;
    if chain.kind() != LatticeKind::LinearChain {
        return Err(Error::InvalidArgument("slowly decaying interaction needs a linear chain".into()));
    }
    let n = chain.n_nodes();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            terms.extend(flip_flop(i, j, j0 / (j - i) as f64));
        }
    }
    let h = HamiltonianSpec::new(n, terms)?;
    check_conserves_magnetization(&h)?;
    Ok(h)
}

pub fn neel_spins(lat: &Lattice, branch: Branch) -> Vec<Spin> {
    (0..lat.n_nodes())
        .map(|n| {
            let ground = if lat.generation(n) % 2 == 0 { Spin::Down } else { Spin::Up };
            match branch {
                Branch::Ground => ground,
                Branch::Excited => ground.flipped(),
            }
        })
        .collect()
}

pub fn neel_state(lat: &Lattice, branch: Branch) -> StateVector {
    StateVector::from_bits(&neel_spins(lat, branch)).expect("lattices are non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{dense_and_eigensystem, C64};
    use approx::assert_abs_diff_eq;

    #[test]
    fn neel_field_signs() {
        let t = Lattice::cayley_tree(3).unwrap();
        let h = neel_field_hamiltonian(&t, 1.0).unwrap();
        let coefs: Vec<f64> = h.terms().iter().map(|t| t.coefficient).collect();
        assert_eq!(coefs, vec![1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0]);
        let c = neel_field_hamiltonian(&Lattice::linear_chain(2).unwrap(), 2.0).unwrap();
        let coefs: Vec<f64> = c.terms().iter().map(|t| t.coefficient).collect();
        assert_eq!(coefs, vec![2.0, -2.0]);
        assert!(neel_field_hamiltonian(&t, 0.0).is_err());
    }

    #[test]
    fn neel_states_are_extreme_eigenstates() {
        let t = Lattice::cayley_tree(3).unwrap();
        let h = neel_field_hamiltonian(&t, 1.0).unwrap();
        assert_eq!(
            neel_spins(&t, Branch::Ground),
            vec![Spin::Down, Spin::Up, Spin::Up, Spin::Down, Spin::Down, Spin::Down, Spin::Down]
        );
        let e = dense_and_eigensystem(&h).unwrap();
        assert_abs_diff_eq!(e.values[0], -7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(*e.values.last().unwrap(), 7.0, epsilon = 1e-12);
        for (branch, energy) in [(Branch::Ground, -7.0), (Branch::Excited, 7.0)] {
            let psi = neel_state(&t, branch);
            let hpsi = h.apply(psi.amplitudes());
            let resid: f64 = hpsi
                .iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| (a - b * energy).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(resid < 1e-12);
        }
        let ground = neel_spins(&t, Branch::Ground);
        let excited = neel_spins(&t, Branch::Excited);
        assert!(ground.iter().zip(&excited).all(|(a, b)| *a == b.flipped()));
    }

    #[test]
    fn ground_neel_magnetization() {
        let t = Lattice::cayley_tree(3).unwrap();
        let m = HamiltonianSpec::magnetization(7);
        assert_abs_diff_eq!(neel_state(&t, Branch::Ground).expectation(&m).unwrap(), -1.5, epsilon = 1e-12);
    }

    #[test]
    fn two_spin_flip_flop_spectrum() {
        let c = Lattice::linear_chain(2).unwrap();
        let h = xy_hamiltonian(&c, 1.0).unwrap();
        let e = dense_and_eigensystem(&h).unwrap();
        for (a, b) in e.values.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert_eq!(slowly_decaying_hamiltonian(&c, 1.0).unwrap(), h);
    }

    #[test]
    fn tree_interaction_terms() {
        let t = Lattice::cayley_tree(3).unwrap();
        let h = xy_hamiltonian(&t, 1.0).unwrap();
        assert_eq!(h.terms().len(), 12);
        let hd = h.to_dense();
        let md = HamiltonianSpec::magnetization(7).to_dense();
        let comm = &hd * &md - &md * &hd;
        assert!(comm.iter().all(|z: &C64| z.norm() < 1e-12));
    }

    #[test]
    fn slowly_decaying_couplings() {
        let c = Lattice::linear_chain(3).unwrap();
        let h = slowly_decaying_hamiltonian(&c, 1.0).unwrap();
        let pair_coef = |i: usize, j: usize| {
            h.terms()
                .iter()
                .find(|t| t.factors[0].0 == i && t.factors[1].0 == j)
                .unwrap()
                .coefficient
        };
        assert_eq!((pair_coef(0, 1), pair_coef(1, 2), pair_coef(0, 2)), (1.0, 1.0, 0.5));
        let tree = Lattice::cayley_tree(2).unwrap();
        assert!(slowly_decaying_hamiltonian(&tree, 1.0).is_err());
    }
}
