mod common;

use common::*;
use proptest::prelude::*;
use treeanneal::annealing::AnnealingProblem;
use treeanneal::circuit::{decompose_xy, rx, ry, rz, Circuit, TwoQubitBasis};
use treeanneal::measurement::{apply_confusion, confusion_from_fidelities, correlation_matrix, readout_correct};
use treeanneal::model::{slowly_decaying_hamiltonian, neel_field_hamiltonian, Lattice, Schedule};
use treeanneal::sim::{Axis, HamiltonianSpec, PauliTerm, QuantumState, StateVector};

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("non-zero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| StateVector::normalized(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
}

fn lattice() -> impl Strategy<Value = Lattice> {
    prop_oneof![(1usize..=3).prop_map(|l| Lattice::cayley_tree(l).unwrap()), (2usize..=8).prop_map(|n| Lattice::linear_chain(n).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_free_action_matches_kronecker(
        terms in prop::collection::vec((-2.0f64..2.0, prop::collection::btree_map(0usize..4, axis(), 1..4)), 1..6),
        psi in state(4),
    ) {
        let mut dense = M::zeros(16, 16);
        let mut pauli_terms = Vec::new();
        for (w, factors) in &terms {
            let fs: Vec<(usize, char)> = factors.iter().map(|(&q, a)| (q, match a { Axis::X => 'X', Axis::Y => 'Y', _ => 'Z' })).collect();
            dense += string(4, &fs) * c(*w, 0.0);
            pauli_terms.push(PauliTerm::new(*w, factors.iter().map(|(&q, &a)| (q, a)).collect()));
        }
        let h = HamiltonianSpec::new(4, pauli_terms).unwrap();
        let got = h.apply(psi.amplitudes());
        let want = apply(&dense, psi.amplitudes());
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        prop_assert!((psi.expectation(&h).unwrap() - expect(&dense, psi.amplitudes())).abs() < 1e-12);
    }

    #[test]
    fn gates_preserve_norm(
        ops in prop::collection::vec((0usize..3, -3.0f64..3.0, 0usize..4, 0usize..4), 1..30),
        psi in state(4),
    ) {
        let mut c = Circuit::new(4);
        for (kind, angle, a, b) in ops {
            let gates = match kind {
                0 => vec![treeanneal::circuit::Gate::Rx { qubit: a, angle }],
                1 => vec![treeanneal::circuit::Gate::Ry { qubit: a, angle }],
                _ if a != b => decompose_xy(TwoQubitBasis::Iswap, angle, a, b),
                _ => vec![treeanneal::circuit::Gate::Rz { qubit: a, angle }],
            };
            c.extend(gates).unwrap();
        }
        let out = treeanneal::circuit::run_circuit(&QuantumState::Pure(psi), &c, None).unwrap();
        let QuantumState::Pure(v) = out else { unreachable!() };
        prop_assert!((v.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotations_are_unitary(theta in -10.0f64..10.0) {
        for u in [rx(theta), ry(theta), rz(theta)] {
            prop_assert!((u.adjoint() * u - treeanneal::sim::Mat2::identity()).norm() < 1e-14);
        }
    }

    #[test]
    fn interpolated_hamiltonian_keeps_symmetries(lat in lattice(), s in 0.0f64..=1.0, brach in any::<bool>()) {
        let schedule = if brach { Schedule::Brachistochrone } else { Schedule::Linear };
        let prob = AnnealingProblem::neel_to_xy(&lat, 1.0, 1.0, 5.0, schedule).unwrap();
        let h = prob.dense_at(s).unwrap();
        let n = lat.n_nodes();
        for sym in [parity(n), magnetization(n)] {
            prop_assert!((&h * &sym - &sym * &h).norm() < 1e-12);
        }
        let v = schedule.eval(s).unwrap();
        prop_assert!((v.f + v.g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn long_range_chain_keeps_symmetries(n in 2usize..=7) {
        let chain = Lattice::linear_chain(n).unwrap();
        let h = slowly_decaying_hamiltonian(&chain, 1.0).unwrap().to_dense();
        let f = neel_field_hamiltonian(&chain, 1.0).unwrap().to_dense();
        for sym in [parity(n), magnetization(n)] {
            prop_assert!((&h * &sym - &sym * &h).norm() < 1e-12);
            prop_assert!((&f * &sym - &sym * &f).norm() < 1e-12);
        }
    }

    #[test]
    fn correlations_are_symmetric_and_bounded(psi in state(3), theta in -3.2f64..3.2) {
        let m = correlation_matrix(&QuantumState::Pure(psi), theta).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(m.get(i, j), m.get(j, i));
                prop_assert!(m.get(i, j).abs() <= 2.0 + 1e-12);
            }
        }
    }

    #[test]
    fn readout_correction_inverts_confusion(
        raw in prop::collection::vec(0.05f64..1.0, 4),
        fid in prop::collection::vec((0.8f64..0.999, 0.8f64..0.999), 2),
    ) {
        let total: f64 = raw.iter().sum();
        let q: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let p = apply_confusion(&q, &fid).unwrap();
        let conf: Vec<_> = fid.iter().map(|&(a, b)| confusion_from_fidelities(a, b)).collect();
        let back = readout_correct(&p, &conf).unwrap();
        for (a, b) in back.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn partial_trace_keeps_unit_trace(psi in state(4), keep in prop::collection::btree_set(0usize..4, 1..=4)) {
        let keep: Vec<usize> = keep.into_iter().collect();
        let rho = psi.partial_trace(&keep).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-9);
        prop_assert!(treeanneal::sim::renyi2_exact(&rho) >= -1e-9);
    }
}
