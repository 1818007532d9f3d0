use std::f64::consts::FRAC_PI_2;

use super::gates::Gate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoQubitBasis {
    Cz,
    Iswap,
}

/// u_xy(phi) on `(n, k)` from two CZ gates and eight single-qubit rotations.
///
/// The factors are usually written as an operator product; the list returned
/// here is in application order, i.e. that product read right to left.
pub fn decompose_xy_cz(phi: f64, n: usize, k: usize) -> Vec<Gate> {
    vec![
        Gate::Rz { qubit: n, angle: -FRAC_PI_2 },
        Gate::Ry { qubit: k, angle: FRAC_PI_2 },
        Gate::Ry { qubit: n, angle: FRAC_PI_2 },
        Gate::Cz { a: n, b: k },
        Gate::Ry { qubit: n, angle: phi },
        Gate::Ry { qubit: k, angle: -phi },
        Gate::Cz { a: n, b: k },
        Gate::Ry { qubit: n, angle: -FRAC_PI_2 },
        Gate::Rz { qubit: n, angle: FRAC_PI_2 },
        Gate::Ry { qubit: k, angle: -FRAC_PI_2 },
    ]
}

/// u_xy(phi) on `(n, k)` from two iSWAP gates and single-qubit rotations,
/// in application order.
pub fn decompose_xy_iswap(phi: f64, n: usize, k: usize) -> Vec<Gate> {
    let pi = std::f64::consts::PI;
    vec![
        Gate::Ry { qubit: n, angle: -FRAC_PI_2 },
        Gate::Rx { qubit: k, angle: -FRAC_PI_2 },
        Gate::Iswap { a: n, b: k },
        Gate::Ry { qubit: n, angle: phi + pi },
        Gate::Rz { qubit: k, angle: FRAC_PI_2 },
        Gate::Rz { qubit: n, angle: FRAC_PI_2 },
        Gate::Ry { qubit: k, angle: phi + pi },
        Gate::Iswap { a: n, b: k },
        Gate::Rx { qubit: n, angle: FRAC_PI_2 },
        Gate::Ry { qubit: k, angle: -FRAC_PI_2 },
        Gate::Rz { qubit: n, angle: -FRAC_PI_2 },
        Gate::Rz { qubit: k, angle: -FRAC_PI_2 },
    ]
}

pub fn decompose_xy(basis: TwoQubitBasis, phi: f64, n: usize, k: usize) -> Vec<Gate> {
    match basis {
        TwoQubitBasis::Cz => decompose_xy_cz(phi, n, k),
        TwoQubitBasis::Iswap => decompose_xy_iswap(phi, n, k),
    }
}
