//! Gate set, CZ and iSWAP decompositions of the XY interaction, per-block
//! circuits, and noisy execution.

#[allow(clippy::module_inception)]
mod circuit;
mod decompose;
mod gates;
mod noise;
mod run;

pub use circuit::{build_block_circuit, build_digitized_circuit, Circuit, EdgeSplitting, Op};
pub use decompose::{decompose_xy, decompose_xy_cz, decompose_xy_iswap, TwoQubitBasis};
pub use gates::{cz, iswap, rx, ry, rz, u_xy, Gate};
pub use noise::{
    amplitude_damping, dephasing, error_rotation, kraus_completeness, perturb_gate, NoiseModel,
};
pub use run::{run_circuit, run_circuit_snapshots};
