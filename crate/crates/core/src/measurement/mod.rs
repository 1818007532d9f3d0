//! Observables and estimators: XY energy, connected correlations and their
//! similarity, distance profiles, parity, randomized-measurement Rényi
//! entropy and readout correction.

mod correlations;
mod readout;
mod renyi;

pub use correlations::{
    connected_correlation, correlation_matrix, correlation_matrix_measured, distance_profile, energy_xy, parity_z,
    similarity, CorrelationMatrix,
};
pub use readout::{apply_confusion, confusion_from_fidelities, readout_correct, Confusion};
pub use renyi::{
    child_seed, corrected_entropy, cue_unitary, entanglement_witness, instance_rng, randomized_renyi, randomized_renyi_masks,
    subsets_of_size, RenyiEstimate, WITNESS_FLOOR,
};
