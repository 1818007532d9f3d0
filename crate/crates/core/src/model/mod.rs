//! Lattice topologies, the staggered-field and XY Hamiltonians, Néel states
//! and interpolation schedules.

mod hamiltonians;
mod lattice;
mod schedule;

pub use hamiltonians::{
    neel_field_hamiltonian, neel_spins, neel_state, slowly_decaying_hamiltonian, xy_hamiltonian, Branch,
};
pub use lattice::{Lattice, LatticeKind, MAX_SITES, MAX_TREE_GENERATIONS};
pub use schedule::{Schedule, ScheduleValue};
