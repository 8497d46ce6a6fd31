//! Truncated multi-mode Fock space: bases, states, operators, exponentials.
//!
//! Truncation boundary: ladder operators map any target outside the basis to
//! zero. Identities are therefore asserted only on interior states, where no
//! intermediate target of the relation leaves the basis.

mod basis;
mod expm;
mod operator;
mod state;

pub use basis::{Cutoff, OccupationVector, TruncatedBasis, DEFAULT_BASIS_LIMIT};
pub use expm::{expm_apply, op_exponential};
pub use operator::{annihilation_op, commutator, creation_op, number_op, LinearOperator};
pub use state::{fidelity, inner, StateDump, StateEntry, StateVector};
