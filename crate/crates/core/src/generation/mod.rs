//! Generating the coherent-state families by operator exponentials.
//!
//! Each path here (pure-raising exponential, displacement, sequential
//! rotations, Hamiltonian evolution) is an independent construction of a
//! state that [`crate::states`] builds from its series, so agreement of the
//! two is the identity being checked.

mod contraction;
mod displacement;
mod dynamics;
mod sequential;

use serde::{Deserialize, Serialize};

use crate::fock::StateVector;

pub use contraction::{contraction_check, ContractionRow};
pub use displacement::{
    disentangling_residual_su2, displace, displacement_state, exp_form_state,
    operator_identity_check, su11_zeta, su2_zeta, IdentityFactor, IdentityReport, IdentityRow,
};
pub use dynamics::{
    current_alpha, dynamical_binomial, dynamical_coherent, CurrentDrive, CurrentSegment,
    TwoLevelDrive,
};
pub use sequential::{sequential_ms, sequential_nms, sequential_state, SequentialResult};

/// Guard band above the series cutoff for displacement generation.
pub const DISPLACEMENT_GUARD: u32 = 16;

/// Largest boundary leakage tolerated by unitary generation.
pub const LEAKAGE_LIMIT: f64 = 1e-8;

/// A generated state with the norm² found on the truncation boundary.
#[derive(Clone, Debug)]
pub struct Generated {
    pub state: StateVector,
    /// Norm² on basis states from which the generator leaves the basis.
    pub leakage: f64,
}

/// One row of a fidelity/leakage sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub params: serde_json::Value,
    pub fidelity: f64,
    pub leakage: f64,
    pub cutoff: u32,
}
