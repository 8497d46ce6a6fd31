//! Lie-algebra realizations on truncated Fock spaces.
//!
//! Every realization is stored as a square array of generators `E_ij`,
//! `i, j = 0..=r`, obeying
//!
//! ```text
//! [E_ij, E_kl] = δ_jk g_j E_il − δ_li g_i E_kj
//! ```
//!
//! with metric `g = diag(±1, 1, …, 1)`. The compact algebras su(2) and
//! su(r+1) take `g_0 = +1` and `E_ij = a_i† a_j`. The non-compact algebras
//! su(1,1) and su(r,1) take `g_0 = −1`, which swaps the roles of `a_0` and
//! `a_0†`: `E_j0 = a_j† a_0† = K_{+j}`, `E_0j = a_0 a_j = K_{−j}` and
//! `E_00 = N_0 + 1`.
//!
//! The Holstein-Primakoff forms act on `r` reduced modes and replace mode 0
//! by the square-root factor `√(M ∓ ΣN)`, with `E_00 = M ∓ ΣN`.

mod constraint;
mod realization;
mod verify;

pub use constraint::{Constraint, ConstraintSubspace};
pub use realization::{
    su11_bilinear, su11_hp, su2_bilinear, su2_hp, su_r1_bilinear, su_r1_hp, su_rp1_bilinear,
    su_rp1_hp, Algebra, AlgebraRealization, Combo, Form,
};
pub use verify::{
    conservation_check, intertwining_check, lowest_weight_check, verify_algebra, Relation,
    RelationReport,
};
