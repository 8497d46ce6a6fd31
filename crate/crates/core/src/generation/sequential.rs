use std::sync::Arc;

use num_complex::Complex64;

use super::displacement::displace;
use crate::algebra::{su_r1_bilinear, su_r1_hp, su_rp1_bilinear, su_rp1_hp, AlgebraRealization};
use crate::error::{invalid, Result};
use crate::fock::{StateVector, TruncatedBasis};

#[derive(Clone, Debug)]
pub struct SequentialResult {
    pub state: StateVector,
    /// State after the first, `(0,1)` factor.
    pub intermediate: StateVector,
    /// Sum of the boundary leakages of all factors.
    pub leakage: f64,
}

/// Apply the `(0,1)` displacement and then the `(k,k+1)` rotations,
/// `k = 1..r−1`, to the lowest-weight state.
///
/// The first factor uses `tanh²r = Ση²` (non-compact) or
/// `tan²r = Ση²/(1−Ση²)` (compact) with phase `θ₁`; rotation `k` uses
/// `tan²r′ = Σ_{j>k} η_j² / η_k²` with phase `θ_{k+1} − θ_k`, which leaves
/// the accumulated phase `e^{iΣθ_j n_j}`.
pub fn sequential_state(
    real: &AlgebraRealization,
    eta: &[f64],
    thetas: &[f64],
) -> Result<SequentialResult> {
    let r = real.rank();
    if eta.len() != r || thetas.len() != r {
        return Err(invalid(format!("expected {r} components and phases")));
    }
    if eta[0].is_nan() || eta[0] <= 0.0 || eta.iter().any(|&e| !(e.is_finite() && e >= 0.0)) {
        return Err(invalid(
            "η₁ must be positive and the rest non-negative; permute modes so η₁ ≠ 0",
        ));
    }
    let s2: f64 = eta.iter().map(|e| e * e).sum();
    if s2.is_nan() || s2 >= 1.0 {
        return Err(invalid(format!("Ση² = {s2} must be below 1")));
    }
    let first = if real.algebra().is_compact() {
        s2.sqrt().asin()
    } else {
        s2.sqrt().atanh()
    };
    let lw = StateVector::number_state(real.basis().clone(), &real.lowest_weight()?)?;
    let step = displace(real, 1, 0, Complex64::from_polar(first, thetas[0]), &lw)?;
    let intermediate = step.state.clone();
    let mut leakage = step.leakage;
    let mut psi = step.state;
    for k in 1..r {
        let rest: f64 = eta[k..].iter().map(|e| e * e).sum();
        // η_k = 0 with mass still to move gives a full quarter turn.
        let angle = (rest.sqrt() / eta[k - 1]).atan();
        let phase = thetas[k] - thetas[k - 1];
        let out = displace(real, k + 1, k, Complex64::from_polar(angle, phase), &psi)?;
        leakage += out.leakage;
        psi = out.state;
    }
    Ok(SequentialResult {
        state: psi,
        intermediate,
        leakage,
    })
}

/// Negative multinomial state by sequential disentangling on an `r`-mode
/// reduced basis or an `r+1`-mode bilinear basis.
pub fn sequential_nms(
    eta: &[f64],
    thetas: &[f64],
    m: f64,
    basis: &Arc<TruncatedBasis>,
) -> Result<SequentialResult> {
    let r = eta.len();
    let real = if basis.modes() == r {
        su_r1_hp(basis, m)?
    } else if basis.modes() == r + 1 {
        if m.fract() != 0.0 || m < 1.0 {
            return Err(invalid("the bilinear form needs an integer M"));
        }
        su_r1_bilinear(basis, r, m as u32)?
    } else {
        return Err(invalid(format!("basis must have {r} or {} modes", r + 1)));
    };
    sequential_state(&real, eta, thetas)
}

/// Multinomial state by sequential su(2) rotations on an `r`-mode reduced
/// basis or an `r+1`-mode basis holding the shell `Σn = M`.
pub fn sequential_ms(
    eta: &[f64],
    thetas: &[f64],
    m: u32,
    basis: &Arc<TruncatedBasis>,
) -> Result<SequentialResult> {
    let r = eta.len();
    let real = if basis.modes() == r {
        su_rp1_hp(basis, m)?
    } else if basis.modes() == r + 1 {
        su_rp1_bilinear(basis, m)?
    } else {
        return Err(invalid(format!("basis must have {r} or {} modes", r + 1)));
    };
    sequential_state(&real, eta, thetas)
}
