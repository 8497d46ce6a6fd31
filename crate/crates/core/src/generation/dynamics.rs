use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::displacement::boundary_mass;
use super::{Generated, LEAKAGE_LIMIT};
use crate::algebra::su2_bilinear;
use crate::error::{invalid, Error, Result};
use crate::fock::{
    annihilation_op, creation_op, expm_apply, number_op, OccupationVector, StateVector,
    TruncatedBasis,
};
use crate::DEFAULT_EXPM_TOL;

/// `M` two-level atoms driven by `μ(t) = iηe^{−iεt+iθ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelDrive {
    pub m: u32,
    /// Level gap `ε`.
    pub epsilon: f64,
    /// Coupling `η`.
    pub eta_rate: f64,
    pub theta: f64,
    pub t: f64,
}

impl TwoLevelDrive {
    /// `μ(t)`.
    pub fn mu(&self, t: f64) -> Complex64 {
        Complex64::new(0.0, self.eta_rate)
            * Complex64::from_polar(1.0, -self.epsilon * t + self.theta)
    }
}

/// Evolve `|M,0⟩` under the interaction-picture Hamiltonian
/// `μ(t)e^{iεt} J₊ + h.c.` on a two-mode basis holding the shell `M`.
///
/// For this drive the Hamiltonian is time independent, so the evolution is
/// one exponential of `−i H_I t`.
pub fn dynamical_binomial(drive: &TwoLevelDrive, basis: &Arc<TruncatedBasis>) -> Result<Generated> {
    if !(drive.t >= 0.0 && drive.t.is_finite()) {
        return Err(invalid("evolution time must be finite and non-negative"));
    }
    let real = su2_bilinear(basis, drive.m)?;
    let c = drive.mu(0.0);
    let (jp, jm) = (real.generator(1, 0), real.generator(0, 1));
    let h = jp.linear_combination(c, jm, c.conj())?;
    let gen = h.scale(Complex64::new(0.0, -drive.t));
    let start = StateVector::number_state(basis.clone(), &OccupationVector::new(vec![drive.m, 0]))?;
    let state = expm_apply(&gen, &start, DEFAULT_EXPM_TOL)?;
    let leakage = boundary_mass(&real, &state, 1, 0);
    Ok(Generated { state, leakage })
}

/// A constant classical current `j` over `duration`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentSegment {
    pub duration: f64,
    pub j: Complex64,
}

/// One photon mode of frequency `ω` driven by a piecewise-constant current.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentDrive {
    pub omega: f64,
    pub segments: Vec<CurrentSegment>,
}

impl CurrentDrive {
    fn validate(&self) -> Result<()> {
        if !self.omega.is_finite() {
            return Err(invalid("ω must be finite"));
        }
        for s in &self.segments {
            if !(s.duration >= 0.0 && s.duration.is_finite()) || !s.j.is_finite() {
                return Err(invalid(
                    "segments need finite non-negative durations and currents",
                ));
            }
        }
        Ok(())
    }

    /// `Σ|j|·duration`, a bound on `|α(t)|` over the whole drive.
    pub fn amplitude_bound(&self) -> f64 {
        self.segments.iter().map(|s| s.j.norm() * s.duration).sum()
    }
}

/// `α(t) = −i ∫₀ᵗ j(t′) e^{iωt′} dt′` over all segments, from the exact
/// per-segment antiderivative.
pub fn current_alpha(drive: &CurrentDrive) -> Complex64 {
    let mut t = 0.0;
    let mut alpha = Complex64::new(0.0, 0.0);
    for s in &drive.segments {
        let integral = if drive.omega == 0.0 {
            Complex64::new(s.duration, 0.0)
        } else {
            let w = drive.omega;
            (Complex64::from_polar(1.0, w * (t + s.duration)) - Complex64::from_polar(1.0, w * t))
                / Complex64::new(0.0, w)
        };
        alpha += Complex64::new(0.0, -1.0) * s.j * integral;
        t += s.duration;
    }
    alpha
}

/// Evolve the vacuum under `H = ωa†a + j a† + j* a`, constant on each
/// segment, in the Schrödinger picture, then rotate into the interaction
/// picture with `e^{iωN t}`.
pub fn dynamical_coherent(drive: &CurrentDrive, basis: &Arc<TruncatedBasis>) -> Result<Generated> {
    drive.validate()?;
    if basis.modes() != 1 {
        return Err(invalid("the current drive acts on a single mode"));
    }
    let up = creation_op(basis, 0)?;
    let down = annihilation_op(basis, 0)?;
    let n = number_op(basis, 0)?;
    let mut psi = StateVector::vacuum(basis.clone())?;
    let mut t = 0.0;
    let mut leakage: f64 = 0.0;
    let top = basis.max_total();
    for s in &drive.segments {
        let h = up
            .linear_combination(s.j, &down, s.j.conj())?
            .linear_combination(
                Complex64::new(1.0, 0.0),
                &n,
                Complex64::new(drive.omega, 0.0),
            )?;
        psi = expm_apply(
            &h.scale(Complex64::new(0.0, -s.duration)),
            &psi,
            DEFAULT_EXPM_TOL,
        )?;
        t += s.duration;
        let edge: f64 = basis
            .states()
            .iter()
            .zip(psi.amplitudes())
            .filter(|(occ, _)| occ[0] == top)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        leakage = leakage.max(edge);
    }
    if leakage > LEAKAGE_LIMIT {
        return Err(Error::ExcessiveLeakage {
            leakage,
            limit: LEAKAGE_LIMIT,
        });
    }
    let w = drive.omega;
    for (occ, a) in basis.states().iter().zip(psi.amplitudes_mut()) {
        *a *= Complex64::from_polar(1.0, w * t * f64::from(occ[0]));
    }
    Ok(Generated {
        state: psi,
        leakage,
    })
}
