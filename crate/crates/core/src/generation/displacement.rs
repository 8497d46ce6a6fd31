use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Generated, LEAKAGE_LIMIT};
use crate::algebra::{su2_hp, Algebra, AlgebraRealization, Form};
use crate::distributions::NegBinomialParams;
use crate::error::{invalid, Error, Result};
use crate::fock::{
    creation_op, expm_apply, op_exponential, Cutoff, LinearOperator, StateVector, TruncatedBasis,
};
use crate::states::tail_mass;
use crate::{DEFAULT_EXPM_TOL, DEFAULT_TAIL_TOL};

/// `ζ_C = e^{iθ} artanh η` for su(1,1).
pub fn su11_zeta(eta: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(eta.atanh(), theta)
}

/// `ζ_C = e^{iθ} arctan(η/√(1−η²))` for su(2).
pub fn su2_zeta(eta: f64, theta: f64) -> Complex64 {
    Complex64::from_polar((eta / (1.0 - eta * eta).sqrt()).atan(), theta)
}

fn lowest_weight_state(real: &AlgebraRealization) -> Result<StateVector> {
    StateVector::number_state(real.basis().clone(), &real.lowest_weight()?)
}

fn require_rank_one_hp(real: &AlgebraRealization) -> Result<()> {
    if real.form() == Form::HolsteinPrimakoff
        && real.rank() == 1
        && matches!(real.algebra(), Algebra::Su11 | Algebra::Su2)
    {
        Ok(())
    } else {
        Err(invalid(
            "expected a single-mode su(1,1) or su(2) reduced realization",
        ))
    }
}

/// `(1−|η|²)^{M/2} exp(c 𝒦₊)‖0⟩` with `c = η_C` for su(1,1) and
/// `c = η_C/√(1−|η|²)` for su(2). The raising operator is nilpotent on the
/// truncated basis, so the exponential is an exact finite series.
pub fn exp_form_state(real: &AlgebraRealization, eta_c: Complex64) -> Result<StateVector> {
    require_rank_one_hp(real)?;
    let e2 = eta_c.norm_sqr();
    if e2.is_nan() || e2 >= 1.0 {
        return Err(Error::Domain(format!("|η_C|² = {e2} must be below 1")));
    }
    let m = real.m();
    if real.algebra() == Algebra::Su11 && e2 > 0.0 {
        let tail = tail_mass(
            &NegBinomialParams::new(e2, m)?,
            u64::from(real.basis().max_total()),
        );
        if tail >= DEFAULT_TAIL_TOL {
            return Err(Error::CutoffTooSmall {
                tail,
                tol: DEFAULT_TAIL_TOL,
            });
        }
    }
    let c = match real.algebra() {
        Algebra::Su11 => eta_c,
        _ => eta_c / (1.0 - e2).sqrt(),
    };
    let raising = real.generator(1, 0).scale(c);
    let u = op_exponential(&raising, DEFAULT_EXPM_TOL)?;
    let mut psi = u.apply(&lowest_weight_state(real)?)?;
    psi.scale(Complex64::new((1.0 - e2).powf(m / 2.0), 0.0));
    Ok(psi)
}

/// Diagonal factor of the ladder identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityFactor {
    /// `g(N) = √(M+N)`.
    SqrtMPlusN,
    /// `g(N) = √(M−N)`, clamped at zero.
    SqrtMMinusN,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub n: u32,
    pub residual: f64,
    pub lhs_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub factor: IdentityFactor,
    pub m: f64,
    pub rows: Vec<IdentityRow>,
    pub max_residual: f64,
}

/// `(b†g(N))ⁿ|0⟩` against `(b†)ⁿ g(0)⋯g(n−1)|0⟩` for `n = 0..=n_max`.
pub fn operator_identity_check(
    factor: IdentityFactor,
    m: f64,
    n_max: u32,
) -> Result<IdentityReport> {
    if !(m.is_finite() && m > 0.0) {
        return Err(invalid("M must be positive"));
    }
    let basis = TruncatedBasis::new(1, Cutoff::PerMode(n_max))?;
    let g = |n: f64| match factor {
        IdentityFactor::SqrtMPlusN => (m + n).sqrt(),
        IdentityFactor::SqrtMMinusN => (m - n).max(0.0).sqrt(),
    };
    let up = creation_op(&basis, 0)?;
    let diag = LinearOperator::diagonal(basis.clone(), |occ| {
        Complex64::new(g(f64::from(occ[0])), 0.0)
    });
    let ladder = up.matmul(&diag)?;
    let mut lhs = StateVector::vacuum(basis.clone())?;
    let mut bare = StateVector::vacuum(basis.clone())?;
    let mut prod = 1.0;
    let mut rows = Vec::new();
    for n in 0..=n_max {
        if n > 0 {
            lhs = ladder.apply(&lhs)?;
            bare = up.apply(&bare)?;
            prod *= g(f64::from(n - 1));
        }
        let residual = lhs
            .amplitudes()
            .iter()
            .zip(bare.amplitudes())
            .map(|(a, b)| (a - b * prod).norm())
            .fold(0.0, f64::max);
        rows.push(IdentityRow {
            n,
            residual,
            lhs_norm: lhs.norm(),
        });
    }
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(IdentityReport {
        factor,
        m,
        rows,
        max_residual,
    })
}

/// Norm² of `psi` on states from which `E_ij` or `E_ji` leaves the basis.
pub(crate) fn boundary_mass(
    real: &AlgebraRealization,
    psi: &StateVector,
    i: usize,
    j: usize,
) -> f64 {
    real.basis()
        .states()
        .iter()
        .zip(psi.amplitudes())
        .filter(|(s, _)| {
            [(i, j), (j, i)].iter().any(|&(a, b)| {
                real.exact_action(a, b, s.as_slice())
                    .is_some_and(|(t, _)| real.index_of_i64(&t).is_none())
            })
        })
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// `exp(ζ E_ij − ζ* E_ji) ψ`.
pub fn displace(
    real: &AlgebraRealization,
    i: usize,
    j: usize,
    zeta: Complex64,
    psi: &StateVector,
) -> Result<Generated> {
    if i == j || i > real.rank() || j > real.rank() {
        return Err(invalid("displacement needs two distinct generator indices"));
    }
    let gen = real
        .generator(i, j)
        .linear_combination(zeta, real.generator(j, i), -zeta.conj())?;
    let state = expm_apply(&gen, psi, DEFAULT_EXPM_TOL)?;
    let leakage = boundary_mass(real, &state, i, j).max(boundary_mass(real, psi, i, j));
    if leakage > LEAKAGE_LIMIT {
        return Err(Error::ExcessiveLeakage {
            leakage,
            limit: LEAKAGE_LIMIT,
        });
    }
    Ok(Generated { state, leakage })
}

/// `exp(ζ_C 𝒦₊ − ζ_C* 𝒦₋)` (or the su(2) analogue) on the lowest weight.
pub fn displacement_state(real: &AlgebraRealization, zeta: Complex64) -> Result<Generated> {
    if real.rank() != 1 {
        return Err(invalid("displacement_state needs a rank-one realization"));
    }
    displace(real, 1, 0, zeta, &lowest_weight_state(real)?)
}

/// Largest entry of `exp(ζJ₊ − ζ*J₋) − exp(τJ₊) exp(ln(1+|τ|²) J₀) exp(−τ*J₋)`
/// with `τ = e^{i arg ζ} tan|ζ|`, spin `M/2`.
pub fn disentangling_residual_su2(m: u32, zeta: Complex64) -> Result<f64> {
    let basis = TruncatedBasis::new(1, Cutoff::PerMode(m))?;
    let real = su2_hp(&basis, m)?;
    let (jp, jm) = (real.generator(1, 0), real.generator(0, 1));
    let j0 = real.named("J0").expect("su(2) has J0");
    let tol = DEFAULT_EXPM_TOL * 1e-3;
    let left = op_exponential(&jp.linear_combination(zeta, jm, -zeta.conj())?, tol)?;
    let tau = Complex64::from_polar(zeta.norm().tan(), zeta.arg());
    let right = op_exponential(&jp.scale(tau), tol)?
        .matmul(&op_exponential(
            &j0.scale(Complex64::new((1.0 + tau.norm_sqr()).ln(), 0.0)),
            tol,
        )?)?
        .matmul(&op_exponential(&jm.scale(-tau.conj()), tol)?)?;
    left.max_abs_diff(&right)
}
