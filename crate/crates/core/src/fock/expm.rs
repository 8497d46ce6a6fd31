use num_complex::Complex64;

use super::operator::LinearOperator;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Taylor terms allowed per scaled step before giving up.
const MAX_TERMS: usize = 60;

/// Scaled operators have 1-norm at most this before the Taylor series.
const SCALED_NORM: f64 = 0.5;

fn is_nilpotent(a: &LinearOperator) -> bool {
    a.is_strictly_lower() || a.is_strictly_upper()
}

fn check_finite(a: &LinearOperator) -> Result<()> {
    if a.entries().all(|(_, _, v)| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "operator has non-finite entries".into(),
        ))
    }
}

/// `exp(A)` with relative error at most `tol` in the 1-norm.
///
/// Strictly triangular inputs are nilpotent and use the terminating series,
/// which is exact up to rounding. Everything else uses scaling and squaring
/// of a truncated Taylor series.
pub fn op_exponential(a: &LinearOperator, tol: f64) -> Result<LinearOperator> {
    check_finite(a)?;
    let norm = a.norm_one();
    let identity = LinearOperator::identity(a.basis().clone());
    if a.nnz() == 0 {
        return Ok(identity);
    }
    if is_nilpotent(a) {
        let mut sum = identity.clone();
        let mut term = identity;
        for k in 1..=a.dim() {
            term = a.matmul(&term)?.scale(Complex64::new(1.0 / k as f64, 0.0));
            if term.nnz() == 0 {
                break;
            }
            sum = sum.add(&term)?;
        }
        return Ok(sum);
    }
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let x = a.scale(Complex64::new(2f64.powi(-squarings), 0.0));
    let xnorm = x.norm_one();
    let step_tol = tol * 2f64.powi(-squarings);
    let mut sum = identity.clone();
    let mut term = identity;
    let mut converged = false;
    for k in 1..=MAX_TERMS {
        term = x.matmul(&term)?.scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term)?;
        // Remainder after term k is bounded by ‖X‖^{k+1}/(k+1)! times a
        // geometric factor; ‖exp(X)‖ ≥ e^{−‖X‖} keeps this relative.
        let next = term.norm_one() * xnorm / (k + 1) as f64;
        let remainder = next / (1.0 - xnorm / (k + 2) as f64);
        if remainder <= step_tol * (-xnorm).exp() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations: MAX_TERMS,
        });
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    Ok(sum)
}

/// `exp(A)ψ` without forming `exp(A)`.
///
/// Nilpotent inputs use the terminating series. Otherwise the time step is
/// split into `⌈‖A‖₁⌉` pieces and each is applied by a Taylor series that
/// stops once the next term falls below `tol / steps` relative to the vector.
pub fn expm_apply(a: &LinearOperator, psi: &StateVector, tol: f64) -> Result<StateVector> {
    check_finite(a)?;
    let norm = a.norm_one();
    let mut v = psi.clone();
    if a.nnz() == 0 {
        return Ok(v);
    }
    let n = a.dim();
    let mut term = vec![Complex64::new(0.0, 0.0); n];
    let mut next = vec![Complex64::new(0.0, 0.0); n];
    if is_nilpotent(a) {
        term.copy_from_slice(psi.amplitudes());
        for k in 1..=n {
            a.apply_slice(&term, &mut next);
            let inv = 1.0 / k as f64;
            let mut any = false;
            for (t, x) in term.iter_mut().zip(&next) {
                *t = x * inv;
                any |= *t != Complex64::new(0.0, 0.0);
            }
            if !any {
                break;
            }
            for (o, t) in v.amplitudes_mut().iter_mut().zip(&term) {
                *o += t;
            }
        }
        return Ok(v);
    }
    let steps = norm.ceil().max(1.0);
    let b = a.scale(Complex64::new(1.0 / steps, 0.0));
    let step_tol = tol / steps;
    for _ in 0..steps as usize {
        term.copy_from_slice(v.amplitudes());
        let base = l1(v.amplitudes());
        let mut converged = false;
        for k in 1..=MAX_TERMS {
            b.apply_slice(&term, &mut next);
            let inv = 1.0 / k as f64;
            for (t, x) in term.iter_mut().zip(&next) {
                *t = x * inv;
            }
            for (o, t) in v.amplitudes_mut().iter_mut().zip(&term) {
                *o += t;
            }
            if l1(&term) <= 0.5 * step_tol * base {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                iterations: MAX_TERMS,
            });
        }
    }
    Ok(v)
}

fn l1(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{creation_op, Cutoff, TruncatedBasis};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let b = TruncatedBasis::new(1, Cutoff::PerMode(4)).unwrap();
        let e = op_exponential(&LinearOperator::zero(b.clone()), 1e-12).unwrap();
        assert_eq!(e.max_abs_diff(&LinearOperator::identity(b)).unwrap(), 0.0);
    }

    #[test]
    fn exp_of_diagonal() {
        let b = TruncatedBasis::new(1, Cutoff::PerMode(4)).unwrap();
        let d = LinearOperator::diagonal(b.clone(), |o| c(f64::from(o[0]) - 1.5));
        let e = op_exponential(&d, 1e-12).unwrap();
        for i in 0..5 {
            let want = (i as f64 - 1.5).exp();
            assert!((e.get(i, i).re - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn two_by_two_rotation() {
        let b = TruncatedBasis::new(1, Cutoff::PerMode(1)).unwrap();
        let x = 0.7;
        // ηt(J₊ − J₋) on the spin-½ block: J₊ = |1⟩⟨0|.
        let g = LinearOperator::from_triplets(b, vec![(1, 0, c(x)), (0, 1, c(-x))]);
        let e = op_exponential(&g, 1e-15).unwrap();
        assert!((e.get(0, 0) - c(x.cos())).norm() < 1e-13);
        assert!((e.get(0, 1) - c(-x.sin())).norm() < 1e-13);
        assert!((e.get(1, 0) - c(x.sin())).norm() < 1e-13);
        assert!((e.get(1, 1) - c(x.cos())).norm() < 1e-13);
    }

    #[test]
    fn nilpotent_raising_series_is_exact() {
        let b = TruncatedBasis::new(1, Cutoff::PerMode(12)).unwrap();
        let z = Complex64::new(0.3, -0.4);
        let g = creation_op(&b, 0).unwrap().scale(z);
        let e = op_exponential(&g, 1e-12).unwrap();
        let v = StateVector::vacuum(b).unwrap();
        let out = e.apply(&v).unwrap();
        let via_apply = expm_apply(&g, &v, 1e-12).unwrap();
        let mut fact = 1.0f64;
        for n in 0..=12u32 {
            if n > 0 {
                fact *= f64::from(n);
            }
            let want = z.powu(n) / fact.sqrt();
            assert!((out.amplitudes()[n as usize] - want).norm() < 1e-15);
            assert!((via_apply.amplitudes()[n as usize] - want).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_matches_full_exponential() {
        let b = TruncatedBasis::new(2, Cutoff::Total(6)).unwrap();
        let a0 = creation_op(&b, 0).unwrap();
        let a1 = creation_op(&b, 1).unwrap();
        let k = a0.matmul(&a1).unwrap().scale(Complex64::new(0.6, 0.2));
        let g = k.sub(&k.adjoint()).unwrap();
        let e = op_exponential(&g, 1e-13).unwrap();
        let v = StateVector::vacuum(b).unwrap();
        let full = e.apply(&v).unwrap();
        let direct = expm_apply(&g, &v, 1e-13).unwrap();
        for (x, y) in full.amplitudes().iter().zip(direct.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn non_finite_input_rejected() {
        let b = TruncatedBasis::new(1, Cutoff::PerMode(1)).unwrap();
        let g = LinearOperator::from_triplets(b, vec![(0, 1, c(f64::NAN)), (1, 0, c(1.0))]);
        assert!(op_exponential(&g, 1e-12).is_err());
    }
}
