use std::sync::Arc;

use statrs::function::factorial::ln_factorial;

use crate::error::{invalid, Error, Result};
use crate::fock::{Cutoff, OccupationVector, TruncatedBasis};

fn check_alphas(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(invalid("need at least one Poisson mode"));
    }
    for &a in alphas {
        if !(a.is_finite() && a >= 0.0) {
            return Err(invalid(format!(
                "alpha components must be non-negative, got {a}"
            )));
        }
    }
    Ok(())
}

/// `Σ_j n_j ln α_j² − ln n_j!`, the shell-dependent part of the joint law.
fn ln_weight(alphas: &[f64], n: &[u32]) -> f64 {
    alphas
        .iter()
        .zip(n)
        .map(|(&a, &k)| {
            if k == 0 {
                0.0
            } else {
                f64::from(k) * (a * a).ln() - ln_factorial(u64::from(k))
            }
        })
        .sum()
}

/// `ln Π_j e^{−α_j²} α_j^{2n_j}/n_j!` for independent Poisson modes with
/// amplitudes `α_j ≥ 0`.
pub fn multiple_poisson_ln_pmf(alphas: &[f64], n: &[u32]) -> Result<f64> {
    check_alphas(alphas)?;
    if n.len() != alphas.len() {
        return Err(Error::DimensionMismatch {
            expected: alphas.len(),
            got: n.len(),
        });
    }
    let norm: f64 = alphas.iter().map(|a| a * a).sum();
    Ok(ln_weight(alphas, n) - norm)
}

pub fn multiple_poisson_pmf(alphas: &[f64], n: &[u32]) -> Result<f64> {
    multiple_poisson_ln_pmf(alphas, n).map(f64::exp)
}

/// A pmf on the fixed-total shell `Σn_j = M`.
#[derive(Clone, Debug)]
pub struct ShellPmf {
    pub basis: Arc<TruncatedBasis>,
    pub probabilities: Vec<f64>,
}

impl ShellPmf {
    pub fn get(&self, occ: &OccupationVector) -> Option<f64> {
        self.basis.index_of(occ).map(|i| self.probabilities[i])
    }
}

/// Multiple-Poisson law conditioned on `Σn_j = M`, renormalised.
pub fn slice_to_shell(alphas: &[f64], m: u32) -> Result<ShellPmf> {
    check_alphas(alphas)?;
    let basis = TruncatedBasis::new(alphas.len(), Cutoff::Shell(m))?;
    let logs: Vec<f64> = basis
        .states()
        .iter()
        .map(|s| ln_weight(alphas, s.as_slice()))
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Err(Error::ZeroMassShell);
    }
    let lse = top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
    let probabilities = logs.iter().map(|l| (l - lse).exp()).collect();
    Ok(ShellPmf {
        basis,
        probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_amplitudes_give_fair_binomial() {
        let s = slice_to_shell(&[0.8, 0.8], 2).unwrap();
        // Shell order: (0,2), (1,1), (2,0).
        for (p, want) in s.probabilities.iter().zip([0.25, 0.5, 0.25]) {
            assert!((p - want).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_amplitude_gives_point_mass() {
        let s = slice_to_shell(&[1.3, 0.0], 4).unwrap();
        assert_eq!(s.get(&OccupationVector::new(vec![4, 0])), Some(1.0));
        assert_eq!(s.get(&OccupationVector::new(vec![3, 1])), Some(0.0));
    }

    #[test]
    fn empty_shell_mass_is_an_error() {
        assert!(matches!(
            slice_to_shell(&[0.0, 0.0], 2),
            Err(Error::ZeroMassShell)
        ));
        let s = slice_to_shell(&[0.0, 0.0], 0).unwrap();
        assert_eq!(s.probabilities, vec![1.0]);
    }

    #[test]
    fn product_of_poissons() {
        let p = multiple_poisson_pmf(&[1.0, 2f64.sqrt()], &[0, 2]).unwrap();
        let want = (-1.0f64).exp() * 2.0 * (-2.0f64).exp();
        assert!((p - want).abs() < 1e-16);
    }
}
