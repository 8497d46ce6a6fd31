use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{OccupationVector, StateVector, TruncatedBasis};

/// Constraint tying the `r+1`-mode parent to the `r` reduced modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// `n₀ + Σ′n_j = M`; `‖n′⟩ = |M − Σn′, n′⟩`.
    FixedTotal,
    /// `n₀ − Σ′n_j = M − 1`; `‖n′⟩ = |M − 1 + Σn′, n′⟩`.
    FixedDifference,
}

/// The constrained shell of a parent basis, in bijection with a reduced basis.
#[derive(Clone, Debug)]
pub struct ConstraintSubspace {
    parent: Arc<TruncatedBasis>,
    reduced: Arc<TruncatedBasis>,
    constraint: Constraint,
    m: u32,
    /// Parent index of each reduced state, when its embedding is present.
    parent_index: Vec<Option<usize>>,
}

impl ConstraintSubspace {
    pub fn new(
        parent: Arc<TruncatedBasis>,
        reduced: Arc<TruncatedBasis>,
        constraint: Constraint,
        m: u32,
    ) -> Result<Self> {
        if parent.modes() != reduced.modes() + 1 {
            return Err(invalid(
                "parent must have one more mode than the reduced basis",
            ));
        }
        if m == 0 {
            return Err(invalid("M must be a positive integer"));
        }
        let mut sub = Self {
            parent,
            reduced,
            constraint,
            m,
            parent_index: Vec::new(),
        };
        sub.parent_index = sub
            .reduced
            .states()
            .iter()
            .map(|s| sub.embed(s).and_then(|e| sub.parent.index_of(&e)))
            .collect();
        Ok(sub)
    }

    pub fn parent(&self) -> &Arc<TruncatedBasis> {
        &self.parent
    }

    pub fn reduced(&self) -> &Arc<TruncatedBasis> {
        &self.reduced
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `n₀` for reduced occupations `n′`, if non-negative.
    fn n0(&self, n_prime: &[u32]) -> Option<u32> {
        let s: u32 = n_prime.iter().sum();
        match self.constraint {
            Constraint::FixedTotal => self.m.checked_sub(s),
            Constraint::FixedDifference => Some(self.m - 1 + s),
        }
    }

    pub fn embed(&self, n_prime: &OccupationVector) -> Option<OccupationVector> {
        let n0 = self.n0(n_prime.as_slice())?;
        let mut v = Vec::with_capacity(n_prime.modes() + 1);
        v.push(n0);
        v.extend_from_slice(n_prime.as_slice());
        Some(OccupationVector::new(v))
    }

    /// Inverse of [`ConstraintSubspace::embed`] on states meeting the
    /// constraint.
    pub fn project(&self, full: &OccupationVector) -> Option<OccupationVector> {
        let rest = OccupationVector::new(full.as_slice()[1..].to_vec());
        (self.n0(rest.as_slice()) == Some(full[0])).then_some(rest)
    }

    /// `(reduced index, parent index)` for every shell state present in both.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent_index
            .iter()
            .enumerate()
            .filter_map(|(k, p)| p.map(|p| (k, p)))
    }

    pub fn parent_index(&self, reduced_index: usize) -> Option<usize> {
        self.parent_index[reduced_index]
    }

    pub fn dimension(&self) -> usize {
        self.pairs().count()
    }

    /// Reduced state carried into the parent basis.
    pub fn embed_state(&self, psi: &StateVector) -> Result<StateVector> {
        if **psi.basis() != *self.reduced {
            return Err(Error::BasisMismatch);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.parent.len()];
        for (k, a) in psi.amplitudes().iter().enumerate() {
            match self.parent_index[k] {
                Some(p) => out[p] = *a,
                None if a.norm() != 0.0 => {
                    return Err(Error::ShellAbsent(format!(
                        "embedding of {} is outside the parent basis",
                        self.reduced.state(k)
                    )))
                }
                None => {}
            }
        }
        StateVector::new(self.parent.clone(), out)
    }

    /// Shell amplitudes of a parent state in reduced coordinates; amplitudes
    /// off the shell are dropped.
    pub fn project_state(&self, psi: &StateVector) -> Result<StateVector> {
        if **psi.basis() != *self.parent {
            return Err(Error::BasisMismatch);
        }
        let amps = self
            .parent_index
            .iter()
            .map(|p| p.map_or(Complex64::new(0.0, 0.0), |p| psi.amplitudes()[p]))
            .collect();
        StateVector::new(self.reduced.clone(), amps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Cutoff;

    #[test]
    fn compact_shell_dimension() {
        let parent = TruncatedBasis::new(3, Cutoff::Shell(3)).unwrap();
        let reduced = TruncatedBasis::new(2, Cutoff::Total(3)).unwrap();
        let sub =
            ConstraintSubspace::new(parent.clone(), reduced, Constraint::FixedTotal, 3).unwrap();
        assert_eq!(sub.dimension(), 10);
        for s in parent.states() {
            assert_eq!(sub.embed(&sub.project(s).unwrap()).as_ref(), Some(s));
        }
    }

    #[test]
    fn difference_shell() {
        let parent = TruncatedBasis::new(2, Cutoff::Total(8)).unwrap();
        let reduced = TruncatedBasis::new(1, Cutoff::PerMode(5)).unwrap();
        let sub = ConstraintSubspace::new(parent, reduced, Constraint::FixedDifference, 3).unwrap();
        // n₀ = 2 + n, total 2 + 2n ≤ 8.
        assert_eq!(sub.dimension(), 4);
        let e = sub.embed(&OccupationVector::new(vec![2])).unwrap();
        assert_eq!(e.as_slice(), &[4, 2]);
        assert!(sub.project(&OccupationVector::new(vec![4, 1])).is_none());
    }
}
