use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{Cutoff, OccupationVector, TruncatedBasis};
use crate::error::{Error, Result};

/// Complex amplitudes over a [`TruncatedBasis`].
#[derive(Clone, Debug)]
pub struct StateVector {
    basis: Arc<TruncatedBasis>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: Arc<TruncatedBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn zeros(basis: Arc<TruncatedBasis>) -> Self {
        let amplitudes = vec![Complex64::new(0.0, 0.0); basis.len()];
        Self { basis, amplitudes }
    }

    /// The number state `|occ⟩`.
    pub fn number_state(basis: Arc<TruncatedBasis>, occ: &OccupationVector) -> Result<Self> {
        let i = basis
            .index_of(occ)
            .ok_or_else(|| Error::InvalidParameter(format!("{occ} is not in the basis")))?;
        let mut s = Self::zeros(basis);
        s.amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// The all-zero occupation state.
    pub fn vacuum(basis: Arc<TruncatedBasis>) -> Result<Self> {
        let occ = OccupationVector::vacuum(basis.modes());
        Self::number_state(basis, &occ)
    }

    pub fn basis(&self) -> &Arc<TruncatedBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> Option<Complex64> {
        self.basis.index_of(occ).map(|i| self.amplitudes[i])
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `1 − ‖ψ‖²`: the probability mass the truncation dropped.
    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut out = self.clone();
        out.scale(Complex64::new(1.0 / n, 0.0));
        Ok(out)
    }

    /// Entrywise `|a|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    pub fn dump(&self, threshold: f64) -> StateDump {
        let entries = self
            .basis
            .states()
            .iter()
            .zip(&self.amplitudes)
            .filter(|(_, a)| threshold == 0.0 || a.norm() > threshold)
            .map(|(occ, a)| StateEntry {
                occupations: occ.as_slice().to_vec(),
                re: a.re,
                im: a.im,
            })
            .collect();
        StateDump {
            modes: self.basis.modes(),
            cutoff: self.basis.cutoff(),
            entries,
        }
    }

    pub fn to_json(&self, threshold: f64) -> String {
        serde_json::to_string_pretty(&self.dump(threshold)).expect("state dump is serializable")
    }
}

/// JSON form of a [`StateVector`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub modes: usize,
    pub cutoff: Cutoff,
    pub entries: Vec<StateEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateEntry {
    pub occupations: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

impl StateDump {
    /// Rebuild the state; amplitudes not listed are zero.
    pub fn into_state(self) -> Result<StateVector> {
        let basis = TruncatedBasis::new(self.modes, self.cutoff)?;
        let mut s = StateVector::zeros(basis);
        for e in self.entries {
            let occ = OccupationVector::new(e.occupations);
            let i = s
                .basis
                .index_of(&occ)
                .ok_or_else(|| Error::InvalidParameter(format!("{occ} is not in the basis")))?;
            s.amplitudes[i] = Complex64::new(e.re, e.im);
        }
        Ok(s)
    }
}

/// `⟨ψ|φ⟩`.
pub fn inner(psi: &StateVector, phi: &StateVector) -> Result<Complex64> {
    if psi.basis != phi.basis {
        return Err(Error::BasisMismatch);
    }
    Ok(psi
        .amplitudes
        .iter()
        .zip(&phi.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// `|⟨ψ|φ⟩|² / (‖ψ‖²‖φ‖²)`, clamped to `[0, 1]`.
pub fn fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    let np = psi.norm_sqr();
    let nf = phi.norm_sqr();
    if np == 0.0 || nf == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let ov = inner(psi, phi)?;
    Ok((ov.norm_sqr() / (np * nf)).clamp(0.0, 1.0))
}
