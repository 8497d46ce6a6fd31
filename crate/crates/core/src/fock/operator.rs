use std::sync::Arc;

use num_complex::Complex64;

use super::basis::{OccupationVector, TruncatedBasis};
use super::state::StateVector;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square complex matrix over a [`TruncatedBasis`], stored in CSR form.
///
/// Column indices within each row are strictly increasing and explicit zeros
/// are not stored, so two operators with the same entries have the same
/// representation.
#[derive(Clone, Debug)]
pub struct LinearOperator {
    basis: Arc<TruncatedBasis>,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl LinearOperator {
    pub fn zero(basis: Arc<TruncatedBasis>) -> Self {
        let n = basis.len();
        Self {
            basis,
            indptr: vec![0; n + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(basis: Arc<TruncatedBasis>) -> Self {
        Self::diagonal(basis, |_| Complex64::new(1.0, 0.0))
    }

    /// Diagonal operator with entry `f(occ)` on each basis state.
    pub fn diagonal<F>(basis: Arc<TruncatedBasis>, f: F) -> Self
    where
        F: Fn(&OccupationVector) -> Complex64,
    {
        let mut indptr = Vec::with_capacity(basis.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for (i, occ) in basis.states().iter().enumerate() {
            let v = f(occ);
            if v != ZERO {
                indices.push(i);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Self {
            basis,
            indptr,
            indices,
            values,
        }
    }

    /// Build column by column: `action(occ)` lists `(target, coefficient)`
    /// pairs for the image of `|occ⟩`. Targets outside the basis are dropped.
    pub fn from_action<F>(basis: Arc<TruncatedBasis>, action: F) -> Self
    where
        F: Fn(&OccupationVector) -> Vec<(OccupationVector, Complex64)>,
    {
        let mut triplets = Vec::new();
        for (j, occ) in basis.states().iter().enumerate() {
            for (target, c) in action(occ) {
                if let Some(i) = basis.index_of(&target) {
                    triplets.push((i, j, c));
                }
            }
        }
        Self::from_triplets(basis, triplets)
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        basis: Arc<TruncatedBasis>,
        mut triplets: Vec<(usize, usize, Complex64)>,
    ) -> Self {
        let n = basis.len();
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(triplets.len());
        for (i, j, v) in triplets {
            assert!(i < n && j < n, "triplet index out of range");
            match merged.last_mut() {
                Some(last) if (last.0, last.1) == (i, j) => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|t| t.2 != ZERO);
        let mut indptr = vec![0usize; n + 1];
        for &(i, _, _) in &merged {
            indptr[i + 1] += 1;
        }
        for i in 0..n {
            indptr[i + 1] += indptr[i];
        }
        let (indices, values) = merged.into_iter().map(|(_, j, v)| (j, v)).unzip();
        Self {
            basis,
            indptr,
            indices,
            values,
        }
    }

    pub fn basis(&self) -> &Arc<TruncatedBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterate the stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim()).flat_map(move |i| {
            (self.indptr[i]..self.indptr[i + 1]).map(move |k| (i, self.indices[k], self.values[k]))
        })
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.indptr[i]..self.indptr[i + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let cols = &self.indices[self.indptr[i]..self.indptr[i + 1]];
        match cols.binary_search(&j) {
            Ok(k) => self.values[self.indptr[i] + k],
            Err(_) => ZERO,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.dim();
        let mut out = vec![vec![ZERO; n]; n];
        for (i, j, v) in self.entries() {
            out[i][j] = v;
        }
        out
    }

    fn check_basis(&self, other: &Arc<TruncatedBasis>) -> Result<()> {
        if Arc::ptr_eq(&self.basis, other) || *self.basis == **other {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// `y = A x` on raw amplitude slices.
    pub fn apply_slice(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.indptr[i]..self.indptr[i + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            *yi = acc;
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.check_basis(psi.basis())?;
        let mut out = vec![ZERO; self.dim()];
        self.apply_slice(psi.amplitudes(), &mut out);
        StateVector::new(self.basis.clone(), out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        let mut counts = vec![0usize; n + 1];
        for &j in &self.indices {
            counts[j + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0usize; self.nnz()];
        let mut values = vec![ZERO; self.nnz()];
        // Rows are visited in increasing order, so each transposed row
        // receives its column indices already sorted.
        for i in 0..n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                let j = self.indices[k];
                let dst = next[j];
                indices[dst] = i;
                values[dst] = self.values[k].conj();
                next[j] += 1;
            }
        }
        Self {
            basis: self.basis.clone(),
            indptr,
            indices,
            values,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == ZERO {
            return Self::zero(self.basis.clone());
        }
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= c;
        }
        out
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.check_basis(&other.basis)?;
        let n = self.dim();
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for i in 0..n {
            let (mut p, pe) = (self.indptr[i], self.indptr[i + 1]);
            let (mut q, qe) = (other.indptr[i], other.indptr[i + 1]);
            while p < pe || q < qe {
                let jp = if p < pe { self.indices[p] } else { usize::MAX };
                let jq = if q < qe { other.indices[q] } else { usize::MAX };
                let (j, v) = if jp < jq {
                    p += 1;
                    (jp, a * self.values[p - 1])
                } else if jq < jp {
                    q += 1;
                    (jq, b * other.values[q - 1])
                } else {
                    p += 1;
                    q += 1;
                    (jp, a * self.values[p - 1] + b * other.values[q - 1])
                };
                if v != ZERO {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Ok(Self {
            basis: self.basis.clone(),
            indptr,
            indices,
            values,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        self.linear_combination(one, other, one)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        self.linear_combination(one, other, -one)
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_basis(&other.basis)?;
        let n = self.dim();
        let mut acc = vec![ZERO; n];
        let mut marker = vec![usize::MAX; n];
        let mut cols: Vec<usize> = Vec::new();
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for i in 0..n {
            cols.clear();
            for k in self.indptr[i]..self.indptr[i + 1] {
                let mid = self.indices[k];
                let a = self.values[k];
                for l in other.indptr[mid]..other.indptr[mid + 1] {
                    let j = other.indices[l];
                    if marker[j] != i {
                        marker[j] = i;
                        acc[j] = ZERO;
                        cols.push(j);
                    }
                    acc[j] += a * other.values[l];
                }
            }
            cols.sort_unstable();
            for &j in &cols {
                if acc[j] != ZERO {
                    indices.push(j);
                    values.push(acc[j]);
                }
            }
            indptr.push(indices.len());
        }
        Ok(Self {
            basis: self.basis.clone(),
            indptr,
            indices,
            values,
        })
    }

    /// Largest absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut cols = vec![0.0; self.dim()];
        for (&j, v) in self.indices.iter().zip(&self.values) {
            cols[j] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute entry among the columns selected by `keep`, with its
    /// `(row, col)` position.
    pub fn max_abs_in_columns<F>(&self, keep: F) -> (f64, Option<(usize, usize)>)
    where
        F: Fn(usize) -> bool,
    {
        let mut best = (0.0, None);
        for (i, j, v) in self.entries() {
            if keep(j) && (best.1.is_none() || v.norm() > best.0) {
                best = (v.norm(), Some((i, j)));
            }
        }
        best
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn is_strictly_lower(&self) -> bool {
        self.entries().all(|(i, j, _)| i > j)
    }

    pub fn is_strictly_upper(&self) -> bool {
        self.entries().all(|(i, j, _)| i < j)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint())
            .map(|d| d <= tol)
            .unwrap_or(false)
    }
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &LinearOperator, b: &LinearOperator) -> Result<LinearOperator> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

fn check_mode(basis: &TruncatedBasis, mode: usize) -> Result<()> {
    if mode >= basis.modes() {
        Err(Error::ModeOutOfRange {
            mode,
            modes: basis.modes(),
        })
    } else {
        Ok(())
    }
}

/// `a†_mode` with entries `⟨n+e|a†|n⟩ = √(n_mode+1)`.
pub fn creation_op(basis: &Arc<TruncatedBasis>, mode: usize) -> Result<LinearOperator> {
    check_mode(basis, mode)?;
    let mut shift = vec![0i32; basis.modes()];
    shift[mode] = 1;
    Ok(LinearOperator::from_action(basis.clone(), |occ| {
        let target = occ.shifted(&shift).expect("raising never underflows");
        let c = f64::from(occ[mode] + 1).sqrt();
        vec![(target, Complex64::new(c, 0.0))]
    }))
}

/// `a_mode`, the exact adjoint of [`creation_op`].
pub fn annihilation_op(basis: &Arc<TruncatedBasis>, mode: usize) -> Result<LinearOperator> {
    Ok(creation_op(basis, mode)?.adjoint())
}

/// `N_mode`, diagonal with the occupations of `mode`.
pub fn number_op(basis: &Arc<TruncatedBasis>, mode: usize) -> Result<LinearOperator> {
    check_mode(basis, mode)?;
    Ok(LinearOperator::diagonal(basis.clone(), |occ| {
        Complex64::new(f64::from(occ[mode]), 0.0)
    }))
}
