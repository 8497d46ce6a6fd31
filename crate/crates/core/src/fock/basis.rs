use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest basis [`TruncatedBasis::new`] will enumerate.
pub const DEFAULT_BASIS_LIMIT: usize = 2_000_000;

/// Occupation numbers `(n_0, n_1, ..., n_{modes-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccupationVector(Vec<u32>);

impl OccupationVector {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `self + shift`, or `None` when some entry would turn negative.
    pub fn shifted(&self, shift: &[i32]) -> Option<OccupationVector> {
        debug_assert_eq!(shift.len(), self.0.len());
        self.0
            .iter()
            .zip(shift)
            .map(|(&n, &d)| u32::try_from(i64::from(n) + i64::from(d)).ok())
            .collect::<Option<Vec<_>>>()
            .map(OccupationVector)
    }

    /// Graded lexicographic order: total occupation first, then lexicographic.
    pub fn graded_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl From<Vec<u32>> for OccupationVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl std::ops::Index<usize> for OccupationVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// Which occupation vectors a basis keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cutoff {
    /// Every mode holds at most this many quanta.
    PerMode(u32),
    /// The total occupation is at most this.
    Total(u32),
    /// The total occupation equals this exactly (a fixed-M shell).
    Shell(u32),
}

impl Cutoff {
    fn admits(&self, total: u32) -> bool {
        match *self {
            Cutoff::PerMode(_) => true,
            Cutoff::Total(t) => total <= t,
            Cutoff::Shell(m) => total == m,
        }
    }
}

/// Enumerated occupation-number basis in graded lexicographic order.
#[derive(Clone, Debug)]
pub struct TruncatedBasis {
    modes: usize,
    cutoff: Cutoff,
    states: Vec<OccupationVector>,
    index: HashMap<OccupationVector, usize>,
}

impl PartialEq for TruncatedBasis {
    // The state list is a pure function of (modes, cutoff).
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes && self.cutoff == other.cutoff
    }
}

impl TruncatedBasis {
    pub fn new(modes: usize, cutoff: Cutoff) -> Result<Arc<Self>> {
        Self::with_limit(modes, cutoff, DEFAULT_BASIS_LIMIT)
    }

    pub fn with_limit(modes: usize, cutoff: Cutoff, limit: usize) -> Result<Arc<Self>> {
        if modes == 0 {
            return Err(Error::InvalidParameter(
                "basis needs at least one mode".into(),
            ));
        }
        let size = Self::count(modes, cutoff);
        if size == 0 {
            return Err(Error::EmptyBasis);
        }
        if size > limit as u128 {
            return Err(Error::BasisTooLarge { size, limit });
        }
        let (max_each, max_total) = match cutoff {
            Cutoff::PerMode(c) => (c, c.saturating_mul(modes as u32)),
            Cutoff::Total(t) => (t, t),
            Cutoff::Shell(m) => (m, m),
        };
        let mut states = Vec::with_capacity(size as usize);
        let mut scratch = vec![0u32; modes];
        for total in 0..=max_total {
            if cutoff.admits(total) {
                compositions(total, max_each, 0, &mut scratch, &mut states);
            }
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Arc::new(Self {
            modes,
            cutoff,
            states,
            index,
        }))
    }

    /// Number of states the cutoff admits, without enumerating them.
    pub fn count(modes: usize, cutoff: Cutoff) -> u128 {
        match cutoff {
            Cutoff::PerMode(c) => (c as u128 + 1)
                .checked_pow(modes as u32)
                .unwrap_or(u128::MAX),
            Cutoff::Total(t) => binomial_u128(t as u128 + modes as u128, modes as u128),
            Cutoff::Shell(m) => binomial_u128(m as u128 + modes as u128 - 1, modes as u128 - 1),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[OccupationVector] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &OccupationVector {
        &self.states[i]
    }

    pub fn index_of(&self, occ: &OccupationVector) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn index_of_slice(&self, occ: &[u32]) -> Option<usize> {
        // HashMap<OccupationVector> cannot be queried by slice without a
        // Borrow impl; the clone is cheap for the mode counts used here.
        self.index.get(&OccupationVector(occ.to_vec())).copied()
    }

    pub fn contains(&self, occ: &OccupationVector) -> bool {
        self.index.contains_key(occ)
    }

    /// Largest total occupation present in the basis.
    pub fn max_total(&self) -> u32 {
        self.states.last().map(OccupationVector::total).unwrap_or(0)
    }

    /// Index range of the states with total occupation `total`.
    ///
    /// Contiguous because of the graded ordering.
    pub fn shell_range(&self, total: u32) -> std::ops::Range<usize> {
        let start = self.states.partition_point(|s| s.total() < total);
        let end = self.states.partition_point(|s| s.total() <= total);
        start..end
    }
}

/// Append all compositions of `total` into the remaining modes in ascending
/// lexicographic order, each part at most `max_each`.
fn compositions(
    total: u32,
    max_each: u32,
    mode: usize,
    scratch: &mut [u32],
    out: &mut Vec<OccupationVector>,
) {
    let modes = scratch.len();
    if mode + 1 == modes {
        if total <= max_each {
            scratch[mode] = total;
            out.push(OccupationVector(scratch.to_vec()));
        }
        return;
    }
    let remaining = (modes - mode - 1) as u64;
    for n in 0..=total.min(max_each) {
        if u64::from(total - n) > remaining * u64::from(max_each) {
            continue;
        }
        scratch[mode] = n;
        compositions(total - n, max_each, mode + 1, scratch, out);
    }
}

pub(crate) fn binomial_u128(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}
