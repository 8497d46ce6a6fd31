use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{
    annihilation_op, creation_op, Cutoff, LinearOperator, OccupationVector, TruncatedBasis,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algebra {
    Su2,
    Su11,
    SuRp1,
    SuR1,
}

impl Algebra {
    pub fn is_compact(self) -> bool {
        matches!(self, Algebra::Su2 | Algebra::SuRp1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    Bilinear,
    HolsteinPrimakoff,
}

/// A real linear combination `Σ c E_ij` of generators.
pub type Combo = Vec<(f64, usize, usize)>;

#[derive(Clone, Debug)]
pub struct AlgebraRealization {
    algebra: Algebra,
    form: Form,
    basis: Arc<TruncatedBasis>,
    m: f64,
    rank: usize,
    generators: Vec<LinearOperator>,
}

impl AlgebraRealization {
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn basis(&self) -> &Arc<TruncatedBasis> {
        &self.basis
    }

    /// Representation parameter `M`.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// `r`; generator indices run over `0..=r`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `g_i`.
    pub fn metric(&self, i: usize) -> f64 {
        if i == 0 && !self.algebra.is_compact() {
            -1.0
        } else {
            1.0
        }
    }

    pub fn generator(&self, i: usize, j: usize) -> &LinearOperator {
        &self.generators[i * (self.rank + 1) + j]
    }

    /// Display name of `E_ij`.
    pub fn label(&self, i: usize, j: usize) -> String {
        match (self.algebra, i, j) {
            (Algebra::Su11, 1, 0) => "K+".into(),
            (Algebra::Su11, 0, 1) => "K-".into(),
            (Algebra::Su2, 1, 0) => "J+".into(),
            (Algebra::Su2, 0, 1) => "J-".into(),
            (Algebra::SuR1, i, 0) if i > 0 => format!("K+{i}"),
            (Algebra::SuR1, 0, j) if j > 0 => format!("K-{j}"),
            (Algebra::SuR1, i, j) if i != j => format!("K{i}{j}"),
            (Algebra::SuRp1, i, j) if i != j => format!("J{i}{j}"),
            (_, 0, 0) => "E00".into(),
            (_, i, _) => format!("N{i}"),
        }
    }

    /// Generators with `i > j`.
    pub fn raising(&self) -> Vec<(String, &LinearOperator)> {
        self.pairs(|i, j| i > j)
    }

    /// Generators with `i < j`; each is the adjoint of its mirror.
    pub fn lowering(&self) -> Vec<(String, &LinearOperator)> {
        self.pairs(|i, j| i < j)
    }

    pub fn diagonal(&self) -> Vec<(String, &LinearOperator)> {
        self.pairs(|i, j| i == j)
    }

    fn pairs(&self, keep: impl Fn(usize, usize) -> bool) -> Vec<(String, &LinearOperator)> {
        let n = self.rank + 1;
        (0..n * n)
            .map(|k| (k / n, k % n))
            .filter(|&(i, j)| keep(i, j))
            .map(|(i, j)| (self.label(i, j), self.generator(i, j)))
            .collect()
    }

    /// `K0 = ½(E00 + E11)` for su(1,1), `J0 = ½(E11 − E00)` for su(2).
    pub fn cartan_combo(&self) -> Option<Combo> {
        match self.algebra {
            Algebra::Su11 => Some(vec![(0.5, 0, 0), (0.5, 1, 1)]),
            Algebra::Su2 => Some(vec![(-0.5, 0, 0), (0.5, 1, 1)]),
            _ => None,
        }
    }

    /// Resolve a label, including `K0`/`J0`, to an operator.
    pub fn named(&self, label: &str) -> Option<LinearOperator> {
        if matches!(label, "K0" | "J0") {
            let want = if self.algebra == Algebra::Su11 {
                "K0"
            } else {
                "J0"
            };
            return (label == want)
                .then(|| self.cartan_combo())
                .flatten()
                .map(|c| self.combo(&c));
        }
        let n = self.rank + 1;
        (0..n * n)
            .map(|k| (k / n, k % n))
            .find(|&(i, j)| self.label(i, j) == label)
            .map(|(i, j)| self.generator(i, j).clone())
    }

    pub fn combo(&self, combo: &[(f64, usize, usize)]) -> LinearOperator {
        let mut out = LinearOperator::zero(self.basis.clone());
        for &(c, i, j) in combo {
            out = out
                .linear_combination(
                    Complex64::new(1.0, 0.0),
                    self.generator(i, j),
                    Complex64::new(c, 0.0),
                )
                .expect("generators share the basis");
        }
        out
    }

    /// Replace one generator, leaving its mirror untouched.
    pub fn with_generator(mut self, i: usize, j: usize, op: LinearOperator) -> Result<Self> {
        if i > self.rank || j > self.rank {
            return Err(invalid("generator index out of range"));
        }
        if **op.basis() != *self.basis {
            return Err(Error::BasisMismatch);
        }
        let n = self.rank + 1;
        self.generators[i * n + j] = op;
        Ok(self)
    }

    /// Occupations in the `r+1`-mode picture; mode 0 is implicit for the
    /// reduced forms.
    fn full_occupations(&self, occ: &[u32]) -> Vec<f64> {
        match self.form {
            Form::Bilinear => occ.iter().map(|&n| f64::from(n)).collect(),
            Form::HolsteinPrimakoff => {
                let s: f64 = occ.iter().map(|&n| f64::from(n)).sum();
                let n0 = if self.algebra.is_compact() {
                    self.m - s
                } else {
                    self.m - 1.0 + s
                };
                std::iter::once(n0)
                    .chain(occ.iter().map(|&n| f64::from(n)))
                    .collect()
            }
        }
    }

    /// Untruncated image of `|occ⟩` under `E_ij`: target occupations in the
    /// basis coordinates and coefficient, or `None` when the image vanishes.
    pub fn exact_action(&self, i: usize, j: usize, occ: &[u32]) -> Option<(Vec<i64>, f64)> {
        let mut n = self.full_occupations(occ);
        let mut coeff = 1.0;
        // c_j, then c_i†.
        for (k, dagger) in [(j, false), (i, true)] {
            let up = dagger == (self.metric(k) > 0.0);
            let factor = if up { n[k] + 1.0 } else { n[k] };
            if factor <= 0.0 {
                return None;
            }
            coeff *= factor.sqrt();
            n[k] += if up { 1.0 } else { -1.0 };
        }
        let skip = usize::from(self.form == Form::HolsteinPrimakoff);
        let target = n[skip..].iter().map(|&x| x.round() as i64).collect();
        Some((target, coeff))
    }

    /// False for reduced compact states with `ΣN > M`, which lie outside the
    /// spin `M/2` representation.
    pub fn in_representation(&self, occ: &[u32]) -> bool {
        !(self.form == Form::HolsteinPrimakoff
            && self.algebra.is_compact()
            && f64::from(occ.iter().sum::<u32>()) > self.m)
    }

    /// Index of an integer occupation vector, if it lies in the basis.
    pub(crate) fn index_of_i64(&self, occ: &[i64]) -> Option<usize> {
        if occ.iter().any(|&x| x < 0 || x > i64::from(u32::MAX)) {
            return None;
        }
        let v: Vec<u32> = occ.iter().map(|&x| x as u32).collect();
        self.basis.index_of_slice(&v)
    }

    /// Lowest-weight state: the reduced vacuum, or `|M,0,…⟩` / `|M−1,0,…⟩`.
    pub fn lowest_weight(&self) -> Result<OccupationVector> {
        let mut v = vec![0u32; self.basis.modes()];
        if self.form == Form::Bilinear {
            v[0] = if self.algebra.is_compact() {
                self.m as u32
            } else {
                self.m as u32 - 1
            };
        }
        let occ = OccupationVector::new(v);
        if self.basis.contains(&occ) {
            Ok(occ)
        } else {
            Err(Error::ShellAbsent(format!("lowest weight {occ}")))
        }
    }

    /// Number-conserving diagonal: `N_0 − ΣN_j` for the non-compact
    /// bilinears, `ΣN` for the compact ones. `None` for reduced forms.
    pub fn conserved(&self) -> Option<LinearOperator> {
        if self.form != Form::Bilinear {
            return None;
        }
        let sign = if self.algebra.is_compact() { 1.0 } else { -1.0 };
        Some(LinearOperator::diagonal(self.basis.clone(), |occ| {
            let rest: f64 = occ.as_slice()[1..].iter().map(|&n| f64::from(n)).sum();
            Complex64::new(f64::from(occ[0]) + sign * rest, 0.0)
        }))
    }
}

fn require_modes(basis: &TruncatedBasis, modes: usize) -> Result<()> {
    if basis.modes() == modes {
        Ok(())
    } else {
        Err(invalid(format!(
            "expected a {modes}-mode basis, got {}",
            basis.modes()
        )))
    }
}

fn bilinear(
    algebra: Algebra,
    basis: &Arc<TruncatedBasis>,
    rank: usize,
    m: u32,
) -> Result<AlgebraRealization> {
    if rank == 0 {
        return Err(invalid("rank must be at least 1"));
    }
    require_modes(basis, rank + 1)?;
    if m == 0 {
        return Err(invalid("M must be a positive integer"));
    }
    let mut real = AlgebraRealization {
        algebra,
        form: Form::Bilinear,
        basis: basis.clone(),
        m: f64::from(m),
        rank,
        generators: Vec::new(),
    };
    let n = rank + 1;
    let mut gens: Vec<Option<LinearOperator>> = vec![None; n * n];
    for i in 0..n {
        for j in 0..=i {
            let op = LinearOperator::from_action(basis.clone(), |occ| {
                match real.exact_action(i, j, occ.as_slice()) {
                    Some((t, c)) if t.iter().all(|&x| x >= 0) => vec![(
                        OccupationVector::new(t.iter().map(|&x| x as u32).collect()),
                        Complex64::new(c, 0.0),
                    )],
                    _ => Vec::new(),
                }
            });
            if i != j {
                gens[j * n + i] = Some(op.adjoint());
            }
            gens[i * n + j] = Some(op);
        }
    }
    real.generators = gens.into_iter().map(Option::unwrap).collect();
    Ok(real)
}

fn holstein_primakoff(
    algebra: Algebra,
    basis: &Arc<TruncatedBasis>,
    rank: usize,
    m: f64,
) -> Result<AlgebraRealization> {
    if rank == 0 {
        return Err(invalid("rank must be at least 1"));
    }
    require_modes(basis, rank)?;
    if !(m.is_finite() && m > 0.0) {
        return Err(invalid(format!("M must be positive, got {m}")));
    }
    if matches!(basis.cutoff(), Cutoff::Shell(_)) {
        return Err(invalid(
            "reduced realizations need a per-mode or total cutoff",
        ));
    }
    let compact = algebra.is_compact();
    let zeta = |occ: &OccupationVector| {
        let s = f64::from(occ.total());
        if compact {
            m - s
        } else {
            m + s
        }
    };
    let root = LinearOperator::diagonal(basis.clone(), |occ| {
        Complex64::new(zeta(occ).max(0.0).sqrt(), 0.0)
    });
    let n = rank + 1;
    let mut gens: Vec<Option<LinearOperator>> = vec![None; n * n];
    gens[0] = Some(LinearOperator::diagonal(basis.clone(), |occ| {
        Complex64::new(zeta(occ), 0.0)
    }));
    let raise: Vec<LinearOperator> = (0..rank)
        .map(|k| creation_op(basis, k))
        .collect::<Result<_>>()?;
    let lower: Vec<LinearOperator> = (0..rank)
        .map(|k| annihilation_op(basis, k))
        .collect::<Result<_>>()?;
    for i in 1..n {
        let up = raise[i - 1].matmul(&root)?;
        gens[i] = Some(up.adjoint());
        gens[i * n] = Some(up);
        for j in 1..=i {
            let op = if i == j {
                LinearOperator::diagonal(basis.clone(), |occ| {
                    Complex64::new(f64::from(occ[i - 1]), 0.0)
                })
            } else {
                raise[i - 1].matmul(&lower[j - 1])?
            };
            if i != j {
                gens[j * n + i] = Some(op.adjoint());
            }
            gens[i * n + j] = Some(op);
        }
    }
    Ok(AlgebraRealization {
        algebra,
        form: Form::HolsteinPrimakoff,
        basis: basis.clone(),
        m,
        rank,
        generators: gens.into_iter().map(Option::unwrap).collect(),
    })
}

/// `K₊ = a₀†a₁†`, `K₋ = a₀a₁`, `K₀ = ½(N₀+N₁+1)` on two modes.
pub fn su11_bilinear(basis: &Arc<TruncatedBasis>, m: u32) -> Result<AlgebraRealization> {
    bilinear(Algebra::Su11, basis, 1, m)
}

/// `𝒦₊ = b†√(M+N)`, `𝒦₀ = N + M/2` on one mode, real `M > 0`.
pub fn su11_hp(basis: &Arc<TruncatedBasis>, m: f64) -> Result<AlgebraRealization> {
    holstein_primakoff(Algebra::Su11, basis, 1, m)
}

/// `J₊ = a₁†a₀`, `J₀ = ½(N₁−N₀)` on a two-mode basis holding the shell `M`.
pub fn su2_bilinear(basis: &Arc<TruncatedBasis>, m: u32) -> Result<AlgebraRealization> {
    require_shell(basis, 2, m)?;
    bilinear(Algebra::Su2, basis, 1, m)
}

/// `𝒥₊ = b†√(M−N)`, `𝒥₀ = N − M/2` on one mode with cutoff at least `M`.
pub fn su2_hp(basis: &Arc<TruncatedBasis>, m: u32) -> Result<AlgebraRealization> {
    require_reduced_ball(basis, 1, m)?;
    holstein_primakoff(Algebra::Su2, basis, 1, f64::from(m))
}

/// `K_{+j} = a₀†a_j†`, `K_{−j} = a₀a_j`, `K_{jk} = a_j†a_k` on `r+1` modes.
pub fn su_r1_bilinear(
    basis: &Arc<TruncatedBasis>,
    rank: usize,
    m: u32,
) -> Result<AlgebraRealization> {
    bilinear(Algebra::SuR1, basis, rank, m)
}

/// `𝒦_{+j} = b_j†√(M+ΣN)`, `𝒦_{jk} = b_j†b_k` on `r` modes, real `M > 0`.
pub fn su_r1_hp(basis: &Arc<TruncatedBasis>, m: f64) -> Result<AlgebraRealization> {
    holstein_primakoff(Algebra::SuR1, basis, basis.modes(), m)
}

/// `J_{jk} = a_j†a_k` on an `r+1`-mode basis holding the shell `Σn = M`.
pub fn su_rp1_bilinear(basis: &Arc<TruncatedBasis>, m: u32) -> Result<AlgebraRealization> {
    let rank = basis.modes().saturating_sub(1);
    require_shell(basis, rank + 1, m)?;
    bilinear(Algebra::SuRp1, basis, rank, m)
}

/// `𝒥_{j0} = b_j†√(M−ΣN)`, `𝒥_{jk} = b_j†b_k` on `r` modes holding every
/// `Σn ≤ M`.
pub fn su_rp1_hp(basis: &Arc<TruncatedBasis>, m: u32) -> Result<AlgebraRealization> {
    require_reduced_ball(basis, basis.modes(), m)?;
    holstein_primakoff(Algebra::SuRp1, basis, basis.modes(), f64::from(m))
}

fn require_shell(basis: &TruncatedBasis, modes: usize, m: u32) -> Result<()> {
    require_modes(basis, modes)?;
    if m == 0 {
        return Err(invalid("M must be a positive integer"));
    }
    let shell = TruncatedBasis::new(modes, Cutoff::Shell(m))?;
    if shell.states().iter().all(|s| basis.contains(s)) {
        Ok(())
    } else {
        Err(Error::ShellAbsent(format!("shell total {m}")))
    }
}

fn require_reduced_ball(basis: &TruncatedBasis, modes: usize, m: u32) -> Result<()> {
    require_modes(basis, modes)?;
    if m == 0 {
        return Err(invalid("M must be a positive integer"));
    }
    let ball = TruncatedBasis::new(modes, Cutoff::Total(m))?;
    if ball.states().iter().all(|s| basis.contains(s)) {
        Ok(())
    } else {
        Err(invalid(format!(
            "reduced basis must hold every total up to {m}"
        )))
    }
}
