use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::constraint::ConstraintSubspace;
use super::realization::{Algebra, AlgebraRealization, Combo};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::{commutator, OccupationVector, StateVector};

/// `[a, b] = rhs`, each side a combination of generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub a: Combo,
    pub b: Combo,
    pub rhs: Combo,
}

/// Outcome of one entrywise check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub max_residual: f64,
    /// Column state carrying the largest residual.
    pub worst_state: Option<OccupationVector>,
    /// Number of basis states the check was restricted to.
    pub interior_count: usize,
}

impl RelationReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

impl AlgebraRealization {
    /// Every structure relation `[E_ij, E_kl]` over unordered generator
    /// pairs, plus the textbook su(1,1)/su(2) forms at rank one.
    pub fn structure_relations(&self) -> Vec<Relation> {
        let n = self.rank() + 1;
        let idx: Vec<(usize, usize)> = (0..n * n).map(|k| (k / n, k % n)).collect();
        let mut out = Vec::new();
        for (p, &(i, j)) in idx.iter().enumerate() {
            for &(k, l) in &idx[p + 1..] {
                let mut rhs = Vec::new();
                if j == k {
                    rhs.push((self.metric(j), i, l));
                }
                if l == i {
                    rhs.push((-self.metric(i), k, j));
                }
                out.push(Relation {
                    name: format!("[{},{}]", self.label(i, j), self.label(k, l)),
                    a: vec![(1.0, i, j)],
                    b: vec![(1.0, k, l)],
                    rhs,
                });
            }
        }
        if let Some(cartan) = self.cartan_combo() {
            let (h, sign) = match self.algebra() {
                Algebra::Su11 => ("K", -2.0),
                _ => ("J", 2.0),
            };
            let scaled = |c: f64| cartan.iter().map(|&(x, i, j)| (c * x, i, j)).collect();
            out.push(Relation {
                name: format!("[{h}+,{h}-] = {sign}{h}0"),
                a: vec![(1.0, 1, 0)],
                b: vec![(1.0, 0, 1)],
                rhs: scaled(sign),
            });
            out.push(Relation {
                name: format!("[{h}0,{h}+] = {h}+"),
                a: cartan.clone(),
                b: vec![(1.0, 1, 0)],
                rhs: vec![(1.0, 1, 0)],
            });
            out.push(Relation {
                name: format!("[{h}0,{h}-] = -{h}-"),
                a: cartan.clone(),
                b: vec![(1.0, 0, 1)],
                rhs: vec![(-1.0, 0, 1)],
            });
        }
        out
    }

    /// Whether the untruncated images of `occ` along `path` (applied right
    /// to left) stay inside the basis wherever they are nonzero.
    fn path_inside(&self, path: &[(usize, usize)], occ: &[u32]) -> bool {
        let mut cur = occ.to_vec();
        for &(i, j) in path.iter().rev() {
            match self.exact_action(i, j, &cur) {
                None => return true,
                Some((t, _)) => match self.index_of_i64(&t) {
                    Some(k) => cur = self.basis().state(k).as_slice().to_vec(),
                    None => return false,
                },
            }
        }
        true
    }

    fn interior_for(&self, rel: &Relation, occ: &[u32]) -> bool {
        self.in_representation(occ)
            && rel.a.iter().all(|&(_, i, j)| {
                rel.b.iter().all(|&(_, k, l)| {
                    self.path_inside(&[(i, j), (k, l)], occ)
                        && self.path_inside(&[(k, l), (i, j)], occ)
                })
            })
            && rel
                .rhs
                .iter()
                .all(|&(_, i, j)| self.path_inside(&[(i, j)], occ))
    }
}

fn check_one(real: &AlgebraRealization, rel: &Relation) -> RelationReport {
    let basis = real.basis();
    let interior: Vec<bool> = basis
        .states()
        .iter()
        .map(|s| real.interior_for(rel, s.as_slice()))
        .collect();
    let lhs = commutator(&real.combo(&rel.a), &real.combo(&rel.b)).expect("shared basis");
    let diff = lhs.sub(&real.combo(&rel.rhs)).expect("shared basis");
    let (max_residual, at) = diff.max_abs_in_columns(|j| interior[j]);
    RelationReport {
        relation: rel.name.clone(),
        max_residual,
        worst_state: at.map(|(_, j)| basis.state(j).clone()),
        interior_count: interior.iter().filter(|&&b| b).count(),
    }
}

/// Check each relation entrywise on its interior states.
pub fn verify_algebra(real: &AlgebraRealization, relations: &[Relation]) -> Vec<RelationReport> {
    Execution::default().map_range(relations.len(), |k| check_one(real, &relations[k]))
}

/// `[Δ, E_ij] = 0` for every generator of a bilinear realization.
pub fn conservation_check(real: &AlgebraRealization) -> Vec<RelationReport> {
    let Some(delta) = real.conserved() else {
        return Vec::new();
    };
    let n = real.rank() + 1;
    (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let c = commutator(&delta, real.generator(i, j)).expect("shared basis");
            let (max_residual, at) = c.max_abs_in_columns(|_| true);
            RelationReport {
                relation: format!("[Delta,{}] = 0", real.label(i, j)),
                max_residual,
                worst_state: at.map(|(_, j)| real.basis().state(j).clone()),
                interior_count: real.basis().len(),
            }
        })
        .collect()
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Annihilation of the lowest-weight state by every `E_ij` with `j ≥ 1`, and
/// its `E00` (and `K0`/`J0`) eigenvalue.
pub fn lowest_weight_check(real: &AlgebraRealization) -> Result<Vec<RelationReport>> {
    let lw = real.lowest_weight()?;
    let psi = StateVector::number_state(real.basis().clone(), &lw)?;
    let report = |name: String, residual: f64| RelationReport {
        relation: name,
        max_residual: residual,
        worst_state: Some(lw.clone()),
        interior_count: 1,
    };
    let eigen = |op: &crate::fock::LinearOperator, lambda: f64| -> Result<f64> {
        let out = op.apply(&psi)?;
        let diff: Vec<Complex64> = out
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| a - b * lambda)
            .collect();
        Ok(max_abs(&diff))
    };
    let n = real.rank() + 1;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 1..n {
            let r = eigen(real.generator(i, j), 0.0)?;
            out.push(report(format!("{}|lw> = 0", real.label(i, j)), r));
        }
    }
    let m = real.m();
    out.push(report(
        format!("E00|lw> = {m}|lw>"),
        eigen(real.generator(0, 0), m)?,
    ));
    if let Some(c) = real.cartan_combo() {
        let (name, lambda) = match real.algebra() {
            Algebra::Su11 => ("K0", m / 2.0),
            _ => ("J0", -m / 2.0),
        };
        out.push(report(
            format!("{name}|lw> = {lambda}|lw>"),
            eigen(&real.combo(&c), lambda)?,
        ));
    }
    Ok(out)
}

/// `embed(𝓔_ij ‖n′⟩) = E_ij embed(‖n′⟩)` for every generator, over the
/// reduced states whose images stay inside both bases.
pub fn intertwining_check(
    reduced: &AlgebraRealization,
    bilinear: &AlgebraRealization,
    sub: &ConstraintSubspace,
) -> Result<Vec<RelationReport>> {
    if reduced.algebra() != bilinear.algebra()
        || reduced.rank() != bilinear.rank()
        || **reduced.basis() != **sub.reduced()
        || **bilinear.basis() != **sub.parent()
    {
        return Err(Error::BasisMismatch);
    }
    let n = reduced.rank() + 1;
    let out = Execution::default().map_range(n * n, |k| {
        let (i, j) = (k / n, k % n);
        let hp_t = reduced.generator(i, j).adjoint();
        let bl_t = bilinear.generator(i, j).adjoint();
        let mut worst = (0.0, None);
        let mut count = 0;
        for (r, p) in sub.pairs() {
            let s = reduced.basis().state(r);
            let inside_hp = reduced
                .exact_action(i, j, s.as_slice())
                .is_none_or(|(t, _)| reduced.index_of_i64(&t).is_some());
            let inside_bl = bilinear
                .exact_action(i, j, bilinear.basis().state(p).as_slice())
                .is_none_or(|(t, _)| bilinear.index_of_i64(&t).is_some());
            if !(inside_hp && inside_bl) {
                continue;
            }
            count += 1;
            let mut col: Vec<(usize, Complex64)> =
                bl_t.row(p).map(|(q, v)| (q, v.conj())).collect();
            for (t, v) in hp_t.row(r) {
                match sub.parent_index(t) {
                    Some(q) => col.push((q, -v.conj())),
                    None => col.push((usize::MAX, v.conj())),
                }
            }
            col.sort_by_key(|e| e.0);
            let mut acc: Option<(usize, Complex64)> = None;
            let mut res: f64 = 0.0;
            for (q, v) in col {
                match &mut acc {
                    Some((aq, av)) if *aq == q && q != usize::MAX => *av += v,
                    _ => {
                        if let Some((_, av)) = acc {
                            res = res.max(av.norm());
                        }
                        acc = Some((q, v));
                    }
                }
            }
            if let Some((_, av)) = acc {
                res = res.max(av.norm());
            }
            if worst.1.is_none() || res > worst.0 {
                worst = (res, Some(s.clone()));
            }
        }
        RelationReport {
            relation: format!("intertwine {}", reduced.label(i, j)),
            max_residual: worst.0,
            worst_state: worst.1,
            interior_count: count,
        }
    });
    Ok(out)
}
