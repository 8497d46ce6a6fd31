//! Named verification suites with machine-readable reports.
//!
//! Each suite is a list of [`Check`]s, each a scalar compared against a
//! pinned bound. A construction error inside a check fails that check and
//! is recorded in its detail; the remaining checks still run.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{
    conservation_check, intertwining_check, lowest_weight_check, su11_bilinear, su11_hp,
    su2_bilinear, su2_hp, su_r1_bilinear, su_r1_hp, su_rp1_bilinear, su_rp1_hp, verify_algebra,
    AlgebraRealization, Constraint, ConstraintSubspace, Form, RelationReport,
};
use crate::distributions::{
    moments_from_gf, neg_binomial_gf, neg_binomial_limit_distance, poisson_limit_distance,
    BinomialParams, MultinomialParams, NegBinomialParams, NegMultinomialParams, PoissonParams,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::{
    annihilation_op, creation_op, expm_apply, fidelity, op_exponential, Cutoff, StateVector,
    TruncatedBasis,
};
use crate::generation::{
    contraction_check, current_alpha, disentangling_residual_su2, displacement_state,
    dynamical_binomial, dynamical_coherent, exp_form_state, operator_identity_check, sequential_ms,
    sequential_nms, su11_zeta, su2_zeta, CurrentDrive, CurrentSegment, IdentityFactor,
    TwoLevelDrive, DISPLACEMENT_GUARD,
};
use crate::measure::{
    convergence_study, projector_fixed_m, resolution_check, slicing_check, MeasureSpec, RadialMap,
};
use crate::states::{
    binomial_state, coherent_state, coherent_state_complex, multinomial_reduced_state,
    multinomial_state, neg_binomial_state, neg_multinomial_state, number_moments, quantum_gf,
    FamilyParams, StateSpec,
};
use crate::DEFAULT_EXPM_TOL;

/// Report schema identifier.
pub const SCHEMA: &str = "fockbench.verify.v1";

pub const RELATION_TOL: f64 = 1e-12;
pub const MODULUS_TOL: f64 = 1e-12;
pub const PATH_TOL: f64 = 1e-8;
pub const GF_TOL: f64 = 1e-10;
pub const SLICING_TOL: f64 = 1e-12;
pub const TWO_LEVEL_TOL: f64 = 1e-10;
pub const CURRENT_TOL: f64 = 1e-8;

/// The default quadrature tolerance for rank `r`.
pub fn resolution_tol(r: usize) -> f64 {
    if r == 1 {
        1e-8
    } else {
        1e-4
    }
}

/// Default node count per real dimension for rank `r`.
pub fn resolution_nodes(r: usize) -> usize {
    match r {
        1 => 64,
        2 => 24,
        _ => 8,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Algebra,
    Disentangle,
    Measure,
    Limits,
    Identity,
    Dynamical,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Algebra,
        Suite::Disentangle,
        Suite::Measure,
        Suite::Limits,
        Suite::Identity,
        Suite::Dynamical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Disentangle => "disentangle",
            Suite::Measure => "measure",
            Suite::Limits => "limits",
            Suite::Identity => "identity",
            Suite::Dynamical => "dynamical",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unknown(format!("suite {s}")))
    }
}

/// How a check value is compared with its bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `None` when the check could not be evaluated.
    pub value: Option<f64>,
    pub comparison: Comparison,
    pub bound: f64,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        value: f64,
        comparison: Comparison,
        bound: f64,
        detail: Value,
    ) -> Self {
        let passed = match comparison {
            Comparison::AtMost => value <= bound,
            Comparison::Below => value < bound,
            Comparison::AtLeast => value >= bound,
        };
        Self {
            name: name.into(),
            value: Some(value),
            comparison,
            bound,
            passed,
            detail,
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, detail: Value) -> Self {
        Self::new(name, value, Comparison::AtMost, bound, detail)
    }

    /// Run `f`, turning an error into a failed check.
    fn guarded<F>(name: &str, comparison: Comparison, bound: f64, f: F) -> Self
    where
        F: FnOnce() -> Result<(f64, Value)>,
    {
        match f() {
            Ok((v, detail)) => Self::new(name, v, comparison, bound, detail),
            Err(e) => Self {
                name: name.into(),
                value: None,
                comparison,
                bound,
                passed: false,
                detail: json!({ "error": e.to_string() }),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: Suite, checks: Vec<Check>) -> Self {
        Self {
            schema: SCHEMA.into(),
            suite,
            passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Overrides for the default grids.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Rank of the measure suite's resolution check.
    pub r: Option<usize>,
    /// Shell total of the measure suite's resolution check.
    pub m: Option<u32>,
    /// Nodes per real dimension of the resolution check.
    pub nodes: Option<usize>,
    pub allow_high_rank: bool,
    pub execution: Execution,
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> SuiteReport {
    let checks = match suite {
        Suite::Algebra => algebra_checks(),
        Suite::Disentangle => [path_checks(), sequential_checks(), disentangling_checks()].concat(),
        Suite::Measure => measure_checks(opts),
        Suite::Limits => limit_checks(),
        Suite::Identity => [modulus_checks(), ladder_checks(), gf_checks()].concat(),
        Suite::Dynamical => dynamical_checks(),
    };
    SuiteReport::new(suite, checks)
}

fn basis(modes: usize, cutoff: Cutoff) -> Result<Arc<TruncatedBasis>> {
    TruncatedBasis::new(modes, cutoff)
}

fn worst(reports: &[RelationReport]) -> (f64, Value) {
    let w = reports
        .iter()
        .max_by(|a, b| a.max_residual.total_cmp(&b.max_residual));
    let value = w.map_or(0.0, |r| r.max_residual);
    let detail = json!({
        "relations": reports.len(),
        "worst": w.map(|r| json!({ "relation": r.relation, "state": r.worst_state })),
    });
    (value, detail)
}

// Algebra

/// The realizations checked by the algebra suite, with display names.
pub fn default_realizations() -> Result<Vec<(String, AlgebraRealization)>> {
    Ok(vec![
        (
            "su11 bilinear M=3".into(),
            su11_bilinear(&basis(2, Cutoff::Total(10))?, 3)?,
        ),
        (
            "su11 hp M=3".into(),
            su11_hp(&basis(1, Cutoff::PerMode(12))?, 3.0)?,
        ),
        (
            "su11 hp M=2.5".into(),
            su11_hp(&basis(1, Cutoff::PerMode(12))?, 2.5)?,
        ),
        (
            "su2 bilinear M=3".into(),
            su2_bilinear(&basis(2, Cutoff::Shell(3))?, 3)?,
        ),
        (
            "su2 hp M=3".into(),
            su2_hp(&basis(1, Cutoff::PerMode(3))?, 3)?,
        ),
        (
            "su_r1 bilinear r=2 M=3".into(),
            su_r1_bilinear(&basis(3, Cutoff::Total(9))?, 2, 3)?,
        ),
        (
            "su_r1 hp r=2 M=3".into(),
            su_r1_hp(&basis(2, Cutoff::Total(6))?, 3.0)?,
        ),
        (
            "su_r1 hp r=3 M=1.5".into(),
            su_r1_hp(&basis(3, Cutoff::Total(4))?, 1.5)?,
        ),
        (
            "su_rp1 bilinear r=2 M=3".into(),
            su_rp1_bilinear(&basis(3, Cutoff::Shell(3))?, 3)?,
        ),
        (
            "su_rp1 bilinear r=3 M=2".into(),
            su_rp1_bilinear(&basis(4, Cutoff::Total(3))?, 2)?,
        ),
        (
            "su_rp1 hp r=2 M=3".into(),
            su_rp1_hp(&basis(2, Cutoff::Total(3))?, 3)?,
        ),
    ])
}

pub fn algebra_checks() -> Vec<Check> {
    let reals = match default_realizations() {
        Ok(r) => r,
        Err(e) => {
            return vec![Check::guarded(
                "realizations",
                Comparison::AtMost,
                0.0,
                || Err(e),
            )];
        }
    };
    let mut out = Vec::new();
    for (name, real) in &reals {
        let (v, d) = worst(&verify_algebra(real, &real.structure_relations()));
        out.push(Check::at_most(
            format!("structure {name}"),
            v,
            RELATION_TOL,
            d,
        ));
        out.push(Check::guarded(
            &format!("lowest weight {name}"),
            Comparison::AtMost,
            RELATION_TOL,
            || Ok(worst(&lowest_weight_check(real)?)),
        ));
        if real.form() == Form::Bilinear {
            let (v, d) = worst(&conservation_check(real));
            out.push(Check::at_most(
                format!("conservation {name}"),
                v,
                RELATION_TOL,
                d,
            ));
        }
    }
    for (r, m) in [(1usize, 3u32), (2, 3)] {
        out.push(Check::guarded(
            &format!("intertwining su_rp1 r={r} M={m}"),
            Comparison::AtMost,
            RELATION_TOL,
            || {
                let parent = basis(r + 1, Cutoff::Shell(m))?;
                let reduced = basis(r, Cutoff::Total(m))?;
                let sub = ConstraintSubspace::new(
                    parent.clone(),
                    reduced.clone(),
                    Constraint::FixedTotal,
                    m,
                )?;
                let reports = intertwining_check(
                    &su_rp1_hp(&reduced, m)?,
                    &su_rp1_bilinear(&parent, m)?,
                    &sub,
                )?;
                let full = reports.iter().all(|x| x.interior_count == parent.len());
                let (v, d) = worst(&reports);
                Ok((if full { v } else { f64::INFINITY }, d))
            },
        ));
        out.push(Check::guarded(
            &format!("intertwining su_r1 r={r} M={m}"),
            Comparison::AtMost,
            RELATION_TOL,
            || {
                let parent = basis(r + 1, Cutoff::Total(14))?;
                let reduced = basis(r, Cutoff::Total(5))?;
                let sub = ConstraintSubspace::new(
                    parent.clone(),
                    reduced.clone(),
                    Constraint::FixedDifference,
                    m,
                )?;
                let reports = intertwining_check(
                    &su_r1_hp(&reduced, f64::from(m))?,
                    &su_r1_bilinear(&parent, r, m)?,
                    &sub,
                )?;
                Ok(worst(&reports))
            },
        ));
    }
    out.push(Check::guarded(
        "intertwining su2 M=3",
        Comparison::AtMost,
        RELATION_TOL,
        || {
            let parent = basis(2, Cutoff::Shell(3))?;
            let sub = ConstraintSubspace::new(
                parent.clone(),
                basis(1, Cutoff::PerMode(3))?,
                Constraint::FixedTotal,
                3,
            )?;
            Ok(worst(&intertwining_check(
                &su2_hp(sub.reduced(), 3)?,
                &su2_bilinear(&parent, 3)?,
                &sub,
            )?))
        },
    ));
    out
}

// Construction paths

pub const GRID_ETA2: [f64; 3] = [0.1, 0.3, 0.6];
pub const GRID_M: [u32; 4] = [1, 2, 3, 5];
const GRID_THETA: f64 = 0.7;

/// Largest pairwise infidelity among the given constructions.
fn max_infidelity(states: &[&StateVector]) -> Result<f64> {
    let mut w: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            w = w.max(1.0 - fidelity(a, b)?);
        }
    }
    Ok(w)
}

/// Sweep `grid`, keeping the worst infidelity and the point where it occurs.
fn sweep<P, F>(grid: &[P], f: F) -> Result<(f64, Value)>
where
    P: Serialize,
    F: Fn(&P) -> Result<f64>,
{
    let mut w = (f64::NEG_INFINITY, Value::Null);
    for p in grid {
        let v = f(p)?;
        if v > w.0 {
            w = (v, serde_json::to_value(p).unwrap_or(Value::Null));
        }
    }
    Ok((w.0, json!({ "points": grid.len(), "worst": w.1 })))
}

fn grid() -> Vec<(f64, u32)> {
    GRID_ETA2
        .iter()
        .flat_map(|&e| GRID_M.iter().map(move |&m| (e, m)))
        .collect()
}

fn coherent_paths(alpha2: f64) -> Result<f64> {
    let p = PoissonParams::new(alpha2)?;
    let b = StateSpec::real(FamilyParams::Coherent(p)).auto_basis(DISPLACEMENT_GUARD)?;
    let series = coherent_state(&p, GRID_THETA, &b, 1e-12)?;
    let alpha = Complex64::from_polar(alpha2.sqrt(), GRID_THETA);
    let ad = creation_op(&b, 0)?;
    let a = annihilation_op(&b, 0)?;
    let vac = StateVector::vacuum(b.clone())?;
    let mut exp = op_exponential(&ad.scale(alpha), DEFAULT_EXPM_TOL)?.apply(&vac)?;
    exp.scale(Complex64::new((-0.5 * alpha2).exp(), 0.0));
    let disp = expm_apply(
        &ad.linear_combination(alpha, &a, -alpha.conj())?,
        &vac,
        DEFAULT_EXPM_TOL,
    )?;
    max_infidelity(&[&series, &exp, &disp])
}

fn binomial_paths(e2: f64, m: u32) -> Result<f64> {
    let p = BinomialParams::new(e2, m)?;
    let b = basis(1, Cutoff::PerMode(m))?;
    let series = binomial_state(&p, GRID_THETA, &b)?;
    let real = su2_hp(&b, m)?;
    let exp = exp_form_state(&real, Complex64::from_polar(p.eta(), GRID_THETA))?;
    let disp = displacement_state(&real, su2_zeta(p.eta(), GRID_THETA))?;
    max_infidelity(&[&series, &exp, &disp.state])
}

fn neg_binomial_paths(e2: f64, m: f64) -> Result<f64> {
    let p = NegBinomialParams::new(e2, m)?;
    let b = StateSpec::real(FamilyParams::NegBinomial(p)).auto_basis(DISPLACEMENT_GUARD)?;
    let series = neg_binomial_state(&p, GRID_THETA, &b, 1e-12)?;
    let real = su11_hp(&b, m)?;
    let exp = exp_form_state(&real, Complex64::from_polar(p.eta(), GRID_THETA))?;
    let disp = displacement_state(&real, su11_zeta(p.eta(), GRID_THETA))?;
    max_infidelity(&[&series, &exp, &disp.state])
}

fn multinomial_paths(e2: f64, m: u32) -> Result<f64> {
    let p = MultinomialParams::from_eta2(&[e2], m)?;
    let shell = basis(2, Cutoff::Shell(m))?;
    let series = multinomial_state(&p, &[GRID_THETA], &shell)?;
    let seq = sequential_ms(p.eta(), &[GRID_THETA], m, &shell)?;
    let disp = displacement_state(&su2_bilinear(&shell, m)?, su2_zeta(p.eta()[0], GRID_THETA))?;
    max_infidelity(&[&series, &seq.state, &disp.state])
}

fn neg_multinomial_paths(e2: f64, m: f64) -> Result<f64> {
    let p = NegMultinomialParams::from_eta2(&[e2], m)?;
    let b =
        StateSpec::real(FamilyParams::NegMultinomial(p.clone())).auto_basis(DISPLACEMENT_GUARD)?;
    let series = neg_multinomial_state(&p, &[GRID_THETA], &b, 1e-12)?;
    let seq = sequential_nms(p.eta(), &[GRID_THETA], m, &b)?;
    let disp = displacement_state(&su11_hp(&b, m)?, su11_zeta(p.eta()[0], GRID_THETA))?;
    max_infidelity(&[&series, &seq.state, &disp.state])
}

/// Series, exponential-form and displacement constructions of the rank-one
/// families over the `(η², M)` grid.
pub fn path_checks() -> Vec<Check> {
    let g = grid();
    let cmp = Comparison::AtMost;
    vec![
        Check::guarded("paths coherent", cmp, PATH_TOL, || {
            sweep(&g, |&(e, m)| coherent_paths(e * f64::from(m)))
        }),
        Check::guarded("paths binomial", cmp, PATH_TOL, || {
            sweep(&g, |&(e, m)| binomial_paths(e, m))
        }),
        Check::guarded("paths negative binomial", cmp, PATH_TOL, || {
            sweep(&g, |&(e, m)| neg_binomial_paths(e, f64::from(m)))
        }),
        Check::guarded("paths multinomial r=1", cmp, PATH_TOL, || {
            sweep(&g, |&(e, m)| multinomial_paths(e, m))
        }),
        Check::guarded("paths negative multinomial r=1", cmp, PATH_TOL, || {
            sweep(&g, |&(e, m)| neg_multinomial_paths(e, f64::from(m)))
        }),
    ]
}

fn sequential_nms_infidelity(eta2: &[f64], m: f64) -> Result<f64> {
    let p = NegMultinomialParams::from_eta2(eta2, m)?;
    let thetas: Vec<f64> = (0..eta2.len()).map(|k| 0.6 * k as f64 - 0.3).collect();
    let b =
        StateSpec::real(FamilyParams::NegMultinomial(p.clone())).auto_basis(DISPLACEMENT_GUARD)?;
    let out = sequential_nms(p.eta(), &thetas, m, &b)?;
    let direct = neg_multinomial_state(&p, &thetas, &b, 1e-12)?;
    Ok(1.0 - fidelity(&out.state, &direct)?)
}

fn sequential_ms_infidelity(eta2: &[f64], m: u32) -> Result<f64> {
    let p = MultinomialParams::from_eta2(eta2, m)?;
    let r = eta2.len();
    let thetas: Vec<f64> = (0..r).map(|k| 0.5 * k as f64 - 0.2).collect();
    let reduced = basis(r, Cutoff::Total(m))?;
    let a = sequential_ms(p.eta(), &thetas, m, &reduced)?;
    let da = multinomial_reduced_state(&p, &thetas, &reduced)?;
    let shell = basis(r + 1, Cutoff::Shell(m))?;
    let b = sequential_ms(p.eta(), &thetas, m, &shell)?;
    let db = multinomial_state(&p, &thetas, &shell)?;
    Ok((1.0 - fidelity(&a.state, &da)?).max(1.0 - fidelity(&b.state, &db)?))
}

/// Sequential disentangled generation against the direct series, r = 2, 3.
pub fn sequential_checks() -> Vec<Check> {
    let nms: Vec<(Vec<f64>, f64)> = vec![
        (vec![0.2, 0.1], 2.0),
        (vec![0.3, 0.3], 1.0),
        (vec![0.1, 0.15, 0.2], 2.0),
        (vec![0.05, 0.1, 0.1], 3.0),
    ];
    let ms: Vec<(Vec<f64>, u32)> = vec![
        (vec![0.3, 0.2], 2),
        (vec![0.25, 0.5], 5),
        (vec![0.2, 0.25, 0.15], 2),
        (vec![0.1, 0.1, 0.3], 3),
    ];
    vec![
        Check::guarded(
            "sequential negative multinomial",
            Comparison::AtMost,
            PATH_TOL,
            || sweep(&nms, |(e, m)| sequential_nms_infidelity(e, *m)),
        ),
        Check::guarded(
            "sequential multinomial",
            Comparison::AtMost,
            PATH_TOL,
            || sweep(&ms, |(e, m)| sequential_ms_infidelity(e, *m)),
        ),
    ]
}

pub fn disentangling_checks() -> Vec<Check> {
    let pts: Vec<(u32, f64, f64)> = vec![
        (1, 0.3, 1.0),
        (1, 1.2, -2.0),
        (3, 0.3, 1.0),
        (3, 1.2, -2.0),
        (5, 0.7, 0.4),
    ];
    vec![Check::guarded(
        "disentangling su2",
        Comparison::AtMost,
        RELATION_TOL,
        || {
            sweep(&pts, |&(m, r, th)| {
                disentangling_residual_su2(m, Complex64::from_polar(r, th))
            })
        },
    )]
}

// Measure

pub fn measure_checks(opts: &SuiteOptions) -> Vec<Check> {
    let cases: Vec<(usize, u32)> = match (opts.r, opts.m) {
        (None, None) => vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)],
        (r, m) => vec![(r.unwrap_or(1), m.unwrap_or(1))],
    };
    let mut out: Vec<Check> = cases
        .into_iter()
        .map(|(r, m)| resolution_entry(r, m, opts))
        .collect();
    if opts.r.is_none() && opts.m.is_none() {
        out.push(Check::guarded(
            "per-variable map convergence",
            Comparison::Below,
            1.0,
            || {
                let spec = MeasureSpec::new(2, 1, 8)?.with_map(RadialMap::PerVariable);
                let study = convergence_study(&spec, &[8, 16, 32], opts.execution)?;
                let ratio = study
                    .residuals
                    .windows(2)
                    .map(|w| w[1] / w[0])
                    .fold(0.0, f64::max);
                Ok((ratio, serde_json::to_value(&study).unwrap_or(Value::Null)))
            },
        ));
        out.push(Check::guarded(
            "projector r=2 M=3",
            Comparison::AtMost,
            0.0,
            || {
                let b = basis(3, Cutoff::Total(4))?;
                let p = projector_fixed_m(&b, 3)?;
                let rank: f64 = (0..b.len()).map(|i| p.get(i, i).re).sum();
                let idem = p.matmul(&p)?.max_abs_diff(&p)?;
                Ok((idem.max((rank - 10.0).abs()), json!({ "rank": rank })))
            },
        ));
        let slices: Vec<(Vec<f64>, u32)> = vec![
            (vec![1.0, 1.0], 2),
            (vec![0.3, 1.1, 0.7], 3),
            (vec![0.9, 0.4, 1.3, 0.2], 4),
            (vec![0.5, 2.0], 0),
        ];
        out.push(Check::guarded(
            "slicing",
            Comparison::AtMost,
            SLICING_TOL,
            || {
                sweep(&slices, |(a, m)| {
                    Ok(slicing_check(a, *m)?.max_relative_error)
                })
            },
        ));
    }
    out
}

/// One resolution-of-unity quadrature as a check.
pub fn resolution_entry(r: usize, m: u32, opts: &SuiteOptions) -> Check {
    let tol = resolution_tol(r);
    Check::guarded(
        &format!("resolution r={r} M={m}"),
        Comparison::AtMost,
        tol,
        || {
            let nodes = opts.nodes.unwrap_or(resolution_nodes(r));
            let spec = MeasureSpec {
                r,
                m,
                radial_nodes: nodes,
                angular_nodes: nodes,
                radial_map: RadialMap::Projective,
                allow_high_rank: opts.allow_high_rank,
            };
            let rep = resolution_check(&spec, opts.execution)?;
            let v = rep.max_entry_residual.max(rep.trace_residual);
            Ok((v, serde_json::to_value(&rep).unwrap_or(Value::Null)))
        },
    )
}

// Limits

pub const LIMIT_MS: [u32; 3] = [10, 100, 1000];

/// Largest successive step `x_{k+1} − x_k`; negative iff strictly decreasing.
fn max_step(xs: &[f64]) -> f64 {
    xs.windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn limit_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let tv = |name: &str, f: &dyn Fn(u32) -> Result<f64>| -> Vec<Check> {
        match LIMIT_MS.iter().map(|&m| f(m)).collect::<Result<Vec<f64>>>() {
            Ok(d) => {
                let table = json!({ "M": LIMIT_MS, "tv": d });
                vec![
                    Check::new(
                        format!("{name} decreasing"),
                        max_step(&d),
                        Comparison::Below,
                        0.0,
                        table.clone(),
                    ),
                    Check::new(
                        format!("{name} final"),
                        d[d.len() - 1],
                        Comparison::Below,
                        0.05,
                        table,
                    ),
                ]
            }
            Err(e) => vec![Check::guarded(name, Comparison::Below, 0.05, || Err(e))],
        }
    };
    out.extend(tv("tv binomial to poisson", &|m| {
        poisson_limit_distance(m, 1.0)
    }));
    out.extend(tv("tv negative binomial to poisson", &|m| {
        neg_binomial_limit_distance(f64::from(m), 1.0)
    }));
    match contraction_check(&LIMIT_MS, 1.0, 0.3) {
        Ok(rows) => {
            let table = serde_json::to_value(&rows).unwrap_or(Value::Null);
            let b: Vec<f64> = rows.iter().map(|r| r.binomial_fidelity).collect();
            let n: Vec<f64> = rows.iter().map(|r| r.neg_binomial_fidelity).collect();
            let neg = |xs: &[f64]| xs.iter().map(|x| -x).collect::<Vec<_>>();
            out.push(Check::new(
                "contraction binomial increasing",
                max_step(&neg(&b)),
                Comparison::Below,
                0.0,
                table.clone(),
            ));
            out.push(Check::new(
                "contraction negative binomial increasing",
                max_step(&neg(&n)),
                Comparison::Below,
                0.0,
                table.clone(),
            ));
            out.push(Check::new(
                "contraction final",
                b[b.len() - 1].min(n[n.len() - 1]),
                Comparison::AtLeast,
                0.999,
                table,
            ));
        }
        Err(e) => out.push(Check::guarded(
            "contraction",
            Comparison::AtLeast,
            0.999,
            || Err(e),
        )),
    }
    out
}

// Identities

/// The family grid of the modulus-square law.
pub fn modulus_grid() -> Result<Vec<StateSpec>> {
    let mut out = Vec::new();
    for &e2 in &GRID_ETA2 {
        for &m in &GRID_M {
            let mf = f64::from(m);
            out.push(StateSpec::real(FamilyParams::Coherent(PoissonParams::new(
                e2 * mf,
            )?)));
            out.push(StateSpec::real(FamilyParams::Binomial(
                BinomialParams::new(e2, m)?,
            )));
            out.push(StateSpec::real(FamilyParams::NegBinomial(
                NegBinomialParams::new(e2, mf)?,
            )));
            for r in 1..=2usize {
                let comps = vec![e2 / (r as f64 + 0.5); r];
                out.push(StateSpec::real(FamilyParams::Multinomial(
                    MultinomialParams::from_eta2(&comps, m)?,
                )));
                out.push(StateSpec::real(FamilyParams::NegMultinomial(
                    NegMultinomialParams::from_eta2(&comps, mf)?,
                )));
            }
        }
    }
    Ok(out)
}

/// Largest relative gap between `|amplitude|²` and the closed-form pmf.
pub fn modulus_residual(spec: &StateSpec) -> Result<f64> {
    let psi = spec.build_auto()?;
    let mut w: f64 = 0.0;
    for (s, a) in psi.basis().states().iter().zip(psi.amplitudes()) {
        let p = spec.pmf(s)?;
        if p > 1e-300 {
            w = w.max((a.norm_sqr() - p).abs() / p);
        }
    }
    Ok(w)
}

pub fn modulus_checks() -> Vec<Check> {
    vec![Check::guarded(
        "modulus square law",
        Comparison::AtMost,
        MODULUS_TOL,
        || {
            let specs = modulus_grid()?;
            let mut w = (0.0f64, Value::Null);
            for spec in &specs {
                let v = modulus_residual(spec)?;
                if v >= w.0 {
                    w = (v, serde_json::to_value(&spec.params).unwrap_or(Value::Null));
                }
            }
            Ok((w.0, json!({ "states": specs.len(), "worst": w.1 })))
        },
    )]
}

pub fn ladder_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for (factor, name) in [
        (IdentityFactor::SqrtMPlusN, "ladder identity sqrt(M+N)"),
        (IdentityFactor::SqrtMMinusN, "ladder identity sqrt(M-N)"),
    ] {
        out.push(Check::guarded(
            name,
            Comparison::AtMost,
            RELATION_TOL,
            || {
                let mut w: f64 = 0.0;
                for m in [1.0, 2.0, 3.0, 4.5] {
                    if factor == IdentityFactor::SqrtMMinusN && m != f64::from(m as u32) {
                        continue;
                    }
                    w = w.max(operator_identity_check(factor, m, 6)?.max_residual);
                }
                Ok((w, Value::Null))
            },
        ));
    }
    out
}

pub const GF_POINTS: [f64; 3] = [0.0, 0.5, 1.0];

/// Worst `|⟨t^N⟩ − G(t)|` and worst moment gap over the negative binomial grid.
pub fn gf_residuals() -> Result<(f64, f64)> {
    let (mut g, mut mo): (f64, f64) = (0.0, 0.0);
    for &e2 in &GRID_ETA2 {
        for &m in &[0.5, 1.0, 2.0, 3.0, 5.0] {
            let p = NegBinomialParams::new(e2, m)?;
            let psi = StateSpec::real(FamilyParams::NegBinomial(p))
                .with_tail_tol(1e-16)
                .build_auto()?;
            for t in GF_POINTS {
                g = g.max((quantum_gf(&psi, t)? - neg_binomial_gf(&p, t)?).abs());
            }
            let (mean, var) = number_moments(&psi);
            let want = moments_from_gf(&p);
            mo = mo
                .max((mean - want.mean).abs() / want.mean.max(1.0))
                .max((var - want.variance).abs() / want.variance.max(1.0));
        }
    }
    Ok((g, mo))
}

pub fn gf_checks() -> Vec<Check> {
    match gf_residuals() {
        Ok((g, m)) => vec![
            Check::at_most(
                "quantum generating function",
                g,
                GF_TOL,
                json!({ "t": GF_POINTS }),
            ),
            Check::at_most("moments from generating function", m, GF_TOL, Value::Null),
        ],
        Err(e) => vec![Check::guarded(
            "quantum generating function",
            Comparison::AtMost,
            GF_TOL,
            || Err(e),
        )],
    }
}

// Dynamics

/// Two-level-atom drive at shell `m` against the binomial state.
pub fn two_level_infidelity(m: u32) -> Result<f64> {
    let drive = TwoLevelDrive {
        m,
        epsilon: 1.3,
        eta_rate: 0.25,
        theta: 0.4,
        t: 2.0,
    };
    let b = basis(2, Cutoff::Shell(m))?;
    let out = dynamical_binomial(&drive, &b)?;
    let p = MultinomialParams::from_eta2(&[(drive.eta_rate * drive.t).sin().powi(2)], m)?;
    let direct = multinomial_state(&p, &[drive.theta], &b)?;
    Ok(1.0 - fidelity(&out.state, &direct)?)
}

/// Piecewise-constant classical current against the coherent state.
pub fn current_infidelity(drive: &CurrentDrive) -> Result<f64> {
    let a = drive.amplitude_bound().max(0.5);
    let spec = StateSpec::real(FamilyParams::Coherent(PoissonParams::new(a * a)?));
    let b = spec.auto_basis(DISPLACEMENT_GUARD)?;
    let out = dynamical_coherent(drive, &b)?;
    let coh = coherent_state_complex(current_alpha(drive), &b, 1e-12)?;
    Ok(1.0 - fidelity(&out.state, &coh)?)
}

pub fn default_current_drives() -> Vec<CurrentDrive> {
    let seg = |d: f64, re: f64, im: f64| CurrentSegment {
        duration: d,
        j: Complex64::new(re, im),
    };
    vec![
        CurrentDrive {
            omega: 0.0,
            segments: vec![seg(1.5, 0.8, 0.3)],
        },
        CurrentDrive {
            omega: 0.9,
            segments: vec![seg(1.0, 0.7, 0.0), seg(0.8, -0.2, 0.5)],
        },
        CurrentDrive {
            omega: 2.0,
            segments: vec![seg(0.5, 0.0, 1.0), seg(0.5, 0.6, 0.0), seg(1.0, -0.4, -0.4)],
        },
    ]
}

pub fn dynamical_checks() -> Vec<Check> {
    let ms: Vec<u32> = vec![1, 3];
    let drives = default_current_drives();
    vec![
        Check::guarded("two-level atoms", Comparison::AtMost, TWO_LEVEL_TOL, || {
            sweep(&ms, |&m| two_level_infidelity(m))
        }),
        Check::guarded("classical current", Comparison::AtMost, CURRENT_TOL, || {
            let idx: Vec<usize> = (0..drives.len()).collect();
            sweep(&idx, |&i| current_infidelity(&drives[i]))
        }),
    ]
}
