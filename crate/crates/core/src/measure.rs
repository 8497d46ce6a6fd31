//! Fixed-M projectors, CP^r measures and quadrature checks of the
//! resolution of unity `∫dμ(ξ) |ξ⟩⟨ξ| = P_M`.
//!
//! The `ζ_C` radial integral is done analytically, leaving `2r` real
//! dimensions. Two compactifying maps are available:
//!
//! * [`RadialMap::Projective`] (default): `η = ξ/√(1+|ξ|²)` sends `ℂ^r` onto
//!   the unit ball, where the measure is flat. The squared moduli `|η_j|²`
//!   are sampled on the simplex by stick-breaking Gauss-Legendre nodes and
//!   the phases by the trapezoid rule, so the integrand is polynomial and
//!   the rule is exact once the node counts pass `M`.
//! * [`RadialMap::PerVariable`]: `u_j = ρ_j²/(1+ρ_j²)` independently per
//!   complex variable. For `r = 1` this is the same map; for `r ≥ 2` the
//!   integrand is not smooth at the corner `u_j → 1` and the rule converges
//!   only algebraically.

use std::f64::consts::PI;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::distributions::{multinomial_pmf, slice_to_shell, MultinomialParams};
use crate::error::{invalid, Error, Result};
use crate::exec::{pairwise_reduce, Execution};
use crate::fock::{Cutoff, LinearOperator, OccupationVector, StateVector, TruncatedBasis};

/// Smallest node count per real dimension.
pub const MIN_NODES: usize = 8;

/// Largest rank run without [`MeasureSpec::allow_high_rank`].
pub const DEFAULT_MAX_RANK: usize = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialMap {
    #[default]
    Projective,
    PerVariable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub r: usize,
    pub m: u32,
    /// Gauss-Legendre nodes per radial variable.
    pub radial_nodes: usize,
    /// Trapezoid nodes per angle.
    pub angular_nodes: usize,
    pub radial_map: RadialMap,
    /// Permit `r` above [`DEFAULT_MAX_RANK`]; cost grows as `nodes^{2r}`.
    pub allow_high_rank: bool,
}

impl MeasureSpec {
    /// `nodes` per real dimension, projective map.
    pub fn new(r: usize, m: u32, nodes: usize) -> Result<Self> {
        let spec = Self {
            r,
            m,
            radial_nodes: nodes,
            angular_nodes: nodes,
            radial_map: RadialMap::Projective,
            allow_high_rank: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_map(mut self, map: RadialMap) -> Self {
        self.radial_map = map;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(invalid("rank must be at least 1"));
        }
        if self.radial_nodes < MIN_NODES || self.angular_nodes < MIN_NODES {
            return Err(invalid(format!(
                "need at least {MIN_NODES} nodes per dimension"
            )));
        }
        if self.r > DEFAULT_MAX_RANK && !self.allow_high_rank {
            return Err(invalid(format!(
                "rank {} resolution checks need allow_high_rank",
                self.r
            )));
        }
        Ok(())
    }

    /// `(M+r)!/M!`.
    fn prefactor(&self) -> f64 {
        (ln_factorial(u64::from(self.m) + self.r as u64) - ln_factorial(u64::from(self.m))).exp()
    }
}

/// Orthogonal projector onto the shell `Σn = M` of `basis`.
pub fn projector_fixed_m(basis: &Arc<TruncatedBasis>, m: u32) -> Result<LinearOperator> {
    let shell = TruncatedBasis::new(basis.modes(), Cutoff::Shell(m))?;
    if !shell.states().iter().all(|s| basis.contains(s)) {
        return Err(Error::ShellAbsent(format!("shell total {m}")));
    }
    Ok(LinearOperator::diagonal(basis.clone(), |occ| {
        Complex64::new(if occ.total() == m { 1.0 } else { 0.0 }, 0.0)
    }))
}

/// `(M+r)!/M! · 1/(π^r (1+|ξ|²)^{r+1})`.
pub fn measure_density(m: u32, xi: &[Complex64]) -> f64 {
    let r = xi.len() as u64;
    let s: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
    let ln = ln_factorial(u64::from(m) + r)
        - ln_factorial(u64::from(m))
        - r as f64 * PI.ln()
        - (r + 1) as f64 * s.ln_1p();
    ln.exp()
}

/// `(1+|ξ|²)^{−M/2} Σ √(M!/n!) ξ^{n′} |M−Σn′, n′⟩` on an `r+1`-mode basis
/// holding the shell.
pub fn projected_state(
    m: u32,
    xi: &[Complex64],
    basis: &Arc<TruncatedBasis>,
) -> Result<StateVector> {
    if basis.modes() != xi.len() + 1 {
        return Err(invalid(
            "basis must have one more mode than ξ has components",
        ));
    }
    if xi.iter().any(|z| !z.is_finite()) {
        return Err(invalid("ξ must be finite"));
    }
    projector_fixed_m(basis, m)?;
    let table = ShellTable::new(xi.len(), m)?;
    let s: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
    let mut shell_amps = vec![Complex64::new(0.0, 0.0); table.states.len()];
    table.amplitudes_xi(xi, s, &mut shell_amps);
    let mut amps = vec![Complex64::new(0.0, 0.0); basis.len()];
    for (occ, a) in table.states.iter().zip(shell_amps) {
        amps[basis.index_of(occ).expect("shell present")] = a;
    }
    StateVector::new(basis.clone(), amps)
}

/// Shell states with `½ ln(M!/n!)`.
struct ShellTable {
    m: u32,
    states: Vec<OccupationVector>,
    half_ln_coeff: Vec<f64>,
}

impl ShellTable {
    fn new(r: usize, m: u32) -> Result<Self> {
        let basis = TruncatedBasis::new(r + 1, Cutoff::Shell(m))?;
        let lm = ln_factorial(u64::from(m));
        let half_ln_coeff = basis
            .states()
            .iter()
            .map(|s| {
                0.5 * (lm
                    - s.as_slice()
                        .iter()
                        .map(|&k| ln_factorial(u64::from(k)))
                        .sum::<f64>())
            })
            .collect();
        Ok(Self {
            m,
            states: basis.states().to_vec(),
            half_ln_coeff,
        })
    }

    /// Amplitudes of `|ξ⟩` with `s = |ξ|²`.
    fn amplitudes_xi(&self, xi: &[Complex64], s: f64, out: &mut [Complex64]) {
        let norm = (-0.5 * f64::from(self.m) * s.ln_1p()).exp();
        for ((occ, c), o) in self
            .states
            .iter()
            .zip(&self.half_ln_coeff)
            .zip(out.iter_mut())
        {
            let mut z = Complex64::new(c.exp() * norm, 0.0);
            for (x, &k) in xi.iter().zip(&occ.as_slice()[1..]) {
                z *= x.powu(k);
            }
            *o = z;
        }
    }

    /// The same state in ball coordinates `η = ξ/√(1+|ξ|²)`, `q = 1 − |η|²`.
    fn amplitudes_eta(&self, eta: &[Complex64], q: f64, out: &mut [Complex64]) {
        for ((occ, c), o) in self
            .states
            .iter()
            .zip(&self.half_ln_coeff)
            .zip(out.iter_mut())
        {
            let n = occ.as_slice();
            let mut z = Complex64::new(c.exp() * q.powf(0.5 * f64::from(n[0])), 0.0);
            for (x, &k) in eta.iter().zip(&n[1..]) {
                z *= x.powu(k);
            }
            *o = z;
        }
    }
}

/// Outcome of a resolution-of-unity quadrature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub r: usize,
    #[serde(rename = "M")]
    pub m: u32,
    /// Radial and angular node counts.
    pub nodes: [usize; 2],
    pub radial_map: RadialMap,
    pub max_entry_residual: f64,
    pub trace_residual: f64,
    /// Row and column states of the largest residual.
    pub worst_entry: Option<(OccupationVector, OccupationVector)>,
}

impl ResolutionReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_entry_residual <= tol && self.trace_residual <= tol
    }
}

/// Quadrature of `∫dμ(ξ) |ξ⟩⟨ξ|` on the shell compared entrywise with `P_M`.
///
/// Radial node tuples are independent chunks; their partial sums are
/// combined by pairwise reduction in index order, so the result does not
/// depend on `exec`.
pub fn resolution_check(spec: &MeasureSpec, exec: Execution) -> Result<ResolutionReport> {
    spec.validate()?;
    let r = spec.r;
    let table = ShellTable::new(r, spec.m)?;
    let dim = table.states.len();
    let gl = GaussLegendre::new(
        spec.radial_nodes
            .try_into()
            .map_err(|_| invalid("radial node count"))?,
    );
    // Map [-1,1] to [0,1].
    let radial: Vec<(f64, f64)> = gl.iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
    let na = spec.angular_nodes;
    let dphi = 2.0 * PI / na as f64;
    let phases: Vec<Complex64> = (0..na)
        .map(|k| Complex64::from_polar(1.0, dphi * k as f64))
        .collect();
    let nr = radial.len();
    let chunks = nr.pow(r as u32);
    let pref = spec.prefactor() / PI.powi(r as i32);
    let angle_weight = (0.5 * dphi).powi(r as i32);

    let partials = exec.map_range(chunks, |c| {
        let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
        let mut idx = Vec::with_capacity(r);
        let mut rest = c;
        for _ in 0..r {
            idx.push(rest % nr);
            rest /= nr;
        }
        // Squared moduli and the radial weight (measure density × Jacobian).
        let (moduli, weight, q) = match spec.radial_map {
            RadialMap::Projective => {
                let mut s = Vec::with_capacity(r);
                let mut left = 1.0;
                let mut w = pref;
                for &i in &idx {
                    let (v, wv) = radial[i];
                    s.push(left * v);
                    w *= wv * left;
                    left *= 1.0 - v;
                }
                (s, w, left)
            }
            RadialMap::PerVariable => {
                let mut s = Vec::with_capacity(r);
                let mut w = pref;
                for &i in &idx {
                    let (u, wu) = radial[i];
                    s.push(u / (1.0 - u));
                    w *= wu / ((1.0 - u) * (1.0 - u));
                }
                let total: f64 = s.iter().sum();
                w *= (-((r + 1) as f64) * total.ln_1p()).exp();
                (s, w, total)
            }
        };
        let radii: Vec<f64> = moduli.iter().map(|x| x.sqrt()).collect();
        let w = weight * angle_weight;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let mut z = vec![Complex64::new(0.0, 0.0); r];
        for a in 0..na.pow(r as u32) {
            let mut rest = a;
            for j in 0..r {
                z[j] = phases[rest % na] * radii[j];
                rest /= na;
            }
            match spec.radial_map {
                RadialMap::Projective => table.amplitudes_eta(&z, q, &mut amps),
                RadialMap::PerVariable => table.amplitudes_xi(&z, q, &mut amps),
            }
            for (i, ai) in amps.iter().enumerate() {
                let wa = ai * w;
                for (j, aj) in amps.iter().enumerate() {
                    acc[i * dim + j] += wa * aj.conj();
                }
            }
        }
        acc
    });
    let total = pairwise_reduce(partials, |mut a, b| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    })
    .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); dim * dim]);

    let mut worst = (0.0, None);
    let mut trace = 0.0;
    for i in 0..dim {
        trace += total[i * dim + i].re;
        for j in 0..dim {
            let want = if i == j { 1.0 } else { 0.0 };
            let d = (total[i * dim + j] - want).norm();
            if worst.1.is_none() || d > worst.0 {
                worst = (d, Some((table.states[i].clone(), table.states[j].clone())));
            }
        }
    }
    Ok(ResolutionReport {
        r,
        m: spec.m,
        nodes: [spec.radial_nodes, spec.angular_nodes],
        radial_map: spec.radial_map,
        max_entry_residual: worst.0,
        trace_residual: (trace - dim as f64).abs(),
        worst_entry: worst.1,
    })
}

/// Residuals along a sequence of node counts with the observed order
/// `log₂(res_k / res_{k+1})` between successive doublings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub nodes: Vec<usize>,
    pub residuals: Vec<f64>,
    pub orders: Vec<f64>,
}

pub fn convergence_study(
    spec: &MeasureSpec,
    nodes: &[usize],
    exec: Execution,
) -> Result<ConvergenceStudy> {
    let mut residuals = Vec::with_capacity(nodes.len());
    for &n in nodes {
        let s = MeasureSpec {
            radial_nodes: n,
            angular_nodes: n,
            ..spec.clone()
        };
        residuals.push(resolution_check(&s, exec)?.max_entry_residual);
    }
    let orders = residuals
        .windows(2)
        .zip(nodes.windows(2))
        .map(|(r, n)| (r[0] / r[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect();
    Ok(ConvergenceStudy {
        nodes: nodes.to_vec(),
        residuals,
        orders,
    })
}

/// Conditioned multiple-Poisson law against the multinomial pmf.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlicingReport {
    #[serde(rename = "M")]
    pub m: u32,
    pub alphas: Vec<f64>,
    pub shell_size: usize,
    pub max_relative_error: f64,
}

/// Slice `Π Poisson(α_j²)` to `Σn = M` and compare with the multinomial law
/// with `η_j = α_j/|α|`. Zero amplitudes are dropped from the multinomial
/// and must carry zero sliced mass.
pub fn slicing_check(alphas: &[f64], m: u32) -> Result<SlicingReport> {
    let sliced = slice_to_shell(alphas, m)?;
    let norm2: f64 = alphas.iter().map(|a| a * a).sum();
    // The reference mode carries η₀² = 1 − Σ_{j≠0} η_j², so pivot on the
    // largest amplitude to keep that difference free of cancellation.
    let pivot = (0..alphas.len())
        .filter(|&j| alphas[j] > 0.0)
        .max_by(|&a, &b| alphas[a].total_cmp(&alphas[b]));
    let (pivot, others) = match pivot {
        Some(p) => (
            p,
            (0..alphas.len())
                .filter(|&j| j != p && alphas[j] > 0.0)
                .collect::<Vec<_>>(),
        ),
        None if m == 0 => (0, Vec::new()),
        None => return Err(Error::ZeroMassShell),
    };
    let params = if others.is_empty() || m == 0 {
        None
    } else {
        let eta = others.iter().map(|&j| alphas[j] / norm2.sqrt()).collect();
        Some(MultinomialParams::new(eta, m)?)
    };
    let mut worst: f64 = 0.0;
    for (occ, &p) in sliced.basis.states().iter().zip(&sliced.probabilities) {
        let n = occ.as_slice();
        let dead = (0..n.len()).any(|j| n[j] > 0 && j != pivot && !others.contains(&j));
        let want = if dead {
            0.0
        } else {
            match &params {
                Some(params) => {
                    let n_prime: Vec<u32> = others.iter().map(|&j| n[j]).collect();
                    multinomial_pmf(params, &n_prime)?
                }
                None => 1.0,
            }
        };
        let err = if want > 0.0 {
            (p - want).abs() / want
        } else if p == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(err);
    }
    Ok(SlicingReport {
        m,
        alphas: alphas.to_vec(),
        shell_size: sliced.basis.len(),
        max_relative_error: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_points() {
        assert!((measure_density(1, &[Complex64::new(0.0, 0.0)]) - 2.0 / PI).abs() < 1e-15);
        let z = [Complex64::new(0.0, 0.0); 2];
        assert!((measure_density(1, &z) - 6.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn projector_is_idempotent() {
        let b = TruncatedBasis::new(3, Cutoff::Total(4)).unwrap();
        let p = projector_fixed_m(&b, 3).unwrap();
        assert_eq!(p.matmul(&p).unwrap().max_abs_diff(&p).unwrap(), 0.0);
        assert!(p.is_hermitian(0.0));
        let rank: f64 = (0..b.len()).map(|i| p.get(i, i).re).sum();
        assert_eq!(rank, 10.0);
        let small = TruncatedBasis::new(2, Cutoff::Total(2)).unwrap();
        assert!(projector_fixed_m(&small, 3).is_err());
    }

    #[test]
    fn symmetric_point() {
        let b = TruncatedBasis::new(2, Cutoff::Shell(1)).unwrap();
        let s = projected_state(1, &[Complex64::new(1.0, 0.0)], &b).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for a in s.amplitudes() {
            assert!((a.re - h).abs() < 1e-15);
        }
    }

    #[test]
    fn rank_one_quadrature() {
        let spec = MeasureSpec::new(1, 3, 16).unwrap();
        let rep = resolution_check(&spec, Execution::Sequential).unwrap();
        assert!(rep.passed(1e-12), "{rep:?}");
    }

    #[test]
    fn high_rank_needs_flag() {
        assert!(MeasureSpec::new(3, 1, 8).is_err());
        assert!(MeasureSpec::new(1, 1, 4).is_err());
    }
}
