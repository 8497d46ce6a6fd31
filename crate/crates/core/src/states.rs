//! The five state families as explicit amplitude vectors.
//!
//! Amplitudes are built from running log-coefficient recurrences, a path
//! independent of the saddle-point pmfs in [`crate::distributions`], so the
//! modulus-square law `|amplitude|² = pmf` is a genuine cross-check.
//!
//! Phase convention: the vacuum (or lowest-weight) amplitude is real and
//! positive, and amplitude `n` carries `e^{i Σ n_j θ_j}`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distributions::{
    binomial_pmf, multinomial_pmf, neg_binomial_pmf, neg_multinomial_pmf, poisson_pmf,
    BinomialParams, CountDistribution, MultinomialParams, NegBinomialParams, NegMultinomialParams,
    PoissonParams,
};
use crate::error::{invalid, Error, Result};
use crate::fock::{Cutoff, OccupationVector, StateVector, TruncatedBasis};
use crate::DEFAULT_TAIL_TOL;

/// Extra levels above the tail cutoff for states that operators will act on.
pub const OPERATOR_GUARD: u32 = 8;

/// The five coherent-state families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Coherent,
    Binomial,
    Multinomial,
    NegBinomial,
    NegMultinomial,
}

/// Parameters of one family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParams {
    Coherent(PoissonParams),
    Binomial(BinomialParams),
    Multinomial(MultinomialParams),
    NegBinomial(NegBinomialParams),
    NegMultinomial(NegMultinomialParams),
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::Coherent(_) => Family::Coherent,
            FamilyParams::Binomial(_) => Family::Binomial,
            FamilyParams::Multinomial(_) => Family::Multinomial,
            FamilyParams::NegBinomial(_) => Family::NegBinomial,
            FamilyParams::NegMultinomial(_) => Family::NegMultinomial,
        }
    }

    /// Number of complex parameters, hence of phases.
    pub fn phase_count(&self) -> usize {
        match self {
            FamilyParams::Multinomial(p) => p.rank(),
            FamilyParams::NegMultinomial(p) => p.rank(),
            _ => 1,
        }
    }
}

/// A family, its parameters, phases and tail tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub params: FamilyParams,
    pub phases: Vec<f64>,
    pub tail_tol: f64,
}

impl StateSpec {
    pub fn new(params: FamilyParams, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != params.phase_count() {
            return Err(invalid(format!(
                "{:?} takes {} phase(s), got {}",
                params.family(),
                params.phase_count(),
                phases.len()
            )));
        }
        if phases.iter().any(|t| !t.is_finite()) {
            return Err(invalid("phases must be finite"));
        }
        Ok(Self {
            params,
            phases,
            tail_tol: DEFAULT_TAIL_TOL,
        })
    }

    /// Zero phases.
    pub fn real(params: FamilyParams) -> Self {
        let n = params.phase_count();
        Self {
            params,
            phases: vec![0.0; n],
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }

    pub fn with_tail_tol(mut self, tol: f64) -> Self {
        self.tail_tol = tol;
        self
    }

    pub fn family(&self) -> Family {
        self.params.family()
    }

    /// Smallest basis meeting the tail tolerance, plus `guard` levels.
    ///
    /// Single-mode families and the negative multinomial use the reduced
    /// modes; the multinomial uses the `r+1`-mode shell `Σn = M`.
    pub fn auto_basis(&self, guard: u32) -> Result<Arc<TruncatedBasis>> {
        let tol = self.tail_tol;
        match &self.params {
            FamilyParams::Coherent(p) => {
                TruncatedBasis::new(1, Cutoff::PerMode(support(p, tol)? + guard))
            }
            FamilyParams::Binomial(p) => TruncatedBasis::new(1, Cutoff::PerMode(p.m() + guard)),
            FamilyParams::NegBinomial(p) => {
                TruncatedBasis::new(1, Cutoff::PerMode(support(p, tol)? + guard))
            }
            FamilyParams::Multinomial(p) => TruncatedBasis::new(p.rank() + 1, Cutoff::Shell(p.m())),
            FamilyParams::NegMultinomial(p) => TruncatedBasis::new(
                p.rank(),
                Cutoff::Total(support(&p.total_marginal(), tol)? + guard),
            ),
        }
    }

    pub fn build(&self, basis: &Arc<TruncatedBasis>) -> Result<StateVector> {
        let tol = self.tail_tol;
        match &self.params {
            FamilyParams::Coherent(p) => coherent_state(p, self.phases[0], basis, tol),
            FamilyParams::Binomial(p) => binomial_state(p, self.phases[0], basis),
            FamilyParams::NegBinomial(p) => neg_binomial_state(p, self.phases[0], basis, tol),
            FamilyParams::Multinomial(p) => multinomial_state(p, &self.phases, basis),
            FamilyParams::NegMultinomial(p) => neg_multinomial_state(p, &self.phases, basis, tol),
        }
    }

    /// Build on [`StateSpec::auto_basis`] without guard levels.
    pub fn build_auto(&self) -> Result<StateVector> {
        self.build(&self.auto_basis(0)?)
    }

    /// The closed-form pmf at a basis state of [`StateSpec::build`]'s basis.
    pub fn pmf(&self, occ: &OccupationVector) -> Result<f64> {
        let n = occ.as_slice();
        match &self.params {
            FamilyParams::Coherent(p) => Ok(poisson_pmf(p, u64::from(n[0]))),
            FamilyParams::Binomial(p) => binomial_pmf(p, u64::from(n[0])),
            FamilyParams::NegBinomial(p) => Ok(neg_binomial_pmf(p, u64::from(n[0]))),
            FamilyParams::Multinomial(p) => multinomial_pmf(p, &n[1..]),
            FamilyParams::NegMultinomial(p) => neg_multinomial_pmf(p, n),
        }
    }
}

pub(crate) fn support<D: CountDistribution>(d: &D, tol: f64) -> Result<u32> {
    let n = d.support_len(tol)?;
    u32::try_from(n).map_err(|_| invalid("support exceeds the occupation range"))
}

/// Mass above `n_max`: the analytic tail bound when it applies, otherwise
/// one minus the body sum.
pub(crate) fn tail_mass<D: CountDistribution>(d: &D, n_max: u64) -> f64 {
    let b = d.tail_bound(n_max);
    if b.is_finite() {
        b
    } else {
        let body: f64 = (0..=n_max).map(|n| d.pmf(n)).sum();
        (1.0 - body).max(0.0)
    }
}

fn require_modes(basis: &TruncatedBasis, modes: usize) -> Result<()> {
    if basis.modes() == modes {
        Ok(())
    } else {
        Err(invalid(format!(
            "expected a {modes}-mode basis, got {} modes",
            basis.modes()
        )))
    }
}

fn single_mode_max(basis: &TruncatedBasis) -> Result<u32> {
    require_modes(basis, 1)?;
    if !basis.contains(&OccupationVector::vacuum(1)) {
        return Err(Error::ShellAbsent(
            "single-mode basis lacks the vacuum".into(),
        ));
    }
    Ok(basis.max_total())
}

fn check_tail(tail: f64, tol: f64) -> Result<()> {
    if tail < tol || tail == 0.0 {
        Ok(())
    } else {
        Err(Error::CutoffTooSmall { tail, tol })
    }
}

/// Running sums `Σ_{k<n} ln(c + k)` for `n = 0..=n_max`.
fn ln_rising_table(c: f64, n_max: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut acc = 0.0;
    out.push(acc);
    for k in 0..n_max {
        acc += (c + f64::from(k)).ln();
        out.push(acc);
    }
    out
}

/// Amplitude from a log modulus and a phase angle.
fn amp(ln_modulus: f64, angle: f64) -> Complex64 {
    Complex64::from_polar(ln_modulus.exp(), angle)
}

/// `e^{−α²/2} (αe^{iθ})ⁿ/√n!` on a single-mode basis.
pub fn coherent_state(
    p: &PoissonParams,
    theta: f64,
    basis: &Arc<TruncatedBasis>,
    tail_tol: f64,
) -> Result<StateVector> {
    let n_max = single_mode_max(basis)?;
    check_tail(tail_mass(p, u64::from(n_max)), tail_tol)?;
    let lnf = ln_rising_table(1.0, n_max);
    let ln_alpha = 0.5 * p.alpha2().ln();
    let amps = basis
        .states()
        .iter()
        .map(|s| {
            let n = s[0];
            let lm = -0.5 * p.alpha2() + f64::from(n) * ln_alpha - 0.5 * lnf[n as usize];
            amp(lm, f64::from(n) * theta)
        })
        .collect();
    StateVector::new(basis.clone(), amps)
}

/// Coherent state with complex amplitude `α_C`; `α_C = 0` is the vacuum.
pub fn coherent_state_complex(
    alpha: Complex64,
    basis: &Arc<TruncatedBasis>,
    tail_tol: f64,
) -> Result<StateVector> {
    if alpha.norm() == 0.0 {
        single_mode_max(basis)?;
        return StateVector::vacuum(basis.clone());
    }
    coherent_state(
        &PoissonParams::new(alpha.norm_sqr())?,
        alpha.arg(),
        basis,
        tail_tol,
    )
}

/// Product of coherent states `⊗_j |α_j⟩` on an `r`-mode basis.
pub fn product_coherent_state(
    alphas: &[Complex64],
    basis: &Arc<TruncatedBasis>,
) -> Result<StateVector> {
    require_modes(basis, alphas.len())?;
    let n_max = basis.max_total();
    let lnf = ln_rising_table(1.0, n_max);
    let amps = basis
        .states()
        .iter()
        .map(|s| {
            let mut lm = 0.0;
            let mut angle = 0.0;
            for (&n, a) in s.as_slice().iter().zip(alphas) {
                lm -= 0.5 * a.norm_sqr();
                if n > 0 {
                    if a.norm() == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    lm += f64::from(n) * a.norm().ln() - 0.5 * lnf[n as usize];
                    angle += f64::from(n) * a.arg();
                }
            }
            amp(lm, angle)
        })
        .collect();
    StateVector::new(basis.clone(), amps)
}

/// `√C(M,n) (ηe^{iθ})ⁿ (1−η²)^{(M−n)/2}` on the reduced single-mode basis.
pub fn binomial_state(
    p: &BinomialParams,
    theta: f64,
    basis: &Arc<TruncatedBasis>,
) -> Result<StateVector> {
    let n_max = single_mode_max(basis)?;
    let m = p.m();
    if n_max < m {
        let tail = (u64::from(n_max) + 1..=u64::from(m))
            .map(|n| binomial_pmf(p, n).unwrap_or(0.0))
            .sum();
        return Err(Error::CutoffTooSmall { tail, tol: 0.0 });
    }
    let lnf = ln_rising_table(1.0, m);
    let ln_eta = p.eta().ln();
    let ln_q = 0.5 * (-p.eta2()).ln_1p();
    let amps = basis
        .states()
        .iter()
        .map(|s| {
            let n = s[0];
            if n > m {
                return Complex64::new(0.0, 0.0);
            }
            let ln_c = lnf[m as usize] - lnf[n as usize] - lnf[(m - n) as usize];
            let lm = 0.5 * ln_c + f64::from(n) * ln_eta + f64::from(m - n) * ln_q;
            amp(lm, f64::from(n) * theta)
        })
        .collect();
    StateVector::new(basis.clone(), amps)
}

/// `(1−η²)^{M/2} √(Γ(M+n)/(Γ(M)n!)) (ηe^{iθ})ⁿ` on a single-mode basis.
pub fn neg_binomial_state(
    p: &NegBinomialParams,
    theta: f64,
    basis: &Arc<TruncatedBasis>,
    tail_tol: f64,
) -> Result<StateVector> {
    let n_max = single_mode_max(basis)?;
    check_tail(tail_mass(p, u64::from(n_max)), tail_tol)?;
    let rising = ln_rising_table(p.m(), n_max);
    let lnf = ln_rising_table(1.0, n_max);
    let ln_eta = p.eta().ln();
    let ln_q = 0.5 * p.m() * (-p.eta2()).ln_1p();
    let amps = basis
        .states()
        .iter()
        .map(|s| {
            let n = s[0] as usize;
            let lm = ln_q + 0.5 * (rising[n] - lnf[n]) + n as f64 * ln_eta;
            amp(lm, n as f64 * theta)
        })
        .collect();
    StateVector::new(basis.clone(), amps)
}

fn check_phases(phases: &[f64], rank: usize) -> Result<()> {
    if phases.len() == rank {
        Ok(())
    } else {
        Err(invalid(format!(
            "expected {rank} phases, got {}",
            phases.len()
        )))
    }
}

/// Log-modulus and phase of the multinomial amplitude at `n′`.
fn multinomial_amp(
    p: &MultinomialParams,
    phases: &[f64],
    lnf: &[f64],
    n_prime: &[u32],
) -> Option<Complex64> {
    let total: u32 = n_prime.iter().sum();
    let m = p.m();
    if total > m {
        return None;
    }
    let n0 = m - total;
    let mut lm =
        0.5 * (lnf[m as usize] - lnf[n0 as usize]) + 0.5 * f64::from(n0) * (-p.eta2_sum()).ln_1p();
    let mut angle = 0.0;
    for ((&k, &e), &t) in n_prime.iter().zip(p.eta()).zip(phases) {
        lm += f64::from(k) * e.ln() - 0.5 * lnf[k as usize];
        angle += f64::from(k) * t;
    }
    Some(amp(lm, angle))
}

/// `√(M!/n!) Π(η_j e^{iθ_j})^{n_j} (1−Ση²)^{n₀/2}` on an `r+1`-mode basis
/// containing the shell `Σn = M`. Amplitudes off the shell are zero.
pub fn multinomial_state(
    p: &MultinomialParams,
    phases: &[f64],
    basis: &Arc<TruncatedBasis>,
) -> Result<StateVector> {
    check_phases(phases, p.rank())?;
    require_modes(basis, p.rank() + 1)?;
    let shell = TruncatedBasis::new(p.rank() + 1, Cutoff::Shell(p.m()))?;
    if !shell.states().iter().all(|s| basis.contains(s)) {
        return Err(Error::ShellAbsent(format!("shell total {}", p.m())));
    }
    let lnf = ln_rising_table(1.0, p.m());
    let amps = basis
        .states()
        .iter()
        .map(|s| {
            if s.total() != p.m() {
                return Complex64::new(0.0, 0.0);
            }
            multinomial_amp(p, phases, &lnf, &s.as_slice()[1..]).unwrap_or_default()
        })
        .collect();
    StateVector::new(basis.clone(), amps)
}

/// The multinomial state on the reduced `r`-mode basis, `‖n′⟩ = |M−Σn′, n′⟩`.
///
/// The basis must contain every `n′` with `Σn′ ≤ M`.
pub fn multinomial_reduced_state(
    p: &MultinomialParams,
    phases: &[f64],
    basis: &Arc<TruncatedBasis>,
) -> Result<StateVector> {
    check_phases(phases, p.rank())?;
    require_modes(basis, p.rank())?;
    let full = TruncatedBasis::new(p.rank(), Cutoff::Total(p.m()))?;
    if !full.states().iter().all(|s| basis.contains(s)) {
        return Err(Error::ShellAbsent(format!(
            "reduced basis must hold all totals up to {}",
            p.m()
        )));
    }
    let lnf = ln_rising_table(1.0, p.m());
    let amps = basis
        .states()
        .iter()
        .map(|s| multinomial_amp(p, phases, &lnf, s.as_slice()).unwrap_or_default())
        .collect();
    StateVector::new(basis.clone(), amps)
}

/// Upper bound on the negative multinomial mass outside `basis`.
fn neg_multinomial_tail(p: &NegMultinomialParams, basis: &TruncatedBasis) -> Result<f64> {
    match basis.cutoff() {
        Cutoff::Total(c) => Ok(tail_mass(&p.total_marginal(), u64::from(c))),
        Cutoff::PerMode(c) => {
            // Union bound over the marginals; n_j alone is negative binomial
            // with η_j²/(1 − Σ_{k≠j} η_k²).
            let s = p.eta2_sum();
            let mut total = 0.0;
            for e2 in p.eta2() {
                let q = NegBinomialParams::new(e2 / (1.0 - s + e2), p.m())?;
                total += tail_mass(&q, u64::from(c));
            }
            Ok(total)
        }
        Cutoff::Shell(_) => Err(invalid(
            "a negative multinomial state needs a total or per-mode cutoff",
        )),
    }
}

/// `(1−Ση²)^{M/2} √(Γ(M+Σn)/(Γ(M) Πn_j!)) Π(η_j e^{iθ_j})^{n_j}` on an
/// `r`-mode basis.
pub fn neg_multinomial_state(
    p: &NegMultinomialParams,
    phases: &[f64],
    basis: &Arc<TruncatedBasis>,
    tail_tol: f64,
) -> Result<StateVector> {
    check_phases(phases, p.rank())?;
    require_modes(basis, p.rank())?;
    check_tail(neg_multinomial_tail(p, basis)?, tail_tol)?;
    let n_max = basis.max_total();
    let rising = ln_rising_table(p.m(), n_max);
    let lnf = ln_rising_table(1.0, n_max);
    let ln_q = 0.5 * p.m() * (-p.eta2_sum()).ln_1p();
    let ln_eta: Vec<f64> = p.eta().iter().map(|e| e.ln()).collect();
    let amps = basis
        .states()
        .iter()
        .map(|s| {
            let mut lm = ln_q + 0.5 * rising[s.total() as usize];
            let mut angle = 0.0;
            for ((&k, &le), &t) in s.as_slice().iter().zip(&ln_eta).zip(phases) {
                lm += f64::from(k) * le - 0.5 * lnf[k as usize];
                angle += f64::from(k) * t;
            }
            amp(lm, angle)
        })
        .collect();
    StateVector::new(basis.clone(), amps)
}

/// `|amplitude|²` per basis state with the norm deficit.
#[derive(Clone, Debug)]
pub struct NumberDistribution {
    pub basis: Arc<TruncatedBasis>,
    pub probabilities: Vec<f64>,
    /// `1 − Σ probabilities`.
    pub deficit: f64,
}

pub fn number_distribution(psi: &StateVector) -> NumberDistribution {
    let probabilities = psi.probabilities();
    let deficit = 1.0 - probabilities.iter().sum::<f64>();
    NumberDistribution {
        basis: psi.basis().clone(),
        probabilities,
        deficit,
    }
}

/// `⟨ψ| t^N |ψ⟩` on a single-mode state.
pub fn quantum_gf(psi: &StateVector, t: f64) -> Result<f64> {
    require_modes(psi.basis(), 1)?;
    if !(t.is_finite() && t.abs() <= 1.0) {
        return Err(Error::Domain(format!("|t| = {t} exceeds 1")));
    }
    Ok(psi
        .basis()
        .states()
        .iter()
        .zip(psi.amplitudes())
        .map(|(s, a)| t.powi(s[0] as i32) * a.norm_sqr())
        .sum())
}

/// `⟨N⟩` and `⟨N²⟩ − ⟨N⟩²` of the total occupation.
pub fn number_moments(psi: &StateVector) -> (f64, f64) {
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (s, a) in psi.basis().states().iter().zip(psi.amplitudes()) {
        let n = f64::from(s.total());
        let w = a.norm_sqr();
        m1 += n * w;
        m2 += n * n * w;
    }
    (m1, m2 - m1 * m1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fidelity;

    #[test]
    fn coherent_phase_point() {
        let p = PoissonParams::new(1.0).unwrap();
        let b = TruncatedBasis::new(1, Cutoff::PerMode(30)).unwrap();
        let s = coherent_state(&p, std::f64::consts::FRAC_PI_2, &b, 1e-12).unwrap();
        let want = Complex64::new(0.0, (-0.5f64).exp());
        assert!((s.amplitudes()[1] - want).norm() < 1e-15);
    }

    #[test]
    fn coherent_cutoff_too_small() {
        let p = PoissonParams::new(4.0).unwrap();
        let b = TruncatedBasis::new(1, Cutoff::PerMode(5)).unwrap();
        assert!(matches!(
            coherent_state(&p, 0.0, &b, 1e-12),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn binomial_two_level() {
        let p = BinomialParams::new(0.5, 1).unwrap();
        let b = TruncatedBasis::new(1, Cutoff::PerMode(1)).unwrap();
        let s = binomial_state(&p, 0.0, &b).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - h).abs() < 1e-15);
        let small = TruncatedBasis::new(1, Cutoff::PerMode(2)).unwrap();
        let p3 = BinomialParams::new(0.5, 3).unwrap();
        assert!(binomial_state(&p3, 0.0, &small).is_err());
    }

    #[test]
    fn geometric_nbs() {
        let p = NegBinomialParams::new(0.5, 1.0).unwrap();
        let spec = StateSpec::new(FamilyParams::NegBinomial(p), vec![0.3]).unwrap();
        let s = spec.build_auto().unwrap();
        for (n, a) in s.amplitudes().iter().enumerate() {
            let want = Complex64::from_polar(0.5f64.powi(n as i32 + 1).sqrt(), 0.3 * n as f64);
            assert!((a - want).norm() < 1e-15);
        }
    }

    #[test]
    fn nms_vacuum_amplitude() {
        let p = NegMultinomialParams::from_eta2(&[0.2, 0.2], 1.0).unwrap();
        let spec = StateSpec::real(FamilyParams::NegMultinomial(p));
        let s = spec.build_auto().unwrap();
        assert!((s.amplitudes()[0].re - 0.6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn multinomial_rank_one_is_binomial() {
        let m = MultinomialParams::from_eta2(&[0.3], 4).unwrap();
        let b = BinomialParams::new(0.3, 4).unwrap();
        let shell = TruncatedBasis::new(2, Cutoff::Shell(4)).unwrap();
        let ms = multinomial_state(&m, &[0.4], &shell).unwrap();
        let reduced = TruncatedBasis::new(1, Cutoff::PerMode(4)).unwrap();
        let bs = binomial_state(&b, 0.4, &reduced).unwrap();
        for n in 0..=4u32 {
            let a = ms
                .amplitude(&OccupationVector::new(vec![4 - n, n]))
                .unwrap();
            let c = bs.amplitudes()[n as usize];
            assert!((a - c).norm() < 1e-15);
        }
    }

    #[test]
    fn multinomial_shell_must_exist() {
        let m = MultinomialParams::from_eta2(&[0.3, 0.1], 3).unwrap();
        let b = TruncatedBasis::new(3, Cutoff::Total(2)).unwrap();
        assert!(matches!(
            multinomial_state(&m, &[0.0, 0.0], &b),
            Err(Error::ShellAbsent(_))
        ));
    }

    #[test]
    fn phase_count_enforced() {
        let p = NegMultinomialParams::from_eta2(&[0.2, 0.2], 1.0).unwrap();
        assert!(StateSpec::new(FamilyParams::NegMultinomial(p), vec![0.0]).is_err());
    }

    #[test]
    fn quantum_gf_on_number_state() {
        let b = TruncatedBasis::new(1, Cutoff::PerMode(5)).unwrap();
        let s = StateVector::number_state(b, &OccupationVector::new(vec![3])).unwrap();
        assert!((quantum_gf(&s, 0.5).unwrap() - 0.125).abs() < 1e-16);
        assert!(quantum_gf(&s, 1.5).is_err());
    }

    #[test]
    fn vanishing_coherent_amplitude_is_vacuum() {
        let b = TruncatedBasis::new(1, Cutoff::PerMode(5)).unwrap();
        let s = coherent_state_complex(Complex64::new(0.0, 0.0), &b, 1e-12).unwrap();
        let v = StateVector::vacuum(b).unwrap();
        assert_eq!(fidelity(&s, &v).unwrap(), 1.0);
    }
}
