use statrs::function::factorial::ln_factorial;

use super::params::{
    BinomialParams, MultinomialParams, NegBinomialParams, NegMultinomialParams, PoissonParams,
};
use super::saddle::{ln_binom_raw, ln_poisson_raw};
use crate::error::{Error, Result};

/// Longest support table [`CountDistribution::support_table`] will build.
const MAX_SUPPORT: u64 = 10_000_000;

/// A distribution on the non-negative integers.
pub trait CountDistribution {
    /// `ln pmf(n)`, `-∞` outside the support.
    fn ln_pmf(&self, n: u64) -> f64;

    fn pmf(&self, n: u64) -> f64 {
        self.ln_pmf(n).exp()
    }

    /// Largest point of a finite support.
    fn support_max(&self) -> Option<u64>;

    /// Upper bound on the mass strictly above `n`; `+∞` while no bound is
    /// available (before the mode).
    fn tail_bound(&self, n: u64) -> f64;

    /// Smallest `n_max` whose tail bound is at most `tol`.
    fn support_len(&self, tol: f64) -> Result<u64> {
        let mut n = 0;
        loop {
            if self.support_max() == Some(n) || self.tail_bound(n) <= tol {
                return Ok(n);
            }
            n += 1;
            if n > MAX_SUPPORT {
                return Err(Error::CutoffTooSmall {
                    tail: self.tail_bound(MAX_SUPPORT),
                    tol,
                });
            }
        }
    }

    /// `pmf(0..=n_max)` with `n_max` from [`CountDistribution::support_len`].
    fn support_table(&self, tol: f64) -> Result<Vec<f64>> {
        let n_max = self.support_len(tol)?;
        Ok((0..=n_max).map(|n| self.pmf(n)).collect())
    }
}

/// Tail bound from a ratio test: if `pmf(k+1)/pmf(k) ≤ ρ < 1` for all
/// `k ≥ n`, the mass above `n` is at most `pmf(n) ρ/(1−ρ)`.
fn geometric_tail(pmf_n: f64, rho: f64) -> f64 {
    if rho < 1.0 {
        pmf_n * rho / (1.0 - rho)
    } else {
        f64::INFINITY
    }
}

pub fn poisson_ln_pmf(p: &PoissonParams, n: u64) -> f64 {
    ln_poisson_raw(n as f64, p.alpha2())
}

/// `e^{−α²} α^{2n}/n!`.
pub fn poisson_pmf(p: &PoissonParams, n: u64) -> f64 {
    poisson_ln_pmf(p, n).exp()
}

pub fn binomial_ln_pmf(p: &BinomialParams, n: u64) -> Result<f64> {
    let m = u64::from(p.m());
    if n > m {
        return Err(Error::Domain(format!("n = {n} exceeds M = {m}")));
    }
    Ok(ln_binom_raw(n as f64, m as f64, p.eta2(), 1.0 - p.eta2()))
}

/// `C(M,n) η^{2n} (1−η²)^{M−n}`.
pub fn binomial_pmf(p: &BinomialParams, n: u64) -> Result<f64> {
    binomial_ln_pmf(p, n).map(f64::exp)
}

pub fn neg_binomial_ln_pmf(p: &NegBinomialParams, n: u64) -> f64 {
    let m = p.m();
    if n == 0 {
        return m * (-p.eta2()).ln_1p();
    }
    // Γ(M+n)/(Γ(M) n!) = M/(M+n) · C(M+n, n) as a real binomial coefficient.
    let x = n as f64;
    (m / (m + x)).ln() + ln_binom_raw(m, m + x, 1.0 - p.eta2(), p.eta2())
}

/// `Γ(M+n)/(Γ(M) n!) η^{2n} (1−η²)^M`.
pub fn neg_binomial_pmf(p: &NegBinomialParams, n: u64) -> f64 {
    neg_binomial_ln_pmf(p, n).exp()
}

/// `ln` of the multinomial pmf at `n′ = (n₁, …, n_r)`, `n₀ = M − Σn′`.
pub fn multinomial_ln_pmf(p: &MultinomialParams, n_prime: &[u32]) -> Result<f64> {
    if n_prime.len() != p.rank() {
        return Err(Error::DimensionMismatch {
            expected: p.rank(),
            got: n_prime.len(),
        });
    }
    let total: u64 = n_prime.iter().map(|&k| u64::from(k)).sum();
    let m = u64::from(p.m());
    if total > m {
        return Err(Error::Domain(format!(
            "sum of n' = {total} exceeds M = {m}"
        )));
    }
    let n0 = m - total;
    let mut acc = ln_factorial(m) - ln_factorial(n0) + n0 as f64 * (-p.eta2_sum()).ln_1p();
    for (&k, &e) in n_prime.iter().zip(p.eta()) {
        acc += f64::from(k) * (e * e).ln() - ln_factorial(u64::from(k));
    }
    Ok(acc)
}

pub fn multinomial_pmf(p: &MultinomialParams, n_prime: &[u32]) -> Result<f64> {
    multinomial_ln_pmf(p, n_prime).map(f64::exp)
}

pub fn neg_multinomial_ln_pmf(p: &NegMultinomialParams, n: &[u32]) -> Result<f64> {
    if n.len() != p.rank() {
        return Err(Error::DimensionMismatch {
            expected: p.rank(),
            got: n.len(),
        });
    }
    // Negative binomial law of the total times the multinomial split of it
    // with cell probabilities η_j²/Ση².
    let total: u64 = n.iter().map(|&k| u64::from(k)).sum();
    let s = p.eta2_sum();
    let mut acc = neg_binomial_ln_pmf(&p.total_marginal(), total) + ln_factorial(total);
    for (&k, &e) in n.iter().zip(p.eta()) {
        acc += f64::from(k) * (e * e / s).ln() - ln_factorial(u64::from(k));
    }
    Ok(acc)
}

pub fn neg_multinomial_pmf(p: &NegMultinomialParams, n: &[u32]) -> Result<f64> {
    neg_multinomial_ln_pmf(p, n).map(f64::exp)
}

impl CountDistribution for PoissonParams {
    fn ln_pmf(&self, n: u64) -> f64 {
        poisson_ln_pmf(self, n)
    }

    fn support_max(&self) -> Option<u64> {
        None
    }

    fn tail_bound(&self, n: u64) -> f64 {
        // pmf(k+1)/pmf(k) = α²/(k+1) decreases in k.
        geometric_tail(self.pmf(n), self.alpha2() / (n + 1) as f64)
    }
}

impl CountDistribution for BinomialParams {
    fn ln_pmf(&self, n: u64) -> f64 {
        binomial_ln_pmf(self, n).unwrap_or(f64::NEG_INFINITY)
    }

    fn support_max(&self) -> Option<u64> {
        Some(u64::from(self.m()))
    }

    fn tail_bound(&self, n: u64) -> f64 {
        (n + 1..=u64::from(self.m())).map(|k| self.pmf(k)).sum()
    }
}

impl CountDistribution for NegBinomialParams {
    fn ln_pmf(&self, n: u64) -> f64 {
        neg_binomial_ln_pmf(self, n)
    }

    fn support_max(&self) -> Option<u64> {
        None
    }

    fn tail_bound(&self, n: u64) -> f64 {
        // pmf(k+1)/pmf(k) = η²(M+k)/(k+1) is monotone in k with limit η²,
        // so its supremum over k ≥ n is the larger of the two ends.
        let rho = (self.eta2() * (self.m() + n as f64) / (n + 1) as f64).max(self.eta2());
        geometric_tail(self.pmf(n), rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn poisson_values() {
        let p = PoissonParams::new(1.0).unwrap();
        assert!(rel(poisson_pmf(&p, 0), 0.36787944117144232) < 1e-15);
        let p = PoissonParams::new(2.0).unwrap();
        assert!(rel(poisson_pmf(&p, 2), 0.27067056647322538) < 1e-14);
        let p = PoissonParams::new(50.0).unwrap();
        assert!(rel(poisson_pmf(&p, 60), 0.020104872145676234) < 1e-12);
    }

    #[test]
    fn binomial_values() {
        let p = BinomialParams::new(0.5, 2).unwrap();
        let v: Vec<f64> = (0..=2).map(|n| binomial_pmf(&p, n).unwrap()).collect();
        for (a, b) in v.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
        let p = BinomialParams::new(0.25, 4).unwrap();
        assert!(rel(binomial_pmf(&p, 1).unwrap(), 0.421875) < 1e-14);
        assert!(matches!(binomial_pmf(&p, 5), Err(Error::Domain(_))));
        let p = BinomialParams::new(0.25, 1000).unwrap();
        assert!(rel(binomial_pmf(&p, 250).unwrap(), 0.029124105883705087) < 1e-12);
    }

    #[test]
    fn binomial_degenerate_limit_concentrates() {
        let p = BinomialParams::new(1e-12, 5).unwrap();
        assert!(binomial_pmf(&p, 0).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn neg_binomial_values() {
        let p = NegBinomialParams::new(0.5, 1.0).unwrap();
        for n in 0..30 {
            assert!(rel(neg_binomial_pmf(&p, n), 0.5f64.powi(n as i32 + 1)) < 1e-14);
        }
        let p = NegBinomialParams::new(0.25, 2.0).unwrap();
        assert!(rel(neg_binomial_pmf(&p, 1), 0.28125) < 1e-14);
        let p = NegBinomialParams::new(0.3, 2.5).unwrap();
        assert!(rel(neg_binomial_pmf(&p, 0), 0.40996341300169702) < 1e-14);
        let p = NegBinomialParams::new(0.6, 2.5).unwrap();
        assert!(rel(neg_binomial_pmf(&p, 40), 2.695751051427678674709e-8) < 1e-12);
        let p = NegBinomialParams::new(0.3, 1000.0).unwrap();
        assert!(rel(neg_binomial_pmf(&p, 400), 0.0084822399617345368) < 1e-11);
    }

    #[test]
    fn neg_binomial_far_tail_stays_in_log_space() {
        let p = NegBinomialParams::new(0.5, 1000.0).unwrap();
        let ln = neg_binomial_ln_pmf(&p, 10_000);
        // 1.174252895385188e-1859
        let want = 1.174252895385188f64.ln() - 1859.0 * std::f64::consts::LN_10;
        assert!(ln.is_finite());
        assert!(rel(ln, want) < 1e-13);
        assert_eq!(neg_binomial_pmf(&p, 10_000), 0.0);
    }

    #[test]
    fn multinomial_values() {
        let p = MultinomialParams::from_eta2(&[0.3, 0.2], 5).unwrap();
        assert!(rel(multinomial_pmf(&p, &[1, 2]).unwrap(), 0.09) < 1e-13);
        assert!(multinomial_pmf(&p, &[4, 2]).is_err());
        assert!(multinomial_pmf(&p, &[1]).is_err());
    }

    #[test]
    fn neg_multinomial_values() {
        let p = NegMultinomialParams::from_eta2(&[0.2, 0.2], 1.0).unwrap();
        assert!(rel(neg_multinomial_pmf(&p, &[0, 0]).unwrap(), 0.6) < 1e-14);
        let p = NegMultinomialParams::from_eta2(&[0.2, 0.1], 2.5).unwrap();
        assert!(
            rel(
                neg_multinomial_pmf(&p, &[3, 4]).unwrap(),
                2.043851777065394e-4
            ) < 1e-12
        );
    }

    #[test]
    fn support_tables_sum_to_one() {
        let tol = 1e-14;
        let tables = [
            PoissonParams::new(3.0).unwrap().support_table(tol).unwrap(),
            NegBinomialParams::new(0.6, 2.5)
                .unwrap()
                .support_table(tol)
                .unwrap(),
            NegBinomialParams::new(0.9, 0.3)
                .unwrap()
                .support_table(tol)
                .unwrap(),
            BinomialParams::new(0.3, 17)
                .unwrap()
                .support_table(tol)
                .unwrap(),
        ];
        for t in tables {
            let s: f64 = t.iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "sum = {s}");
        }
    }

    #[test]
    fn tail_bound_waits_for_the_mode() {
        let p = PoissonParams::new(1.0e4).unwrap();
        assert!(p.tail_bound(0).is_infinite());
        let n = p.support_len(1e-14).unwrap();
        assert!(n > 10_000);
    }
}
