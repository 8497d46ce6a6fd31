use serde::{Deserialize, Serialize};

use super::params::{BinomialParams, NegBinomialParams, PoissonParams};
use crate::error::{Error, Result};

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "generating-function argument |t| = {t} exceeds 1"
        )))
    }
}

/// `Σ tⁿ pmf(n) = ((1−η²)/(1−η²t))^M`.
pub fn neg_binomial_gf(p: &NegBinomialParams, t: f64) -> Result<f64> {
    check_t(t)?;
    let e = p.eta2();
    Ok((p.m() * ((-e).ln_1p() - (-e * t).ln_1p())).exp())
}

/// `(1 − η² + η² t)^M`.
pub fn binomial_gf(p: &BinomialParams, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok((f64::from(p.m()) * (p.eta2() * (t - 1.0)).ln_1p()).exp())
}

/// `e^{α²(t−1)}`.
pub fn poisson_gf(p: &PoissonParams, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok((p.alpha2() * (t - 1.0)).exp())
}

/// Number statistics of a count distribution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    /// `variance/mean − 1`; positive means super-Poissonian.
    pub mandel_q: f64,
}

/// Mean, variance and Mandel Q of the negative binomial law from the first
/// two derivatives of its generating function at `t = 1`.
pub fn moments_from_gf(p: &NegBinomialParams) -> Moments {
    let e = p.eta2();
    let m = p.m();
    let x = e / (1.0 - e);
    // G'(1) = Mx, G''(1) = M(M+1)x².
    let g1 = m * x;
    let g2 = m * (m + 1.0) * x * x;
    let mean = g1;
    let variance = g2 + g1 - g1 * g1;
    Moments {
        mean,
        variance,
        mandel_q: variance / mean - 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::CountDistribution;

    #[test]
    fn gf_closed_forms() {
        let p = NegBinomialParams::new(0.5, 1.0).unwrap();
        assert!((neg_binomial_gf(&p, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((neg_binomial_gf(&p, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((neg_binomial_gf(&p, 0.0).unwrap() - p.pmf(0)).abs() < 1e-15);
        assert!(neg_binomial_gf(&p, 1.5).is_err());
        let b = BinomialParams::new(0.3, 4).unwrap();
        assert!((binomial_gf(&b, 0.0).unwrap() - 0.7f64.powi(4)).abs() < 1e-15);
        let q = PoissonParams::new(2.0).unwrap();
        assert!((poisson_gf(&q, 0.0).unwrap() - (-2.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn moments_closed_forms() {
        let p = NegBinomialParams::new(0.25, 2.0).unwrap();
        let m = moments_from_gf(&p);
        assert!((m.mean - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.variance - 2.0 * 0.25 / 0.5625).abs() < 1e-14);
        assert!((m.mandel_q - 0.25 / 0.75).abs() < 1e-14);
    }
}
