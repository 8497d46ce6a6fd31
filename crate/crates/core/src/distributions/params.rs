use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Poisson law with mean `alpha2 = α²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonParams {
    alpha2: f64,
}

impl PoissonParams {
    pub fn new(alpha2: f64) -> Result<Self> {
        if !(alpha2.is_finite() && alpha2 > 0.0) {
            return Err(invalid(format!("alpha2 must be positive, got {alpha2}")));
        }
        Ok(Self { alpha2 })
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }
}

fn check_probability(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in (0, 1), got {x}")))
    }
}

fn check_components(eta: &[f64]) -> Result<f64> {
    if eta.is_empty() {
        return Err(invalid("eta needs at least one component"));
    }
    for (j, &e) in eta.iter().enumerate() {
        if !(e.is_finite() && e > 0.0) {
            return Err(invalid(format!(
                "eta component {} must be positive, got {e} (drop zero components)",
                j + 1
            )));
        }
    }
    let s: f64 = eta.iter().map(|e| e * e).sum();
    if s >= 1.0 {
        return Err(invalid(format!("sum of eta_j^2 must be below 1, got {s}")));
    }
    Ok(s)
}

/// Binomial law: `m` trials with success probability `eta2 = η²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinomialParams {
    eta2: f64,
    m: u32,
}

impl BinomialParams {
    pub fn new(eta2: f64, m: u32) -> Result<Self> {
        check_probability("eta2", eta2)?;
        if m == 0 {
            return Err(invalid("M must be at least 1"));
        }
        Ok(Self { eta2, m })
    }

    pub fn eta2(&self) -> f64 {
        self.eta2
    }

    pub fn eta(&self) -> f64 {
        self.eta2.sqrt()
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// Negative binomial law `Γ(M+n)/(Γ(M) n!) η^{2n} (1−η²)^M`, real `M > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegBinomialParams {
    eta2: f64,
    m: f64,
}

impl NegBinomialParams {
    pub fn new(eta2: f64, m: f64) -> Result<Self> {
        check_probability("eta2", eta2)?;
        if !(m.is_finite() && m > 0.0) {
            return Err(invalid(format!("M must be positive, got {m}")));
        }
        Ok(Self { eta2, m })
    }

    pub fn eta2(&self) -> f64 {
        self.eta2
    }

    pub fn eta(&self) -> f64 {
        self.eta2.sqrt()
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// `M` as an integer, if it is one.
    pub fn integer_m(&self) -> Option<u32> {
        (self.m.fract() == 0.0 && self.m <= f64::from(u32::MAX)).then_some(self.m as u32)
    }
}

/// Multinomial law over `r+1` cells with probabilities
/// `(1−Ση², η₁², …, η_r²)` and `m` trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultinomialParams {
    eta: Vec<f64>,
    m: u32,
}

impl MultinomialParams {
    pub fn new(eta: Vec<f64>, m: u32) -> Result<Self> {
        check_components(&eta)?;
        if m == 0 {
            return Err(invalid("M must be at least 1"));
        }
        Ok(Self { eta, m })
    }

    /// Build from squared components `η_j²`.
    pub fn from_eta2(eta2: &[f64], m: u32) -> Result<Self> {
        Self::new(eta2.iter().map(|x| x.sqrt()).collect(), m)
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn eta2(&self) -> Vec<f64> {
        self.eta.iter().map(|e| e * e).collect()
    }

    pub fn eta2_sum(&self) -> f64 {
        self.eta.iter().map(|e| e * e).sum()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.eta.len()
    }
}

/// Negative multinomial law `Γ(M+Σn)/(Γ(M) Πn_j!) Π η_j^{2n_j} (1−Ση²)^M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegMultinomialParams {
    eta: Vec<f64>,
    m: f64,
}

impl NegMultinomialParams {
    pub fn new(eta: Vec<f64>, m: f64) -> Result<Self> {
        check_components(&eta)?;
        if !(m.is_finite() && m > 0.0) {
            return Err(invalid(format!("M must be positive, got {m}")));
        }
        Ok(Self { eta, m })
    }

    pub fn from_eta2(eta2: &[f64], m: f64) -> Result<Self> {
        Self::new(eta2.iter().map(|x| x.sqrt()).collect(), m)
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn eta2(&self) -> Vec<f64> {
        self.eta.iter().map(|e| e * e).collect()
    }

    pub fn eta2_sum(&self) -> f64 {
        self.eta.iter().map(|e| e * e).sum()
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.eta.len()
    }

    /// Law of the total count `Σn_j`.
    pub fn total_marginal(&self) -> NegBinomialParams {
        NegBinomialParams {
            eta2: self.eta2_sum(),
            m: self.m,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PoissonParams::new(0.0).is_err());
        assert!(BinomialParams::new(1.0, 3).is_err());
        assert!(BinomialParams::new(0.5, 0).is_err());
        assert!(NegBinomialParams::new(0.5, -1.0).is_err());
        assert!(MultinomialParams::new(vec![0.5, 0.0], 2).is_err());
        assert!(NegMultinomialParams::from_eta2(&[0.6, 0.5], 1.0).is_err());
        assert!(NegMultinomialParams::from_eta2(&[0.2, 0.2], 1.0).is_ok());
    }

    #[test]
    fn integer_m_detection() {
        assert_eq!(
            NegBinomialParams::new(0.3, 3.0).unwrap().integer_m(),
            Some(3)
        );
        assert_eq!(NegBinomialParams::new(0.3, 2.5).unwrap().integer_m(), None);
    }
}
