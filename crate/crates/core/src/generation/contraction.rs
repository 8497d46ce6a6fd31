use serde::{Deserialize, Serialize};

use crate::distributions::{BinomialParams, NegBinomialParams, PoissonParams};
use crate::error::{invalid, Error, Result};
use crate::fock::{fidelity, Cutoff, TruncatedBasis};
use crate::states::{binomial_state, coherent_state, neg_binomial_state, support};

/// Fidelities of the binomial and negative binomial states with the coherent
/// state of the same mean `α²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionRow {
    pub m: u32,
    pub binomial_fidelity: f64,
    pub neg_binomial_fidelity: f64,
}

const TAIL: f64 = 1e-15;

/// For each `M`: binomial with `η² = α²/M`, negative binomial with
/// `η² = α²/(M+α²)`, both against `|αe^{iθ}⟩`.
pub fn contraction_check(ms: &[u32], alpha2: f64, theta: f64) -> Result<Vec<ContractionRow>> {
    if !(alpha2.is_finite() && alpha2 >= 0.0) {
        return Err(invalid("α² must be finite and non-negative"));
    }
    ms.iter()
        .map(|&m| {
            if m == 0 {
                return Err(invalid("M must be positive"));
            }
            if alpha2 == 0.0 {
                return Ok(ContractionRow {
                    m,
                    binomial_fidelity: 1.0,
                    neg_binomial_fidelity: 1.0,
                });
            }
            let mf = f64::from(m);
            if alpha2 >= mf {
                return Err(Error::Domain(format!("η² = α²/M = {} ≥ 1", alpha2 / mf)));
            }
            let poisson = PoissonParams::new(alpha2)?;
            let bin = BinomialParams::new(alpha2 / mf, m)?;
            let nb = NegBinomialParams::new(alpha2 / (mf + alpha2), mf)?;
            let cut = support(&poisson, TAIL)?.max(support(&nb, TAIL)?).max(m);
            let basis = TruncatedBasis::new(1, Cutoff::PerMode(cut))?;
            let coh = coherent_state(&poisson, theta, &basis, TAIL)?;
            let b = binomial_state(&bin, theta, &basis)?;
            let n = neg_binomial_state(&nb, theta, &basis, TAIL)?;
            Ok(ContractionRow {
                m,
                binomial_fidelity: fidelity(&b, &coh)?,
                neg_binomial_fidelity: fidelity(&n, &coh)?,
            })
        })
        .collect()
}
