use super::params::{BinomialParams, NegBinomialParams, PoissonParams};
use super::pmf::CountDistribution;
use crate::error::{invalid, Result};

/// Tail tolerance for the distance sums; the neglected mass is added back
/// as an upper bound.
const TV_TAIL_TOL: f64 = 1e-17;

/// `½ Σ |p(n) − q(n)|` over the union of the two effective supports.
pub fn total_variation<P, Q>(p: &P, q: &Q) -> Result<f64>
where
    P: CountDistribution,
    Q: CountDistribution,
{
    let np = p.support_len(TV_TAIL_TOL)?;
    let nq = q.support_len(TV_TAIL_TOL)?;
    let n_max = np.max(nq);
    let body: f64 = (0..=n_max).map(|n| (p.pmf(n) - q.pmf(n)).abs()).sum();
    let tails = p.tail_bound(n_max).min(1.0) + q.tail_bound(n_max).min(1.0);
    Ok((0.5 * (body + tails)).min(1.0))
}

/// Total-variation distance between binomial(η² = α²/M, M) and Poisson(α²).
pub fn poisson_limit_distance(m: u32, alpha2: f64) -> Result<f64> {
    let eta2 = alpha2 / f64::from(m);
    if eta2 >= 1.0 {
        return Err(invalid(format!(
            "alpha2/M = {eta2} must be below 1 for the binomial branch"
        )));
    }
    let b = BinomialParams::new(eta2, m)?;
    let q = PoissonParams::new(alpha2)?;
    total_variation(&b, &q)
}

/// Total-variation distance between negative binomial(η² = α²/(M+α²), M)
/// and Poisson(α²); both laws have mean α².
pub fn neg_binomial_limit_distance(m: f64, alpha2: f64) -> Result<f64> {
    let nb = NegBinomialParams::new(alpha2 / (m + alpha2), m)?;
    let q = PoissonParams::new(alpha2)?;
    total_variation(&nb, &q)
}
