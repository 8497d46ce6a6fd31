//! Saddle-point evaluation of binomial-type log-probabilities (Loader 2000).
//!
//! `ln n!` is split into Stirling's formula plus the small correction
//! `stirlerr(n)`, and `x ln(x/μ) + μ − x` is evaluated by a series when `x`
//! is close to `μ`. Both pieces are small, so the pmf keeps full relative
//! precision where a difference of large log-gammas would not.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// `stirlerr(k/2)` for `k = 0..=30`.
const SFERR_HALVES: [f64; 31] = [
    0.0,
    0.1534264097200273452914,
    0.08106146679532725821967,
    0.05481412105191765389614,
    0.04134069595540929409382,
    0.03316287351993628748511,
    0.02767792568499833914879,
    0.02374616365629749597133,
    0.02079067210376509311152,
    0.01848845053267318523078,
    0.01664469118982119216319,
    0.01513497322191737887351,
    0.01387612882307074799875,
    0.01281046524292022692425,
    0.01189670994589177009506,
    0.01110455975820691732663,
    0.01041126526197209649748,
    0.00979941612615880329839,
    0.009255462182712732917729,
    0.008768700134139385462955,
    0.008330563433362871256469,
    0.00793411456431402054725,
    0.007573675487951840794972,
    0.007244554301320383179546,
    0.006942840107209529865664,
    0.006665247032707682442356,
    0.00640899418800420706844,
    0.006171712263039457647535,
    0.005951370112758847735624,
    0.005746216513010115682026,
    0.005554733551962801371039,
];

/// `ln Γ(n+1) − (n+½) ln n + n − ln √(2π)`.
pub(crate) fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        let nn = n + n;
        if nn == nn.trunc() {
            return SFERR_HALVES[nn as usize];
        }
        return ln_gamma(n + 1.0) - (n + 0.5) * n.ln() + n - LN_SQRT_2PI;
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x/μ) + μ − x`.
pub(crate) fn bd0(x: f64, mu: f64) -> f64 {
    if (x - mu).abs() < 0.1 * (x + mu) {
        let v = (x - mu) / (x + mu);
        let v2 = v * v;
        let mut s = (x - mu) * v;
        let mut ej = 2.0 * x * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s;
            }
            s = s1;
        }
        s
    } else {
        x * (x / mu).ln() + mu - x
    }
}

/// `ln [C(n,x) p^x q^{n−x}]` for real `n ≥ x ≥ 0`, `p + q = 1`.
pub(crate) fn ln_binom_raw(x: f64, n: f64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if x == n { 0.0 } else { f64::NEG_INFINITY };
    }
    if x == 0.0 {
        if n == 0.0 {
            return 0.0;
        }
        return if p < 0.1 {
            -bd0(n, n * q) - n * p
        } else {
            n * q.ln()
        };
    }
    if x == n {
        return if q < 0.1 {
            -bd0(n, n * p) - n * q
        } else {
            n * p.ln()
        };
    }
    if x < 0.0 || x > n {
        return f64::NEG_INFINITY;
    }
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
    let lf = (2.0 * PI).ln() + x.ln() + (-x / n).ln_1p();
    lc - 0.5 * lf
}

/// `ln [e^{−λ} λ^x / x!]`.
pub(crate) fn ln_poisson_raw(x: f64, lambda: f64) -> f64 {
    if x == 0.0 {
        return -lambda;
    }
    -stirlerr(x) - bd0(x, lambda) - 0.5 * (2.0 * PI * x).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirlerr_is_continuous_across_branches() {
        for &n in &[14.9, 15.0, 15.1, 35.0, 35.5, 80.0, 80.5, 500.0, 500.5] {
            let direct = ln_gamma(n + 1.0) - (n + 0.5) * f64::ln(n) + n - LN_SQRT_2PI;
            assert!((stirlerr(n) - direct).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn bd0_matches_direct_form_away_from_mu() {
        let (x, mu) = (7.0, 2.0);
        assert!((bd0(x, mu) - (x * (x / mu).ln() + mu - x)).abs() < 1e-14);
        let (x, mu) = (10.0, 10.5);
        assert!((bd0(x, mu) - (x * (x / mu).ln() + mu - x)).abs() < 1e-13);
    }
}
