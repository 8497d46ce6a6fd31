//! Closed-form count distributions, generating functions, Poisson limits,
//! multiple-Poisson slicing and the waiting-time Monte Carlo.
//!
//! Every pmf is evaluated in log space and exponentiated last. Infinite
//! supports are truncated at the first `n` whose analytic upper bound on the
//! remaining mass is at most the tail tolerance (default `1e-14`).

mod gf;
mod limits;
mod params;
mod pmf;
mod saddle;
mod slicing;
mod waiting;

pub use gf::{binomial_gf, moments_from_gf, neg_binomial_gf, poisson_gf, Moments};
pub use limits::{neg_binomial_limit_distance, poisson_limit_distance, total_variation};
pub use params::{
    BinomialParams, MultinomialParams, NegBinomialParams, NegMultinomialParams, PoissonParams,
};
pub use pmf::{
    binomial_ln_pmf, binomial_pmf, multinomial_ln_pmf, multinomial_pmf, neg_binomial_ln_pmf,
    neg_binomial_pmf, neg_multinomial_ln_pmf, neg_multinomial_pmf, poisson_ln_pmf, poisson_pmf,
    CountDistribution,
};
pub use slicing::{multiple_poisson_ln_pmf, multiple_poisson_pmf, slice_to_shell, ShellPmf};
pub use waiting::{
    waiting_time_simulate, McRow, WaitingTimeHistogram, CHUNK_TRIALS, RNG_ALGORITHM_VERSION,
};

/// Tail tolerance for infinite-support sums.
pub const SUPPORT_TAIL_TOL: f64 = 1e-14;
