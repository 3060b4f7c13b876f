//! Closed-form repetition bounds for constructible question sets.

use crate::{Error, Result};

/// Bound data for a question set constructible with `k` doublings:
/// `ω(n) ≤ 3·exp(-n / M^(2^(k+1)))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessBound {
    pub edge_count: usize,
    pub doublings: u32,
    pub repetitions: u64,
}

impl GoodnessBound {
    /// `C = 2^k`, exactly.
    pub fn c(&self) -> u128 {
        1u128 << self.doublings
    }

    pub fn value(&self) -> f64 {
        pr_upper_bound(self.edge_count, self.doublings, self.repetitions)
    }
}

/// `3·exp(-n / M^(2^(k+1)))`, computed in log space so that huge exponents
/// degrade gracefully instead of overflowing.
pub fn pr_upper_bound(m: usize, k: u32, n: u64) -> f64 {
    assert!(m >= 1 && n >= 1, "need M >= 1, n >= 1");
    let pow = 2f64.powi(k as i32 + 1);
    // n / M^(2^(k+1)) = exp(ln n - 2^(k+1)·ln M)
    let log_ratio = (n as f64).ln() - pow * (m as f64).ln();
    3.0 * (-log_ratio.exp()).exp()
}

/// The probabilistic form `3·exp(-ε·n / C)` for `H(Id) ≥ ε` and
/// `c(μ) ≥ μ^C / C`.
pub fn probabilistic_good_bound(epsilon: f64, c: f64, n: u64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) || c < 1.0 {
        return Err(Error::BadParameter(format!(
            "need 0 < ε ≤ 1 and C ≥ 1, got ε={epsilon}, C={c}"
        )));
    }
    Ok(3.0 * (-epsilon * n as f64 / c).exp())
}

/// Free game with `2^k0` questions per prover over `r` provers: the question
/// set has `M = 2^(r·k0)` edges and is constructible with `r·k0` doublings,
/// giving `3·exp(-n / M^(2M))`.
pub fn free_game_bound(r: u32, k0: u32, n: u64) -> f64 {
    let rk = r * k0;
    let m = 1usize << rk;
    pr_upper_bound(m, rk, n)
}
