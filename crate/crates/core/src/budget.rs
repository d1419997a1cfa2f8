//! Enumeration budgets.
//!
//! Every exhaustive oracle first predicts how many elementary candidates it
//! will visit and refuses to start when the prediction exceeds the budget.
//! Counts are carried as `u128` with saturating arithmetic: a saturated
//! count is far beyond any budget we accept, so the comparison stays exact.

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Upper bound on elementary candidate visits for one operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn check(&self, needed: u128, stage: &'static str) -> Result<()> {
        if needed > self.0 as u128 {
            Err(Error::BudgetExceeded {
                stage,
                needed,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub fn sat_pow(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Binomial coefficient `C(n, k)` saturating at `u128::MAX`.
pub fn sat_binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128);
        // dividing after the multiply keeps the intermediate an integer
        acc /= (i + 1) as u128;
    }
    acc
}

/// Gaussian binomial `[n choose k]_q`: the number of k-dimensional
/// subspaces of an n-dimensional space over GF(q). Saturating.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    // G(n, k) = G(n-1, k-1) + q^k * G(n-1, k)
    let mut row: Vec<u128> = vec![0; k + 1];
    row[0] = 1;
    for _ in 1..=n {
        for j in (1..=k).rev() {
            let qk = sat_pow(q as u128, j as u32);
            row[j] = row[j - 1].saturating_add(qk.saturating_mul(row[j]));
        }
    }
    row[k]
}
