//! Exact Bernoulli numbers via the defining recurrence.

use rug::{Integer, Rational};
use std::sync::{Mutex, OnceLock};

static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// First `count` Bernoulli numbers B_0, B_1, ..., B_{count-1} as exact
/// rationals, with the B_1 = -1/2 convention.
///
/// Computed by sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1 and cached
/// process-wide; the recurrence is O(count^2) big-rational operations,
/// which is irrelevant next to the quadratures that consume them.
pub fn bernoulli_numbers(count: usize) -> Vec<Rational> {
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut known = cache.lock().unwrap();
    while known.len() < count {
        let m = known.len(); // computing B_m from B_0..B_{m-1}
        let mut acc = Rational::new();
        for (j, b) in known.iter().enumerate() {
            acc += Rational::from((Integer::binomial_u(m as u32 + 1, j as u32), 1)) * b;
        }
        acc /= -Rational::from((m as u32 + 1, 1u32));
        known.push(acc);
    }
    known[..count].to_vec()
}
