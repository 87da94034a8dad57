//! Riemann zeta on the real line by Euler-Maclaurin summation.

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::specfun::bernoulli::bernoulli_numbers;
use rug::{ops::Pow, Float};

/// zeta(s) for real s != 1.
///
/// Euler-Maclaurin with N = R = digits + 8 truncation: the remainder
/// decays like (2/(pi*e))^(2R), far below the working tolerance for
/// every precision this crate accepts.  Valid for s > -(2R-1), which
/// covers all callers (they stay at s >= 1/2).
pub fn zeta(s: f64, prec: &Precision) -> Result<Float> {
    if !s.is_finite() {
        return Err(Error::DomainError(format!("zeta needs a finite argument, got {s}")));
    }
    if (s - 1.0).abs() < 1e-9 {
        return Err(Error::PoleAtOne);
    }
    let wb = prec.bits() + 64;
    let n = (prec.digits() + 8) as i64;
    let r_max = (prec.digits() + 8) as usize;
    let sf = Float::with_val(wb, s);

    // hot sum 1^-s + ... + (N-1)^-s
    let mut acc = Float::with_val(wb, 0);
    for j in 1..n {
        acc += Float::with_val(wb, j).pow(&(-sf.clone()));
    }
    let nf = Float::with_val(wb, n);
    // integral tail N^(1-s)/(s-1) and midpoint correction N^-s/2
    acc += nf.clone().pow(&(Float::with_val(wb, 1) - &sf)) / (sf.clone() - 1u32);
    let n_pow_ms = nf.clone().pow(&(-sf.clone()));
    acc += &n_pow_ms / Float::with_val(wb, 2);

    // Euler-Maclaurin correction terms
    let bern = bernoulli_numbers(2 * r_max + 1);
    let n_sq_inv = Float::with_val(wb, 1) / (nf.clone() * &nf);
    let mut poch = sf.clone(); // rising factorial (s)(s+1)...(s+2r-2), starts with one factor
    let mut npow = n_pow_ms / &nf; // N^(-s-2r+1), starts at r = 1
    let mut fact = Float::with_val(wb, 2); // (2r)!
    for r in 1..=r_max {
        let term = Float::with_val(wb, &bern[2 * r]) / &fact * &poch * &npow;
        acc += &term;
        if r == r_max {
            debug_assert!(
                term.abs() < Float::with_val(wb, 2).pow(-(prec.bits() as i64) - 16),
                "Euler-Maclaurin truncation too coarse"
            );
        }
        let two_r = 2 * r as i64;
        poch *= Float::with_val(wb, s + (two_r - 1) as f64)
            * Float::with_val(wb, s + two_r as f64);
        npow *= &n_sq_inv;
        fact *= Float::with_val(wb, (two_r + 1) * (two_r + 2));
    }
    Ok(Float::with_val(prec.bits(), acc))
}
