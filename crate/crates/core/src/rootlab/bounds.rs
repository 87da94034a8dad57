//! The analytic threshold function T_n(m) whose value below 1 certifies
//! the unit-circle statement for all parallel-weight forms of degree n
//! and coefficient index m = (k-2)/2:
//!
//! ```text
//! T_n(m) = 1/2 * G(m+1)^(n-2)/G(2m+1)^(n-1) * B^m * (11/5)^n
//!        + sum_{j=1}^{m-1} B^j/j! * (G(2m+1-j)/G(2m+1))^(n-1)
//!                          * (zeta(1/2+m-j)/zeta(1/2+m))^(2n)
//! ```
//!
//! with G the gamma function and B = (2pi)^n (n!)^2 / n^(2n) by
//! default, or B = (2pi)^n / D when a field discriminant D is supplied.
//! The default is the Minkowski worst case, so the two coincide at
//! D = n^(2n)/(n!)^2.  The 11/5 constant absorbs the zeta ratio at the
//! edge of the critical strip and is a fixed rational, not recomputed.

use super::BoundReport;
use crate::error::{Error, Result};
use crate::par::parallel_map;
use crate::precision::Precision;
use crate::specfun::{ln_gamma, zeta};
use rug::Float;

/// Largest m the threshold search will try before giving up.
const SEARCH_CAP: u32 = 64;

pub fn analytic_bound(
    n: u32,
    m: u32,
    discriminant: Option<f64>,
    prec: &Precision,
) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::DomainError(format!("threshold needs degree >= 2, got {n}")));
    }
    if m < 1 {
        return Err(Error::DomainError("threshold needs index m >= 1".into()));
    }
    if let Some(d) = discriminant {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::DomainError(format!("discriminant must be positive, got {d}")));
        }
    }
    let wb = prec.bits() + 32;
    let fl = |v: f64| Float::with_val(wb, v);
    let ln_two_pi = Float::with_val(wb, Float::with_val(wb, rug::float::Constant::Pi) * 2u32).ln();
    let ln_b = match discriminant {
        Some(d) => Float::with_val(wb, Float::with_val(wb, n) * &ln_two_pi - fl(d).ln()),
        None => Float::with_val(
            wb,
            Float::with_val(wb, n) * &ln_two_pi + 2u32 * ln_gamma(n as f64 + 1.0, prec)?
                - Float::with_val(wb, 2 * n) * fl(n as f64).ln(),
        ),
    };

    let lg2m1 = ln_gamma(2.0 * m as f64 + 1.0, prec)?;
    let first = Float::with_val(
        wb,
        (Float::with_val(wb, n as i32 - 2) * ln_gamma(m as f64 + 1.0, prec)?
            - Float::with_val(wb, n - 1) * &lg2m1
            + Float::with_val(wb, m) * &ln_b
            + Float::with_val(wb, n) * Float::with_val(wb, Float::with_val(wb, 11) / 5u32).ln()
            - Float::with_val(wb, 2u32).ln())
        .exp(),
    );

    // the zeta arguments run 3/2, 5/2, ..., m - 1/2; all safely right
    // of the pole
    let ln_zeta_edge = zeta(m as f64 + 0.5, prec)?.ln();
    let mut per_term = Vec::with_capacity(m as usize - 1);
    let mut value = first.clone();
    for j in 1..m {
        let term = Float::with_val(
            wb,
            (Float::with_val(wb, j) * &ln_b - ln_gamma(j as f64 + 1.0, prec)?
                + Float::with_val(wb, n - 1)
                    * (ln_gamma(2.0 * (m as f64) + 1.0 - j as f64, prec)? - &lg2m1)
                + Float::with_val(wb, 2 * n)
                    * (zeta(m as f64 - j as f64 + 0.5, prec)?.ln() - &ln_zeta_edge))
            .exp(),
        );
        value += &term;
        per_term.push((j, term.to_f64()));
    }

    let value = value.to_f64();
    Ok(BoundReport {
        n,
        m,
        discriminant_used: discriminant,
        value,
        first_term: first.to_f64(),
        per_term,
        verdict: value < 1.0,
    })
}

/// For each discriminant, the smallest m >= 1 with the refined bound
/// below 1.  Cells are independent and evaluated concurrently.
pub fn bound_threshold_table(
    n: u32,
    discriminants: &[f64],
    prec: &Precision,
    jobs: usize,
) -> Result<Vec<(f64, u32)>> {
    let cells = parallel_map(discriminants, jobs, |&d| -> Result<(f64, u32)> {
        for m in 1..=SEARCH_CAP {
            if analytic_bound(n, m, Some(d), prec)?.value < 1.0 {
                return Ok((d, m));
            }
        }
        Err(Error::NonConvergence(format!(
            "threshold for degree {n}, discriminant {d} not reached by m = {SEARCH_CAP}"
        )))
    });
    cells.into_iter().collect()
}

#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Scans T over the grid and reports every failure of
/// T_{n+1}(m) <= T_n(m) or T_n(m+1) <= T_n(m).  The decrease is a
/// theorem only in the regime the certification uses, so violations are
/// reported rather than asserted.
pub fn check_bound_monotonicity(
    n_range: (u32, u32),
    m_range: (u32, u32),
    prec: &Precision,
) -> Result<MonotonicityReport> {
    let (n_lo, n_hi) = n_range;
    let (m_lo, m_hi) = m_range;
    if !(2..=6).contains(&n_lo) || !(2..=6).contains(&n_hi) || n_lo > n_hi {
        return Err(Error::DomainError(format!("degree range [{n_lo}, {n_hi}] outside [2, 6]")));
    }
    if !(1..=20).contains(&m_lo) || !(1..=20).contains(&m_hi) || m_lo > m_hi {
        return Err(Error::DomainError(format!("index range [{m_lo}, {m_hi}] outside [1, 20]")));
    }
    let mut grid = std::collections::BTreeMap::new();
    for n in n_lo..=n_hi {
        for m in m_lo..=m_hi {
            grid.insert((n, m), analytic_bound(n, m, None, prec)?.value);
        }
    }
    let mut violations = Vec::new();
    for (&(n, m), &t) in &grid {
        if let Some(&down) = grid.get(&(n + 1, m)) {
            if down > t {
                violations.push(format!("T_{}({m}) = {down} exceeds T_{n}({m}) = {t}", n + 1));
            }
        }
        if let Some(&right) = grid.get(&(n, m + 1)) {
            if right > t {
                violations.push(format!("T_{n}({}) = {right} exceeds T_{n}({m}) = {t}", m + 1));
            }
        }
    }
    Ok(MonotonicityReport { ok: violations.is_empty(), violations })
}
