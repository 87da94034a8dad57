//! Parity stability experiments: split r into even and odd parts and
//! find the interval of t around 1 on which r+ + t r- keeps all roots
//! on the unit circle.  t = 1 recovers r itself; the width of the
//! interval measures how far the coefficients can be detuned before the
//! unit-circle property breaks.

use crate::error::{Error, Result};
use crate::par::parallel_map;
use crate::periodpoly::{split_parity, PeriodPolynomial, PolyKind};
use crate::precision::Precision;
use crate::rootlab::{circle_verdict, find_roots};
use rug::{Complex, Float};

/// On-circle tolerance for the perturbed family.  Looser than the
/// certification default because detuned polynomials lose the exact
/// self-inversive structure.
pub const VERDICT_TOL: f64 = 1e-6;
/// Boundary bisection stops when the bracket is this narrow.
pub const BISECT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct PerturbationResult {
    pub t_low: f64,
    pub t_high: f64,
    /// The scan never leaves [0, 2].
    pub scan_range: (f64, f64),
    pub resolution: f64,
    pub verdict_tol: f64,
    /// Endpoint pinned at the scan edge rather than a real threshold.
    pub saturated_low: bool,
    pub saturated_high: bool,
}

/// Coarse scan of t over [0, 2] followed by bisection at each boundary
/// of the on-circle region containing t = 1.  Scan points are
/// independent and evaluated concurrently.
pub fn parity_threshold_interval(
    r: &PeriodPolynomial,
    prec: &Precision,
    resolution: f64,
    jobs: usize,
) -> Result<PerturbationResult> {
    if r.kind != PolyKind::R {
        return Err(Error::DomainError("perturbation scan is defined for r polynomials".into()));
    }
    if !(resolution.is_finite() && resolution > 10.0 * BISECT_TOL && resolution <= 0.5) {
        return Err(Error::DomainError(format!(
            "scan resolution {resolution} outside ({:.0e}, 0.5]",
            10.0 * BISECT_TOL
        )));
    }
    let (plus, minus) = split_parity(r)?;
    let on_circle = |t: f64| -> Result<bool> {
        let family = mix(&plus, &minus, t);
        let report = find_roots(&family, prec)?;
        Ok(circle_verdict(&report, VERDICT_TOL).all_on_circle)
    };
    if !on_circle(1.0)? {
        return Err(Error::DegenerateAtOne);
    }

    let mut grid: Vec<f64> = Vec::new();
    let mut i = 0u32;
    loop {
        let t = i as f64 * resolution;
        if t >= 2.0 {
            break;
        }
        grid.push(t);
        i += 1;
    }
    grid.push(2.0);
    if !grid.contains(&1.0) {
        grid.push(1.0);
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite scan points"));
    }
    let anchor = grid.iter().position(|&t| t == 1.0).expect("anchor on grid");

    let flags: Vec<bool> = parallel_map(&grid, jobs, |&t| on_circle(t))
        .into_iter()
        .collect::<Result<_>>()?;
    let scan: Vec<(f64, bool)> = grid.into_iter().zip(flags).collect();
    let (left, right) = locate_brackets(&scan, anchor)?;

    let (t_low, saturated_low) = match left {
        None => (0.0, true),
        Some((mut lo, mut hi)) => {
            // lo fails, hi passes
            while hi - lo > BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                if on_circle(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            (0.5 * (lo + hi), false)
        }
    };
    let (t_high, saturated_high) = match right {
        None => (2.0, true),
        Some((mut lo, mut hi)) => {
            // lo passes, hi fails
            while hi - lo > BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                if on_circle(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (0.5 * (lo + hi), false)
        }
    };
    Ok(PerturbationResult {
        t_low,
        t_high,
        scan_range: (0.0, 2.0),
        resolution,
        verdict_tol: VERDICT_TOL,
        saturated_low,
        saturated_high,
    })
}

/// r+ + t r- at the parent precision.
fn mix(plus: &PeriodPolynomial, minus: &PeriodPolynomial, t: f64) -> PeriodPolynomial {
    let mut family = plus.clone();
    for (c, odd) in family.coeffs.iter_mut().zip(&minus.coeffs) {
        let wb = c.prec().0;
        *c += Complex::with_val(wb, odd * &Float::with_val(wb, t));
    }
    family
}

/// Brackets of the predicate boundary on each side of the anchor, or
/// None where the true-region runs into the scan edge.  More than two
/// sign changes across the scan mean the on-circle set is not an
/// interval at this resolution; every change point is reported.
fn locate_brackets(
    scan: &[(f64, bool)],
    anchor: usize,
) -> Result<(Option<(f64, f64)>, Option<(f64, f64)>)> {
    let flips: Vec<usize> = (1..scan.len()).filter(|&i| scan[i].1 != scan[i - 1].1).collect();
    if flips.len() > 2 {
        let points = flips.iter().map(|&i| 0.5 * (scan[i - 1].0 + scan[i].0)).collect();
        return Err(Error::NonMonotoneBoundary(points));
    }
    let mut lo = anchor;
    while lo > 0 && scan[lo - 1].1 {
        lo -= 1;
    }
    let mut hi = anchor;
    while hi + 1 < scan.len() && scan[hi + 1].1 {
        hi += 1;
    }
    let left = (lo > 0).then(|| (scan[lo - 1].0, scan[lo].0));
    let right = (hi + 1 < scan.len()).then(|| (scan[hi].0, scan[hi + 1].0));
    Ok((left, right))
}

/// One row per experiment, mirroring the published tables.
pub fn perturbation_csv(rows: &[(u32, String, PerturbationResult)]) -> String {
    let mut out = String::from("weight,label,t_low,t_high\n");
    for (weight, label, result) in rows {
        out.push_str(&format!(
            "{weight},{label},{:.6},{:.6}\n",
            result.t_low, result.t_high
        ));
    }
    out
}
