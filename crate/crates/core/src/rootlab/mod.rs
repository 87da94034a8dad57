//! Root certification: direct root-finding with unit-circle verdicts,
//! the monic-normalized comparison margin on the circle, the analytic
//! threshold function T_n(m) with discriminant tables, closed-form
//! small-weight certificates, and equidistribution measurement.

mod bounds;
mod certify;
mod report;
mod roots;

pub use bounds::{analytic_bound, bound_threshold_table, check_bound_monotonicity, MonotonicityReport};
pub use certify::{rouche_margin, small_weight_certificate, CertificateCondition, CertificateReport, RoucheReport};
pub use report::{bound_report_to_json, root_report_to_json, roots_to_svg};
pub use roots::find_roots;

use crate::error::{Error, Result};

/// Default certification tolerance on | |root| - 1 |.
pub const TOL_CIRCLE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct RootReport {
    /// Roots sorted by angle, then by modulus.
    pub roots: Vec<rug::Complex>,
    /// | |root| - 1 | per root, aligned with `roots`.
    pub moduli_dev: Vec<f64>,
    /// Arguments in [0, 2pi), sorted ascending.
    pub angles: Vec<f64>,
    /// Per-root flag: deviation within `tol_circle`.
    pub on_circle: Vec<bool>,
    pub all_on_circle: bool,
    /// Star discrepancy of the normalized angles.
    pub discrepancy: f64,
    /// |p(root)| per root, aligned with `roots`.
    pub residuals: Vec<f64>,
    /// Tolerance the per-root flags were computed with.
    pub tol_circle: f64,
    /// Residual ceiling the roots were verified against.
    pub residual_tol: f64,
}

#[derive(Debug, Clone)]
pub struct CircleVerdict {
    pub all_on_circle: bool,
    /// tol_circle minus the worst deviation; negative when failing.
    pub margin: f64,
    pub tol_circle: f64,
}

/// Re-judges an existing report at a caller-chosen tolerance.
pub fn circle_verdict(report: &RootReport, tol_circle: f64) -> CircleVerdict {
    let worst = report.moduli_dev.iter().cloned().fold(0.0f64, f64::max);
    CircleVerdict {
        all_on_circle: worst <= tol_circle,
        margin: tol_circle - worst,
        tol_circle,
    }
}

/// Star discrepancy of the root angles normalized to [0, 1):
/// max_i max(u_(i) - (i-1)/N, i/N - u_(i)) over the sorted sample.
pub fn angle_discrepancy(report: &RootReport) -> Result<f64> {
    if report.angles.is_empty() {
        return Err(Error::DomainError("discrepancy needs at least one root".into()));
    }
    let u: Vec<f64> = report.angles.iter().map(|a| a / (2.0 * std::f64::consts::PI)).collect();
    Ok(star_discrepancy(&u))
}

pub(crate) fn star_discrepancy(normalized: &[f64]) -> f64 {
    let mut u = normalized.to_vec();
    u.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    let n = u.len() as f64;
    let mut worst = 0.0f64;
    for (i, &ui) in u.iter().enumerate() {
        let lo = ui - i as f64 / n;
        let hi = (i + 1) as f64 / n - ui;
        worst = worst.max(lo).max(hi);
    }
    worst
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: u32,
    pub m: u32,
    /// Discriminant the volume factor used; None means the Minkowski
    /// default (n!)^2/n^(2n) was substituted.
    pub discriminant_used: Option<f64>,
    pub value: f64,
    /// Leading closed-form term, before the j-sum.
    pub first_term: f64,
    /// (j, term) for j = 1..m-1; empty when m = 1.
    pub per_term: Vec<(u32, f64)>,
    /// value < 1, which certifies the unit-circle statement at (n, m).
    pub verdict: bool,
}
