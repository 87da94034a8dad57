//! Certification routes that avoid root-finding entirely: the margin
//! |Q(X) - X^q| on the unit circle (below 1 forces every root of the
//! companion r onto the circle), and the closed-form inequalities that
//! settle weights 4 and 6 outright.

use crate::error::{Error, Result};
use crate::periodpoly::{PeriodPolynomial, PolyKind};
use crate::precision::Precision;
use rug::{Complex, Float};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct RoucheReport {
    /// Maximum of |Q(e^(i theta)) - e^(i q theta)| over the circle.
    pub max: f64,
    /// Angle attaining the maximum, in [0, 2pi).
    pub argmax: f64,
    pub samples: usize,
    /// max < 1: every root of the matching r lies on the unit circle.
    pub verdict: bool,
}

/// Uniform grid scan followed by golden-section refinement of every
/// local maximum; theta is resolved to 1e-10.
pub fn rouche_margin(q: &PeriodPolynomial, samples: usize, prec: &Precision) -> Result<RoucheReport> {
    if q.kind != PolyKind::Q {
        return Err(Error::DomainError("circle margin is defined for Q polynomials".into()));
    }
    if samples < 8 {
        return Err(Error::DomainError(format!("need at least 8 samples, got {samples}")));
    }
    let wb = prec.bits().max(q.bits()) + 32;
    let qq = (q.weight - 2) / 2;
    let tau = 2.0 * std::f64::consts::PI;

    let g = |theta: f64| -> f64 {
        let t = Float::with_val(wb, theta);
        let x = Complex::with_val(wb, (Float::with_val(wb, &t).cos(), Float::with_val(wb, &t).sin()));
        let ref_t = Float::with_val(wb, theta * qq as f64);
        let reference = Complex::with_val(
            wb,
            (Float::with_val(wb, &ref_t).cos(), Float::with_val(wb, &ref_t).sin()),
        );
        Complex::with_val(wb, q.eval(&x) - reference).abs().real().to_f64()
    };

    let grid: Vec<f64> = (0..samples).map(|i| g(tau * i as f64 / samples as f64)).collect();
    let mut best = (f64::MIN, 0.0f64);
    for i in 0..samples {
        let (prev, next) = (grid[(i + samples - 1) % samples], grid[(i + 1) % samples]);
        if grid[i] < prev || grid[i] < next {
            continue;
        }
        // golden-section maximization over the bracketing arc
        let h = tau / samples as f64;
        let center = tau * i as f64 / samples as f64;
        let (mut a, mut b) = (center - h, center + h);
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        let (mut x1, mut x2) = (b - ratio * (b - a), a + ratio * (b - a));
        let (mut f1, mut f2) = (g(x1), g(x2));
        while b - a > 1e-10 {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + ratio * (b - a);
                f2 = g(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - ratio * (b - a);
                f1 = g(x1);
            }
        }
        let (peak, at) = if f1 > f2 { (f1, x1) } else { (f2, x2) };
        if peak > best.0 {
            best = (peak, at.rem_euclid(tau));
        }
    }
    Ok(RoucheReport { max: best.0, argmax: best.1, samples, verdict: best.0 < 1.0 })
}

#[derive(Debug, Clone)]
pub struct CertificateCondition {
    pub label: String,
    pub holds: bool,
    /// Slack in the inequality; 0 at the boundary, negative when violated.
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub weight: u32,
    pub sign: i32,
    pub conditions: Vec<CertificateCondition>,
    /// All conditions hold: every root of r lies on the unit circle.
    pub certified: bool,
    /// Number of circle roots the certificate accounts for.
    pub root_count: u32,
    /// Set when the central value is negative, which the nonnegativity
    /// assumption behind these inequalities rules out.
    pub negative_central: bool,
}

/// Closed-form unit-circle certificates for weights 4 and 6.  The
/// inequalities are evaluated directly on the supplied values; no roots
/// are computed.
pub fn small_weight_certificate(
    lambda: &BTreeMap<u32, Float>,
    weight: u32,
    sign: i32,
) -> Result<CertificateReport> {
    if weight != 4 && weight != 6 {
        return Err(Error::UnsupportedWeight(weight));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvariantViolation(format!("sign must be +1 or -1, got {sign}")));
    }
    let get = |s: u32| -> Result<f64> {
        Ok(lambda.get(&s).ok_or(Error::MissingLambda(s))?.to_f64())
    };
    let central = get(weight / 2)?;
    let negative_central = central < 0.0;
    let mut conditions = Vec::new();
    let mut push = |label: &str, margin: f64| {
        conditions.push(CertificateCondition {
            label: label.to_string(),
            holds: margin > 0.0,
            margin,
        });
    };

    match (weight, sign) {
        (4, 1) => {
            // r(e^(i t)) = 0 reduces to cos t = -L(2)/L(3); solvable
            // strictly inside (-1, 1) when L(2) < L(3)
            let (l2, l3) = (central, get(3)?);
            push("cosine equation solvable: L(2) < L(3)", l3 - l2);
        }
        (4, -1) => {
            // odd sign kills the middle coefficient; r is a multiple of
            // X^2 - 1 and the roots are +-1 outright
            push("central value vanishes", 1e-9 - central.abs());
        }
        (6, 1) => {
            let (l3, l4, l5) = (central, get(4)?, get(5)?);
            push("positivity at the real point: 3L(3) + L(5) > 4L(4)", 3.0 * l3 + l5 - 4.0 * l4);
            push(
                "interlacing control: 2L(4)^2 + L(5)^2 >= 3L(3)L(5)",
                2.0 * l4 * l4 + l5 * l5 - 3.0 * l3 * l5,
            );
        }
        (6, -1) => {
            let (l4, l5) = (get(4)?, get(5)?);
            // r factors through X^2 - 1; the remaining quadratic
            // L(5)X^2 + 4L(4)X + L(5) is unimodular iff 2L(4) < L(5)
            push("central value vanishes", 1e-9 - central.abs());
            push("companion quadratic unimodular: 2L(4) < L(5)", l5 - 2.0 * l4);
        }
        _ => unreachable!(),
    }

    let certified = !negative_central && conditions.iter().all(|c| c.holds);
    // +-1 are unconditional roots in the odd case; the conditional
    // count completes to the full degree
    let base = if sign < 0 { 2 } else { 0 };
    let root_count = if certified { weight - 2 } else { base };
    Ok(CertificateReport { weight, sign, conditions, certified, root_count, negative_central })
}
