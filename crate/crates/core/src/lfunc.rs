//! Completed L-values by a smoothed, two-sided sum, plus the runtime
//! checks the critical strip affords.
//!
//! With A = C/(2pi)^n and K(s, x) = int_beta^inf G_n(x t) t^(s-1) dt,
//! the evaluator returns
//!
//! ```text
//! Lambda(s) = sum_{m <= M} c(m) * [K(s, m/A) + sign * K(k-s, m/A)]
//! ```
//!
//! which equals the analytic continuation of C^s (2pi)^(-ns) Gamma(s)^n
//! sum c(m) m^(-s) whenever the coefficients satisfy their functional
//! equation, and converges for every real s either way.  The truncation
//! point M adapts to the requested tolerance through a coefficient
//! majorant, and everything the sum omits (the tail past M, gap-listed
//! norms, unclassified norms past the document's coverage) is charged to
//! an explicit `truncation_bound` on the result.

use crate::error::{Error, Result};
use crate::formdata::{EigenformData, LambdaFixture};
use crate::par::parallel_map;
use crate::precision::Precision;
use crate::specfun::{kernel_g_incomplete_from, ln_gamma, zeta, KernelSpec};
use rug::ops::Pow;
use rug::{Float, Rational};
use std::collections::BTreeMap;

/// Hard ceiling on the adaptive truncation point.
const TERM_CAP: u64 = 200_000;

/// d(m) <= 96 m^0.1 for every m <= 10^7, the range the Hecke extension
/// accepts; 96 is not asymptotically valid, so the cap matters.
const DIVISOR_SCALE: f64 = 96.0;

/// Cut point for the data-integrity variant of the evaluation.  Any
/// value other than 1 works mathematically; a power of two keeps the
/// reciprocal cut exact in binary, otherwise the pairing between the
/// two sums breaks at double-precision scale and the residual floors
/// near 1e-16 no matter the working precision.
const CHECK_SPLIT: f64 = 2.0;

/// Everything the evaluator needs to know about one form.
#[derive(Debug, Clone)]
pub struct LFunctionSpec {
    degree: u32,
    conductor_scale: f64,
    weight: u32,
    sign: i32,
    coefficients: BTreeMap<u64, Rational>,
    gap_list: Vec<u64>,
    /// Largest norm the document classifies (a value, a gap, or -- by
    /// appearing below the largest classified norm without being listed
    /// -- an impossible norm of the field).
    coverage: u64,
    /// When the ingestion ran gap-tolerant, absent norms past `coverage`
    /// are budgeted into the truncation bound instead of aborting.
    tolerate_gaps: bool,
}

impl LFunctionSpec {
    pub fn new(
        degree: u32,
        conductor_scale: f64,
        weight: u32,
        sign: i32,
        coefficients: BTreeMap<u64, Rational>,
        mut gap_list: Vec<u64>,
    ) -> Result<LFunctionSpec> {
        if degree == 0 {
            return Err(Error::DomainError("degree must be at least 1".into()));
        }
        if !(conductor_scale > 0.0) || !conductor_scale.is_finite() {
            return Err(Error::DomainError(format!(
                "conductor scale must be positive and finite, got {conductor_scale}"
            )));
        }
        if weight < 4 || weight % 2 != 0 {
            return Err(Error::UnsupportedWeight(weight));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvariantViolation(format!(
                "sign must be +1 or -1, got {sign}"
            )));
        }
        if coefficients.get(&1).map(|c| *c != 1) != Some(false) {
            return Err(Error::InvariantViolation(
                "normalized coefficient c(1) = 1 is required".into(),
            ));
        }
        gap_list.sort_unstable();
        gap_list.dedup();
        let coverage = coefficients
            .keys()
            .next_back()
            .copied()
            .unwrap_or(1)
            .max(gap_list.last().copied().unwrap_or(1));
        let tolerate_gaps = !gap_list.is_empty();
        Ok(LFunctionSpec {
            degree,
            conductor_scale,
            weight,
            sign,
            coefficients,
            gap_list,
            coverage,
            tolerate_gaps,
        })
    }

    pub fn from_eigenform(data: &EigenformData) -> Result<LFunctionSpec> {
        LFunctionSpec::new(
            data.field.degree,
            data.conductor_scale,
            data.weight,
            data.sign,
            data.coefficients.clone(),
            data.gap_list.clone(),
        )
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn conductor_scale(&self) -> f64 {
        self.conductor_scale
    }

    pub fn coefficient(&self, norm: u64) -> Option<&Rational> {
        self.coefficients.get(&norm)
    }

    pub fn gap_list(&self) -> &[u64] {
        &self.gap_list
    }

    pub fn coverage(&self) -> u64 {
        self.coverage
    }

    /// Kernel argument scale A = C/(2pi)^n, derived on demand.
    pub fn scale(&self, bits: u32) -> Float {
        let two_pi = 2u32 * Float::with_val(bits, rug::float::Constant::Pi);
        Float::with_val(bits, self.conductor_scale) / two_pi.pow(self.degree)
    }
}

/// One evaluated completed L-value.
#[derive(Debug, Clone)]
pub struct LambdaValue {
    pub s: f64,
    pub value: Float,
    /// Majorant estimate of everything the truncated sum omits.
    pub truncation_bound: Float,
    /// Nonzero coefficients that actually entered the sum.
    pub terms_used: usize,
}

/// |c(m)| <= (ideals of norm m) * m^((k-1)/2), and the ideal count is at
/// most the 2n-divisor count d_{2n}(m) <= d(m)^(2n-1).
fn coefficient_majorant(degree: u32, weight: u32, m: u64, wb: u32) -> Float {
    let lnm = Float::with_val(wb, m).ln();
    let ln_d = Float::with_val(wb, DIVISOR_SCALE).ln() + Float::with_val(wb, 0.1) * &lnm;
    let e = f64::from(2 * degree - 1);
    (ln_d * e + lnm * ((f64::from(weight) - 1.0) / 2.0)).exp()
}

pub fn lambda_value(spec: &LFunctionSpec, s: f64, prec: &Precision) -> Result<LambdaValue> {
    lambda_value_at_split(spec, s, 1.0, prec)
}

/// Same sum with the defining integral cut at `split` instead of 1: the
/// direct kernels start at `split`, the reflected ones at `1/split`.
/// The result is independent of `split` exactly when the coefficients
/// satisfy the functional equation with the declared sign.
fn lambda_value_at_split(
    spec: &LFunctionSpec,
    s: f64,
    split: f64,
    prec: &Precision,
) -> Result<LambdaValue> {
    if !s.is_finite() {
        return Err(Error::DomainError(format!("evaluation point must be finite, got {s}")));
    }
    if !(split > 0.0) || !split.is_finite() {
        return Err(Error::DomainError(format!("cut point must be positive, got {split}")));
    }
    let k = f64::from(spec.weight);
    let recip = 1.0 / split;
    let wb = prec.bits() + 32;
    let kspec = KernelSpec::auto(spec.degree);
    let a = spec.scale(wb);
    let stop = Float::with_val(wb, prec.tol()) / 10u32;

    // grow the truncation point until the majorant-weighted kernel pair
    // drops below a tenth of the tolerance; keep every pair, the data
    // sum below reuses them
    let mut pairs: Vec<(Float, Float)> = Vec::new();
    let mut prev = Float::with_val(wb, f64::INFINITY);
    let (m_used, last_bound) = loop {
        let m = pairs.len() as u64 + 1;
        let x = Float::with_val(wb, m) / &a;
        let k1 = kernel_g_incomplete_from(&kspec, s, &x, split, prec)?;
        let k2 = kernel_g_incomplete_from(&kspec, k - s, &x, recip, prec)?;
        let b = coefficient_majorant(spec.degree, spec.weight, m, wb)
            * (Float::with_val(wb, &k1).abs() + Float::with_val(wb, &k2).abs());
        pairs.push((k1, k2));
        // the decrease condition keeps a sub-threshold bound on the
        // rising flank of the kernel from ending the sum early
        if b < stop && b <= prev {
            break (m, b);
        }
        if !spec.tolerate_gaps && m >= spec.coverage {
            return Err(Error::InsufficientCoefficients(format!(
                "term bound {:.3e} at norm {m} is above {:.3e} and the document \
                 classifies nothing past norm {}",
                b.to_f64(),
                stop.to_f64(),
                spec.coverage
            )));
        }
        if m >= TERM_CAP {
            return Err(Error::NonConvergence(format!(
                "sum at s = {s} did not localise within {TERM_CAP} terms"
            )));
        }
        prev = b;
    };

    let mut acc = Float::new(wb);
    let mut terms_used = 0usize;
    for (&m, c) in spec.coefficients.range(1..=m_used) {
        if *c == 0 {
            continue;
        }
        let (k1, k2) = &pairs[(m - 1) as usize];
        let mut kern = Float::with_val(wb, k1);
        if spec.sign > 0 {
            kern += k2;
        } else {
            kern -= k2;
        }
        acc += Float::with_val(wb, c) * kern;
        terms_used += 1;
    }

    // majorant budget for norms the document cannot pin down: gap-listed
    // entries, plus anything between its coverage and M in gap-tolerant
    // mode (strict mode never evaluates past coverage)
    let mut omitted = Float::new(wb);
    for &g in &spec.gap_list {
        if g > m_used {
            break;
        }
        let (k1, k2) = &pairs[(g - 1) as usize];
        omitted += coefficient_majorant(spec.degree, spec.weight, g, wb)
            * (Float::with_val(wb, k1).abs() + Float::with_val(wb, k2).abs());
    }
    for m in spec.coverage + 1..=m_used {
        let (k1, k2) = &pairs[(m - 1) as usize];
        omitted += coefficient_majorant(spec.degree, spec.weight, m, wb)
            * (Float::with_val(wb, k1).abs() + Float::with_val(wb, k2).abs());
    }

    // tail past M: explicit majorant terms until they sit three orders
    // below the stop level and visibly decay, then a geometric closeout
    // whose squared reserve absorbs the ratio drifting toward 1.  The
    // gate must admit ratios near 1: degree >= 3 kernels shed mass like
    // exp(-n (m/A)^(1/n)), so successive majorants shrink by only
    // 1 - O(m^(1/n - 1)) however far out the sum runs, and 1/(1 - ratio)
    // is then exactly the stretched-exponential tail factor; the extra
    // reserve power covers the ratio still creeping upward.  For the
    // same reason those degrees cannot afford to chase three more
    // orders of decay term by term, so their crawl stops at the level
    // the main sum already reached and the closeout amount simply
    // enters the reported bound.
    let floor = if spec.degree <= 2 {
        Float::with_val(wb, &stop) / 1000u32
    } else {
        Float::with_val(wb, &stop)
    };
    let mut tail = Float::new(wb);
    let mut prev_b = last_bound;
    let mut mt = m_used;
    let mut closed = false;
    for _ in 0..500 {
        mt += 1;
        let x = Float::with_val(wb, mt) / &a;
        let k1 = kernel_g_incomplete_from(&kspec, s, &x, split, prec)?;
        let k2 = kernel_g_incomplete_from(&kspec, k - s, &x, recip, prec)?;
        let b = coefficient_majorant(spec.degree, spec.weight, mt, wb) * (k1.abs() + k2.abs());
        tail += &b;
        let ratio = if prev_b.is_zero() {
            Float::new(wb)
        } else {
            Float::with_val(wb, &b) / &prev_b
        };
        if b < floor && ratio < 0.999 {
            let room = Float::with_val(wb, 1) - ratio;
            tail += b / room.square();
            closed = true;
            break;
        }
        prev_b = b;
    }
    if !closed {
        return Err(Error::NonConvergence(format!(
            "tail bound at s = {s} did not close within 500 terms past the truncation point"
        )));
    }

    Ok(LambdaValue {
        s,
        value: Float::with_val(prec.bits(), acc),
        truncation_bound: Float::with_val(prec.bits(), tail + omitted),
        terms_used,
    })
}

/// L(s) = Lambda(s) / (C^s (2pi)^(-ns) Gamma(s)^n).
pub fn l_value(spec: &LFunctionSpec, s: f64, prec: &Precision) -> Result<Float> {
    if !(s > 0.0) {
        return Err(Error::DomainError(format!(
            "removing the gamma factor needs s > 0, got {s}"
        )));
    }
    let lv = lambda_value(spec, s, prec)?;
    let wb = prec.bits() + 32;
    let lg = ln_gamma(s, prec)?;
    let two_pi = 2u32 * Float::with_val(wb, rug::float::Constant::Pi);
    let ln_gamma_factor = Float::with_val(wb, s) * Float::with_val(wb, spec.conductor_scale).ln()
        - Float::with_val(wb, f64::from(spec.degree) * s) * two_pi.ln()
        + Float::with_val(wb, spec.degree) * lg;
    Ok(Float::with_val(prec.bits(), lv.value / ln_gamma_factor.exp()))
}

/// Lambda at every integer critical point 1..k-1.  The right half is
/// evaluated (concurrently when `jobs > 1`); the left half is its exact
/// sign-mirror under the two-sided sum, so it is copied, not recomputed.
pub fn lambda_critical_values(
    spec: &LFunctionSpec,
    prec: &Precision,
    jobs: usize,
) -> Result<BTreeMap<u32, LambdaValue>> {
    let k = spec.weight;
    let half = k / 2;
    let points: Vec<u32> = (half..k).collect();
    let computed = parallel_map(&points, jobs, |&s| lambda_value(spec, f64::from(s), prec));
    let mut out = BTreeMap::new();
    for (s, r) in points.iter().zip(computed) {
        out.insert(*s, r?);
    }
    for s in 1..half {
        let src = &out[&(k - s)];
        let mut value = src.value.clone();
        if spec.sign < 0 {
            value = -value;
        }
        out.insert(
            s,
            LambdaValue {
                s: f64::from(s),
                value,
                truncation_bound: src.truncation_bound.clone(),
                terms_used: src.terms_used,
            },
        );
    }
    Ok(out)
}

/// Plain value map, for consumers that only need the numbers.
pub fn lambda_map(values: &BTreeMap<u32, LambdaValue>) -> BTreeMap<u32, Float> {
    values.iter().map(|(s, v)| (*s, v.value.clone())).collect()
}

#[derive(Debug, Clone)]
pub struct FeSample {
    pub s: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct FeReport {
    pub max_residual: f64,
    pub samples: Vec<FeSample>,
}

/// Residuals |Lambda(s) - sign * Lambda(k-s)| over the sample points,
/// relative to max(|Lambda(s)|, both truncation bounds).
///
/// Evaluated at the cut 1, the two-sided sum is symmetric for any
/// coefficients whatsoever, so it cannot test the data.  Cutting at
/// beta != 1 breaks that: the identity sign * Lambda_beta(k-s) =
/// Lambda_{1/beta}(s) holds unconditionally, so the residual measures
/// how much moving the cut from 1/beta to beta changes the sum, which
/// vanishes precisely when the data satisfies its functional equation.
/// A flipped sign or corrupt coefficients surface as O(1) residuals.
pub fn check_functional_equation(
    spec: &LFunctionSpec,
    sample_points: &[f64],
    prec: &Precision,
) -> Result<FeReport> {
    let k = f64::from(spec.weight);
    let mut samples = Vec::with_capacity(sample_points.len());
    let mut max_residual = 0.0f64;
    for &s in sample_points {
        if !(1.0..=k - 1.0).contains(&s) {
            return Err(Error::DomainError(format!(
                "sample point {s} outside the critical strip [1, {}]",
                k - 1.0
            )));
        }
        let v1 = lambda_value_at_split(spec, s, CHECK_SPLIT, prec)?;
        let v2 = lambda_value_at_split(spec, k - s, CHECK_SPLIT, prec)?;
        let mut diff = Float::with_val(prec.bits(), &v1.value);
        if spec.sign > 0 {
            diff -= &v2.value;
        } else {
            diff += &v2.value;
        }
        let denom = Float::with_val(prec.bits(), &v1.value)
            .abs()
            .max(&v1.truncation_bound)
            .max(&v2.truncation_bound);
        let residual = if denom.is_zero() {
            0.0
        } else {
            (diff.abs() / denom).to_f64()
        };
        max_residual = max_residual.max(residual);
        samples.push(FeSample { s, residual });
    }
    Ok(FeReport { max_residual, samples })
}

/// Pairwise sign-symmetry of the values listed in a fixture, relative
/// to the largest listed magnitude.  Central values pair with
/// themselves, so for sign -1 they must vanish.
pub fn check_fixture_symmetry(fix: &LambdaFixture) -> FeReport {
    let mut scale = 0.0f64;
    for (re, im) in fix.lambda.values() {
        scale = scale.max(re.to_f64().abs()).max(im.to_f64().abs());
    }
    let mut samples = Vec::new();
    let mut max_residual = 0.0f64;
    for (&s, (re, im)) in &fix.lambda {
        let t = fix.weight - s;
        if t < s {
            continue;
        }
        let Some((re2, im2)) = fix.lambda.get(&t) else {
            continue;
        };
        let (dr, di) = if fix.sign > 0 {
            (Rational::from(re - re2), Rational::from(im - im2))
        } else {
            (Rational::from(re + re2), Rational::from(im + im2))
        };
        let mag = dr.to_f64().abs().max(di.to_f64().abs());
        let residual = if scale > 0.0 { mag / scale } else { 0.0 };
        max_residual = max_residual.max(residual);
        samples.push(FeSample { s: f64::from(s), residual });
    }
    FeReport { max_residual, samples }
}

#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Checks 0 <= Lambda(k/2) <= Lambda(k/2+1) <= ... <= Lambda(k-1), and
/// for sign -1 additionally Lambda(k/2) = 0 with the steeper chain
/// Lambda(k/2+j)/j nondecreasing in j.
pub fn check_lambda_growth(
    values: &BTreeMap<u32, Float>,
    weight: u32,
    sign: i32,
    tol: f64,
) -> GrowthReport {
    let half = weight / 2;
    let mut violations = Vec::new();
    for s in half..weight {
        if !values.contains_key(&s) {
            violations.push(format!("no value at s = {s}"));
        }
    }
    if !violations.is_empty() {
        return GrowthReport { ok: false, violations };
    }

    if values[&half] < -tol {
        violations.push(format!(
            "Lambda({half}) = {:.6e} is negative",
            values[&half].to_f64()
        ));
    }
    for s in half..weight - 1 {
        let gap = Float::with_val(values[&s].prec(), &values[&s]) - &values[&(s + 1)];
        if gap > tol {
            violations.push(format!(
                "Lambda({s}) = {:.6e} exceeds Lambda({}) = {:.6e}",
                values[&s].to_f64(),
                s + 1,
                values[&(s + 1)].to_f64()
            ));
        }
    }
    if sign < 0 {
        if values[&half].clone().abs() > tol {
            violations.push(format!(
                "central value {:.6e} should vanish when the sign is -1",
                values[&half].to_f64()
            ));
        }
        for j in 1..=half.saturating_sub(2) {
            let lhs = values[&(half + j)].clone() / j;
            let rhs = values[&(half + j + 1)].clone() / (j + 1);
            if lhs - rhs > tol {
                violations.push(format!(
                    "Lambda({})/{} exceeds Lambda({})/{}",
                    half + j,
                    j,
                    half + j + 1,
                    j + 1
                ));
            }
        }
    }
    GrowthReport { ok: violations.is_empty(), violations }
}

/// Growth check on a fixture's listed values.
pub fn check_fixture_growth(fix: &LambdaFixture, tol: f64) -> Result<GrowthReport> {
    let map = fix.real_map(96)?;
    Ok(check_lambda_growth(&map, fix.weight, fix.sign, tol))
}

#[derive(Debug, Clone)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub ok: bool,
}

/// L((k+1)/2 + a) / L((k+1)/2 + b) <= (zeta(1+a)/zeta(1+b))^(2n) for
/// 0 < a < b.  A failure flags coefficients outside the term-by-term
/// comparison with zeta^(2n) that the bound rests on.
pub fn check_ratio_bound(
    spec: &LFunctionSpec,
    a: f64,
    b: f64,
    prec: &Precision,
) -> Result<RatioReport> {
    if !(0.0 < a && a < b) {
        return Err(Error::DomainError(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    let edge = (f64::from(spec.weight) + 1.0) / 2.0;
    let la = l_value(spec, edge + a, prec)?;
    let lb = l_value(spec, edge + b, prec)?;
    if !(lb.to_f64() > 0.0) {
        return Err(Error::DomainError(
            "denominator L-value is not positive; ratio undefined".into(),
        ));
    }
    let za = zeta(1.0 + a, prec)?;
    let zb = zeta(1.0 + b, prec)?;
    let lhs = (la / lb).to_f64();
    let rhs = (za / zb).pow(2 * spec.degree).to_f64();
    Ok(RatioReport { lhs, rhs, slack: rhs - lhs, ok: lhs <= rhs })
}
