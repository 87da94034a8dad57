//! Period polynomials from completed L-values.
//!
//! With binomial coefficients B(a, b) and values Lambda(s) at the
//! integer critical points,
//!
//! ```text
//! r(X) = sum_{m=0}^{k-2} (-1)^m i^(n(k-m-1)) B(k-2, m) Lambda(k-m-1) X^m
//! P(X) = B(2q, q)/2 * Lambda(k/2) + sum_{j=1}^{q} B(2q, q+j) Lambda(k/2+j) X^j
//! Q(X) = P(X) / Lambda(k-1),          q = (k-2)/2
//! ```
//!
//! and the three are tied together by
//!
//! ```text
//! r(i^(n+2) X) = i^(n(2q+1)) e Lambda(k-1) X^q [Q(X) + e Q(1/X)]
//! ```
//!
//! which holds for every sign-symmetric value map, so its residual
//! measures arithmetic consistency of the inputs, not deep facts.
//! Powers of i are reduced mod 4 on integer exponents and binomials are
//! exact integers: the reality and magnitude symmetries of the result
//! are then exact, not approximate.

use crate::error::{Error, Result};
use crate::formdata::json_number_to_string;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyKind {
    R,
    P,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolySource {
    Evaluator,
    Fixture,
}

#[derive(Debug, Clone)]
pub struct PeriodPolynomial {
    /// coeffs[m] multiplies X^m; length k-1 for r, (k-2)/2 + 1 for P, Q.
    pub coeffs: Vec<Complex>,
    pub weight: u32,
    pub degree_n: u32,
    pub kind: PolyKind,
    pub source: PolySource,
    /// Accuracy of the Lambda values the polynomial was built from.
    pub source_tol: f64,
}

impl PeriodPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Working precision carried by the coefficients.
    pub fn bits(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec().0.max(c.prec().1)).max().unwrap_or(64)
    }

    /// Horner evaluation at the precision of x or the coefficients,
    /// whichever is higher.
    pub fn eval(&self, x: &Complex) -> Complex {
        let wb = self.bits().max(x.prec().0).max(x.prec().1);
        let mut acc = Complex::new(wb);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// z * i^e with the phase reduced mod 4; exact component shuffling.
fn mul_i_pow(z: &Complex, e: u32) -> Complex {
    let wb = z.prec().0.max(z.prec().1);
    let (re, im) = (z.real(), z.imag());
    match e % 4 {
        0 => z.clone(),
        1 => Complex::with_val(wb, (-Float::with_val(wb, im), Float::with_val(wb, re))),
        2 => Complex::with_val(wb, (-Float::with_val(wb, re), -Float::with_val(wb, im))),
        _ => Complex::with_val(wb, (Float::with_val(wb, im), -Float::with_val(wb, re))),
    }
}

fn binomial(a: u32, b: u32) -> Integer {
    Integer::from(Integer::binomial_u(a, b))
}

fn require(lambda: &BTreeMap<u32, Float>, s: u32) -> Result<&Float> {
    lambda.get(&s).ok_or(Error::MissingLambda(s))
}

fn working_bits(lambda: &BTreeMap<u32, Float>) -> u32 {
    lambda.values().map(Float::prec).max().unwrap_or(64).max(64) + 32
}

fn validate_shape(weight: u32, degree_n: u32) -> Result<()> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::UnsupportedWeight(weight));
    }
    if degree_n == 0 {
        return Err(Error::DomainError("degree must be at least 1".into()));
    }
    Ok(())
}

pub fn build_r(
    lambda: &BTreeMap<u32, Float>,
    weight: u32,
    degree_n: u32,
    source: PolySource,
    source_tol: f64,
) -> Result<PeriodPolynomial> {
    validate_shape(weight, degree_n)?;
    let wb = working_bits(lambda);
    let mut coeffs = Vec::with_capacity(weight as usize - 1);
    for m in 0..=weight - 2 {
        let v = require(lambda, weight - m - 1)?;
        let b = Float::with_val(wb, binomial(weight - 2, m));
        let base = Complex::with_val(wb, (b * v, 0));
        // (-1)^m i^(n(k-m-1)) as a single power of i
        let phase = (2 * m + degree_n * (weight - m - 1)) % 4;
        coeffs.push(mul_i_pow(&base, phase));
    }
    Ok(PeriodPolynomial {
        coeffs,
        weight,
        degree_n,
        kind: PolyKind::R,
        source,
        source_tol,
    })
}

pub fn build_pq(
    lambda: &BTreeMap<u32, Float>,
    weight: u32,
    degree_n: u32,
    source: PolySource,
    source_tol: f64,
) -> Result<(PeriodPolynomial, PeriodPolynomial)> {
    validate_shape(weight, degree_n)?;
    let wb = working_bits(lambda);
    let q = (weight - 2) / 2;
    let mut scale = 0.0f64;
    for s in weight / 2..weight {
        scale = scale.max(require(lambda, s)?.to_f64().abs());
    }
    let top = require(lambda, weight - 1)?;
    if top.to_f64().abs() <= source_tol * scale {
        return Err(Error::ZeroTopLambda);
    }

    let mut coeffs = Vec::with_capacity(q as usize + 1);
    let half = Float::with_val(wb, binomial(2 * q, q)) * require(lambda, weight / 2)? / 2u32;
    coeffs.push(Complex::with_val(wb, (half, 0)));
    for j in 1..=q {
        let b = Float::with_val(wb, binomial(2 * q, q + j));
        coeffs.push(Complex::with_val(wb, (b * require(lambda, weight / 2 + j)?, 0)));
    }
    let p = PeriodPolynomial {
        coeffs: coeffs.clone(),
        weight,
        degree_n,
        kind: PolyKind::P,
        source,
        source_tol,
    };
    let mut qcoeffs = coeffs;
    for c in &mut qcoeffs {
        *c /= top;
    }
    let qp = PeriodPolynomial {
        coeffs: qcoeffs,
        weight,
        degree_n,
        kind: PolyKind::Q,
        source,
        source_tol,
    };
    Ok((p, qp))
}

/// Max over the grid of |r(i^(n+2)X) - i^(n(2q+1)) e Lambda(k-1) X^q
/// [Q(X) + e Q(1/X)]| relative to the largest left side, with X running
/// over `grid` points of the unit circle.  Lambda(k-1) is recovered
/// exactly from the constant coefficient of r.
pub fn check_rq_identity(
    r: &PeriodPolynomial,
    q: &PeriodPolynomial,
    sign: i32,
    grid: usize,
) -> Result<f64> {
    if r.kind != PolyKind::R || q.kind != PolyKind::Q {
        return Err(Error::DomainError(
            "identity check needs an r polynomial and a Q polynomial".into(),
        ));
    }
    if r.weight != q.weight || r.degree_n != q.degree_n {
        return Err(Error::DomainError(
            "r and Q were not built for the same form".into(),
        ));
    }
    if grid < 4 {
        return Err(Error::DomainError(format!("need at least 4 grid points, got {grid}")));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvariantViolation(format!("sign must be +1 or -1, got {sign}")));
    }
    let k = r.weight;
    let n = r.degree_n;
    let qq = (k - 2) / 2;
    let wb = r.bits().max(q.bits()) + 32;

    // constant term of r is i^(n(k-1)) Lambda(k-1); unwind the phase
    let lam_top = mul_i_pow(&r.coeffs[0], 4 - (n * (k - 1)) % 4);

    let mut worst = Float::new(wb);
    let mut scale = Float::new(wb);
    for j in 0..grid {
        let theta = Float::with_val(wb, 2 * j as u32) * Float::with_val(wb, rug::float::Constant::Pi)
            / Float::with_val(wb, grid as u32);
        let x = Complex::with_val(wb, (Float::with_val(wb, &theta).cos(), theta.sin()));
        let xi = mul_i_pow(&x, n + 2);
        let lhs = r.eval(&xi);

        let mut bracket = q.eval(&x.clone().recip());
        if sign < 0 {
            bracket = -bracket;
        }
        bracket += q.eval(&x);
        let mut rhs = Complex::with_val(wb, &lam_top) * bracket * x.pow(qq);
        if sign < 0 {
            rhs = -rhs;
        }
        let rhs = mul_i_pow(&rhs, n * (2 * qq + 1));

        let dev = Complex::with_val(wb, &lhs - rhs).abs().real().clone();
        if dev > worst {
            worst = dev;
        }
        let mag = lhs.abs().real().clone();
        if mag > scale {
            scale = mag;
        }
    }
    if scale.is_zero() {
        return Ok(if worst.is_zero() { 0.0 } else { f64::INFINITY });
    }
    Ok((worst / scale).to_f64())
}

/// Even-power and odd-power parts; their sum reassembles r exactly.
pub fn split_parity(r: &PeriodPolynomial) -> Result<(PeriodPolynomial, PeriodPolynomial)> {
    if r.kind != PolyKind::R {
        return Err(Error::DomainError("parity split is defined for r polynomials".into()));
    }
    let mut plus = r.clone();
    let mut minus = r.clone();
    for (m, (cp, cm)) in plus.coeffs.iter_mut().zip(minus.coeffs.iter_mut()).enumerate() {
        let wb = cp.prec().0.max(cp.prec().1);
        if m % 2 == 0 {
            *cm = Complex::new(wb);
        } else {
            *cp = Complex::new(wb);
        }
    }
    Ok((plus, minus))
}

fn kind_tag(kind: PolyKind) -> &'static str {
    match kind {
        PolyKind::R => "r",
        PolyKind::P => "P",
        PolyKind::Q => "Q",
    }
}

fn source_tag(source: PolySource) -> &'static str {
    match source {
        PolySource::Evaluator => "evaluator",
        PolySource::Fixture => "fixture",
    }
}

/// JSON document with full-precision decimal strings for the
/// coefficients and enough metadata to reconstruct the value exactly.
pub fn polynomial_to_json(p: &PeriodPolynomial) -> String {
    let coeffs: Vec<serde_json::Value> = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(m, c)| {
            serde_json::json!({
                "m": m,
                "re": c.real().to_string_radix(10, None),
                "im": c.imag().to_string_radix(10, None),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "kind": kind_tag(p.kind),
        "weight": p.weight,
        "degree": p.degree_n,
        "source": source_tag(p.source),
        "source_tol": p.source_tol,
        "bits": p.bits(),
        "coefficients": coeffs,
    });
    serde_json::to_string_pretty(&doc).expect("serializable document")
}

pub fn polynomial_from_json(doc: &str) -> Result<PeriodPolynomial> {
    let root: serde_json::Value = serde_json::from_str(doc)
        .map_err(|e| Error::MalformedDocument(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::MalformedDocument("document root must be an object".into()))?;
    let get = |k: &str| {
        obj.get(k)
            .ok_or_else(|| Error::MalformedDocument(format!("missing field \"{k}\"")))
    };
    let kind = match get("kind")?.as_str() {
        Some("r") => PolyKind::R,
        Some("P") => PolyKind::P,
        Some("Q") => PolyKind::Q,
        _ => return Err(Error::MalformedDocument("kind must be \"r\", \"P\" or \"Q\"".into())),
    };
    let source = match get("source")?.as_str() {
        Some("evaluator") => PolySource::Evaluator,
        Some("fixture") => PolySource::Fixture,
        _ => {
            return Err(Error::MalformedDocument(
                "source must be \"evaluator\" or \"fixture\"".into(),
            ))
        }
    };
    let weight = get("weight")?
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| Error::MalformedDocument("weight must be a small integer".into()))?;
    let degree_n = get("degree")?
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| Error::MalformedDocument("degree must be a small integer".into()))?;
    let source_tol = get("source_tol")?
        .as_f64()
        .ok_or_else(|| Error::MalformedDocument("source_tol must be a number".into()))?;
    let bits = get("bits")?
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .filter(|&b| (2..=1_000_000).contains(&b))
        .ok_or_else(|| Error::MalformedDocument("bits must be a sane integer".into()))?;
    let rows = get("coefficients")?
        .as_array()
        .ok_or_else(|| Error::MalformedDocument("coefficients must be a list".into()))?;
    if rows.is_empty() {
        return Err(Error::MalformedDocument("coefficient list must be nonempty".into()));
    }
    let mut coeffs = vec![None; rows.len()];
    for row in rows {
        let entry = row
            .as_object()
            .ok_or_else(|| Error::MalformedDocument("coefficient entries must be objects".into()))?;
        let m = entry
            .get("m")
            .and_then(|v| v.as_u64())
            .and_then(|v| usize::try_from(v).ok())
            .filter(|&m| m < rows.len())
            .ok_or_else(|| Error::MalformedDocument("coefficient index out of range".into()))?;
        let parse_part = |key: &str| -> Result<Float> {
            let v = entry
                .get(key)
                .ok_or_else(|| Error::MalformedDocument(format!("coefficient {m} lacks \"{key}\"")))?;
            let s = json_number_to_string(v)?;
            Float::parse(&s)
                .map(|p| Float::with_val(bits, p))
                .map_err(|_| Error::MalformedDocument(format!("unparsable number {s:?}")))
        };
        let c = Complex::with_val(bits, (parse_part("re")?, parse_part("im")?));
        if coeffs[m].replace(c).is_some() {
            return Err(Error::MalformedDocument(format!("duplicate coefficient index {m}")));
        }
    }
    let coeffs: Vec<Complex> = coeffs
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::MalformedDocument("coefficient indices must cover 0..len".into()))?;
    Ok(PeriodPolynomial { coeffs, weight, degree_n, kind, source, source_tol })
}
