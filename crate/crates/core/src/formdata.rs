//! Eigenform coefficient documents: parsing and validation, canonical
//! serialization, Hecke extension of prime data to composite norms, and
//! the Ramanujan tau generator for classical fixtures.
//!
//! A document carries aggregated coefficients c(m) (summed over ideals of
//! norm m) and optionally per-ideal values a(p_i) keyed by (norm, index).
//! Per-ideal data is authoritative: norms whose prime support it covers
//! are recomputed during extension, because the aggregated entries are
//! derived quantities.

use crate::error::{Error, Result};
use rug::{ops::Pow, Integer, Rational};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Totally real field invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldData {
    /// Number of real places n (degree over the rationals).
    pub degree: u32,
    /// Field discriminant, 1 for the rationals.
    pub discriminant: u64,
    /// Optional hint listing every attainable ideal norm up to its last
    /// entry; consulted for degree >= 3 primes without per-ideal data.
    pub norms_present: Option<Vec<u64>>,
}

/// A parallel-weight eigenform given by its Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenformData {
    pub label: String,
    pub field: FieldData,
    /// Parallel weight k, even and at least 4.
    pub weight: u32,
    /// Functional-equation sign, +1 or -1.
    pub sign: i32,
    /// Numerator C of the kernel argument scale A = C / (2 pi)^n.
    /// Defaults to the discriminant for degree >= 2 and to 1 classically.
    pub conductor_scale: f64,
    /// Whether the data is Hecke-normalized (c(1) = 1); validation of the
    /// unit coefficient is skipped otherwise.
    pub normalized: bool,
    /// Aggregated coefficients c(m), keyed by ideal norm.
    pub coefficients: BTreeMap<u64, Rational>,
    /// Per-ideal eigenvalues keyed by (prime-ideal norm, conjugate index).
    pub prime_data: BTreeMap<(u64, u32), Rational>,
    /// Attainable norms excluded from `coefficients` because their prime
    /// data is missing; filled by gap-tolerant extension.
    pub gap_list: Vec<u64>,
}

impl EigenformData {
    /// Kernel argument scale numerator appropriate for the degree.
    pub fn default_conductor_scale(degree: u32, discriminant: u64) -> f64 {
        if degree >= 2 {
            discriminant as f64
        } else {
            1.0
        }
    }
}

/// Exact rational from a decimal string.  Accepts integers, fractions
/// "a/b", and decimals with optional exponent ("-4.5", "1.2e3").
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::MalformedDocument("empty numeric value".into()));
    }
    if s.contains('/') {
        return Rational::parse(s)
            .map(|v| Rational::from(v))
            .map_err(|_| Error::MalformedDocument(format!("bad fraction {s:?}")));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::MalformedDocument(format!("bad exponent in {s:?}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    if digits.is_empty()
        || digits == "-"
        || digits == "+"
        || !digits
            .strip_prefix(['-', '+'])
            .unwrap_or(&digits)
            .chars()
            .all(|c| c.is_ascii_digit())
        || frac_part.contains(['-', '+'])
    {
        return Err(Error::MalformedDocument(format!("bad numeric value {s:?}")));
    }
    let num: Integer = digits
        .parse()
        .map_err(|_| Error::MalformedDocument(format!("bad numeric value {s:?}")))?;
    let shift = exp10 - frac_part.len() as i64;
    let mut r = Rational::from(num);
    if shift >= 0 {
        r *= Rational::from(Integer::from(10).pow(shift as u32));
    } else {
        r /= Rational::from(Integer::from(10).pow((-shift) as u32));
    }
    Ok(r)
}

/// Canonical decimal rendering: integer when the denominator is 1,
/// otherwise "num/den".
pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

pub(crate) fn json_number_to_string(v: &serde_json::Value) -> Result<String> {
    match v {
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::String(s) => Ok(s.clone()),
        other => Err(Error::MalformedDocument(format!(
            "expected a number or numeric string, got {other}"
        ))),
    }
}

fn get_u64(obj: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<u64> {
    obj.get(key)
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::MalformedDocument(format!("missing or invalid field {key:?}")))
}

/// Parses and validates an eigenform document.
pub fn parse_eigenform(json: &str) -> Result<EigenformData> {
    let root: serde_json::Value = serde_json::from_str(json)
        .map_err(|e| Error::MalformedDocument(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::MalformedDocument("document root must be an object".into()))?;

    let label = obj
        .get("label")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::MalformedDocument("missing or invalid field \"label\"".into()))?
        .to_string();
    let degree = u32::try_from(get_u64(obj, "degree")?)
        .map_err(|_| Error::MalformedDocument("degree out of range".into()))?;
    if degree == 0 {
        return Err(Error::InvariantViolation("degree must be at least 1".into()));
    }
    let discriminant = get_u64(obj, "discriminant")?;
    validate_discriminant(degree, discriminant)?;

    let weight = u32::try_from(get_u64(obj, "weight")?)
        .map_err(|_| Error::MalformedDocument("weight out of range".into()))?;
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::UnsupportedWeight(weight));
    }

    let sign = obj
        .get("sign")
        .and_then(|v| v.as_i64())
        .ok_or_else(|| Error::MalformedDocument("missing or invalid field \"sign\"".into()))?;
    if sign != 1 && sign != -1 {
        return Err(Error::InvariantViolation(format!("sign must be +1 or -1, got {sign}")));
    }

    let conductor_scale = match obj.get("conductor_scale") {
        Some(v) => {
            let c = v.as_f64().ok_or_else(|| {
                Error::MalformedDocument("conductor_scale must be a number".into())
            })?;
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::InvariantViolation(format!(
                    "conductor_scale must be positive, got {c}"
                )));
            }
            c
        }
        None => EigenformData::default_conductor_scale(degree, discriminant),
    };

    let normalized = match obj.get("normalized") {
        Some(v) => v
            .as_bool()
            .ok_or_else(|| Error::MalformedDocument("normalized must be a boolean".into()))?,
        None => true,
    };

    let norms_present = match obj.get("norms_present") {
        Some(v) => {
            let arr = v.as_array().ok_or_else(|| {
                Error::MalformedDocument("norms_present must be an array".into())
            })?;
            let mut hints = Vec::with_capacity(arr.len());
            for item in arr {
                hints.push(item.as_u64().ok_or_else(|| {
                    Error::MalformedDocument("norms_present entries must be integers".into())
                })?);
            }
            if hints.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::MalformedDocument(
                    "norms_present must be strictly increasing".into(),
                ));
            }
            Some(hints)
        }
        None => None,
    };

    let coeff_arr = obj
        .get("coefficients")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::MalformedDocument("missing \"coefficients\" array".into()))?;
    let mut coefficients = BTreeMap::new();
    for item in coeff_arr {
        let entry = item
            .as_object()
            .ok_or_else(|| Error::MalformedDocument("coefficient entries must be objects".into()))?;
        let norm = get_u64(entry, "norm")?;
        let value = parse_rational(&json_number_to_string(entry.get("value").ok_or_else(
            || Error::MalformedDocument("coefficient entry missing \"value\"".into()),
        )?)?)?;
        if norm == 0 {
            // conventional zero-norm row: tolerated when the value is zero
            if value != 0 {
                return Err(Error::InvariantViolation(
                    "nonzero coefficient listed at norm 0".into(),
                ));
            }
            continue;
        }
        if coefficients.insert(norm, value).is_some() {
            return Err(Error::MalformedDocument(format!(
                "coefficient at norm {norm} listed twice"
            )));
        }
    }
    if normalized {
        if let Some(c1) = coefficients.get(&1) {
            if *c1 != 1 {
                return Err(Error::InvariantViolation(format!(
                    "normalized form must have c(1) = 1, got {c1}"
                )));
            }
        }
    }

    let mut prime_data = BTreeMap::new();
    if let Some(parr) = obj.get("primes") {
        let parr = parr
            .as_array()
            .ok_or_else(|| Error::MalformedDocument("\"primes\" must be an array".into()))?;
        for item in parr {
            let entry = item.as_object().ok_or_else(|| {
                Error::MalformedDocument("prime entries must be objects".into())
            })?;
            let norm = get_u64(entry, "norm")?;
            let index = u32::try_from(get_u64(entry, "index")?)
                .map_err(|_| Error::MalformedDocument("prime index out of range".into()))?;
            if !is_prime_power(norm) {
                return Err(Error::InvariantViolation(format!(
                    "prime entry norm {norm} is not a prime power"
                )));
            }
            let value = parse_rational(&json_number_to_string(entry.get("value").ok_or_else(
                || Error::MalformedDocument("prime entry missing \"value\"".into()),
            )?)?)?;
            if prime_data.insert((norm, index), value).is_some() {
                return Err(Error::MalformedDocument(format!(
                    "prime entry ({norm}, {index}) listed twice"
                )));
            }
        }
    }

    let gap_list = match obj.get("gaps") {
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::MalformedDocument("\"gaps\" must be an array".into()))?;
            let mut gaps = Vec::with_capacity(arr.len());
            for item in arr {
                gaps.push(item.as_u64().ok_or_else(|| {
                    Error::MalformedDocument("gap entries must be integers".into())
                })?);
            }
            gaps
        }
        None => Vec::new(),
    };

    Ok(EigenformData {
        label,
        field: FieldData { degree, discriminant, norms_present },
        weight,
        sign: sign as i32,
        conductor_scale,
        normalized,
        coefficients,
        prime_data,
        gap_list,
    })
}

/// Discriminant sanity: 1 exactly in degree 1, and at least the Minkowski
/// lower bound (n^n / n!)^2 beyond.
fn validate_discriminant(degree: u32, discriminant: u64) -> Result<()> {
    if degree == 1 {
        if discriminant != 1 {
            return Err(Error::InvariantViolation(format!(
                "degree-1 documents must have discriminant 1, got {discriminant}"
            )));
        }
        return Ok(());
    }
    let bound = minkowski_floor(degree);
    if discriminant < bound {
        return Err(Error::InvariantViolation(format!(
            "discriminant {discriminant} is below the degree-{degree} Minkowski bound {bound}"
        )));
    }
    Ok(())
}

/// Smallest integer >= (n^n / n!)^2.
pub fn minkowski_floor(degree: u32) -> u64 {
    let n = Integer::from(degree);
    let num = n.clone().pow(degree) .square();
    let den = Integer::from(Integer::factorial(degree)).square();
    let q = Rational::from((num, den));
    q.ceil().numer().to_u64().unwrap_or(u64::MAX)
}

/// Canonical JSON rendering; `parse_eigenform` inverts it exactly.
pub fn serialize_eigenform(data: &EigenformData) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\n  \"label\": {},\n  \"degree\": {},\n  \"discriminant\": {},\n  \"weight\": {},\n  \"sign\": {},\n  \"conductor_scale\": {}",
        serde_json::Value::String(data.label.clone()),
        data.field.degree,
        data.field.discriminant,
        data.weight,
        data.sign,
        data.conductor_scale,
    );
    if !data.normalized {
        let _ = write!(out, ",\n  \"normalized\": false");
    }
    if let Some(hints) = &data.field.norms_present {
        let list: Vec<String> = hints.iter().map(|h| h.to_string()).collect();
        let _ = write!(out, ",\n  \"norms_present\": [{}]", list.join(", "));
    }
    let _ = write!(out, ",\n  \"coefficients\": [");
    for (i, (norm, value)) in data.coefficients.iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        let _ = write!(
            out,
            "{sep}\n    {{\"norm\": {norm}, \"value\": \"{}\"}}",
            rational_to_string(value)
        );
    }
    let _ = write!(out, "\n  ]");
    if !data.prime_data.is_empty() {
        let _ = write!(out, ",\n  \"primes\": [");
        for (i, ((norm, index), value)) in data.prime_data.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(
                out,
                "{sep}\n    {{\"norm\": {norm}, \"index\": {index}, \"value\": \"{}\"}}",
                rational_to_string(value)
            );
        }
        let _ = write!(out, "\n  ]");
    }
    if !data.gap_list.is_empty() {
        let list: Vec<String> = data.gap_list.iter().map(|g| g.to_string()).collect();
        let _ = write!(out, ",\n  \"gaps\": [{}]", list.join(", "));
    }
    out.push_str("\n}\n");
    out
}

/// Tabulated completed-L values, for forms known only through printed
/// critical values rather than coefficient data.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaFixture {
    pub weight: u32,
    pub degree: u32,
    pub sign: i32,
    /// Values keyed by integer argument s, as exact (re, im) pairs.
    pub lambda: BTreeMap<u32, (Rational, Rational)>,
}

/// Parses a fixture document { weight, degree, sign, lambda: [{s, re, im}] }.
pub fn parse_lambda_fixture(json: &str) -> Result<LambdaFixture> {
    let root: serde_json::Value = serde_json::from_str(json)
        .map_err(|e| Error::MalformedDocument(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::MalformedDocument("document root must be an object".into()))?;

    let weight = u32::try_from(get_u64(obj, "weight")?)
        .map_err(|_| Error::MalformedDocument("weight out of range".into()))?;
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::UnsupportedWeight(weight));
    }
    let degree = u32::try_from(get_u64(obj, "degree")?)
        .map_err(|_| Error::MalformedDocument("degree out of range".into()))?;
    if degree == 0 {
        return Err(Error::InvariantViolation("degree must be at least 1".into()));
    }
    let sign = obj
        .get("sign")
        .and_then(|v| v.as_i64())
        .ok_or_else(|| Error::MalformedDocument("missing or invalid field \"sign\"".into()))?;
    if sign != 1 && sign != -1 {
        return Err(Error::InvariantViolation(format!("sign must be +1 or -1, got {sign}")));
    }

    let rows = obj
        .get("lambda")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::MalformedDocument("missing or invalid field \"lambda\"".into()))?;
    if rows.is_empty() {
        return Err(Error::InvariantViolation("lambda list must be nonempty".into()));
    }
    let mut lambda = BTreeMap::new();
    for row in rows {
        let entry = row
            .as_object()
            .ok_or_else(|| Error::MalformedDocument("lambda entries must be objects".into()))?;
        let s = u32::try_from(get_u64(entry, "s")?)
            .map_err(|_| Error::MalformedDocument("lambda argument out of range".into()))?;
        if s == 0 || s > weight - 1 {
            return Err(Error::InvariantViolation(format!(
                "lambda argument s = {s} outside the critical range 1..{}",
                weight - 1
            )));
        }
        let re = parse_rational(&json_number_to_string(entry.get("re").ok_or_else(
            || Error::MalformedDocument(format!("lambda entry at s = {s} lacks \"re\"")),
        )?)?)?;
        let im = match entry.get("im") {
            Some(v) => parse_rational(&json_number_to_string(v)?)?,
            None => Rational::new(),
        };
        if lambda.insert(s, (re, im)).is_some() {
            return Err(Error::MalformedDocument(format!("duplicate lambda entry at s = {s}")));
        }
    }
    Ok(LambdaFixture { weight, degree, sign: sign as i32, lambda })
}

impl LambdaFixture {
    /// Real parts as floats, for consumers that treat the values as a
    /// map s -> Lambda(s).  Imaginary parts must be negligible relative
    /// to the largest value.
    pub fn real_map(&self, bits: u32) -> Result<BTreeMap<u32, rug::Float>> {
        let mut scale = rug::Float::new(bits);
        for (re, im) in self.lambda.values() {
            let m = rug::Float::with_val(bits, re).abs().max(&rug::Float::with_val(bits, im).abs());
            if m > scale {
                scale = m;
            }
        }
        let mut out = BTreeMap::new();
        for (s, (re, im)) in &self.lambda {
            let imf = rug::Float::with_val(bits, im).abs();
            if imf > rug::Float::with_val(bits, &scale) * 1e-9f64 {
                return Err(Error::DomainError(format!(
                    "lambda fixture value at s = {s} has a non-negligible imaginary part"
                )));
            }
            out.insert(*s, rug::Float::with_val(bits, re));
        }
        Ok(out)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// (p, f) with n = p^f, if n is a prime power.
fn prime_power_split(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = n;
    // find the smallest prime factor
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            p = d;
            break;
        }
        d += 1 + (d & 1);
    }
    let mut f = 0u32;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        f += 1;
    }
    if m == 1 {
        Some((p, f))
    } else {
        None
    }
}

fn is_prime_power(n: u64) -> bool {
    prime_power_split(n).is_some()
}

/// How the local data above one rational prime is known.
enum LocalSeries {
    /// l_p(r) known for every attainable exponent r; None marks norms
    /// p^r the field does not admit.
    Full(Vec<Option<Rational>>),
    /// Only l_p(0) = 1 and l_p(1) are known (split prime given by its
    /// aggregated coefficient); attainability known.
    UpToFirst(Rational, Vec<bool>),
    /// No values known; bool vector gives attainability per exponent,
    /// None when even that is undecidable.
    Absent(Option<Vec<bool>>),
}

/// a(p^0..p^rmax) for one prime ideal of norm q by the Hecke recursion
/// a(p^{r+1}) = a(p) a(p^r) - q^{k-1} a(p^{r-1}).
fn ideal_power_series(a: &Rational, q: u64, weight: u32, rmax: usize) -> Vec<Rational> {
    let mut series = Vec::with_capacity(rmax + 1);
    series.push(Rational::from(1));
    if rmax == 0 {
        return series;
    }
    series.push(a.clone());
    let qk = Rational::from(Integer::from(q).pow(weight - 1));
    for r in 1..rmax {
        let next = a.clone() * &series[r] - qk.clone() * &series[r - 1];
        series.push(next);
    }
    series
}

/// Splitting pattern of p: residue degrees of the primes above it, with
/// multiplicity one entry per prime ideal.
fn splitting_pattern(data: &EigenformData, p: u64) -> Option<Vec<u32>> {
    match data.field.degree {
        1 => Some(vec![1]),
        2 => {
            let d = Integer::from(data.field.discriminant);
            match d.kronecker(&Integer::from(p)) {
                1 => Some(vec![1, 1]),
                -1 => Some(vec![2]),
                _ => Some(vec![1]),
            }
        }
        _ => {
            // read the pattern off the per-ideal data when present
            let fs: Vec<u32> = data
                .prime_data
                .keys()
                .filter_map(|(norm, _)| {
                    prime_power_split(*norm).and_then(|(q, f)| (q == p).then_some(f))
                })
                .collect();
            if fs.is_empty() {
                None
            } else {
                Some(fs)
            }
        }
    }
}

/// Attainable exponents r <= rmax for the pattern: r must be a
/// nonnegative combination of the residue degrees.
fn attainable_exponents(pattern: &[u32], rmax: usize) -> Vec<bool> {
    let mut ok = vec![false; rmax + 1];
    ok[0] = true;
    for &f in pattern {
        let f = f as usize;
        for r in f..=rmax {
            if ok[r - f] {
                ok[r] = true;
            }
        }
    }
    ok
}

/// Builds the local series for p from whatever the document provides.
fn local_series(data: &EigenformData, p: u64, rmax: usize) -> Result<LocalSeries> {
    let pattern = match splitting_pattern(data, p) {
        Some(pat) => pat,
        None => {
            // degree >= 3 with no per-ideal data: consult the hint; norms
            // beyond its range count as attainable so the gap accounting
            // stays conservative
            let attain = data.field.norms_present.as_ref().map(|hints| {
                let top = hints.last().copied().unwrap_or(0);
                (0..=rmax)
                    .map(|r| {
                        if r == 0 {
                            return true;
                        }
                        let norm = p.pow(r as u32);
                        norm > top || hints.binary_search(&norm).is_ok()
                    })
                    .collect::<Vec<bool>>()
            });
            return Ok(LocalSeries::Absent(attain));
        }
    };
    let attain = attainable_exponents(&pattern, rmax);

    // collect per-ideal values grouped by residue degree
    let mut per_ideal: Vec<(u32, Rational)> = Vec::new();
    for ((norm, _), value) in &data.prime_data {
        if let Some((q, f)) = prime_power_split(*norm) {
            if q == p {
                per_ideal.push((f, value.clone()));
            }
        }
    }

    if !per_ideal.is_empty() {
        // the multiset of residue degrees must match the pattern; for
        // degree >= 3 the pattern was read off these keys, so this only
        // bites quadratic documents listing half of a split pair
        let mut got: Vec<u32> = per_ideal.iter().map(|(f, _)| *f).collect();
        let mut want = pattern.clone();
        got.sort_unstable();
        want.sort_unstable();
        if got != want {
            return Err(Error::InvariantViolation(format!(
                "prime {p} lists {} per-ideal entries but its splitting pattern admits {}",
                per_ideal.len(),
                pattern.len()
            )));
        }
        // multiply the per-ideal power series together, indexing by the
        // exponent of p in the norm
        let mut conv: Vec<Rational> = vec![Rational::from(1)];
        for (fdeg, a) in &per_ideal {
            let f = *fdeg as usize;
            let series = ideal_power_series(a, p.pow(*fdeg), data.weight, rmax / f);
            let mut next = vec![Rational::new(); rmax + 1];
            for (i, cur) in conv.iter().enumerate() {
                for (j, s) in series.iter().enumerate() {
                    if i + j * f <= rmax {
                        next[i + j * f] += Rational::from(cur * s);
                    }
                }
            }
            conv = next;
        }
        let full = attain
            .iter()
            .enumerate()
            .map(|(r, ok)| ok.then(|| conv.get(r).cloned().unwrap_or_default()))
            .collect();
        return Ok(LocalSeries::Full(full));
    }

    // no per-ideal data: aggregated coefficients stand in when a single
    // ideal accounts for every norm class above p
    if pattern.len() == 1 {
        let f = pattern[0] as usize;
        let q = p.pow(pattern[0]);
        if let Some(c) = data.coefficients.get(&q) {
            let series = ideal_power_series(c, q, data.weight, rmax / f);
            return Ok(LocalSeries::Full(
                attain
                    .iter()
                    .enumerate()
                    .map(|(r, ok)| {
                        ok.then(|| {
                            debug_assert_eq!(r % f, 0, "attainability respects the residue degree");
                            series.get(r / f).cloned().unwrap_or_default()
                        })
                    })
                    .collect(),
            ));
        }
        return Ok(LocalSeries::Absent(Some(attain)));
    }

    // split class: the aggregated value pins down l_p(1) only
    if let Some(c) = data.coefficients.get(&p) {
        Ok(LocalSeries::UpToFirst(c.clone(), attain))
    } else {
        Ok(LocalSeries::Absent(Some(attain)))
    }
}

/// Smallest-prime-factor sieve for 0..=limit.
fn spf_sieve(limit: u64) -> Vec<u32> {
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut p = 2usize;
    while p <= n {
        if spf[p] == 0 {
            let mut m = p;
            while m <= n {
                if spf[m] == 0 {
                    spf[m] = p as u32;
                }
                m += p;
            }
        }
        p += 1;
    }
    spf
}

/// Fills `coefficients` for every attainable norm up to `max_norm` from
/// per-ideal data, multiplicativity, and the prime-power recursion.
/// Missing data either errors (`allow_gaps = false`) or lands the
/// affected norms in `gap_list`.
pub fn extend_hecke(data: &EigenformData, max_norm: u64, allow_gaps: bool) -> Result<EigenformData> {
    if max_norm < 1 {
        return Err(Error::DomainError("max_norm must be at least 1".into()));
    }
    if max_norm > 10_000_000 {
        return Err(Error::DomainError(format!(
            "max_norm {max_norm} is beyond the supported range"
        )));
    }

    // local series per rational prime
    let spf = spf_sieve(max_norm);
    let mut locals: BTreeMap<u64, LocalSeries> = BTreeMap::new();
    for p in 2..=max_norm {
        if spf[p as usize] as u64 == p {
            let rmax = max_norm.ilog(p) as usize;
            locals.insert(p, local_series(data, p, rmax)?);
        }
    }

    let mut coefficients: BTreeMap<u64, Rational> = BTreeMap::new();
    let mut gaps: Vec<u64> = Vec::new();
    coefficients.insert(1, Rational::from(1));

    'norms: for m in 2..=max_norm {
        let mut value = Rational::from(1);
        let mut rest = m;
        while rest > 1 {
            let q = spf[rest as usize] as u64;
            let mut r = 0usize;
            while rest % q == 0 {
                rest /= q;
                r += 1;
            }
            match locals.get(&q).expect("series built for every prime") {
                LocalSeries::Full(series) => match &series[r] {
                    Some(v) => value *= v,
                    None => continue 'norms, // norm not attainable
                },
                LocalSeries::UpToFirst(c1, attain) => {
                    if !attain.get(r).copied().unwrap_or(false) {
                        continue 'norms;
                    }
                    if r == 1 {
                        value *= c1;
                    } else if allow_gaps {
                        gaps.push(m);
                        continue 'norms;
                    } else {
                        return Err(Error::AmbiguousSplitClass(q));
                    }
                }
                LocalSeries::Absent(attain) => {
                    match attain {
                        Some(ok) if !ok.get(r).copied().unwrap_or(false) => {
                            continue 'norms;
                        }
                        _ => {}
                    }
                    // attainable (or unknown) but no data
                    if allow_gaps {
                        gaps.push(m);
                        continue 'norms;
                    }
                    return match attain {
                        Some(_) => Err(Error::MissingPrime(q)),
                        None => Err(Error::AmbiguousSplitClass(q)),
                    };
                }
            }
        }
        coefficients.insert(m, value);
    }

    // aggregated input entries for gap norms are data, not derived
    // values: keep them and strike the norm from the gap list
    gaps.retain(|m| {
        if let Some(v) = data.coefficients.get(m) {
            coefficients.insert(*m, v.clone());
            false
        } else {
            true
        }
    });
    gaps.sort_unstable();
    gaps.dedup();

    let mut out = data.clone();
    out.coefficients = coefficients;
    out.gap_list = gaps;
    Ok(out)
}

/// First `count` Ramanujan tau values (1-indexed: tau(1) = 1) from the
/// 24th power of the pentagonal-number series.
pub fn tau_series(count: usize) -> Result<Vec<Integer>> {
    if count == 0 {
        return Err(Error::InvariantViolation(
            "tau series needs a positive coefficient count".into(),
        ));
    }
    // P(q) = prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}
    let mut p = vec![Integer::new(); count];
    p[0] = Integer::from(1);
    let mut k = 1i64;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 as usize >= count && g2 as usize >= count {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for g in [g1, g2] {
            if (g as usize) < count {
                p[g as usize] += sign;
            }
        }
        k += 1;
    }
    let sq = |a: &[Integer]| -> Vec<Integer> {
        let mut out = vec![Integer::new(); count];
        for i in 0..count {
            if a[i] == 0 {
                continue;
            }
            for j in 0..count - i {
                if a[j] != 0 {
                    out[i + j] += Integer::from(&a[i] * &a[j]);
                }
            }
        }
        out
    };
    let p2 = sq(&p);
    let p4 = sq(&p2);
    let p8 = sq(&p4);
    let p16 = sq(&p8);
    let mut p24 = vec![Integer::new(); count];
    for i in 0..count {
        if p16[i] == 0 {
            continue;
        }
        for j in 0..count - i {
            if p8[j] != 0 {
                p24[i + j] += Integer::from(&p16[i] * &p8[j]);
            }
        }
    }
    // tau(n) = coefficient of q^{n-1} in P^24
    Ok(p24)
}

/// Classical weight-12 document with tau coefficients up to `count`.
pub fn tau_document(count: usize) -> Result<EigenformData> {
    let tau = tau_series(count)?;
    let mut coefficients = BTreeMap::new();
    let mut prime_data = BTreeMap::new();
    for (i, t) in tau.iter().enumerate() {
        let n = (i + 1) as u64;
        coefficients.insert(n, Rational::from(t));
        if is_prime(n) {
            prime_data.insert((n, 0u32), Rational::from(t));
        }
    }
    Ok(EigenformData {
        label: format!("delta-tau-{count}"),
        field: FieldData { degree: 1, discriminant: 1, norms_present: None },
        weight: 12,
        sign: 1,
        conductor_scale: 1.0,
        normalized: true,
        coefficients,
        prime_data,
        gap_list: Vec::new(),
    })
}
