//! Degree-n inverse-Mellin kernels and their incomplete integrals.
//!
//! G_n is the inverse Mellin transform of Gamma(s)^n: G_1(x) = exp(-x),
//! G_2(x) = 2 K0(2 sqrt(x)), and for n >= 3 a Mellin-Barnes contour.
//! Completed-L evaluation needs the tails
//!
//! ```text
//! int_beta^infinity G_n(x t) t^(s-1) dt
//! ```
//!
//! which for n <= 2 are computed by panel quadrature in t and for n >= 3
//! by folding the t-integral into the contour: integrating t first turns
//! the integrand into Gamma(z)^n x^(-z) beta^(s-z) / (z - s) on a vertical
//! line Re(z) = c > s, so one pass over a cached set of contour nodes
//! replaces a nested quadrature.  The complementary lower integral over
//! (0, beta] uses a line left of s with denominator (s - z).

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::specfun::besselk::bessel_k0;
use crate::specfun::gamma::ln_gamma_complex;
use crate::specfun::quad::{gl_rule, integrate};
use rug::{Complex, Float};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

const LN_10: f64 = std::f64::consts::LN_10;
const PI: f64 = std::f64::consts::PI;

/// Evaluation parameters for a degree-n kernel.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    /// Degree of the gamma factor (number of real places of the field).
    pub n: u32,
    /// Abscissa of the Mellin-Barnes line for the pointwise kernel and
    /// the upper-tail integrals (degree >= 3 only).  `None` picks
    /// ceil(s) + 2, safely right of the pole at z = s.  The lower-tail
    /// route ignores this and uses its own line left of s.
    pub contour_offset: Option<f64>,
    /// Height at which the contour is truncated.  `None` derives it from
    /// the precision via the exp(-n pi t / 2) decay of |Gamma(c+it)|^n.
    pub truncation_height: Option<f64>,
    /// Gauss-Legendre nodes per quadrature panel.
    pub quadrature_nodes: u32,
}

impl KernelSpec {
    /// Defaults for degree n: automatic contour placement, 32-node panels.
    pub fn auto(n: u32) -> KernelSpec {
        KernelSpec {
            n,
            contour_offset: None,
            truncation_height: None,
            quadrature_nodes: 32,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::DomainError("kernel degree must be at least 1".into()));
        }
        if self.quadrature_nodes < 4 {
            return Err(Error::DomainError(format!(
                "need at least 4 quadrature nodes per panel, got {}",
                self.quadrature_nodes
            )));
        }
        Ok(())
    }
}

/// Precomputed contour data: node ordinates t, weights (including the
/// 1/pi prefactor from folding the line onto t > 0), and Gamma(c+it)^n.
struct Contour {
    c: f64,
    nodes: Vec<(Float, Float, Complex)>,
}

type ContourKey = (u32, u32, i64, u32, i64);

static CONTOURS: OnceLock<Mutex<HashMap<ContourKey, Arc<Contour>>>> = OnceLock::new();

/// Truncation height with tail |Gamma(c+it)|^n ~ t^(n(c-1/2)) exp(-n pi t/2)
/// pushed below the working tolerance with margin.
fn contour_height(n: u32, c: f64, prec: &Precision) -> f64 {
    let nf = f64::from(n);
    let l = f64::from(prec.digits() + 10) * LN_10 + 8.0;
    let mut t = 2.0 * l / (nf * PI);
    for _ in 0..8 {
        t = 2.0 * (l + nf * (c - 0.5).max(0.0) * (1.0 + t).ln()) / (nf * PI);
    }
    t
}

fn contour(spec: &KernelSpec, c: f64, prec: &Precision) -> Result<Arc<Contour>> {
    let height = spec
        .truncation_height
        .unwrap_or_else(|| contour_height(spec.n, c, prec));
    let wb = prec.bits() + 32;
    let key: ContourKey = (
        spec.n,
        wb,
        (c * 1000.0).round() as i64,
        spec.quadrature_nodes,
        (height * 1000.0).round() as i64,
    );
    let cache = CONTOURS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ct) = cache.lock().unwrap().get(&key) {
        return Ok(ct.clone());
    }

    let rule = gl_rule(spec.quadrature_nodes as usize, wb);
    let panels = (height / 0.5).ceil() as usize;
    let gprec = Precision::new(prec.digits() + 10)?;
    let mut nodes = Vec::with_capacity(panels * spec.quadrature_nodes as usize);
    let pi = Float::with_val(wb, rug::float::Constant::Pi);
    for j in 0..panels {
        let a = Float::with_val(wb, 0.5 * j as f64);
        let b = Float::with_val(wb, 0.5 * (j + 1) as f64);
        let mid = Float::with_val(wb, &a + &b) / 2u32;
        let half = Float::with_val(wb, &b - &a) / 2u32;
        for (xi, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = mid.clone() + half.clone() * xi;
            let z = Complex::with_val(wb, (Float::with_val(wb, c), t.clone()));
            let lg = ln_gamma_complex(&z, &gprec)?;
            let gpow = (lg * Float::with_val(wb, spec.n)).exp();
            let weight = Float::with_val(wb, w * &half) / &pi;
            nodes.push((t, weight, gpow));
        }
    }

    // tail self-check: the final panel must carry a negligible share of
    // the total |Gamma|^n mass, otherwise the height was set too low
    let per_panel = spec.quadrature_nodes as usize;
    let mut total = Float::with_val(wb, 0);
    let mut last = Float::with_val(wb, 0);
    for (i, (_, w, g)) in nodes.iter().enumerate() {
        let m = Float::with_val(wb, w * g.clone().abs().real());
        if i >= nodes.len() - per_panel {
            last += &m;
        }
        total += m;
    }
    let ratio = last / total;
    if ratio.to_f64() > 10f64.powi(-(prec.digits() as i32) - 4) {
        return Err(Error::QuadratureNonConvergence(format!(
            "contour truncated at height {height:.2} still carries mass ratio {ratio:?}"
        )));
    }

    let ct = Arc::new(Contour { c, nodes });
    Ok(cache
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| ct.clone())
        .clone())
}

/// One contour pass for the pointwise kernel: (1/pi) int_0^T
/// Re[Gamma(c+it)^n x^(-c-it)] dt.
fn contour_point(ct: &Contour, x: &Float, wb: u32) -> Float {
    let u = Float::with_val(wb, x).ln();
    let mut acc = Float::with_val(wb, 0);
    for (t, w, gpow) in &ct.nodes {
        let (sin, cos) = Float::with_val(wb, t * &u).sin_cos(Float::new(wb));
        let re = Float::with_val(wb, gpow.real() * &cos) + Float::with_val(wb, gpow.imag() * &sin);
        acc += w * re;
    }
    acc * (Float::with_val(wb, -ct.c) * u).exp()
}

/// One contour pass for a tail integral.  `upper` selects
/// int_beta^inf (denominator z - s, line right of s) versus
/// int_0^beta (denominator s - z, line left of s).
fn contour_tail(ct: &Contour, s: f64, x: &Float, beta: f64, upper: bool, wb: u32) -> Float {
    let u = Float::with_val(wb, x).ln();
    let lb = Float::with_val(wb, beta).ln();
    let w0 = Float::with_val(wb, &u + &lb); // rotation frequency ln(x*beta)
    let d_re = if upper { ct.c - s } else { s - ct.c };
    let mut acc = Float::with_val(wb, 0);
    for (t, w, gpow) in &ct.nodes {
        let (sin, cos) = Float::with_val(wb, t * &w0).sin_cos(Float::new(wb));
        // gpow * (cos - i sin) / (d_re +/- i t), real part
        let num_re =
            Float::with_val(wb, gpow.real() * &cos) + Float::with_val(wb, gpow.imag() * &sin);
        let num_im =
            Float::with_val(wb, gpow.imag() * &cos) - Float::with_val(wb, gpow.real() * &sin);
        let d_im = if upper { t.clone() } else { Float::with_val(wb, -t) };
        let den = Float::with_val(wb, d_re).square() + d_im.clone().square();
        let re = (num_re * d_re + num_im * d_im) / den;
        acc += w * re;
    }
    // overall scale x^-c beta^(s-c)
    let scale = (Float::with_val(wb, -ct.c) * u + Float::with_val(wb, s - ct.c) * lb).exp();
    acc * scale
}

/// G_n(x) for x > 0.
pub fn kernel_g(spec: &KernelSpec, x: &Float, prec: &Precision) -> Result<Float> {
    spec.validate()?;
    let xf = x.to_f64();
    if !(xf > 0.0) || !xf.is_finite() {
        return Err(Error::DomainError(format!("kernel argument must be positive, got {x}")));
    }
    match spec.n {
        1 => Ok(Float::with_val(prec.bits(), (-Float::with_val(prec.bits() + 16, x)).exp())),
        2 => {
            let arg = 2u32 * Float::with_val(prec.bits() + 16, x).sqrt();
            Ok(2u32 * bessel_k0(&arg, prec)?)
        }
        _ => {
            let c = spec.contour_offset.unwrap_or(2.0);
            if !(c > 0.0) {
                return Err(Error::DomainError(format!(
                    "contour offset must be positive, got {c}"
                )));
            }
            let ct = contour(spec, c, prec)?;
            let wb = prec.bits() + 32;
            Ok(Float::with_val(prec.bits(), contour_point(&ct, x, wb)))
        }
    }
}

/// int_1^infinity G_n(x t) t^(s-1) dt.
pub fn kernel_g_incomplete(spec: &KernelSpec, s: f64, x: &Float, prec: &Precision) -> Result<Float> {
    kernel_g_incomplete_from(spec, s, x, 1.0, prec)
}

/// int_lower^infinity G_n(x t) t^(s-1) dt for lower > 0.
pub fn kernel_g_incomplete_from(
    spec: &KernelSpec,
    s: f64,
    x: &Float,
    lower: f64,
    prec: &Precision,
) -> Result<Float> {
    spec.validate()?;
    let xf = x.to_f64();
    if !(xf > 0.0) || !xf.is_finite() {
        return Err(Error::DomainError(format!("kernel argument must be positive, got {x}")));
    }
    if !(lower > 0.0) || !lower.is_finite() {
        return Err(Error::DomainError(format!(
            "lower integration limit must be positive, got {lower}"
        )));
    }
    if !s.is_finite() {
        return Err(Error::DomainError(format!("exponent must be finite, got {s}")));
    }
    if spec.n <= 2 {
        return t_quadrature_upper(spec, s, x, lower, prec);
    }
    let c = spec.contour_offset.unwrap_or_else(|| s.ceil() + 2.0);
    if c < s + 0.5 {
        return Err(Error::DomainError(format!(
            "upper-tail contour offset {c} must sit right of s = {s}"
        )));
    }
    let ct = contour(spec, c, prec)?;
    let wb = prec.bits() + 32;
    Ok(Float::with_val(prec.bits(), contour_tail(&ct, s, x, lower, true, wb)))
}

/// int_0^1 G_n(x t) t^(s-1) dt, the complement of `kernel_g_incomplete`.
/// Together they satisfy the Mellin identity
/// int_0^inf G_n(x t) t^(s-1) dt = Gamma(s)^n x^(-s).
pub fn kernel_mellin_lower(spec: &KernelSpec, s: f64, x: &Float, prec: &Precision) -> Result<Float> {
    spec.validate()?;
    let xf = x.to_f64();
    if !(xf > 0.0) || !xf.is_finite() {
        return Err(Error::DomainError(format!("kernel argument must be positive, got {x}")));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::DomainError(format!(
            "lower Mellin integral needs s > 0, got {s}"
        )));
    }
    if spec.n <= 2 {
        return t_quadrature_lower(spec, s, x, prec);
    }
    if s <= 0.75 {
        return Err(Error::DomainError(format!(
            "lower-tail contour needs s > 0.75 to separate from its line at 0.5, got {s}"
        )));
    }
    let ct = contour(spec, 0.5, prec)?;
    let wb = prec.bits() + 32;
    Ok(Float::with_val(prec.bits(), contour_tail(&ct, s, x, 1.0, false, wb)))
}

/// u(t) = n (x t)^(1/n), the decay exponent of G_n(x t).
fn decay_u(n: u32, xf: f64, t: f64) -> f64 {
    f64::from(n) * (xf * t).powf(1.0 / f64::from(n))
}

/// Inverse of `decay_u` in t.
fn t_at_u(n: u32, xf: f64, u: f64) -> f64 {
    (u / f64::from(n)).powi(n as i32).max(f64::MIN_POSITIVE) / xf
}

/// Extra mantissa bits needed because the integrand peaks above 1:
/// max of -u(t) + (s-1) ln t over t >= beta.
fn peak_boost(n: u32, s: f64, xf: f64, beta: f64) -> u32 {
    let mut peak = -decay_u(n, xf, beta) + (s - 1.0) * beta.ln();
    if s > 1.0 {
        let t_star = (s - 1.0).powi(n as i32) / xf;
        if t_star > beta {
            peak = peak.max(-f64::from(n) * (s - 1.0) + (s - 1.0) * t_star.ln());
        }
    }
    (peak.max(0.0) / std::f64::consts::LN_2).ceil() as u32 + 16
}

/// G_n(x t) t^(s-1) at working precision wb, for n <= 2.
fn tail_integrand(n: u32, s: f64, x: &Float, t: &Float, kprec: &Precision, wb: u32) -> Float {
    let ts = (Float::with_val(wb, s - 1.0) * Float::with_val(wb, t).ln()).exp();
    match n {
        1 => (-Float::with_val(wb, x * t)).exp() * ts,
        _ => {
            let arg = 2u32 * Float::with_val(wb, x * t).sqrt();
            2u32 * bessel_k0(&arg, kprec).expect("positive argument") * ts
        }
    }
}

/// Upper tail for n <= 2 by panels that are geometric in t near the lower
/// limit (resolving the power factor) and bounded in u-width afterwards
/// (resolving the exponential decay).
fn t_quadrature_upper(
    spec: &KernelSpec,
    s: f64,
    x: &Float,
    lower: f64,
    prec: &Precision,
) -> Result<Float> {
    let xf = x.to_f64();
    let l_target = f64::from(prec.digits() + 8) * LN_10 + 4.0;
    let mut u_max = l_target + 5.0;
    for _ in 0..10 {
        u_max = l_target + (s - 1.0).max(0.0) * t_at_u(spec.n, xf, u_max).max(1.0).ln();
    }
    let t_end = t_at_u(spec.n, xf, u_max).max(2.0 * lower);

    let boost = peak_boost(spec.n, s, xf, lower);
    let wb = prec.bits() + boost + 32;
    let kprec = Precision::new(prec.digits() + (boost as f64 / 3.0) as u32 + 12)?;
    let rule = gl_rule(spec.quadrature_nodes.max(24) as usize, wb);
    let xw = Float::with_val(wb, x);

    let mut acc = Float::with_val(wb, 0);
    let mut a = lower;
    while a < t_end {
        let b = (2.0 * a).min(t_at_u(spec.n, xf, decay_u(spec.n, xf, a) + 8.0)).min(t_end);
        let fa = Float::with_val(wb, a);
        let fb = Float::with_val(wb, b);
        acc += integrate(&rule, &fa, &fb, |t| tail_integrand(spec.n, s, &xw, t, &kprec, wb));
        a = b;
    }
    Ok(Float::with_val(prec.bits(), acc))
}

/// Lower integral over (0, 1] for n <= 2, by panels shrinking dyadically
/// toward 0 (where the integrand is t^(s-1) times at worst a logarithm).
fn t_quadrature_lower(spec: &KernelSpec, s: f64, x: &Float, prec: &Precision) -> Result<Float> {
    let xf = x.to_f64();
    let l_target = f64::from(prec.digits() + 8) * LN_10 + 4.0;
    let boost = peak_boost(spec.n, s, xf, 1.0).max(((xf.ln().abs() * s) / 0.69) as u32 + 16);
    let wb = prec.bits() + boost + 32;
    let kprec = Precision::new(prec.digits() + (boost as f64 / 3.0) as u32 + 12)?;
    let rule = gl_rule(spec.quadrature_nodes.max(24) as usize, wb);
    let xw = Float::with_val(wb, x);
    let cutoff = Float::with_val(wb, (-l_target).exp());

    let mut acc = Float::with_val(wb, 0);
    let mut b = 1.0f64;
    for panel in 0..5000usize {
        // next boundary: halve at most, but for large x stay within a
        // u-stride of 8 so the kernel decay is resolvable per panel
        let a = (b / 2.0).max(t_at_u(spec.n, xf, (decay_u(spec.n, xf, b) - 8.0).max(0.0)));
        let fa = Float::with_val(wb, a);
        let fb = Float::with_val(wb, b);
        let part = integrate(&rule, &fa, &fb, |t| tail_integrand(spec.n, s, &xw, t, &kprec, wb));
        let small = part.clone().abs() < cutoff;
        acc += part;
        // t^s bounds the remaining mass up to the slowly varying kernel
        if small && a.powf(s) < (-l_target).exp() {
            return Ok(Float::with_val(prec.bits(), acc));
        }
        b = a;
        if panel == 4999 {
            break;
        }
    }
    Err(Error::QuadratureNonConvergence(format!(
        "lower Mellin integral at s = {s} did not localise in 5000 panels"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::ln_gamma;

    fn fparse(bits: u32, s: &str) -> Float {
        Float::with_val(bits, Float::parse(s).unwrap())
    }

    #[test]
    fn degree_three_pointwise_matches_references() {
        let p = Precision::new(40).unwrap();
        let spec = KernelSpec::auto(3);
        let cases = [
            ("0.5", "0.375702123784689948703316233750453173585004321"),
            ("2", "0.0607710339620886164909414415553056536389223705"),
            ("10", "0.00250305669518199221054906922708075290263882684"),
        ];
        for (xs, want) in cases {
            let x = fparse(p.bits(), xs);
            let got = kernel_g(&spec, &x, &p).unwrap();
            let err = (got.clone() - fparse(p.bits(), want)).abs();
            assert!(err < 1e-38, "G3({xs}) = {got}");
        }
    }

    #[test]
    fn low_degree_pointwise_closed_forms() {
        let p = Precision::new(40).unwrap();
        let x = fparse(p.bits(), "0.7");
        let g1 = kernel_g(&KernelSpec::auto(1), &x, &p).unwrap();
        let e1 = (g1 - fparse(p.bits(), "0.496585303791409514704800093397528961707667166")).abs();
        assert!(e1 < 1e-38);
        let g2 = kernel_g(&KernelSpec::auto(2), &x, &p).unwrap();
        let e2 = (g2 - fparse(p.bits(), "0.342372558201845866713623437071679408959458818")).abs();
        assert!(e2 < 1e-38);
    }

    #[test]
    fn incomplete_gamma_route_degree_one() {
        // int_1^inf e^(-2t) t^2 dt = Gamma(3,2)/8 with Gamma(3,2) = 10 e^-2
        let p = Precision::new(40).unwrap();
        let x = p.float(2);
        let got = kernel_g_incomplete(&KernelSpec::auto(1), 3.0, &x, &p).unwrap();
        let want = Float::with_val(p.bits(), 10) * (-p.float(2)).exp() / 8u32;
        let err = (got.clone() - want).abs();
        assert!(err < 1e-38, "{got}, err {err}");
    }

    #[test]
    fn incomplete_degree_one_reference() {
        let p = Precision::new(40).unwrap();
        let x = fparse(p.bits(), "3.7");
        let got = kernel_g_incomplete(&KernelSpec::auto(1), 4.5, &x, &p).unwrap();
        let want = fparse(p.bits(), "0.0192155860717110805546381201340532574281594356");
        assert!((got.clone() - want).abs() < 1e-38, "{got}");
    }

    #[test]
    fn incomplete_degree_two_reference() {
        let p = Precision::new(40).unwrap();
        let x = fparse(p.bits(), "2.2");
        let got = kernel_g_incomplete(&KernelSpec::auto(2), 3.0, &x, &p).unwrap();
        let want = fparse(p.bits(), "0.330794152736818729749761549952573869029176025");
        assert!((got.clone() - want).abs() < 1e-37, "{got}");
    }

    #[test]
    fn incomplete_degree_three_reference() {
        let p = Precision::new(30).unwrap();
        let x = fparse(p.bits(), "1.5");
        let got = kernel_g_incomplete(&KernelSpec::auto(3), 2.0, &x, &p).unwrap();
        let want = fparse(p.bits(), "0.3330415621128108725");
        assert!((got.clone() - want).abs() < 1e-15, "{got}");
        let from = kernel_g_incomplete_from(&KernelSpec::auto(3), 2.0, &x, 1.25, &p).unwrap();
        let want_b = fparse(p.bits(), "0.3108438945111549727");
        assert!((from.clone() - want_b).abs() < 1e-15, "{from}");
    }

    #[test]
    fn mellin_closure_all_degrees() {
        // lower + upper = Gamma(s)^n x^(-s), exact up to quadrature error
        let p = Precision::new(40).unwrap();
        let cases: [(u32, f64, &str); 5] = [
            (1, 2.5, "1.3"),
            (2, 2.0, "1"),
            (2, 3.0, "0.6"),
            (3, 2.0, "0.8"),
            (3, 3.0, "5"),
        ];
        for (n, s, xs) in cases {
            let spec = KernelSpec::auto(n);
            let x = fparse(p.bits(), xs);
            let lo = kernel_mellin_lower(&spec, s, &x, &p).unwrap();
            let hi = kernel_g_incomplete(&spec, s, &x, &p).unwrap();
            let lg = ln_gamma(s, &p).unwrap();
            let want = (lg * Float::with_val(p.bits(), n)
                - Float::with_val(p.bits(), s) * x.clone().ln())
            .exp();
            let err = (lo + hi - want).abs();
            assert!(err < 1e-34, "degree {n}, s {s}, x {xs}: err {err}");
        }
    }

    #[test]
    fn degree_two_mellin_at_unit_argument() {
        // int_0^inf G_2(t) t dt = Gamma(2)^2 = 1
        let p = Precision::new(40).unwrap();
        let spec = KernelSpec::auto(2);
        let x = p.float(1);
        let total = kernel_mellin_lower(&spec, 2.0, &x, &p).unwrap()
            + kernel_g_incomplete(&spec, 2.0, &x, &p).unwrap();
        assert!((total - 1u32).abs() < 1e-36);
    }

    #[test]
    fn from_variant_consistent_with_pointwise_quadrature() {
        // int_0.8^1 G_n(x t) t^(s-1) dt computed two ways
        let p = Precision::new(25).unwrap();
        for n in [1u32, 2, 3] {
            let spec = KernelSpec::auto(n);
            let x = fparse(p.bits(), "1.4");
            let diff = kernel_g_incomplete_from(&spec, 3.0, &x, 0.8, &p).unwrap()
                - kernel_g_incomplete(&spec, 3.0, &x, &p).unwrap();
            let rule = gl_rule(48, p.bits());
            // same binary64 lower limit the tail route receives
            let brute = integrate(&rule, &Float::with_val(p.bits(), 0.8f64), &p.float(1), |t| {
                let xt = Float::with_val(p.bits(), &x * t);
                kernel_g(&spec, &xt, &p).unwrap() * t.clone().square()
            });
            let err = (diff.clone() - brute).abs();
            assert!(err < 1e-18, "degree {n}: {err}");
        }
    }

    #[test]
    fn degree_three_tail_against_nested_quadrature() {
        // slow nested route: pointwise G_3 under a t-quadrature
        let p = Precision::new(16).unwrap();
        let spec = KernelSpec::auto(3);
        let x = fparse(p.bits(), "1.5");
        let fast = kernel_g_incomplete(&spec, 2.0, &x, &p).unwrap();
        let rule = gl_rule(24, p.bits());
        let mut brute = Float::with_val(p.bits(), 0);
        let mut a = 1.0f64;
        while a < 4096.0 {
            let b = 2.0 * a;
            brute += integrate(&rule, &Float::with_val(p.bits(), a), &Float::with_val(p.bits(), b), |t| {
                let xt = Float::with_val(p.bits(), &x * t);
                kernel_g(&spec, &xt, &p).unwrap() * t
            });
            a = b;
        }
        let err = (fast.clone() - brute).abs();
        assert!(err < 1e-10, "contour {fast} vs nested {err}");
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = Precision::new(20).unwrap();
        let spec = KernelSpec::auto(2);
        assert!(kernel_g(&spec, &p.float(0), &p).is_err());
        assert!(kernel_g_incomplete_from(&spec, 2.0, &p.float(1), -1.0, &p).is_err());
        assert!(kernel_mellin_lower(&spec, 0.0, &p.float(1), &p).is_err());
        assert!(kernel_g(&KernelSpec { n: 0, ..KernelSpec::auto(1) }, &p.float(1), &p).is_err());
    }

    #[test]
    fn deterministic_across_calls() {
        let p = Precision::new(30).unwrap();
        let spec = KernelSpec::auto(3);
        let x = fparse(p.bits(), "2.5");
        let a = kernel_g_incomplete(&spec, 4.0, &x, &p).unwrap();
        let b = kernel_g_incomplete(&spec, 4.0, &x, &p).unwrap();
        assert_eq!(a, b);
    }
}
