//! Simultaneous root iteration with residual verification.

use super::{star_discrepancy, RootReport, TOL_CIRCLE};
use crate::error::{Error, Result};
use crate::periodpoly::PeriodPolynomial;
use crate::precision::Precision;
use rug::ops::Pow;
use rug::{Complex, Float};

const ITERATION_CAP: usize = 200;
const RESTARTS: usize = 2;

/// All complex roots of the polynomial, with every root verified
/// against the residual ceiling 10^(-digits/2) * sum |a_i| max(1,|z|)^i
/// before the report is returned.
pub fn find_roots(p: &PeriodPolynomial, prec: &Precision) -> Result<RootReport> {
    let coeffs = &p.coeffs;
    if coeffs.len() < 2 {
        return Err(Error::DomainError("root finding needs degree at least 1".into()));
    }
    let wb = prec.bits() + 64;
    let mags: Vec<f64> = coeffs.iter().map(|c| c.clone().abs().real().to_f64()).collect();
    let scale = mags.iter().cloned().fold(0.0f64, f64::max);
    let lead = mags[mags.len() - 1];
    if !(lead > scale * 10f64.powi(-(prec.digits() as i32 - 5))) {
        return Err(Error::DegenerateLeading);
    }
    let d = coeffs.len() - 1;

    let mut roots = None;
    for restart in 0..=RESTARTS {
        let starts = circle_starts(d, restart, wb);
        if let Some(found) = aberth(coeffs, starts, prec, wb) {
            roots = Some(found);
            break;
        }
    }
    if roots.is_none() {
        let starts = companion_starts(coeffs, wb)?;
        roots = aberth(coeffs, starts, prec, wb);
    }
    let mut roots = roots.ok_or_else(|| {
        Error::NonConvergence(format!(
            "root iteration stalled on a degree-{d} polynomial after {RESTARTS} restarts \
             and a companion-matrix start"
        ))
    })?;

    // a few Newton steps per root push the error below one ulp, so
    // exactly representable roots land exactly
    for z in &mut roots {
        for _ in 0..4 {
            let (v, dv) = eval_pair(coeffs, z, wb);
            if v.is_zero() || dv.is_zero() {
                break;
            }
            *z -= v / dv;
        }
    }

    let residual_tol = 10f64.powf(-(prec.digits() as f64) / 2.0);
    let mut rows: Vec<(f64, Complex, f64, f64)> = Vec::with_capacity(d);
    for z in roots {
        let (v, _) = eval_pair(coeffs, &z, wb);
        let residual = v.abs().real().to_f64();
        let zmag = z.clone().abs().real().clone();
        let mut ceiling = Float::new(wb);
        for (i, c) in coeffs.iter().enumerate() {
            let grow = Float::with_val(wb, zmag.clone().max(&Float::with_val(wb, 1))).pow(i as u32);
            ceiling += c.clone().abs().real() * grow;
        }
        if residual > residual_tol * ceiling.to_f64() {
            return Err(Error::NonConvergence(format!(
                "root residual {residual:.3e} exceeds the verification ceiling"
            )));
        }
        let dev = (zmag.to_f64() - 1.0).abs();
        let mut angle = z.clone().arg().real().to_f64();
        if angle < 0.0 {
            angle += 2.0 * std::f64::consts::PI;
        }
        if angle >= 2.0 * std::f64::consts::PI {
            angle = 0.0;
        }
        rows.push((angle, z, dev, residual));
    }
    rows.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite angles")
            .then(a.1.clone().abs().real().partial_cmp(b.1.clone().abs().real()).expect("finite moduli"))
    });

    let angles: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let moduli_dev: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let on_circle: Vec<bool> = moduli_dev.iter().map(|&dev| dev <= TOL_CIRCLE).collect();
    let u: Vec<f64> = angles.iter().map(|a| a / (2.0 * std::f64::consts::PI)).collect();
    Ok(RootReport {
        all_on_circle: on_circle.iter().all(|&b| b),
        discrepancy: star_discrepancy(&u),
        residuals: rows.iter().map(|r| r.3).collect(),
        roots: rows.into_iter().map(|r| r.1).collect(),
        moduli_dev,
        angles,
        on_circle,
        tol_circle: TOL_CIRCLE,
        residual_tol,
    })
}

/// Value and derivative in one Horner pass.
fn eval_pair(coeffs: &[Complex], z: &Complex, wb: u32) -> (Complex, Complex) {
    let mut v = Complex::new(wb);
    let mut dv = Complex::new(wb);
    for c in coeffs.iter().rev() {
        dv = dv * z + &v;
        v = v * z + c;
    }
    (v, dv)
}

/// Deterministic starting points on a slightly perturbed circle of
/// radius 0.9; each restart rotates and dilates the configuration.
fn circle_starts(d: usize, restart: usize, wb: u32) -> Vec<Complex> {
    let golden = 0.618033988749895f64;
    (0..d)
        .map(|j| {
            let radius = (0.9 + 0.08 * restart as f64) * (1.0 + 1e-3 * ((j as f64 * golden).fract() - 0.5));
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.37 + 0.29 * restart as f64) / d as f64;
            Complex::with_val(wb, (radius * theta.cos(), radius * theta.sin()))
        })
        .collect()
}

/// Aberth-Ehrlich sweep; None when neither the correction floor nor the
/// residual noise floor is reached within the iteration cap.  A root is
/// individually accepted once its residual falls to the rounding noise
/// of the evaluation itself, which is the best any approximation of a
/// multiple root can do.
fn aberth(coeffs: &[Complex], mut z: Vec<Complex>, prec: &Precision, wb: u32) -> Option<Vec<Complex>> {
    let d = z.len();
    let threshold = Float::with_val(wb, 10f64).pow(-(prec.digits() as i32) + 5);
    let mut sum_mags = Float::new(wb);
    for c in coeffs {
        sum_mags += c.clone().abs().real();
    }
    let noise = Float::with_val(wb, &sum_mags)
        * Float::with_val(wb, 2f64).pow(-(wb as i32) + 12)
        * Float::with_val(wb, d as u32);
    for _ in 0..ITERATION_CAP {
        let mut all_small = true;
        for i in 0..d {
            let (v, dv) = eval_pair(coeffs, &z[i], wb);
            let grow = z[i]
                .clone()
                .abs()
                .real()
                .clone()
                .max(&Float::with_val(wb, 1))
                .pow(d as u32);
            if v.clone().abs().real() <= &(Float::with_val(wb, &noise) * grow) {
                continue;
            }
            let newton = if dv.is_zero() {
                // escape a critical point deterministically
                Complex::with_val(wb, (1e-3, 1e-3))
            } else {
                v / dv
            };
            let mut repulsion = Complex::new(wb);
            for j in 0..d {
                if i == j {
                    continue;
                }
                let mut gap = Complex::with_val(wb, &z[i] - &z[j]);
                if gap.is_zero() {
                    gap = Complex::with_val(wb, (1e-20, 1e-20));
                }
                repulsion += gap.recip();
            }
            let denom = Complex::with_val(wb, 1) - Complex::with_val(wb, &newton * &repulsion);
            let step = if denom.is_zero() { newton } else { newton / denom };
            let size = step.clone().abs().real().clone()
                / z[i].clone().abs().real().clone().max(&Float::with_val(wb, 1));
            if size > threshold {
                all_small = false;
            }
            z[i] -= step;
        }
        if all_small {
            return Some(z);
        }
    }
    None
}

/// Eigenvalues of the companion matrix as fresh starting points.  The
/// complex matrix is realified to a double-size real matrix whose
/// spectrum is the original one together with its conjugate; every
/// candidate is kept and the best-separated d of them are returned.
fn companion_starts(coeffs: &[Complex], wb: u32) -> Result<Vec<Complex>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].clone();
    let monic: Vec<(f64, f64)> = coeffs[..d]
        .iter()
        .map(|c| {
            let b = Complex::with_val(wb, c / &lead);
            (b.real().to_f64(), b.imag().to_f64())
        })
        .collect();
    if monic.iter().any(|(re, im)| !re.is_finite() || !im.is_finite()) {
        return Err(Error::NonConvergence(
            "companion-matrix start failed: coefficients overflow double range".into(),
        ));
    }
    let two = 2 * d;
    let mat = nalgebra::DMatrix::<f64>::from_fn(two, two, |r, c| {
        // block form [[Re C, -Im C], [Im C, Re C]] of the companion C
        let (br, bc) = (r % d, c % d);
        let entry = if bc + 1 == d {
            let (re, im) = monic[br];
            (-re, -im)
        } else if br == bc + 1 {
            (1.0, 0.0)
        } else {
            (0.0, 0.0)
        };
        match (r >= d, c >= d) {
            (false, false) | (true, true) => entry.0,
            (false, true) => -entry.1,
            (true, false) => entry.1,
        }
    });
    let eigs = mat.complex_eigenvalues();

    // rank candidates by double-precision residual
    let mut ranked: Vec<(f64, (f64, f64))> = eigs
        .iter()
        .map(|e| {
            let z = (e.re, e.im);
            let mut v = (0.0f64, 0.0f64);
            for c in coeffs.iter().rev() {
                let (cr, ci) = {
                    let b = Complex::with_val(53, c);
                    (b.real().to_f64(), b.imag().to_f64())
                };
                v = (v.0 * z.0 - v.1 * z.1 + cr, v.0 * z.1 + v.1 * z.0 + ci);
            }
            (v.0.hypot(v.1), z)
        })
        .collect();
    ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite residuals"));

    let mut picked: Vec<(f64, f64)> = Vec::with_capacity(d);
    for &(_, z) in &ranked {
        if picked.len() == d {
            break;
        }
        if picked.iter().all(|p| (p.0 - z.0).hypot(p.1 - z.1) > 1e-8) {
            picked.push(z);
        }
    }
    // clustered spectra (multiple roots) may leave slots open; fill
    // with jittered copies, the iteration separates them
    let mut fill = 0usize;
    while picked.len() < d {
        let base = ranked[fill % ranked.len()].1;
        fill += 1;
        picked.push((base.0 + 1e-4 * fill as f64, base.1 + 1.3e-4 * fill as f64));
    }
    Ok(picked.into_iter().map(|(re, im)| Complex::with_val(wb, (re, im))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodpoly::{build_r, PolyKind, PolySource};
    use crate::rootlab::{angle_discrepancy, circle_verdict};
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn raw_poly(coeffs: Vec<(f64, f64)>) -> PeriodPolynomial {
        PeriodPolynomial {
            coeffs: coeffs.into_iter().map(|c| Complex::with_val(192, c)).collect(),
            weight: 4,
            degree_n: 1,
            kind: PolyKind::R,
            source: PolySource::Fixture,
            source_tol: 1e-12,
        }
    }

    fn poly_from_roots(roots: &[(f64, f64)]) -> PeriodPolynomial {
        let wb = 192;
        let mut coeffs = vec![Complex::with_val(wb, 1)];
        for r in roots {
            let root = Complex::with_val(wb, *r);
            let mut next = vec![Complex::new(wb); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= Complex::with_val(wb, c * &root);
            }
            coeffs = next;
        }
        raw_poly(vec![(0.0, 0.0)]).clone_with(coeffs)
    }

    impl PeriodPolynomial {
        fn clone_with(&self, coeffs: Vec<Complex>) -> Self {
            Self { coeffs, ..self.clone() }
        }
    }

    fn q5w8_lambda() -> BTreeMap<u32, Float> {
        let f = |s: &str| Float::with_val(96, Float::parse(s).unwrap());
        let mut m = BTreeMap::new();
        m.insert(4, f("0.0148786"));
        m.insert(5, Float::with_val(96, f("0.329503") / 15u32));
        m.insert(6, Float::with_val(96, f("0.371966") / 6u32));
        m.insert(7, f("0.273825"));
        for s in 1..4u32 {
            let v = m[&(8 - s)].clone();
            m.insert(s, v);
        }
        m
    }

    #[test]
    fn quadratic_with_pure_imaginary_roots_is_exact() {
        let p = raw_poly(vec![(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let prec = Precision::new(25).unwrap();
        let report = find_roots(&p, &prec).unwrap();
        assert_eq!(report.roots.len(), 2);
        assert_eq!(report.moduli_dev, vec![0.0, 0.0]);
        assert_eq!(report.residuals, vec![0.0, 0.0]);
        assert!((report.angles[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((report.angles[1] - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        // two angles at 1/4 and 3/4 form a shifted lattice
        assert!((report.discrepancy - 0.25).abs() < 1e-12);
        let verdict = circle_verdict(&report, 0.0);
        assert!(verdict.all_on_circle && verdict.margin == 0.0);
        assert_eq!(angle_discrepancy(&report).unwrap(), report.discrepancy);
    }

    #[test]
    fn fixture_weight_eight_roots_sit_on_the_circle() {
        let r = build_r(&q5w8_lambda(), 8, 2, PolySource::Fixture, 1e-6).unwrap();
        let report = find_roots(&r, &Precision::new(25).unwrap()).unwrap();
        assert_eq!(report.roots.len(), 6);
        for dev in &report.moduli_dev {
            assert!(*dev < 1e-6, "deviation {dev}");
        }
        assert!(report.all_on_circle);
        assert!(circle_verdict(&report, 1e-6).all_on_circle);
    }

    #[test]
    fn planted_off_circle_root_is_detected() {
        let mut roots = vec![(1.1, 0.0), (1.0 / 1.1, 0.0)];
        for j in 0..6 {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.31) / 6.0;
            roots.push((theta.cos(), theta.sin()));
        }
        let p = poly_from_roots(&roots);
        let report = find_roots(&p, &Precision::new(25).unwrap()).unwrap();
        assert_eq!(report.roots.len(), 8);
        assert!(!report.all_on_circle);
        assert!(!circle_verdict(&report, 1e-8).all_on_circle);
        assert_eq!(report.on_circle.iter().filter(|&&b| !b).count(), 2);
        // the two strays are the planted radii
        let mut off: Vec<f64> = report
            .roots
            .iter()
            .zip(&report.on_circle)
            .filter(|(_, &ok)| !ok)
            .map(|(z, _)| z.clone().abs().real().to_f64())
            .collect();
        off.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((off[0] - 1.0 / 1.1).abs() < 1e-10 && (off[1] - 1.1).abs() < 1e-10);
    }

    #[test]
    fn degenerate_leading_coefficient_is_rejected() {
        let p = raw_poly(vec![(1.0, 0.0), (2.0, 0.0), (1e-30, 0.0)]);
        assert!(matches!(
            find_roots(&p, &Precision::new(20).unwrap()),
            Err(Error::DegenerateLeading)
        ));
        let c = raw_poly(vec![(5.0, 0.0)]);
        assert!(find_roots(&c, &Precision::new(20).unwrap()).is_err());
    }

    #[test]
    fn companion_starts_cover_a_hard_cluster() {
        // (X - 1/2)^4 (X + 1) stalls naive sweeps less than it used to,
        // so drive the fallback path directly
        let p = poly_from_roots(&[(0.5, 0.0), (0.5, 0.0), (0.5, 0.0), (0.5, 0.0), (-1.0, 0.0)]);
        let starts = companion_starts(&p.coeffs, 192).unwrap();
        assert_eq!(starts.len(), 5);
        let prec = Precision::new(20).unwrap();
        let roots = aberth(&p.coeffs, starts, &prec, prec.bits() + 64).unwrap();
        let near_half = roots
            .iter()
            .filter(|z| {
                let d = Complex::with_val(192, *z - Complex::with_val(192, (0.5, 0.0)));
                d.abs().real().to_f64() < 1e-3
            })
            .count();
        assert_eq!(near_half, 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        // degree-1 polynomials built from random symmetric maps are
        // self-inversive, so the root multiset must be closed under
        // reflection through the unit circle
        #[test]
        fn root_sets_of_symmetric_builds_reflect_through_the_circle(
            hw in 3u32..7,
            seed in 1u64..1_000_000,
        ) {
            let weight = 2 * hw;
            let mut state = seed;
            let mut lam = BTreeMap::new();
            for s in weight / 2..weight {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let v = Float::with_val(96, (state >> 11) as f64 / (1u64 << 53) as f64 + 0.05);
                lam.insert(s, v);
            }
            for s in 1..weight / 2 {
                let v = lam[&(weight - s)].clone();
                lam.insert(s, v);
            }
            let r = build_r(&lam, weight, 1, PolySource::Evaluator, 1e-12).unwrap();
            let report = find_roots(&r, &Precision::new(20).unwrap()).unwrap();
            for z in &report.roots {
                let mirror = Complex::with_val(192, z.clone().conj()).recip();
                let hit = report.roots.iter().any(|w| {
                    Complex::with_val(192, w - &mirror).abs().real().to_f64() < 1e-9
                });
                prop_assert!(hit, "no mirror for {}", z);
            }
        }
    }
}
