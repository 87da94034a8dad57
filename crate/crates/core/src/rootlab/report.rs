//! Report serialization: JSON for machine consumers and an SVG scatter
//! of the roots against the unit circle.  Output is deterministic: no
//! timestamps, no environment-dependent fields.

use super::{BoundReport, RootReport};

pub fn root_report_to_json(report: &RootReport) -> String {
    let roots: Vec<serde_json::Value> = report
        .roots
        .iter()
        .enumerate()
        .map(|(i, z)| {
            serde_json::json!({
                "re": z.real().to_f64(),
                "im": z.imag().to_f64(),
                "modulus_dev": report.moduli_dev[i],
                "on_circle": report.on_circle[i],
                "residual": report.residuals[i],
            })
        })
        .collect();
    let doc = serde_json::json!({
        "count": report.roots.len(),
        "roots": roots,
        "angles": report.angles,
        "all_on_circle": report.all_on_circle,
        "discrepancy": report.discrepancy,
        "tol_circle": report.tol_circle,
        "residual_tol": report.residual_tol,
    });
    serde_json::to_string_pretty(&doc).expect("serializable report")
}

pub fn bound_report_to_json(report: &BoundReport) -> String {
    let terms: Vec<serde_json::Value> = report
        .per_term
        .iter()
        .map(|(j, t)| serde_json::json!({"j": j, "term": t}))
        .collect();
    let doc = serde_json::json!({
        "degree": report.n,
        "index": report.m,
        "discriminant": report.discriminant_used,
        "value": report.value,
        "first_term": report.first_term,
        "per_term": terms,
        "verdict": report.verdict,
    });
    serde_json::to_string_pretty(&doc).expect("serializable report")
}

/// 480x480 scatter: unit circle, axes, one marker per root.  Roots
/// within the circle tolerance are filled, strays are crossed.
pub fn roots_to_svg(report: &RootReport) -> String {
    let size = 480.0f64;
    let center = size / 2.0;
    // leave margin so slightly-off-circle roots stay visible
    let scale = size / 2.0 / 1.35;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" \
         viewBox=\"0 0 {size} {size}\">\n"
    ));
    out.push_str(&format!(
        "  <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "  <line x1=\"0\" y1=\"{center}\" x2=\"{size}\" y2=\"{center}\" stroke=\"#cccccc\"/>\n"
    ));
    out.push_str(&format!(
        "  <line x1=\"{center}\" y1=\"0\" x2=\"{center}\" y2=\"{size}\" stroke=\"#cccccc\"/>\n"
    ));
    out.push_str(&format!(
        "  <circle cx=\"{center}\" cy=\"{center}\" r=\"{:.4}\" fill=\"none\" stroke=\"#555555\"/>\n",
        scale
    ));
    for (i, z) in report.roots.iter().enumerate() {
        let x = center + scale * z.real().to_f64();
        let y = center - scale * z.imag().to_f64();
        if report.on_circle[i] {
            out.push_str(&format!(
                "  <circle cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"4\" fill=\"#1f4e9c\"/>\n"
            ));
        } else {
            out.push_str(&format!(
                "  <path d=\"M {a:.4} {b:.4} L {c:.4} {d:.4} M {a:.4} {d:.4} L {c:.4} {b:.4}\" \
                 stroke=\"#b03030\" stroke-width=\"2\"/>\n",
                a = x - 4.0,
                b = y - 4.0,
                c = x + 4.0,
                d = y + 4.0,
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodpoly::{build_r, PolySource};
    use crate::precision::Precision;
    use crate::rootlab::{analytic_bound, find_roots};
    use rug::Float;
    use std::collections::BTreeMap;

    fn sample_report() -> RootReport {
        let lam: BTreeMap<u32, Float> = (1..8)
            .map(|s| (s, Float::with_val(96, 1.0 + (s as i32 - 4).pow(2) as f64 / 4.0)))
            .collect();
        let r = build_r(&lam, 8, 2, PolySource::Fixture, 1e-12).unwrap();
        find_roots(&r, &Precision::new(20).unwrap()).unwrap()
    }

    #[test]
    fn root_report_serializes_deterministically() {
        let report = sample_report();
        let a = root_report_to_json(&report);
        let b = root_report_to_json(&report);
        assert_eq!(a, b);
        let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(doc["count"].as_u64().unwrap(), 6);
        assert_eq!(doc["roots"].as_array().unwrap().len(), 6);
        assert!(doc["discrepancy"].as_f64().unwrap() <= 1.0);
    }

    #[test]
    fn bound_report_serializes_with_terms() {
        let report = analytic_bound(2, 8, None, &Precision::new(20).unwrap()).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&bound_report_to_json(&report)).unwrap();
        assert_eq!(doc["per_term"].as_array().unwrap().len(), 7);
        assert!(doc["verdict"].as_bool().unwrap());
        assert!(doc["discriminant"].is_null());
    }

    #[test]
    fn svg_scatter_is_deterministic_and_marks_every_root() {
        let report = sample_report();
        let svg = roots_to_svg(&report);
        assert_eq!(svg, roots_to_svg(&report));
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<circle cx=\"240\" cy=\"240\""));
        let markers = svg.matches("fill=\"#1f4e9c\"").count()
            + svg.matches("stroke=\"#b03030\"").count();
        assert_eq!(markers, report.roots.len());
        assert!(!svg.contains("date") && !svg.contains("time"));
    }
}
