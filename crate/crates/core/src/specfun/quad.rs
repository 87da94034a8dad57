//! Gauss-Legendre panel quadrature at arbitrary precision.  Node sets are
//! computed once per (order, precision) by Newton iteration on the
//! Legendre recurrence and cached process-wide.

use rug::Float;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights on the reference interval [-1, 1].
pub(crate) struct GlRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

static RULES: OnceLock<Mutex<HashMap<(usize, u32), Arc<GlRule>>>> = OnceLock::new();

/// Legendre P_n and its derivative at x.
fn legendre_pair(order: usize, x: &Float, wb: u32) -> (Float, Float) {
    let mut p_prev = Float::with_val(wb, 1);
    let mut p = Float::with_val(wb, x);
    for k in 2..=order {
        let kf = Float::with_val(wb, k as u32);
        let next = (Float::with_val(wb, 2 * k as u32 - 1) * x * &p
            - Float::with_val(wb, k as u32 - 1) * &p_prev)
            / &kf;
        p_prev = std::mem::replace(&mut p, next);
    }
    // P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = Float::with_val(wb, order as u32) * (x.clone() * &p - &p_prev);
    let den = x.clone().square() - 1u32;
    (p, num / den)
}

/// Gauss-Legendre rule of the given order at `bits` working precision.
pub(crate) fn gl_rule(order: usize, bits: u32) -> Arc<GlRule> {
    assert!(order >= 2, "quadrature order must be at least 2");
    let cache = RULES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&(order, bits)) {
        return rule.clone();
    }
    let wb = bits + 32;
    let pi = Float::with_val(wb, rug::float::Constant::Pi);
    let tol = Float::with_val(wb, 2f64) >> (bits + 16); // Newton stop
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for i in 1..=order {
        // Chebyshev-flavoured initial guess, then Newton
        let mut x = (pi.clone() * Float::with_val(wb, (4 * i - 1) as u32)
            / Float::with_val(wb, (4 * order + 2) as u32))
        .cos();
        let mut dp = Float::with_val(wb, 0);
        for _ in 0..200 {
            let (p, d) = legendre_pair(order, &x, wb);
            let step = p / &d;
            x -= &step;
            dp = d;
            if step.abs() < tol {
                break;
            }
        }
        // w = 2 / ((1 - x^2) P'_n(x)^2)
        let w = Float::with_val(wb, 2)
            / ((Float::with_val(wb, 1) - x.clone().square()) * dp.square());
        nodes.push(Float::with_val(bits, &x));
        weights.push(Float::with_val(bits, w));
    }
    let rule = Arc::new(GlRule { nodes, weights });
    cache
        .lock()
        .unwrap()
        .entry((order, bits))
        .or_insert_with(|| rule.clone())
        .clone()
}

/// Integral of `f` over [a, b] with a single application of `rule`.
pub(crate) fn integrate<F>(rule: &GlRule, a: &Float, b: &Float, mut f: F) -> Float
where
    F: FnMut(&Float) -> Float,
{
    let wb = a.prec().max(b.prec());
    let mid = Float::with_val(wb, a + b) / 2u32;
    let half = Float::with_val(wb, b - a) / 2u32;
    let mut acc = Float::with_val(wb, 0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let t = mid.clone() + half.clone() * x;
        acc += w * f(&t);
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;

    #[test]
    fn weights_sum_to_two() {
        for order in [8, 32, 48] {
            let rule = gl_rule(order, 200);
            let mut acc = Float::with_val(200, 0);
            for w in &rule.weights {
                acc += w;
            }
            let err = (acc - 2u32).abs();
            assert!(err < Float::with_val(64, 1e-55), "order {order}: {err}");
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        let p = Precision::new(40).unwrap();
        let rule = gl_rule(8, p.bits());
        let got = integrate(&rule, &p.float(0), &p.float(1), |t| {
            t.clone().square() * t
        });
        let err = (got - Float::with_val(p.bits(), 0.25)).abs();
        assert!(err < Float::with_val(64, 1e-38), "{err}");
    }

    #[test]
    fn integrates_sine_over_two_panels() {
        let p = Precision::new(40).unwrap();
        let rule = gl_rule(32, p.bits());
        let pi = p.pi();
        let half = pi.clone() / 2u32;
        let got = integrate(&rule, &p.float(0), &half, |t| t.clone().sin())
            + integrate(&rule, &half, &pi, |t| t.clone().sin());
        let err = (got - 2u32).abs();
        assert!(err < Float::with_val(64, 1e-38), "{err}");
    }

    #[test]
    fn node_cache_returns_identical_rules() {
        let a = gl_rule(32, 165);
        let b = gl_rule(32, 165);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
