//! Modified Bessel function K0, the degree-2 completed-L kernel up to
//! scaling.  Power series for small arguments, asymptotic expansion for
//! large ones; the crossover is precision dependent.

use crate::error::{Error, Result};
use crate::precision::Precision;
use rug::{ops::Pow, Float};

/// Argument above which the asymptotic tail bottoms out below the target
/// accuracy.  The optimal truncation error is about exp(-2x), so x must
/// exceed (digits + margin) * ln(10) / 2.
fn asymptotic_threshold(digits: u32) -> f64 {
    1.1513 * f64::from(digits + 4) + 2.0
}

/// K0(x) for real x > 0 at working precision.
pub fn bessel_k0(x: &Float, prec: &Precision) -> Result<Float> {
    let xf = x.to_f64();
    if !(xf > 0.0) || !xf.is_finite() {
        return Err(Error::DomainError(format!(
            "bessel_k0 needs a positive argument, got {x}"
        )));
    }
    if xf >= asymptotic_threshold(prec.digits()) {
        Ok(k0_asymptotic(x, prec))
    } else {
        Ok(k0_series(x, prec))
    }
}

/// Ascending series: K0 = -(ln(x/2) + gamma) I0(x) + sum h_j (x^2/4)^j / (j!)^2.
/// I0 grows like e^x while K0 decays like e^-x, so the subtraction loses
/// about 2x/ln(2) bits; the working precision is widened to absorb that.
pub(crate) fn k0_series(x: &Float, prec: &Precision) -> Float {
    let xf = x.to_f64();
    let wb = prec.bits() + (2.8854 * xf).ceil() as u32 + 32;
    let xe = Float::with_val(wb, x);
    let q = xe.clone().square() / 4u32; // (x/2)^2
    let mut term = Float::with_val(wb, 1); // (x^2/4)^j / (j!)^2
    let mut i0 = Float::with_val(wb, 1);
    let mut hsum = Float::with_val(wb, 0); // sum h_j * term
    let mut h = Float::with_val(wb, 0); // harmonic number h_j
    let cutoff = Float::with_val(wb, 2f64).pow(-(wb as i32) - 4);
    for j in 1u64..100_000 {
        term *= &q;
        term /= Float::with_val(wb, j * j);
        h += Float::with_val(wb, 1) / Float::with_val(wb, j);
        i0 += &term;
        hsum += Float::with_val(wb, &term * &h);
        if Float::with_val(wb, &term * &h) < cutoff {
            break;
        }
    }
    let euler = Float::with_val(wb, rug::float::Constant::Euler);
    let prefactor = (xe / 2u32).ln() + euler;
    Float::with_val(prec.bits(), hsum - prefactor * i0)
}

/// Asymptotic expansion sqrt(pi/(2x)) e^-x sum_k (-1)^k ((2k-1)!!)^2 / (k! (8x)^k),
/// truncated at the smallest term.
pub(crate) fn k0_asymptotic(x: &Float, prec: &Precision) -> Float {
    let wb = prec.bits() + 32;
    let xe = Float::with_val(wb, x);
    let mut term = Float::with_val(wb, 1);
    let mut acc = Float::with_val(wb, 1);
    let mut prev_size = Float::with_val(wb, 2);
    let cutoff = Float::with_val(wb, 2f64).pow(-(wb as i32) - 4);
    let eight_x = 8u32 * xe.clone();
    for k in 1u64..100_000 {
        let odd = 2 * k - 1;
        term *= -Float::with_val(wb, odd * odd) / (Float::with_val(wb, k) * &eight_x);
        let size = term.clone().abs();
        if size > prev_size {
            // divergent tail reached; by the threshold choice this only
            // happens below the cutoff
            break;
        }
        acc += &term;
        if size < cutoff {
            break;
        }
        prev_size = size;
    }
    let pi = Float::with_val(wb, rug::float::Constant::Pi);
    let pre = (pi / (2u32 * xe.clone())).sqrt() * (-xe).exp();
    Float::with_val(prec.bits(), pre * acc)
}
