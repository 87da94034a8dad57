//! Log-gamma on the real line and in the right half plane, by downward
//! recurrence into the Stirling regime.

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::specfun::bernoulli::bernoulli_numbers;
use rug::{ops::Pow, Complex, Float};

/// Smallest real part at which the Stirling tail bottoms out below the
/// target accuracy.  The optimal truncation error behaves like
/// exp(-2*pi*Re z), i.e. about 2.7 digits per unit, so 0.42 units per
/// digit keeps the minimum term under the stop cutoff at every
/// supported precision.
fn stirling_threshold(digits: u32) -> f64 {
    (0.42 * f64::from(digits + 14)).max(12.0)
}

/// ln Gamma(s) for real s > 0.
pub fn ln_gamma(s: f64, prec: &Precision) -> Result<Float> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::DomainError(format!(
            "ln_gamma needs a positive real argument, got {s}"
        )));
    }
    let wb = prec.bits() + 32;
    let sigma0 = stirling_threshold(prec.digits());
    let shift = if s < sigma0 { (sigma0 - s).ceil() as u32 } else { 0 };
    // keep the shifted point exactly consistent with the ln(s + j)
    // factors below: add the integer in working precision, not in f64
    let z = Float::with_val(wb, s) + shift;

    // Stirling at the shifted point
    let ln_z = z.clone().ln();
    let mut acc = (z.clone() - Float::with_val(wb, 0.5)) * &ln_z - &z;
    let two_pi = 2u32 * Float::with_val(wb, rug::float::Constant::Pi);
    acc += two_pi.ln() / 2u32;
    let z_sq_inv = Float::with_val(wb, 1) / z.clone().square();
    let mut z_pow = Float::with_val(wb, 1) / &z; // z^-(2r-1)
    let cutoff = Float::with_val(wb, 2f64).pow(-(prec.bits() as i32) - 16);
    let mut prev_size = Float::with_val(wb, f64::INFINITY);
    for r in 1usize..2_000 {
        let bern = bernoulli_numbers(2 * r + 1);
        let term = Float::with_val(wb, &bern[2 * r])
            / Float::with_val(wb, (2 * r * (2 * r - 1)) as u64)
            * &z_pow;
        let size = term.clone().abs();
        if size > prev_size {
            // divergent tail reached; the shift threshold guarantees the
            // minimum term is already below the cutoff
            break;
        }
        acc += term;
        if size < cutoff {
            break;
        }
        prev_size = size;
        z_pow *= &z_sq_inv;
    }

    // undo the shift: ln Gamma(s) = ln Gamma(s + m) - sum ln(s + j)
    for j in 0..shift {
        acc -= (Float::with_val(wb, s) + j).ln();
    }
    Ok(Float::with_val(prec.bits(), acc))
}

/// ln Gamma(z) for complex z with Re(z) > 0, principal branch of the
/// Stirling expansion after shifting Re(z) past the threshold.
pub fn ln_gamma_complex(z: &Complex, prec: &Precision) -> Result<Complex> {
    let re = z.real().to_f64();
    if !(re > 0.0) || !re.is_finite() || !z.imag().to_f64().is_finite() {
        return Err(Error::DomainError(format!(
            "ln_gamma_complex needs Re(z) > 0, got z = {z}"
        )));
    }
    let wb = prec.bits() + 32;
    let sigma0 = stirling_threshold(prec.digits());
    let shift = if re < sigma0 { (sigma0 - re).ceil() as u32 } else { 0 };
    let zs = Complex::with_val(wb, z) + Complex::with_val(wb, (f64::from(shift), 0.0));

    let ln_zs = zs.clone().ln();
    let mut acc = (zs.clone() - Complex::with_val(wb, (0.5, 0.0))) * &ln_zs - &zs;
    let two_pi = 2u32 * Float::with_val(wb, rug::float::Constant::Pi);
    acc += two_pi.ln() / 2u32;
    let zs_sq_inv = Complex::with_val(wb, 1) / zs.clone().square();
    let mut zs_pow = Complex::with_val(wb, 1) / &zs;
    let cutoff = Float::with_val(wb, 2f64).pow(-(prec.bits() as i32) - 16);
    let mut prev_size = Float::with_val(wb, f64::INFINITY);
    for r in 1usize..2_000 {
        let bern = bernoulli_numbers(2 * r + 1);
        let term = Complex::with_val(wb, (Float::with_val(wb, &bern[2 * r]), 0.0))
            / Float::with_val(wb, (2 * r * (2 * r - 1)) as u64)
            * &zs_pow;
        let size = term.clone().abs().real().clone();
        if size > prev_size {
            break;
        }
        acc += term;
        if size < cutoff {
            break;
        }
        prev_size = size;
        zs_pow *= &zs_sq_inv;
    }

    for j in 0..shift {
        acc -= (Complex::with_val(wb, z) + Complex::with_val(wb, (f64::from(j), 0.0))).ln();
    }
    Ok(Complex::with_val(prec.bits(), acc))
}
