use crate::error::{Error, Result};
use rug::{ops::Pow, Complex, Float};

/// Smallest supported decimal working precision.
pub const MIN_DIGITS: u32 = 15;

/// Working-precision context shared by every numerical routine.
///
/// `digits` is the target decimal accuracy; `tol` is the absolute
/// tolerance certificates are checked against (default `10^(5-digits)`).
/// The mantissa size in bits carries a guard margin on top of the
/// decimal target, so intermediate rounding stays below `tol`.
#[derive(Debug, Clone)]
pub struct Precision {
    digits: u32,
    tol: Float,
}

impl Precision {
    /// Context with the default tolerance `10^(5-digits)`.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::DomainError(format!(
                "precision of {digits} digits is below the minimum of {MIN_DIGITS}"
            )));
        }
        let tol = Float::with_val(64, 10).pow(5i64 - i64::from(digits));
        Ok(Precision { digits, tol })
    }

    /// Context with an explicit positive tolerance.
    pub fn with_tol(digits: u32, tol: f64) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::DomainError(format!(
                "tolerance must be a positive finite number, got {tol}"
            )));
        }
        let mut p = Precision::new(digits)?;
        p.tol = Float::with_val(64, tol);
        Ok(p)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn tol(&self) -> &Float {
        &self.tol
    }

    /// Mantissa bits for this context: ceil(digits * log2(10)) + 32 guard bits.
    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    /// Same tolerance, `extra` more working digits.  Used by kernels that
    /// need internal headroom (cancellation, exponentially large factors).
    pub fn boosted(&self, extra: u32) -> Precision {
        Precision {
            digits: self.digits + extra,
            tol: self.tol.clone(),
        }
    }

    /// New real number at working precision.
    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    /// New complex number at working precision.
    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.bits(), v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), rug::float::Constant::Pi)
    }

    pub fn euler(&self) -> Float {
        Float::with_val(self.bits(), rug::float::Constant::Euler)
    }

    pub fn ln_10(&self) -> Float {
        Float::with_val(self.bits(), 10).ln()
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(40).expect("default precision is above the minimum")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_forty_digits() {
        let p = Precision::default();
        assert_eq!(p.digits(), 40);
        // default tolerance 10^-35
        let expected = Float::with_val(64, 1e-35);
        let rel = (p.tol().clone() - &expected).abs() / expected;
        assert!(rel < 1e-10);
    }

    #[test]
    fn bits_cover_digits() {
        let p = Precision::new(40).unwrap();
        assert!(p.bits() >= 133 + 32);
        assert!(p.bits() <= 135 + 32);
    }

    #[test]
    fn rejects_tiny_precision() {
        assert!(Precision::new(14).is_err());
        assert!(Precision::new(15).is_ok());
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(Precision::with_tol(20, 0.0).is_err());
        assert!(Precision::with_tol(20, -1e-9).is_err());
        assert!(Precision::with_tol(20, f64::NAN).is_err());
        assert!(Precision::with_tol(20, 1e-12).is_ok());
    }
}
