//! Special functions at arbitrary precision: Bernoulli numbers, the
//! Riemann zeta function, log-gamma on the real line and in the complex
//! plane, the Bessel function K0, Gauss-Legendre quadrature, and the
//! degree-n completed-L kernels built from them.

pub mod bernoulli;
pub mod besselk;
pub mod gamma;
pub mod kernel;
pub mod quad;
pub mod zeta;

pub use bernoulli::bernoulli_numbers;
pub use besselk::bessel_k0;
pub use gamma::{ln_gamma, ln_gamma_complex};
pub use kernel::{
    kernel_g, kernel_g_incomplete, kernel_g_incomplete_from, kernel_mellin_lower, KernelSpec,
};
pub use zeta::zeta;
