//! Numerical toolkit for period polynomials of parallel-weight Hilbert
//! modular eigenforms (classical modular forms are the degree-1 case).
//!
//! The pipeline goes: Fourier-coefficient documents (`formdata`) feed a
//! completed L-function evaluator built on an approximate functional
//! equation (`lfunc`, kernels in `specfun`), whose critical values are
//! assembled into period polynomials (`periodpoly`).  The root laboratory
//! (`rootlab`) certifies that all zeros lie on the unit circle, by direct
//! simultaneous root-finding, by an analytic comparison bound, and by
//! closed-form small-weight criteria; `perturb` measures how far the
//! odd part of the polynomial can be rescaled before that property breaks.

pub mod error;
pub mod formdata;
pub mod lfunc;
pub mod par;
pub mod periodpoly;
pub mod perturb;
pub mod precision;
pub mod rootlab;
pub mod specfun;

pub use error::{Error, Result};
pub use precision::Precision;

/// Crate version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
