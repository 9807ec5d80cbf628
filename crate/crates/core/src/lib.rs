//! Numerical laboratory for non-autonomous and random iteration of quadratic
//! polynomials `z² + c`.
//!
//! Every map in the family has the form `f_c(z) = z² + c` with `c` drawn from
//! a bounded region of the plane. A parameter sequence `ω = (c₀, c₁, …)`
//! determines the compositions `fⁿ_ω = f_{c_{n−1}} ∘ … ∘ f_{c₀}` and with them
//! a basin of infinity, a Julia set `J_ω`, a Green's function `g_ω`, and the
//! equilibrium (harmonic) measure `μ_ω` on `J_ω`. This crate computes all of
//! these numerically:
//!
//! * [`dynamics`] — forward iteration with log-domain overflow handling and
//!   certified pointwise Green's function evaluation,
//! * [`law`] / [`seed`] — parameter distributions and reproducible
//!   counter-based sampling,
//! * [`measure`] — exact preimage trees and backward-orbit sampling of `μ_ω`,
//! * [`dimension`] — local-dimension and box-counting estimators,
//! * [`global`] — Monte-Carlo estimators of the global Green's function,
//!   Lyapunov exponent, and harmonic-measure dimension, plus the experiment
//!   drivers (continuity in the randomness radius, large-radius asymptotics,
//!   fast-escape decay, perturbation constancy, harmonicity, stability),
//! * [`render`] — point-cloud export and greyscale rasters of Julia sets,
//! * [`suite`] — the aggregate verification suite behind `verify-all`.
//!
//! All numeric kernels are generic over the scalar type through [`Real`];
//! the `*64` aliases at the crate root fix the `f64` instantiations used by
//! the command-line harness.

pub mod dimension;
pub mod dynamics;
pub mod error;
pub mod global;
pub mod law;
pub mod measure;
pub mod render;
pub mod seed;
pub mod stats;
pub mod suite;

use std::fmt::{Debug, Display};

use num_traits::float::FloatConst;
use num_traits::Float;

pub use error::{Error, Result};

/// Floating-point scalar for all dynamics computations: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Complex<F> = num_complex::Complex<F>;

/// Convert an `f64` constant into the working scalar type.
///
/// Panics only if `F` cannot represent any rounding of the value, which
/// cannot happen for `f32`/`f64`.
#[inline]
pub(crate) fn real<F: Real>(x: f64) -> F {
    F::from(x).expect("f64 constant must convert into the scalar type")
}

/// Default `f64` instantiations used by the CLI and most tests.
pub type Complex64 = num_complex::Complex<f64>;
pub type EscapeRadius64 = dynamics::EscapeRadius<f64>;
pub type GreenEstimate64 = dynamics::GreenEstimate<f64>;
pub type ParameterLaw64 = law::ParameterLaw<f64>;
pub type ParameterSequence64 = law::ParameterSequence<f64>;
pub type MeasurePointCloud64 = measure::MeasurePointCloud<f64>;
pub type GlobalGreenEstimate64 = global::GlobalGreenEstimate<f64>;
pub type DimensionReport64 = global::DimensionReport<f64>;
