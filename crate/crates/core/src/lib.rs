//! Numerical kernels for one-dimensional quasi-periodic Schrödinger
//! operators whose cosine potential carries a periodically modulated
//! coupling: V(n) = lambda * T(n mod k) * cos(n*omega + theta).
//!
//! The crate covers the transfer-matrix cocycle of the family and the
//! quantities built on it:
//!
//! - [`model`]: the operator family, its skew-product base dynamics and
//!   rescaled cocycle products;
//! - [`lyapunov`]: phase-averaged Lyapunov exponent estimators, the Herman
//!   lower bound and parallel energy sweeps;
//! - [`spectrum`]: band spectra of rational-frequency approximants by
//!   discriminant scanning, with a truncated-matrix eigenvalue oracle;
//! - [`arithmetic`]: continued fractions, convergents, the beta exponent
//!   and Liouville-frequency construction in exact integer arithmetic;
//! - [`gordon`]: the four-norm criterion and periodic-approximant
//!   diagnostics that witness non-decaying solutions;
//! - [`cohomology`]: the small-divisor cohomological equation and the
//!   triangular conjugation of the two-step block near energy zero;
//! - [`numerics`]: shared 2x2 matrix, interval-union and trigonometric
//!   polynomial primitives.

pub mod arithmetic;
pub mod cohomology;
pub mod error;
pub mod gordon;
pub mod lyapunov;
pub mod model;
pub mod numerics;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::{ModelParams, PhasePoint};
pub use numerics::{IntervalUnion, Mat2, ScaledMat2, TrigPolynomial, UnimodularMat2};
