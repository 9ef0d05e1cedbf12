//! Numerical toolkit for mean curvature flow solitons in warped product
//! ambient spaces `I ×_h P`.
//!
//! The crate is organized around the soliton function `ζ_c(t) = m h'(t) + c h(t)²`
//! of a warped product with warping function `h`:
//!
//! * [`ambient`] builds warped-product spaces (hyperbolic foliations, space-form
//!   cones, products, the Schwarzschild family) together with the coordinate
//!   changes `r ↔ t`, the flow parameter `s(t) = ∫ dt/h` and the potential
//!   `η̄(t) = ∫ h dt`.
//! * [`soliton`] locates soliton slices (`ζ_c = 0`), evaluates the closed-form
//!   slice analysis for Schwarzschild-type spaces, and maintains a catalog of
//!   exact solitons with a residual verifier.
//! * [`shooting`] integrates the rotationally symmetric reduction of the
//!   graphical soliton equation and probes for entire graphs.
//! * [`spectral`] estimates the bottom of the spectrum of the soliton stability
//!   operator and classifies volume growth profiles.
//! * [`oscillation`] implements the weighted Sturm–Liouville end analysis:
//!   critical curve, Cauchy problem, zero counting.

// `!(x > 0.0)` style guards are intentional: they reject NaN along with the
// out-of-range sign. Quadrature node tables keep their published guard digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod ambient;
pub mod error;
pub mod num;
pub mod oscillation;
pub mod shooting;
pub mod soliton;
pub mod spectral;

pub use ambient::{AmbientKind, AmbientSpace, Interval, SchwarzschildFamily, SchwarzschildParams};
pub use error::{Error, Result};
pub use soliton::SolitonProblem;

