//! Shared numerical kernels: quadrature, bracketing root finders, an embedded
//! Runge–Kutta integrator and monotone cubic interpolation.

pub mod interp;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod tridiag;
