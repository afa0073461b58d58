//! Numerical laboratory for a family of extended Selberg class zeta-functions.
//!
//! The library evaluates the Riemann zeta-function, the Dirichlet L-function
//! for the real character mod 5, the "factor" function `(1 + sqrt(5)/5^s) zeta(s)`,
//! and the convex combination family
//!
//! ```text
//! f(s, tau) = (1 - tau) (1 + sqrt(5) 5^{-s}) zeta(s) + tau L(s, psi)
//! ```
//!
//! on top of an Euler–Maclaurin Hurwitz zeta engine with first and second
//! s-derivatives.  Around the evaluators it provides:
//!
//! * argument-principle winding counts over rectangles, circles, and indented
//!   half-disk contours ([`zero`]),
//! * zero scanning/refinement, zero-free annulus search, strip counts, and
//!   Riemann–von Mangoldt style estimates ([`zero`]),
//! * Speiser-type comparisons of `N_F` and `N_{F'}` over left half-disks
//!   centered on the critical line ([`speiser`]),
//! * zero trajectories in the family parameter `tau`, double-zero collision
//!   detection, local quadratic models, and a census over a height window
//!   ([`trajectory`]).
//!
//! All numerical kernels are generic over the floating-point scalar through
//! [`Scalar`]; the type aliases below fix the `f64` instantiations used by the
//! command-line driver.

pub mod error;
pub mod func;
pub mod io;
pub mod lfunc;
pub mod scalar;
pub mod special;
pub mod speiser;
pub mod trajectory;
pub mod zero;

pub use error::{Error, ErrorClass};
pub use func::ComplexFn;
pub use scalar::Scalar;
pub use special::EvalResult;

/// Default real scalar used by the command-line driver.
pub type Real = f64;

/// Complex number over the default real scalar.
pub type Complex64 = num_complex::Complex<f64>;

/// Single-precision complex number (for the `f32` instantiation).
pub type Complex32 = num_complex::Complex<f32>;

/// Function description over the default scalar.
pub type FunctionSpec = lfunc::FunctionSpec<f64>;

/// Zero record over the default scalar.
pub type ZeroRecord = zero::ZeroRecord<f64>;

/// Result alias carrying the library error type.
pub type Result<T, E = Error> = std::result::Result<T, E>;
