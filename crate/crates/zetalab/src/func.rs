//! Trait for complex-analytic functions consumed by the contour machinery.
//!
//! The winding, scanning, and half-disk comparison code only needs point
//! evaluation of a function and its first few s-derivatives.  Abstracting that
//! behind [`ComplexFn`] lets the same machinery run on the zeta-family
//! evaluators and on synthetic polynomials in tests.

use crate::error::Error;
use crate::scalar::{Cx, Scalar};

/// A complex-analytic function with access to derivatives up to order 2.
///
/// `deriv` selects which derivative to evaluate: 0 for the function itself,
/// 1 and 2 for the first and second s-derivatives.  Implementations may
/// return an error for higher orders.
pub trait ComplexFn<T: Scalar>: Sync {
    /// Evaluates the `deriv`-th derivative at `s`.
    fn eval_n(&self, s: Cx<T>, deriv: u8) -> Result<Cx<T>, Error>;
}

/// Blanket implementation so plain closures work as test functions.
impl<T, F> ComplexFn<T> for F
where
    T: Scalar,
    F: Fn(Cx<T>, u8) -> Result<Cx<T>, Error> + Sync,
{
    fn eval_n(&self, s: Cx<T>, deriv: u8) -> Result<Cx<T>, Error> {
        self(s, deriv)
    }
}

/// View of `f` shifted by `offset` derivative orders: `eval_n(s, d)` on the
/// view evaluates `f^{(d + offset)}(s)`.  Used to run zero machinery on F'.
pub struct DerivView<'a, F: ?Sized> {
    inner: &'a F,
    offset: u8,
}

impl<'a, F: ?Sized> DerivView<'a, F> {
    /// Wraps `inner`, shifting every derivative request by `offset`.
    pub fn new(inner: &'a F, offset: u8) -> Self {
        DerivView { inner, offset }
    }
}

impl<'a, T, F> ComplexFn<T> for DerivView<'a, F>
where
    T: Scalar,
    F: ComplexFn<T> + ?Sized,
{
    fn eval_n(&self, s: Cx<T>, deriv: u8) -> Result<Cx<T>, Error> {
        self.inner.eval_n(s, deriv + self.offset)
    }
}
