//! Special functions: log-gamma family and the Euler–Maclaurin Hurwitz zeta
//! engine with s-derivatives, plus the Dirichlet series built on top of it.

mod dirichlet;
mod gamma;
mod hurwitz;

pub use dirichlet::{dirichlet_l_psi5, PSI5};
pub use gamma::{digamma, log_gamma, trigamma};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_with, riemann_zeta, riemann_zeta_with, EmOptions};

pub(crate) use dirichlet::dirichlet_l_psi5_all;
pub(crate) use hurwitz::riemann_zeta_all;

use crate::scalar::{Cx, Scalar};

/// Value of an evaluation together with a running absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T: Scalar> {
    /// Computed value.
    pub value: Cx<T>,
    /// Estimated absolute error, from the first omitted correction term
    /// propagated through the evaluation.
    pub est_abs_error: T,
}

/// Even-indexed Bernoulli numbers `B_0, B_2, ..., B_48` (index k holds `B_{2k}`).
///
/// Only `B_2..B_24` enter the correction sums; `B_26` feeds the error estimate,
/// and the tail is kept for headroom when experimenting with deeper expansions.
pub(crate) const BERNOULLI_EVEN: [f64; 25] = [
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
    1520097643918070802691.0 / 1806.0,
    -27833269579301024235023.0 / 690.0,
    596451111593912163277961.0 / 282.0,
    -5609403368997817686249127547.0 / 46410.0,
];
