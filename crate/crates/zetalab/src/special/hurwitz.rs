//! Euler–Maclaurin evaluation of the Hurwitz zeta function and its first two
//! s-derivatives, with a running absolute error estimate.
//!
//! For `zeta(s, a)` the engine sums `N` power terms, adds the integral
//! (pole) term `(N+a)^{1-s}/(s-1)`, the boundary term `(N+a)^{-s}/2`, and
//! Bernoulli corrections through `B_24`; the first omitted correction (the
//! `B_26` term) feeds the error estimate.  `N` starts at
//! `max(20, ceil(2 |Im s|))` and doubles until the estimate meets the target
//! tolerance.  Derivatives are carried through every term analytically, so a
//! single pass produces the value and up to two s-derivatives consistently.

use num_complex::Complex;

use super::{EvalResult, BERNOULLI_EVEN};
use crate::error::Error;
use crate::scalar::{Cx, Scalar};

/// Number of Bernoulli corrections applied (`B_2 .. B_24`).
const CORRECTION_TERMS: usize = 12;

/// Controls for the Euler–Maclaurin engine.
#[derive(Debug, Clone, Copy)]
pub struct EmOptions<T: Scalar> {
    /// Target absolute error for the requested derivative order.
    pub tol: T,
    /// How many times `N` may double before the engine gives up.
    pub max_escalations: u32,
}

impl<T: Scalar> Default for EmOptions<T> {
    fn default() -> Self {
        // 1e-10 in double precision; clamped to a reachable level in f32.
        let tol = T::lit(1e-10).max(T::epsilon() * T::lit(100.0));
        EmOptions {
            tol,
            max_escalations: 5,
        }
    }
}

/// Pieces of one Euler–Maclaurin pass, kept separate so that callers can
/// combine the entire part and the pole term in different ways (the Dirichlet
/// L-function cancels four pole terms against each other).
pub(crate) struct EmParts<T: Scalar> {
    /// Truncated sum + boundary + Bernoulli corrections; derivatives 0..=2.
    pub entire: [Cx<T>; 3],
    /// First omitted correction per derivative order, with remainder safety factor.
    pub est: [T; 3],
    /// `ln(N + a)`, needed for the pole term `(N+a)^{1-s}/(s-1)`.
    pub log_w: T,
}

/// One Euler–Maclaurin pass at fixed truncation `n` for `zeta(s, a)`.
///
/// `dmax` is the highest derivative order required (0..=2); higher slots in
/// the returned arrays stay zero.
pub(crate) fn em_parts<T: Scalar>(s: Cx<T>, a: T, dmax: usize, n: u32) -> EmParts<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut sum = [zero; 3];
    let mut sum_abs = [T::zero(); 3];

    // Power terms (n + a)^{-s} for n = 0..N-1, with derivatives (-L)^j (n+a)^{-s}.
    for k in 0..n {
        let base = T::from_u32(k).expect("u32 fits scalar") + a;
        let l = base.ln();
        let p = (-s * l).exp();
        sum[0] += p;
        sum_abs[0] += p.norm();
        if dmax >= 1 {
            let p1 = p * (-l);
            sum[1] += p1;
            sum_abs[1] += p1.norm();
            if dmax >= 2 {
                let p2 = p * (l * l);
                sum[2] += p2;
                sum_abs[2] += p2.norm();
            }
        }
    }

    let w = T::from_u32(n).expect("u32 fits scalar") + a;
    let lw = w.ln();
    // Boundary term (N+a)^{-s} / 2.
    let e0 = (-s * lw).exp();
    let half = T::lit(0.5);
    sum[0] += e0 * half;
    if dmax >= 1 {
        sum[1] += e0 * (-lw) * half;
        if dmax >= 2 {
            sum[2] += e0 * (lw * lw) * half;
        }
    }

    // Bernoulli corrections: T_k = B_{2k}/(2k)! * P_{2k-1}(s) * (N+a)^{-s-2k+1},
    // where P_m(s) = s (s+1) ... (s+m-1).  The rising factorial and its two
    // derivatives are built by a product recurrence (no division, so exact at
    // non-positive integer s), extended incrementally across k.
    let mut p0 = Complex::new(T::one(), T::zero());
    let mut p1 = zero;
    let mut p2 = zero;
    let mut factors: usize = 0; // how many (s + i) factors are in p0 so far
    let mut fact = 1.0_f64; // (2k)! as f64, built incrementally
    let mut est = [T::zero(); 3];

    for k in 1..=CORRECTION_TERMS + 1 {
        while factors < 2 * k - 1 {
            let u = s + T::from_usize(factors).expect("usize fits scalar");
            p2 = p2 * u + p1 * T::lit(2.0);
            p1 = p1 * u + p0;
            p0 = p0 * u;
            factors += 1;
        }
        fact *= (2 * k - 1) as f64 * (2 * k) as f64;
        let c = T::lit(BERNOULLI_EVEN[k] / fact);
        // E = (N+a)^{-s-2k+1}; E' = -lw E; E'' = lw^2 E.
        let expo = -s - T::from_usize(2 * k - 1).expect("usize fits scalar");
        let e = (expo * lw).exp();
        let t0 = e * p0 * c;
        let t1 = e * (p1 - p0 * lw) * c;
        let t2 = e * (p2 - p1 * (lw + lw) + p0 * (lw * lw)) * c;
        if k <= CORRECTION_TERMS {
            sum[0] += t0;
            sum_abs[0] += t0.norm();
            if dmax >= 1 {
                sum[1] += t1;
                sum_abs[1] += t1.norm();
                if dmax >= 2 {
                    sum[2] += t2;
                    sum_abs[2] += t2.norm();
                }
            }
        } else {
            // First omitted term: remainder estimate.  The classical bound
            // multiplies it by |s + 2K + 1| / (sigma + 2K + 1); clamp the
            // factor at 1 and fall back to |s + 2K + 1| if sigma is so far
            // left that the denominator closes.
            let shift = T::from_usize(2 * k - 1).expect("usize fits scalar");
            let num = (s + shift).norm();
            let den = s.re + shift;
            let kappa = if den > T::one() {
                (num / den).max(T::one())
            } else {
                num.max(T::one())
            };
            est[0] = t0.norm() * kappa;
            est[1] = t1.norm() * kappa;
            est[2] = t2.norm() * kappa;
        }
    }

    // Account for accumulated floating-point rounding across the N-term sum.
    for j in 0..=dmax {
        est[j] = est[j] + sum_abs[j] * T::epsilon() * T::lit(4.0);
    }

    EmParts {
        entire: sum,
        est,
        log_w: lw,
    }
}

/// Pole (integral) term `I = w^{1-s}/(s-1)` and its two s-derivatives,
/// given `lw = ln w`.
pub(crate) fn pole_term<T: Scalar>(s: Cx<T>, lw: T) -> [Cx<T>; 3] {
    let u = s - T::one();
    let i0 = (-u * lw).exp() / u;
    let ui = u.inv();
    let i1 = -i0 * (ui + lw);
    let i2 = i0 * (ui * ui * T::lit(2.0) + ui * lw * T::lit(2.0) + lw * lw);
    [i0, i1, i2]
}

/// Default truncation point: `max(20, ceil(2 |Im s|))`.
pub(crate) fn base_n<T: Scalar>(s: Cx<T>) -> u32 {
    let two_t = (s.im.abs() * T::lit(2.0)).ceil();
    let n = two_t.to_u32().unwrap_or(u32::MAX / 4);
    n.max(20)
}

fn check_input<T: Scalar>(s: Cx<T>, a: T) -> Result<(), Error> {
    if !s.re.is_finite() || !s.im.is_finite() || !a.is_finite() {
        return Err(Error::NonFinite {
            what: "hurwitz_zeta input",
        });
    }
    if a <= T::zero() {
        return Err(Error::InvalidInput {
            what: format!("hurwitz parameter a = {a} must be positive"),
        });
    }
    let near_pole = T::epsilon() * T::lit(16.0) * (T::one() + s.norm());
    if (s - T::one()).norm() <= near_pole {
        return Err(Error::PoleAtOne);
    }
    Ok(())
}

/// Hurwitz zeta `zeta(s, a)` or one of its first two s-derivatives, with
/// default tolerances.
///
/// `deriv_order` selects the value (0) or the first/second derivative (1, 2).
///
/// ```
/// use num_complex::Complex;
/// use zetalab::special::hurwitz_zeta;
///
/// // zeta(2, 1) = pi^2 / 6.
/// let z = hurwitz_zeta(Complex::new(2.0_f64, 0.0), 1.0, 0).unwrap();
/// let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
/// assert!((z.value.re - pi2_6).abs() < 1e-12);
/// ```
pub fn hurwitz_zeta<T: Scalar>(s: Cx<T>, a: T, deriv_order: u8) -> Result<EvalResult<T>, Error> {
    hurwitz_zeta_with(s, a, deriv_order, &EmOptions::default())
}

/// Hurwitz zeta with explicit tolerance controls.
pub fn hurwitz_zeta_with<T: Scalar>(
    s: Cx<T>,
    a: T,
    deriv_order: u8,
    opts: &EmOptions<T>,
) -> Result<EvalResult<T>, Error> {
    let (derivs, est) = hurwitz_zeta_all(s, a, deriv_order as usize, opts)?;
    Ok(EvalResult {
        value: derivs[deriv_order as usize],
        est_abs_error: est[deriv_order as usize],
    })
}

/// All derivatives 0..=dmax of `zeta(s, a)` in one escalating pass.
pub(crate) fn hurwitz_zeta_all<T: Scalar>(
    s: Cx<T>,
    a: T,
    dmax: usize,
    opts: &EmOptions<T>,
) -> Result<([Cx<T>; 3], [T; 3]), Error> {
    check_input(s, a)?;
    let mut n = base_n(s);
    let mut achieved = T::infinity();
    for _ in 0..=opts.max_escalations {
        let parts = em_parts(s, a, dmax, n);
        if parts.est[dmax] <= opts.tol {
            let pole = pole_term(s, parts.log_w);
            let mut out = parts.entire;
            for j in 0..=dmax {
                out[j] += pole[j];
                if !out[j].re.is_finite() || !out[j].im.is_finite() {
                    return Err(Error::NonFinite {
                        what: "hurwitz_zeta result",
                    });
                }
            }
            return Ok((out, parts.est));
        }
        achieved = parts.est[dmax];
        n = n.saturating_mul(2);
    }
    Err(Error::PrecisionUnreachable {
        requested: opts.tol.as_f64(),
        achieved: achieved.as_f64(),
    })
}

/// Riemann zeta `zeta(s)` or one of its first two derivatives:
/// the Hurwitz engine at `a = 1`.
///
/// ```
/// use num_complex::Complex;
/// use zetalab::special::riemann_zeta;
///
/// // zeta(0) = -1/2.
/// let z = riemann_zeta(Complex::new(0.0_f64, 0.0), 0).unwrap();
/// assert!((z.value.re + 0.5).abs() < 1e-12);
/// ```
pub fn riemann_zeta<T: Scalar>(s: Cx<T>, deriv_order: u8) -> Result<EvalResult<T>, Error> {
    riemann_zeta_with(s, deriv_order, &EmOptions::default())
}

/// Riemann zeta with explicit tolerance controls.
pub fn riemann_zeta_with<T: Scalar>(
    s: Cx<T>,
    deriv_order: u8,
    opts: &EmOptions<T>,
) -> Result<EvalResult<T>, Error> {
    hurwitz_zeta_with(s, T::one(), deriv_order, opts)
}

/// All derivatives 0..=dmax of Riemann zeta, for the function-family layer.
pub(crate) fn riemann_zeta_all<T: Scalar>(
    s: Cx<T>,
    dmax: usize,
    opts: &EmOptions<T>,
) -> Result<([Cx<T>; 3], [T; 3]), Error> {
    hurwitz_zeta_all(s, T::one(), dmax, opts)
}
