//! Functional-equation machinery: reflection across the critical line, the
//! completed function, and a scale-free residual check.
//!
//! Everything is computed in logarithmic form.  The reflection factor
//! `X(s) = 5^{1/2-s} 2 (2pi)^{s-1} Gamma(1-s) sin(pi s/2)` (the `5^{1/2-s}`
//! only for conductor-5 members) mixes a decaying gamma factor with a growing
//! sine; at `|Im s| = 40` the two parts separately overflow/underflow while
//! their combination is polynomially bounded, so `log X` is assembled first
//! and exponentiated once.

use num_complex::Complex;

use super::{FunctionSpec, Kind};
use crate::error::Error;
use crate::scalar::{Cx, Scalar};
use crate::special::{digamma, log_gamma, trigamma, EvalResult};

/// Imaginary-part threshold beyond which `sin`, `cot`, `csc^2` switch to
/// exponential forms that avoid overflow.
const SIN_SWITCH: f64 = 25.0;

/// Principal-style logarithm of `sin z`, stable for all heights.
///
/// For `Im z > 25`, `sin z = -e^{-iz}(1 - e^{2iz})/(2i)` gives
/// `log sin z = -iz - ln 2 + i pi/2 + ln(1 - e^{2iz})` with `|e^{2iz}| < 2e-22`.
/// The branch may differ from the principal one by `2 pi i`, which is
/// harmless under exponentiation.
pub(crate) fn log_sin<T: Scalar>(z: Cx<T>) -> Cx<T> {
    let switch = T::lit(SIN_SWITCH);
    if z.im > switch {
        let i = Complex::new(T::zero(), T::one());
        let w = (i * z * T::lit(2.0)).exp();
        let one = Complex::new(T::one(), T::zero());
        -i * z + Complex::new(-T::LN_2(), T::FRAC_PI_2()) + (one - w).ln()
    } else if z.im < -switch {
        log_sin(z.conj()).conj()
    } else {
        z.sin().ln()
    }
}

/// `cot z`, stable for all heights (tends to `-i` / `+i` far above / below
/// the real axis).
pub(crate) fn cot<T: Scalar>(z: Cx<T>) -> Cx<T> {
    let switch = T::lit(SIN_SWITCH);
    if z.im > switch {
        let i = Complex::new(T::zero(), T::one());
        let w = (i * z * T::lit(2.0)).exp();
        let one = Complex::new(T::one(), T::zero());
        -i * (one + w) / (one - w)
    } else if z.im < -switch {
        cot(z.conj()).conj()
    } else {
        z.cos() / z.sin()
    }
}

/// `csc^2 z = 1/sin^2 z`, stable for all heights (underflows to 0 far from
/// the real axis).
pub(crate) fn csc2<T: Scalar>(z: Cx<T>) -> Cx<T> {
    (-log_sin(z) * T::lit(2.0)).exp()
}

/// `log X(s)` and its first two derivatives for the reflection
/// `F(s) = X(s) F(1-s)`.
fn log_x_all<T: Scalar>(spec: &FunctionSpec<T>, s: Cx<T>) -> Result<[Cx<T>; 3], Error> {
    let pi = T::PI();
    let half_pi_s = s * T::FRAC_PI_2();
    let one = Complex::new(T::one(), T::zero());
    let ln_two_pi = Complex::new((T::lit(2.0) * pi).ln(), T::zero());

    let lg = log_gamma(one - s)?;
    let psi = digamma(one - s)?;
    let psi1 = trigamma(one - s)?;

    let mut lx0 = Complex::new(T::LN_2(), T::zero()) + (s - one) * ln_two_pi + log_sin(half_pi_s) + lg;
    let mut lx1 = ln_two_pi - psi + cot(half_pi_s) * T::FRAC_PI_2();
    let lx2 = psi1 - csc2(half_pi_s) * (T::FRAC_PI_2() * T::FRAC_PI_2());

    if !matches!(spec.kind, Kind::RiemannZeta) {
        // Conductor-5 members carry the extra 5^{1/2-s}.
        let ln5 = T::lit(5.0).ln();
        lx0 += (Complex::new(T::lit(0.5), T::zero()) - s) * ln5;
        lx1 -= Complex::new(ln5, T::zero());
    }
    Ok([lx0, lx1, lx2])
}

/// Evaluates `F(s)` (and s-derivatives) for `Re s < 1/2` through the
/// functional equation: `F(s) = X(s) F(1-s)` with all products assembled in
/// log form.
pub(crate) fn fe_reflect_all<T: Scalar>(
    spec: &FunctionSpec<T>,
    s: Cx<T>,
    dmax: usize,
) -> Result<([Cx<T>; 3], [T; 3]), Error> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::NonFinite {
            what: "fe_reflect input",
        });
    }
    if s.re >= T::lit(0.5) {
        return Err(Error::InvalidInput {
            what: format!("fe_reflect requires Re s < 1/2, got {s}"),
        });
    }
    let one = Complex::new(T::one(), T::zero());
    let (g, g_est) = spec.eval_direct(one - s, dmax)?;
    let lx = log_x_all(spec, s)?;
    let x = lx[0].exp();
    let xn = x.norm();

    let zero = Complex::new(T::zero(), T::zero());
    let mut out = [zero; 3];
    let mut est = [T::zero(); 3];
    // d/ds F(1-s) = -F'(1-s); second derivative restores the sign.
    out[0] = x * g[0];
    est[0] = xn * (g_est[0] + g[0].norm() * T::epsilon() * T::lit(32.0));
    if dmax >= 1 {
        let inner1 = lx[1] * g[0] - g[1];
        out[1] = x * inner1;
        est[1] = xn
            * (lx[1].norm() * g_est[0]
                + g_est[1]
                + inner1.norm() * T::epsilon() * T::lit(32.0));
        if dmax >= 2 {
            let coef = lx[1] * lx[1] + lx[2];
            let inner2 = coef * g[0] - lx[1] * g[1] * T::lit(2.0) + g[2];
            out[2] = x * inner2;
            est[2] = xn
                * (coef.norm() * g_est[0]
                    + lx[1].norm() * g_est[1] * T::lit(2.0)
                    + g_est[2]
                    + inner2.norm() * T::epsilon() * T::lit(32.0));
        }
    }
    Ok((out, est))
}

/// Public single-order reflection: `F(s)` or a derivative for `Re s < 1/2`.
pub fn fe_reflect<T: Scalar>(
    spec: &FunctionSpec<T>,
    s: Cx<T>,
    deriv_order: u8,
) -> Result<EvalResult<T>, Error> {
    if deriv_order > 2 {
        return Err(Error::InvalidInput {
            what: format!("derivative order {deriv_order} > 2"),
        });
    }
    let d = deriv_order as usize;
    let (vals, est) = fe_reflect_all(spec, s, d)?;
    Ok(EvalResult {
        value: vals[d],
        est_abs_error: est[d],
    })
}

/// `log Phi(s) = log F(s) + s log Q + sum_j log Gamma(lambda_j s + mu_j)`.
///
/// If `F(s) = 0` the real part is `-inf`, which exponentiates to 0 cleanly.
fn log_completed<T: Scalar>(spec: &FunctionSpec<T>, s: Cx<T>) -> Result<Cx<T>, Error> {
    let f = spec.eval(s, 0)?.value;
    let mut acc = f.ln() + s * spec.fe.q.ln();
    for gf in &spec.fe.gamma_factors {
        acc += log_gamma(s * gf.lambda + gf.mu)?;
    }
    Ok(acc)
}

/// The completed function `Phi(s) = F(s) Q^s prod_j Gamma(lambda_j s + mu_j)`.
///
/// Computed through logs; for `|Im s|` beyond roughly 1000 in f64 the value
/// underflows to 0 (the gamma factor decays like `e^{-pi |t|/4}`), while
/// [`fe_residual`] keeps working at any height because it never leaves log
/// scale.
pub fn completed_phi<T: Scalar>(spec: &FunctionSpec<T>, s: Cx<T>) -> Result<Cx<T>, Error> {
    Ok(log_completed(spec, s)?.exp())
}

/// Scale-free functional-equation residual
///
/// ```text
/// |Phi(s) - omega conj(Phi(1 - conj s))| / (|Phi(s)| + |Phi(1 - conj s)|)
/// ```
///
/// evaluated entirely in log form, so it stays meaningful at heights where
/// `Phi` itself would underflow.  Values are in `[0, 1]`; for the family
/// members it sits at rounding level everywhere away from gamma poles.
pub fn fe_residual<T: Scalar>(spec: &FunctionSpec<T>, s: Cx<T>) -> Result<T, Error> {
    let one = Complex::new(T::one(), T::zero());
    let a = log_completed(spec, s)?;
    let b = spec.fe.omega.ln() + log_completed(spec, one - s.conj())?.conj();
    let m = a.re.max(b.re);
    if m == T::neg_infinity() {
        // Both sides vanish; the identity holds trivially.
        return Ok(T::zero());
    }
    let ea = (a - m).exp();
    let eb = (b - m).exp();
    let denom = (a.re - m).exp() + (b.re - m).exp();
    Ok((ea - eb).norm() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn log_sin_matches_direct_at_moderate_height() {
        for &z in &[cx::<f64>(1.0, 3.0), cx(-2.0, -10.0), cx(0.3, 24.9)] {
            let direct = z.sin().ln();
            let stable = log_sin(z);
            // Compare through exp to ignore 2 pi i branch offsets.
            assert!((direct.exp() - stable.exp()).norm() < 1e-12 * direct.exp().norm());
        }
    }

    #[test]
    fn log_sin_stable_high_above_axis() {
        // At Im z = 100, sin z ~ e^{100}/2 which still fits in f64; compare.
        let z = cx::<f64>(0.7, 100.0);
        let stable = log_sin(z);
        let direct = z.sin().ln();
        assert!((stable.re - direct.re).abs() < 1e-10);
        // And at Im z = 800, direct sin overflows but log_sin stays finite.
        let z = cx::<f64>(0.7, 800.0);
        let l = log_sin(z);
        assert!(l.re.is_finite() && (l.re - (800.0 - std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn cot_limits() {
        assert!((cot(cx::<f64>(0.3, 60.0)) - cx(0.0, -1.0)).norm() < 1e-20);
        assert!((cot(cx::<f64>(0.3, -60.0)) - cx(0.0, 1.0)).norm() < 1e-20);
        let z = cx::<f64>(1.1, 2.0);
        assert!((cot(z) - z.cos() / z.sin()).norm() < 1e-14);
    }

    #[test]
    fn reflection_reproduces_trivial_values() {
        let zeta = FunctionSpec::<f64>::riemann_zeta();
        // zeta(-3) = 1/120 through the reflection path (Re s < -1).
        let v = zeta.eval(cx(-3.0, 0.0), 0).unwrap();
        assert!((v.value.re - 1.0 / 120.0).abs() < 1e-12, "{}", v.value);
        // zeta(-2) = 0.
        let z = zeta.eval(cx(-2.0, 0.0), 0).unwrap();
        assert!(z.value.norm() < 1e-12);
    }

    #[test]
    fn reflection_consistent_with_direct_evaluation() {
        // At Re s = -0.5 both paths are accurate; they must agree.
        for kind in 0..4 {
            let spec = spec_by_index(kind);
            for &t in &[2.0, 14.0, 47.5] {
                let s = cx::<f64>(-0.5, t);
                let direct = spec.eval_direct(s, 0).unwrap().0[0];
                let refl = fe_reflect(&spec, s, 0).unwrap().value;
                assert!(
                    (direct - refl).norm() < 1e-9 * (1.0 + direct.norm()),
                    "kind {kind}, t = {t}: {direct} vs {refl}"
                );
            }
        }
    }

    fn spec_by_index(i: usize) -> FunctionSpec<f64> {
        match i {
            0 => FunctionSpec::riemann_zeta(),
            1 => FunctionSpec::dirichlet_l_psi5(),
            2 => FunctionSpec::factor_zeta(),
            _ => FunctionSpec::family(0.37).unwrap(),
        }
    }

    #[test]
    fn reflection_derivatives_match_finite_differences() {
        let spec = FunctionSpec::<f64>::family(0.6).unwrap();
        let s = cx::<f64>(-2.5, 18.0);
        let h = 1e-4;
        let (vals, _) = fe_reflect_all(&spec, s, 2).unwrap();
        let f = |x| fe_reflect(&spec, x, 0).unwrap().value;
        let fd1 = (f(s + h) - f(s - h)) / (2.0 * h);
        assert!((vals[1] - fd1).norm() < 1e-5 * (1.0 + vals[1].norm()));
        let fd2 = (f(s + h) - f(s) * 2.0 + f(s - h)) / (h * h);
        assert!((vals[2] - fd2).norm() < 1e-3 * (1.0 + vals[2].norm()));
    }

    #[test]
    fn fe_residual_small_for_all_members() {
        for kind in 0..4 {
            let spec = spec_by_index(kind);
            for &s in &[
                cx::<f64>(0.3, 12.0),
                cx(0.5, 60.0),
                cx(-1.2, 33.3),
                cx(1.7, 90.0),
            ] {
                let r = fe_residual(&spec, s).unwrap();
                assert!(r < 1e-9, "kind {kind}, s = {s}: residual {r:.3e}");
            }
        }
    }

    #[test]
    fn fe_residual_works_far_above_underflow_height() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let r = fe_residual(&spec, cx(0.4, 300.0)).unwrap();
        assert!(r < 1e-8, "residual {r:.3e}");
    }

    #[test]
    fn completed_phi_is_real_on_critical_line() {
        let spec = FunctionSpec::<f64>::dirichlet_l_psi5();
        for &t in &[6.0, 23.0, 41.0] {
            let phi = completed_phi(&spec, cx(0.5, t)).unwrap();
            assert!(phi.im.abs() < 1e-10 * (1.0 + phi.re.abs()), "t = {t}: {phi}");
        }
    }

    #[test]
    fn fe_reflect_rejects_right_half() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        assert!(matches!(
            fe_reflect(&spec, cx(0.6, 1.0), 0),
            Err(Error::InvalidInput { .. })
        ));
    }
}
