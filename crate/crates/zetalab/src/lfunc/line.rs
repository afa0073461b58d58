//! Critical-line utilities: rotated (Hardy-style) samples, the exact
//! log-derivative identity, and a sign-change zero scan on the line.
//!
//! On the critical line the completed function is real, so
//! `z(t) = Re(e^{i alpha(t)} F(1/2 + it))` with
//! `alpha(t) = t log Q + sum_j Im log Gamma(lambda_j (1/2 + it) + mu_j)`
//! captures `F` up to a unimodular factor: `|z| = |F|` exactly.  The phase is
//! evaluated pointwise from the principal log-gamma, which is analytic on the
//! right half-plane, so `alpha` is automatically continuous in `t` -- no
//! incremental phase tracking is needed.

use num_complex::Complex;

use super::FunctionSpec;
use crate::error::Error;
use crate::scalar::{Cx, Scalar};
use crate::special::{digamma, log_gamma, trigamma};

/// One rotated sample of a family member on the critical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSample<T: Scalar> {
    /// Ordinate `t`.
    pub t: T,
    /// `z(t) = Re(e^{i alpha} F(1/2 + it))`; real with `|z| = |F|`.
    pub z_value: T,
    /// The unrotated value `F(1/2 + it)`.
    pub f_value: Cx<T>,
    /// `e^{-i alpha(t)}`, so that `f_value = phase * z_value` up to rounding.
    pub phase: Cx<T>,
}

/// Log-derivative identity data at one line point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivSample<T: Scalar> {
    pub t: T,
    /// `Re F'/F(1/2 + it)`.
    pub lhs: T,
    /// Exact right side `-sum_j lambda_j Re psi(lambda_j(1/2+it)+mu_j) - log Q`.
    pub rhs_exact: T,
    /// Leading asymptotic `-(d_F/2) log t - log Q`.
    pub rhs_asymptotic: T,
}

/// Rotation phase `alpha(t)` and its first two t-derivatives.
///
/// `alpha'(t) = log Q + sum lambda_j Re psi(...)`,
/// `alpha''(t) = -sum lambda_j^2 Im psi'(...)`.
pub(crate) fn rotation_phase<T: Scalar>(
    spec: &FunctionSpec<T>,
    t: T,
) -> Result<(T, T, T), Error> {
    let s_half = Complex::new(T::lit(0.5), t);
    let mut alpha = t * spec.fe.q.ln();
    let mut d1 = spec.fe.q.ln();
    let mut d2 = T::zero();
    for gf in &spec.fe.gamma_factors {
        let arg = s_half * gf.lambda + gf.mu;
        alpha = alpha + log_gamma(arg)?.im;
        d1 = d1 + gf.lambda * digamma(arg)?.re;
        d2 = d2 - gf.lambda * gf.lambda * trigamma(arg)?.im;
    }
    Ok((alpha, d1, d2))
}

/// Rotated sample `z(t)` on the critical line.
///
/// ```
/// use zetalab::lfunc::{z_rotated, FunctionSpec};
///
/// let zeta = FunctionSpec::<f64>::riemann_zeta();
/// // The first non-trivial zero: z vanishes there.
/// let s = z_rotated(&zeta, 14.134725141734693).unwrap();
/// assert!(s.z_value.abs() < 1e-9);
/// // Away from zeros, |z| = |F| exactly.
/// let s = z_rotated(&zeta, 20.0).unwrap();
/// assert!((s.z_value.abs() - s.f_value.norm()).abs() < 1e-10);
/// ```
pub fn z_rotated<T: Scalar>(spec: &FunctionSpec<T>, t: T) -> Result<LineSample<T>, Error> {
    let (alpha, _, _) = rotation_phase(spec, t)?;
    let s = Complex::new(T::lit(0.5), t);
    let f = spec.eval(s, 0)?.value;
    let rot = Complex::from_polar(T::one(), alpha);
    let z = (rot * f).re;
    Ok(LineSample {
        t,
        z_value: z,
        f_value: f,
        phase: Complex::from_polar(T::one(), -alpha),
    })
}

/// `z(t)` and its first two t-derivatives (used by line tracing and
/// tangency detection).  Entries above `dmax` are zero.
pub(crate) fn z_line_all<T: Scalar>(
    spec: &FunctionSpec<T>,
    t: T,
    dmax: usize,
) -> Result<[T; 3], Error> {
    let (alpha, a1, a2) = rotation_phase(spec, t)?;
    let s = Complex::new(T::lit(0.5), t);
    let (f, _) = spec.eval_all(s, dmax.min(2))?;
    let rot = Complex::from_polar(T::one(), alpha);
    let i = Complex::new(T::zero(), T::one());
    let mut out = [T::zero(); 3];
    out[0] = (rot * f[0]).re;
    if dmax >= 1 {
        // d/dt [e^{i alpha} f] = i e^{i alpha} (alpha' f + f_s).
        out[1] = (i * rot * (f[0] * a1 + f[1])).re;
        if dmax >= 2 {
            let inner = -f[0] * (a1 * a1) - f[1] * (a1 + a1) + i * f[0] * a2 - f[2];
            out[2] = (rot * inner).re;
        }
    }
    Ok(out)
}

/// Exact and asymptotic forms of `Re F'/F` on the critical line.
///
/// Errors with [`Error::TooCloseToZero`] when `|F(1/2+it)| < 1e-8`, where the
/// left side loses all precision.
pub fn critical_line_logderiv<T: Scalar>(
    spec: &FunctionSpec<T>,
    t: T,
) -> Result<LogDerivSample<T>, Error> {
    let s = Complex::new(T::lit(0.5), t);
    let (f, _) = spec.eval_all(s, 1)?;
    let f_abs = f[0].norm();
    if f_abs < T::lit(1e-8) {
        return Err(Error::TooCloseToZero {
            t: t.as_f64(),
            f_abs: f_abs.as_f64(),
        });
    }
    let lhs = (f[1] / f[0]).re;
    let (_, a1, _) = rotation_phase(spec, t)?;
    // Identity: Re F'/F = -alpha'(t) on the line.
    let rhs_exact = -a1;
    let ln_q = spec.fe.q.ln();
    let rhs_asymptotic = -(spec.fe.degree / T::lit(2.0)) * t.abs().max(T::lit(2.0)).ln() - ln_q;
    Ok(LogDerivSample {
        t,
        lhs,
        rhs_exact,
        rhs_asymptotic,
    })
}

/// Controls for [`line_zeros`].
#[derive(Debug, Clone, Copy)]
pub struct LineZerosParams<T: Scalar> {
    /// Scan step; `None` picks a quarter of the local mean zero gap
    /// `pi / alpha'(t_hi)`.
    pub step: Option<T>,
    /// Ordinates are refined until the bracket width drops below this.
    pub refine_tol: T,
    /// Cap on the number of z-evaluations.
    pub max_evals: u64,
}

impl<T: Scalar> Default for LineZerosParams<T> {
    fn default() -> Self {
        LineZerosParams {
            step: None,
            refine_tol: T::lit(1e-12).max(T::epsilon() * T::lit(64.0)),
            max_evals: 500_000,
        }
    }
}

/// Ordinates of the critical-line zeros of `F` in `[t_lo, t_hi]`, found as
/// sign changes of the rotated sample `z(t)` and refined by bisection plus a
/// guarded Newton polish.
///
/// Only transversal crossings are seen by the sign scan; tangential (double)
/// zeros are the business of the collision detector in the trajectory module.
pub fn line_zeros<T: Scalar>(
    spec: &FunctionSpec<T>,
    t_lo: T,
    t_hi: T,
    params: &LineZerosParams<T>,
) -> Result<Vec<T>, Error> {
    if !(t_lo < t_hi) {
        return Err(Error::InvalidInput {
            what: format!("line_zeros window [{t_lo}, {t_hi}] is empty"),
        });
    }
    let step = match params.step {
        Some(s) if s > T::zero() => s,
        Some(s) => {
            return Err(Error::InvalidInput {
                what: format!("non-positive scan step {s}"),
            })
        }
        None => {
            let (_, a1, _) = rotation_phase(spec, t_hi)?;
            T::PI() / (T::lit(4.0) * a1.abs().max(T::lit(0.5)))
        }
    };

    let mut evals: u64 = 0;
    let mut z_at = |t: T| -> Result<T, Error> {
        evals += 1;
        if evals > params.max_evals {
            return Err(Error::ScanBudgetExceeded {
                cells: params.max_evals,
            });
        }
        Ok(z_line_all(spec, t, 0)?[0])
    };

    let mut zeros = Vec::new();
    let mut t_prev = t_lo;
    let mut z_prev = z_at(t_prev)?;
    loop {
        let t_next = (t_prev + step).min(t_hi);
        let z_next = z_at(t_next)?;
        if z_prev == T::zero() {
            zeros.push(t_prev);
        } else if z_prev * z_next < T::zero() {
            zeros.push(refine_bracket(
                spec,
                (t_prev, z_prev),
                (t_next, z_next),
                params.refine_tol,
                &mut z_at,
            )?);
        }
        if t_next >= t_hi {
            if z_next == T::zero() {
                zeros.push(t_next);
            }
            break;
        }
        t_prev = t_next;
        z_prev = z_next;
    }
    Ok(zeros)
}

/// Bisection to a small bracket, then Newton with the analytic z' as long as
/// the iterate stays inside the bracket.
fn refine_bracket<T: Scalar>(
    spec: &FunctionSpec<T>,
    mut lo: (T, T),
    mut hi: (T, T),
    tol: T,
    z_at: &mut impl FnMut(T) -> Result<T, Error>,
) -> Result<T, Error> {
    let half = T::lit(0.5);
    for _ in 0..40 {
        if (hi.0 - lo.0).abs() <= tol {
            break;
        }
        let mid = (lo.0 + hi.0) * half;
        let zm = z_at(mid)?;
        if zm == T::zero() {
            return Ok(mid);
        }
        if lo.1 * zm < T::zero() {
            hi = (mid, zm);
        } else {
            lo = (mid, zm);
        }
    }
    let mut t = (lo.0 + hi.0) * half;
    for _ in 0..4 {
        let z = z_line_all(spec, t, 1)?;
        if z[1] == T::zero() {
            break;
        }
        let t_new = t - z[0] / z[1];
        if t_new <= lo.0 || t_new >= hi.0 {
            break;
        }
        if (t_new - t).abs() <= tol * half {
            return Ok(t_new);
        }
        t = t_new;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA_1: f64 = 14.134725141734693;
    const GAMMA_2: f64 = 21.022039638771554;
    const GAMMA_3: f64 = 25.010857580145688;

    #[test]
    fn rotated_sample_is_real_rotation() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        for &t in &[5.0, 17.3, 52.0] {
            let s = z_rotated(&spec, t).unwrap();
            // |z| = |F| and f = phase * z.
            assert!((s.z_value.abs() - s.f_value.norm()).abs() < 1e-11 * (1.0 + s.f_value.norm()));
            assert!((s.phase * s.z_value - s.f_value).norm() < 1e-11 * (1.0 + s.f_value.norm()));
            assert!((s.phase.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zeta_z_matches_classical_hardy_sign_pattern() {
        // Z(t) for zeta is positive at t = 18 and negative at t = 22
        // (between the first and second zeros the sign flips once).
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let a = z_rotated(&spec, 18.0).unwrap().z_value;
        let b = z_rotated(&spec, 22.0).unwrap().z_value;
        assert!(a * b < 0.0, "no sign change: {a} vs {b}");
    }

    #[test]
    fn line_zeros_finds_first_three_zeta_zeros() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let zeros = line_zeros(&spec, 10.0, 26.0, &LineZerosParams::default()).unwrap();
        assert_eq!(zeros.len(), 3, "zeros: {zeros:?}");
        assert!((zeros[0] - GAMMA_1).abs() < 1e-9);
        assert!((zeros[1] - GAMMA_2).abs() < 1e-9);
        assert!((zeros[2] - GAMMA_3).abs() < 1e-9);
    }

    #[test]
    fn factor_zeros_appear_in_the_combined_function() {
        // Factor zeros at t_k = (2k+1) pi / ln 5 interleave the zeta zeros in
        // the tau = 0 member.
        let spec = FunctionSpec::<f64>::factor_zeta();
        let t1 = std::f64::consts::PI / 5.0_f64.ln();
        let zeros = line_zeros(&spec, 1.0, 13.0, &LineZerosParams::default()).unwrap();
        // Expect the three factor zeros at t1, 3 t1, 5 t1 (~1.95, 5.86, 9.76)
        // and nothing else below the first zeta zero at 14.13.
        assert_eq!(zeros.len(), 3, "zeros: {zeros:?}");
        for (k, z) in zeros.iter().enumerate() {
            let expect = (2 * k + 1) as f64 * t1;
            assert!((z - expect).abs() < 1e-9, "zero {k}: {z} vs {expect}");
        }
    }

    #[test]
    fn logderiv_identity_is_exact() {
        for spec in [
            FunctionSpec::<f64>::riemann_zeta(),
            FunctionSpec::<f64>::dirichlet_l_psi5(),
            FunctionSpec::<f64>::family(0.41).unwrap(),
        ] {
            for &t in &[16.0, 47.0, 103.0] {
                let s = critical_line_logderiv(&spec, t).unwrap();
                assert!(
                    (s.lhs - s.rhs_exact).abs() < 1e-7 * (1.0 + s.lhs.abs()),
                    "{}, t = {t}: lhs {} vs exact {}",
                    spec.name(),
                    s.lhs,
                    s.rhs_exact
                );
            }
        }
    }

    #[test]
    fn logderiv_asymptotic_offset_is_half_log_two() {
        // For a single Gamma(s/2) factor the exact and asymptotic right sides
        // differ by lambda log lambda-type terms that tend to (log 2)/2.
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let s = critical_line_logderiv(&spec, 200.0).unwrap();
        let offset = s.rhs_exact - s.rhs_asymptotic;
        assert!(
            (offset - 0.5 * std::f64::consts::LN_2).abs() < 0.01,
            "offset {offset}"
        );
    }

    #[test]
    fn logderiv_rejects_near_zero_points() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        assert!(matches!(
            critical_line_logderiv(&spec, GAMMA_1),
            Err(Error::TooCloseToZero { .. })
        ));
    }

    #[test]
    fn line_zero_count_budget_is_enforced() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let params = LineZerosParams {
            max_evals: 10,
            ..LineZerosParams::default()
        };
        assert!(matches!(
            line_zeros(&spec, 10.0, 100.0, &params),
            Err(Error::ScanBudgetExceeded { .. })
        ));
    }
}
