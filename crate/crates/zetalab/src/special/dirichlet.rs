//! Dirichlet L-function for the real primitive character mod 5.
//!
//! `L(s, psi) = 5^{-s} sum_{a=1}^{4} psi(a) zeta(s, a/5)` with
//! `psi = (1, -1, -1, 1)` on residues 1..4 (the Legendre symbol mod 5).
//! Each Hurwitz piece carries a simple pole at `s = 1`; the character sums to
//! zero, so the four pole terms cancel and `L` is entire.  Near `s = 1` the
//! combined pole contribution is evaluated through a joint Taylor expansion
//! instead of subtracting four large terms.

use num_complex::Complex;

use super::hurwitz::{base_n, em_parts, pole_term};
use super::{EmOptions, EvalResult};
use crate::error::Error;
use crate::scalar::{Cx, Scalar};

/// Character values `psi(1), psi(2), psi(3), psi(4)` for the real primitive
/// character mod 5 (`psi(2) = -1`); `psi(n) = 0` when `5 | n`.
pub const PSI5: [i8; 4] = [1, -1, -1, 1];

/// Radius around `s = 1` inside which the joint Taylor expansion replaces the
/// direct (cancelling) pole-term combination.
const TAYLOR_RADIUS: f64 = 0.1;

/// Taylor terms kept for the joint pole combination; with `|s-1| <= 0.1` the
/// tail beyond 40 terms is far below f64 rounding.
const TAYLOR_TERMS: usize = 40;

/// `L(s, psi)` for the real character mod 5, or one of its first two
/// s-derivatives.  Entire in `s`: unlike the zeta evaluators this never
/// reports a pole.
///
/// ```
/// use num_complex::Complex;
/// use zetalab::special::dirichlet_l_psi5;
///
/// // L(1, psi) = 2 log(golden ratio) / sqrt(5).
/// let v = dirichlet_l_psi5(Complex::new(1.0_f64, 0.0), 0).unwrap();
/// let expect = 2.0 * ((1.0 + 5.0_f64.sqrt()) / 2.0).ln() / 5.0_f64.sqrt();
/// assert!((v.value.re - expect).abs() < 1e-12);
/// ```
pub fn dirichlet_l_psi5<T: Scalar>(s: Cx<T>, deriv_order: u8) -> Result<EvalResult<T>, Error> {
    let (derivs, est) = dirichlet_l_psi5_all(s, deriv_order as usize, &EmOptions::default())?;
    Ok(EvalResult {
        value: derivs[deriv_order as usize],
        est_abs_error: est[deriv_order as usize],
    })
}

/// All derivatives 0..=dmax of `L(s, psi)` in one escalating pass.
pub(crate) fn dirichlet_l_psi5_all<T: Scalar>(
    s: Cx<T>,
    dmax: usize,
    opts: &EmOptions<T>,
) -> Result<([Cx<T>; 3], [T; 3]), Error> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::NonFinite {
            what: "dirichlet_l_psi5 input",
        });
    }
    let zero = Complex::new(T::zero(), T::zero());
    let fifth = T::lit(0.2);
    let ln5 = T::lit(5.0).ln();

    let mut n = base_n(s);
    let mut achieved = T::infinity();
    for _ in 0..=opts.max_escalations {
        // Entire parts and pole data for the four Hurwitz pieces at shared N.
        let mut g = [zero; 3];
        let mut g_est = [T::zero(); 3];
        let mut log_w = [T::zero(); 4];
        for (idx, &chi) in PSI5.iter().enumerate() {
            let a = fifth * T::from_usize(idx + 1).expect("small usize");
            let parts = em_parts(s, a, dmax, n);
            let sign = T::lit(chi as f64);
            for j in 0..=dmax {
                g[j] += parts.entire[j] * sign;
                g_est[j] = g_est[j] + parts.est[j];
            }
            log_w[idx] = parts.log_w;
        }

        // Joint pole combination H(s) = sum psi(a) w_a^{1-s} / (s - 1).
        let h = if (s - T::one()).norm() < T::lit(TAYLOR_RADIUS) {
            joint_pole_taylor(s, &log_w)
        } else {
            let mut acc = [zero; 3];
            for (idx, &chi) in PSI5.iter().enumerate() {
                let p = pole_term(s, log_w[idx]);
                let sign = T::lit(chi as f64);
                for (a, b) in acc.iter_mut().zip(p.iter()) {
                    *a += *b * sign;
                }
            }
            acc
        };
        for j in 0..=dmax {
            g[j] += h[j];
        }

        // L = 5^{-s} G; push the prefactor through the derivatives.
        let q = (-s * ln5).exp();
        let mut out = [zero; 3];
        out[0] = q * g[0];
        if dmax >= 1 {
            out[1] = q * (g[1] - g[0] * ln5);
            if dmax >= 2 {
                out[2] = q * (g[2] - g[1] * (ln5 + ln5) + g[0] * (ln5 * ln5));
            }
        }
        let qn = q.norm();
        let mut est = [T::zero(); 3];
        est[0] = qn * g_est[0];
        est[1] = qn * (g_est[1] + g_est[0] * ln5);
        est[2] = qn * (g_est[2] + g_est[1] * (ln5 + ln5) + g_est[0] * ln5 * ln5);

        if est[dmax] <= opts.tol {
            for item in out.iter().take(dmax + 1) {
                if !item.re.is_finite() || !item.im.is_finite() {
                    return Err(Error::NonFinite {
                        what: "dirichlet_l_psi5 result",
                    });
                }
            }
            return Ok((out, est));
        }
        achieved = est[dmax];
        n = n.saturating_mul(2);
    }
    Err(Error::PrecisionUnreachable {
        requested: opts.tol.as_f64(),
        achieved: achieved.as_f64(),
    })
}

/// Taylor form of `H(s) = sum_a psi(a) w_a^{1-s}/(s-1)` about `s = 1`.
///
/// With `u = 1 - s` and `c_m = sum_a psi(a) (ln w_a)^m`:
///
/// ```text
/// H     = - sum_{m>=1} c_m u^{m-1} / m!
/// dH/ds =   sum_{m>=2} c_m (m-1) u^{m-2} / m!
/// d2H/ds2 = - sum_{m>=3} c_m (m-1)(m-2) u^{m-3} / m!
/// ```
fn joint_pole_taylor<T: Scalar>(s: Cx<T>, log_w: &[T; 4]) -> [Cx<T>; 3] {
    let u = Complex::new(T::one(), T::zero()) - s;
    let zero = Complex::new(T::zero(), T::zero());
    let mut h = [zero; 3];

    // Powers of ln w_a, advanced once per m.
    let mut lw_pow = *log_w;
    // u^{m-1}, u^{m-2}, u^{m-3} tracked incrementally; entries stay unused
    // until their exponent becomes non-negative.
    let one = Complex::new(T::one(), T::zero());
    let mut u_pow_m1 = one; // u^{m-1} for m = 1
    let mut fact = T::one(); // m!
    let mut u_pow_prev = one; // u^{m-2} once m >= 2
    let mut u_pow_prev2 = one; // u^{m-3} once m >= 3

    for m in 1..=TAYLOR_TERMS {
        let mf = T::from_usize(m).expect("small usize");
        fact = fact * mf;
        let mut c_m = T::zero();
        for (idx, &chi) in PSI5.iter().enumerate() {
            c_m = c_m + T::lit(chi as f64) * lw_pow[idx];
            lw_pow[idx] = lw_pow[idx] * log_w[idx];
        }
        let scale = c_m / fact;
        h[0] -= u_pow_m1 * scale;
        if m >= 2 {
            let m1 = T::from_usize(m - 1).expect("small usize");
            h[1] += u_pow_prev * (scale * m1);
            if m >= 3 {
                let m2 = T::from_usize(m - 2).expect("small usize");
                h[2] -= u_pow_prev2 * (scale * m1 * m2);
                u_pow_prev2 *= u;
            }
            u_pow_prev *= u;
        }
        u_pow_m1 *= u;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn l(s: Cx<f64>) -> Cx<f64> {
        dirichlet_l_psi5(s, 0).unwrap().value
    }

    /// Direct Dirichlet series oracle, valid for Re s > 1; the tail after N
    /// terms is below 2 N^{-Re s} by Abel summation (psi partial sums are
    /// bounded by 2).
    fn l_series(s: Cx<f64>, n: u64) -> Cx<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for k in 1..=n {
            let chi = match k % 5 {
                1 | 4 => 1.0,
                2 | 3 => -1.0,
                _ => continue,
            };
            acc += (-s * (k as f64).ln()).exp() * chi;
        }
        acc
    }

    #[test]
    fn value_at_one_matches_closed_form() {
        // L(1, psi) = 2 ln(phi) / sqrt(5), phi the golden ratio.
        let expect = 2.0 * ((1.0 + 5.0_f64.sqrt()) / 2.0).ln() / 5.0_f64.sqrt();
        assert!((l(cx(1.0, 0.0)).re - expect).abs() < 1e-12);
        assert!(l(cx(1.0, 0.0)).im.abs() < 1e-13);
    }

    #[test]
    fn matches_direct_series_in_absolute_range() {
        for &s in &[cx(2.0, 0.0), cx(3.0, 5.0), cx(2.5, -11.0)] {
            let oracle = l_series(s, 400_000);
            let tail = 2.0 * (400_000.0_f64).powf(-s.re);
            assert!(
                (l(s) - oracle).norm() < tail + 1e-10,
                "s = {s}: {} vs {oracle}",
                l(s)
            );
        }
    }

    #[test]
    fn trivial_zero_at_origin() {
        // Even character: L(0, psi) = -(1/5) sum psi(a) a = 0.
        assert!(l(cx(0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn entire_at_the_zeta_pole() {
        let v = dirichlet_l_psi5(cx::<f64>(1.0, 0.0), 0).unwrap();
        assert!(v.value.re.is_finite());
        // First derivative is finite there too.
        let d = dirichlet_l_psi5(cx::<f64>(1.0, 0.0), 1).unwrap();
        assert!(d.value.norm() < 10.0);
    }

    #[test]
    fn taylor_and_direct_paths_agree_at_threshold() {
        // Anchors on each side of the path switch (reference values from a
        // 25-digit computation).
        assert!((l(cx(1.05, 0.0)).re - 0.448009593760969868).abs() < 1e-12);
        assert!((l(cx(1.25, 0.0)).re - 0.514198897933341509).abs() < 1e-12);
        // Smoothness across the switch: a hidden jump would dominate this
        // second difference, which is ~|L''| h^2 ~ 1e-13 for a smooth path
        // (evaluation noise contributes a few 1e-12 at most).
        for angle in [0.0, 1.0, 2.5, 4.0] {
            let dir = Complex::from_polar(1.0_f64, angle);
            let h = 1e-6;
            let lo = l(cx::<f64>(1.0, 0.0) + dir * (0.1 - h));
            let mid = l(cx::<f64>(1.0, 0.0) + dir * 0.1);
            let hi = l(cx::<f64>(1.0, 0.0) + dir * (0.1 + h));
            let second_diff = (lo - mid * 2.0 + hi).norm();
            assert!(second_diff < 1e-9, "angle {angle}: {second_diff:.3e}");
        }
    }

    #[test]
    fn critical_strip_anchor() {
        // L(1/2 + 6i), reference from a 25-digit computation.
        let v = l(cx(0.5, 6.0));
        let expect = Complex::new(0.275543455389521803, -0.995392028773643948);
        assert!((v - expect).norm() < 1e-12, "{v}");
    }

    #[test]
    fn conjugate_symmetry() {
        for &s in &[cx(0.5, 12.0), cx(1.2, -3.0), cx(-1.0, 7.5)] {
            assert!((l(s.conj()) - l(s).conj()).norm() < 1e-11);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for &s in &[cx(0.5, 9.0), cx(1.0, 0.0), cx(1.02, 0.01), cx(-0.5, 20.0)] {
            let d1 = dirichlet_l_psi5(s, 1).unwrap().value;
            let fd1 = (l(s + h) - l(s - h)) / (2.0 * h);
            assert!((d1 - fd1).norm() < 1e-7 * (1.0 + d1.norm()), "s = {s}");
            let d2 = dirichlet_l_psi5(s, 2).unwrap().value;
            let fd2 = (l(s + h) - l(s) * 2.0 + l(s - h)) / (h * h);
            assert!((d2 - fd2).norm() < 1e-4 * (1.0 + d2.norm()), "s = {s}");
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let v = dirichlet_l_psi5(cx::<f32>(2.0, 0.0), 0).unwrap();
        let oracle = l_series(cx(2.0, 0.0), 100_000);
        assert!((v.value.re - oracle.re as f32).abs() < 1e-4);
    }
}
