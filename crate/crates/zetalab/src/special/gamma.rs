//! Log-gamma, digamma, and trigamma on the cut plane.
//!
//! All three use the same scheme: shift the argument by the recurrence until
//! its real part is at least [`SHIFT_RE`], apply the Stirling series there,
//! then undo the shift.  Because `log Gamma(s + 1) = log Gamma(s) + Log(s)`
//! holds with principal logarithms whenever `s` avoids the cut, the result is
//! the principal branch of log-gamma on `C` minus the non-positive reals, and
//! it is analytic there -- no phase unwrapping is needed downstream.

use num_complex::Complex;

use super::BERNOULLI_EVEN;
use crate::error::Error;
use crate::scalar::{Cx, Scalar};

/// Real part above which the Stirling series is applied directly.
const SHIFT_RE: f64 = 10.0;

/// Number of Bernoulli correction terms in the Stirling series.
/// With `Re z >= 10` the first omitted term is below 1e-20.
const STIRLING_TERMS: usize = 12;

fn check_pole<T: Scalar>(s: Cx<T>, what: &'static str) -> Result<(), Error> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::NonFinite { what });
    }
    if s.im.is_zero() && s.re <= T::zero() && s.re.floor() == s.re {
        return Err(Error::PoleAtNonPositiveInteger {
            re: s.re.as_f64(),
            im: s.im.as_f64(),
        });
    }
    Ok(())
}

/// Principal branch of `log Gamma(s)` on the plane cut along `(-inf, 0]`.
///
/// Poles at non-positive integers are reported as errors; elsewhere the result
/// is finite and analytic, with `exp(log_gamma(s)) = Gamma(s)`.
///
/// ```
/// use num_complex::Complex;
/// use zetalab::special::log_gamma;
///
/// let lg = log_gamma(Complex::new(5.0_f64, 0.0)).unwrap();
/// assert!((lg.re - 24.0_f64.ln()).abs() < 1e-14);
/// assert_eq!(lg.im, 0.0);
/// ```
pub fn log_gamma<T: Scalar>(s: Cx<T>) -> Result<Cx<T>, Error> {
    check_pole(s, "log_gamma")?;
    let shift = T::lit(SHIFT_RE);
    let mut z = s;
    let mut corr = Complex::new(T::zero(), T::zero());
    while z.re < shift {
        corr += z.ln();
        z += T::one();
    }
    Ok(stirling_log_gamma(z) - corr)
}

/// Stirling series for `log Gamma(z)`, valid for `Re z >= SHIFT_RE`.
fn stirling_log_gamma<T: Scalar>(z: Cx<T>) -> Cx<T> {
    let half = T::lit(0.5);
    let ln_two_pi_half = T::lit(0.918938533204672741780329736406); // ln(2 pi)/2
    let mut acc = (z - half) * z.ln() - z + ln_two_pi_half;
    let z2 = z * z;
    let mut zpow = z; // z^{2k-1}
    for k in 1..=STIRLING_TERMS {
        let denom = T::lit((2 * k * (2 * k - 1)) as f64);
        let coef = T::lit(BERNOULLI_EVEN[k]) / denom;
        acc += zpow.inv() * coef;
        zpow *= z2;
    }
    acc
}

/// Digamma `psi(s) = Gamma'(s)/Gamma(s)` on the cut plane.
///
/// ```
/// use num_complex::Complex;
/// use zetalab::special::digamma;
///
/// // psi(1) = -gamma (Euler-Mascheroni).
/// let d = digamma(Complex::new(1.0_f64, 0.0)).unwrap();
/// assert!((d.re + 0.5772156649015329).abs() < 1e-14);
/// ```
pub fn digamma<T: Scalar>(s: Cx<T>) -> Result<Cx<T>, Error> {
    check_pole(s, "digamma")?;
    let shift = T::lit(SHIFT_RE);
    let mut z = s;
    let mut corr = Complex::new(T::zero(), T::zero());
    while z.re < shift {
        corr += z.inv();
        z += T::one();
    }
    // psi(z) ~ ln z - 1/(2z) - sum B_{2k} / (2k z^{2k}).
    let mut acc = z.ln() - z.inv() * T::lit(0.5);
    let z2 = z * z;
    let mut zpow = z2; // z^{2k}
    for k in 1..=STIRLING_TERMS {
        let coef = T::lit(BERNOULLI_EVEN[k]) / T::lit((2 * k) as f64);
        acc -= zpow.inv() * coef;
        zpow *= z2;
    }
    Ok(acc - corr)
}

/// Trigamma `psi'(s)`, the derivative of digamma, on the cut plane.
///
/// Needed for the second t-derivative of rotated critical-line samples.
pub fn trigamma<T: Scalar>(s: Cx<T>) -> Result<Cx<T>, Error> {
    check_pole(s, "trigamma")?;
    let shift = T::lit(SHIFT_RE);
    let mut z = s;
    let mut corr = Complex::new(T::zero(), T::zero());
    while z.re < shift {
        let inv = z.inv();
        corr += inv * inv;
        z += T::one();
    }
    // psi'(z) ~ 1/z + 1/(2z^2) + sum B_{2k} z^{-2k-1}.
    let inv = z.inv();
    let mut acc = inv + inv * inv * T::lit(0.5);
    let z2 = z * z;
    let mut zpow = z2 * z; // z^{2k+1}
    for k in 1..=STIRLING_TERMS {
        acc += zpow.inv() * T::lit(BERNOULLI_EVEN[k]);
        zpow *= z2;
    }
    Ok(acc + corr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    const EULER_GAMMA: f64 = 0.5772156649015328606;

    fn close(a: Cx<f64>, b: Cx<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
    }

    #[test]
    fn log_gamma_known_real_values() {
        assert!(log_gamma(cx::<f64>(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(cx::<f64>(2.0, 0.0)).unwrap().norm() < 1e-14);
        let lg5 = log_gamma(cx::<f64>(5.0, 0.0)).unwrap();
        assert!((lg5.re - 24.0_f64.ln()).abs() < 1e-13);
        let lg_half = log_gamma(cx::<f64>(0.5, 0.0)).unwrap();
        assert!((lg_half.re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
    }

    #[test]
    fn log_gamma_rejects_poles_and_nan() {
        assert!(matches!(
            log_gamma(cx::<f64>(0.0, 0.0)),
            Err(Error::PoleAtNonPositiveInteger { .. })
        ));
        assert!(matches!(
            log_gamma(cx::<f64>(-3.0, 0.0)),
            Err(Error::PoleAtNonPositiveInteger { .. })
        ));
        assert!(matches!(
            log_gamma(cx::<f64>(f64::NAN, 0.0)),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn log_gamma_recurrence_holds_with_principal_logs() {
        // log Gamma(z+1) = log Gamma(z) + Log z away from the cut.
        for &z in &[
            cx::<f64>(0.25, 0.0),
            cx(0.5, 14.1),
            cx(-2.5, 3.0),
            cx(-6.3, -40.0),
            cx(3.0, 250.0),
        ] {
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = log_gamma(z).unwrap() + z.ln();
            assert!(close(lhs, rhs, 1e-13), "z = {z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn log_gamma_conjugate_symmetry() {
        for &z in &[cx::<f64>(0.3, 7.0), cx(2.0, -31.5), cx(-1.2, 100.0)] {
            let a = log_gamma(z.conj()).unwrap();
            let b = log_gamma(z).unwrap().conj();
            assert!(close(a, b, 1e-14));
        }
    }

    #[test]
    fn log_gamma_duplication_formula() {
        // Gamma(2z) = Gamma(z) Gamma(z + 1/2) 2^{2z-1} / sqrt(pi).
        // Compared through exp to stay branch-agnostic.
        for &z in &[cx::<f64>(1.5, 2.3), cx(0.8, -1.1), cx(3.2, 5.0)] {
            let lhs = log_gamma(z * 2.0).unwrap().exp();
            let rhs = (log_gamma(z).unwrap()
                + log_gamma(z + 0.5).unwrap()
                + (z * 2.0 - 1.0) * std::f64::consts::LN_2
                - 0.5 * std::f64::consts::PI.ln())
            .exp();
            assert!(close(lhs, rhs, 1e-12), "z = {z}");
        }
    }

    #[test]
    fn digamma_known_values_and_recurrence() {
        let d1 = digamma(cx::<f64>(1.0, 0.0)).unwrap();
        assert!((d1.re + EULER_GAMMA).abs() < 1e-14);
        // psi(1/2) = -gamma - 2 ln 2.
        let dh = digamma(cx::<f64>(0.5, 0.0)).unwrap();
        assert!((dh.re + EULER_GAMMA + 2.0 * std::f64::consts::LN_2).abs() < 1e-13);
        for &z in &[cx::<f64>(0.25, 30.0), cx(-4.7, 2.0)] {
            let lhs = digamma(z + 1.0).unwrap();
            let rhs = digamma(z).unwrap() + z.inv();
            assert!(close(lhs, rhs, 1e-13));
        }
    }

    #[test]
    fn trigamma_known_value_and_recurrence() {
        let t1 = trigamma(cx::<f64>(1.0, 0.0)).unwrap();
        let pi2_6 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((t1.re - pi2_6).abs() < 1e-13);
        for &z in &[cx::<f64>(0.25, 17.0), cx(-3.5, -2.0)] {
            let lhs = trigamma(z + 1.0).unwrap();
            let rhs = trigamma(z).unwrap() - z.inv() * z.inv();
            assert!(close(lhs, rhs, 1e-12));
        }
    }

    #[test]
    fn digamma_is_derivative_of_log_gamma() {
        // Central finite difference of log_gamma matches digamma.
        let h = 1e-5;
        for &z in &[cx::<f64>(0.5, 21.0), cx(4.0, -3.0)] {
            let fd = (log_gamma(z + h).unwrap() - log_gamma(z - h).unwrap()) / (2.0 * h);
            let an = digamma(z).unwrap();
            assert!((fd - an).norm() < 1e-9);
        }
    }

    #[test]
    fn trigamma_is_derivative_of_digamma() {
        let h = 1e-5;
        for &z in &[cx::<f64>(0.5, 21.0), cx(4.0, -3.0)] {
            let fd = (digamma(z + h).unwrap() - digamma(z - h).unwrap()) / (2.0 * h);
            let an = trigamma(z).unwrap();
            assert!((fd - an).norm() < 1e-9);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let lg = log_gamma(cx::<f32>(5.0, 0.0)).unwrap();
        assert!((lg.re - 24.0_f32.ln()).abs() < 1e-5);
        let d = digamma(cx::<f32>(1.0, 0.0)).unwrap();
        assert!((d.re + EULER_GAMMA as f32).abs() < 1e-5);
    }
}
