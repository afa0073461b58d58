//! The function family under study and its functional-equation data.
//!
//! Four members share one critical strip: the Riemann zeta-function, the
//! Dirichlet L-function for the real character mod 5, the factor function
//! `(1 + sqrt(5) 5^{-s}) zeta(s)`, and the convex combination
//!
//! ```text
//! f(s, tau) = (1 - tau) (1 + sqrt(5) 5^{-s}) zeta(s) + tau L(s, psi),
//! ```
//!
//! which interpolates between the factor function (`tau = 0`) and the
//! L-function (`tau = 1`).  All members with conductor 5 satisfy the same
//! tau-independent asymmetric functional equation
//! `F(s) = 5^{1/2-s} 2 (2pi)^{s-1} Gamma(1-s) sin(pi s/2) F(1-s)`,
//! equivalently the symmetric form `Phi(s) = omega conj(Phi(1 - conj s))`
//! with `Phi(s) = F(s) Q^s Gamma(s/2)`, `Q = sqrt(5/pi)`, `omega = 1`.

mod line;
mod reflect;

pub use line::{
    critical_line_logderiv, line_zeros, z_rotated, LineSample, LineZerosParams, LogDerivSample,
};
pub use reflect::{completed_phi, fe_reflect, fe_residual};

pub(crate) use line::rotation_phase;
pub(crate) use reflect::fe_reflect_all;

use num_complex::Complex;

use crate::error::Error;
use crate::func::ComplexFn;
use crate::scalar::{Cx, Scalar};
use crate::special::{dirichlet_l_psi5_all, riemann_zeta_all, EmOptions, EvalResult};

/// Which member of the family a [`FunctionSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind<T: Scalar> {
    /// `zeta(s)`.
    RiemannZeta,
    /// `L(s, psi)` for the real primitive character mod 5.
    DirichletLPsi5,
    /// `(1 + sqrt(5) 5^{-s}) zeta(s)`, the `tau = 0` member.
    FactorZeta,
    /// `f(s, tau)` for a fixed `tau` in `[0, 1]`.
    Family { tau: T },
}

/// One gamma factor `Gamma(lambda s + mu)` of the completed function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor<T: Scalar> {
    pub lambda: T,
    pub mu: Cx<T>,
}

/// Data of the symmetric functional equation
/// `Phi(s) = omega conj(Phi(1 - conj s))` with
/// `Phi(s) = F(s) Q^s prod_j Gamma(lambda_j s + mu_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalEquationData<T: Scalar> {
    /// Conductor-type constant `Q > 0`.
    pub q: T,
    /// Gamma factors; all family members here carry the single factor
    /// `Gamma(s/2)`.
    pub gamma_factors: Vec<GammaFactor<T>>,
    /// Root number, `|omega| = 1`.
    pub omega: Cx<T>,
    /// Degree `d_F = 2 sum_j lambda_j`.
    pub degree: T,
}

/// Growth/lower-bound constants on the abscissa `sigma_1`:
/// `|F(sigma_1 + it)| >= c_lower` and a crude polynomial growth cap `b_upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthConstants<T: Scalar> {
    pub sigma1: T,
    pub c_lower: T,
    pub b_upper: T,
}

/// Zero-density constants `(epsilon, delta, t_bar)` used by the strip-count
/// bound `epsilon/log(2 + delta) * log T - 2` for `T >= t_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityConstants<T: Scalar> {
    pub epsilon: T,
    pub delta: T,
    pub t_bar: T,
}

/// Full description of one family member: identity, functional equation,
/// pole order at `s = 1`, and the analytic constants used by counting code.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec<T: Scalar> {
    pub kind: Kind<T>,
    pub fe: FunctionalEquationData<T>,
    /// Order of the pole at `s = 1` (0 or 1 for this family).
    pub pole_order: u32,
    pub growth: GrowthConstants<T>,
    pub density: DensityConstants<T>,
    /// Half-width `sigma_F` of the vertical strip that contains all
    /// non-trivial zeros with a margin.
    pub zero_free_sigma: T,
}

/// Shared functional-equation data for the conductor-5 members.
fn fe_conductor5<T: Scalar>() -> FunctionalEquationData<T> {
    FunctionalEquationData {
        q: (T::lit(5.0) / T::PI()).sqrt(),
        gamma_factors: vec![GammaFactor {
            lambda: T::lit(0.5),
            mu: Complex::new(T::zero(), T::zero()),
        }],
        omega: Complex::new(T::one(), T::zero()),
        degree: T::one(),
    }
}

fn density_default<T: Scalar>() -> DensityConstants<T> {
    DensityConstants {
        epsilon: T::lit(0.17),
        delta: T::lit(0.1),
        t_bar: T::lit(10.0),
    }
}

impl<T: Scalar> FunctionSpec<T> {
    /// The Riemann zeta-function.
    pub fn riemann_zeta() -> Self {
        FunctionSpec {
            kind: Kind::RiemannZeta,
            fe: FunctionalEquationData {
                q: T::one() / T::PI().sqrt(),
                gamma_factors: vec![GammaFactor {
                    lambda: T::lit(0.5),
                    mu: Complex::new(T::zero(), T::zero()),
                }],
                omega: Complex::new(T::one(), T::zero()),
                degree: T::one(),
            },
            pole_order: 1,
            growth: GrowthConstants {
                sigma1: T::lit(2.0),
                // |zeta(2 + it)| >= 2 - zeta(2) = 0.355...
                c_lower: T::lit(0.35),
                b_upper: T::lit(10.0),
            },
            density: density_default(),
            zero_free_sigma: T::lit(3.0),
        }
    }

    /// The Dirichlet L-function for the real character mod 5.
    pub fn dirichlet_l_psi5() -> Self {
        FunctionSpec {
            kind: Kind::DirichletLPsi5,
            fe: fe_conductor5(),
            pole_order: 0,
            growth: GrowthConstants {
                sigma1: T::lit(2.0),
                // |L(2 + it)| >= 2 - zeta(2) + zeta(2)/25 = 0.42...
                c_lower: T::lit(0.4),
                b_upper: T::lit(10.0),
            },
            density: density_default(),
            zero_free_sigma: T::lit(3.0),
        }
    }

    /// The factor function `(1 + sqrt(5) 5^{-s}) zeta(s)`.
    pub fn factor_zeta() -> Self {
        FunctionSpec {
            kind: Kind::FactorZeta,
            fe: fe_conductor5(),
            pole_order: 1,
            growth: GrowthConstants {
                sigma1: T::lit(2.0),
                // Dirichlet coefficients give |f(2 + it)| >= 0.207 uniformly
                // over the whole family, so 0.2 serves tau in [0, 1].
                c_lower: T::lit(0.2),
                b_upper: T::lit(10.0),
            },
            density: density_default(),
            zero_free_sigma: T::lit(3.0),
        }
    }

    /// The convex combination `f(s, tau)`; `tau` must lie in `[0, 1]`.
    pub fn family(tau: T) -> Result<Self, Error> {
        if !tau.is_finite() || tau < T::zero() || tau > T::one() {
            return Err(Error::InvalidInput {
                what: format!("family parameter tau = {tau} outside [0, 1]"),
            });
        }
        let mut spec = Self::factor_zeta();
        spec.kind = Kind::Family { tau };
        // The zeta pole cancels exactly at tau = 1 (the L-function member).
        spec.pole_order = if tau == T::one() { 0 } else { 1 };
        Ok(spec)
    }

    /// Short stable identifier for reports.
    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::RiemannZeta => "riemann_zeta",
            Kind::DirichletLPsi5 => "dirichlet_l_psi5",
            Kind::FactorZeta => "factor_zeta",
            Kind::Family { .. } => "family",
        }
    }

    /// The family parameter if this is a `Family` member.
    pub fn tau(&self) -> Option<T> {
        match self.kind {
            Kind::Family { tau } => Some(tau),
            _ => None,
        }
    }

    /// Evaluates `F(s)` or an s-derivative (orders 0..=2), with an error
    /// estimate.  For `Re s < -1` the asymmetric functional equation is used
    /// so accuracy does not degrade far left of the strip.
    ///
    /// ```
    /// use num_complex::Complex;
    /// use zetalab::lfunc::FunctionSpec;
    ///
    /// let zeta = FunctionSpec::<f64>::riemann_zeta();
    /// let v = zeta.eval(Complex::new(2.0, 0.0), 0).unwrap();
    /// let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    /// assert!((v.value.re - pi2_6).abs() < 1e-12);
    /// ```
    pub fn eval(&self, s: Cx<T>, deriv_order: u8) -> Result<EvalResult<T>, Error> {
        if deriv_order > 2 {
            return Err(Error::InvalidInput {
                what: format!("derivative order {deriv_order} > 2"),
            });
        }
        let d = deriv_order as usize;
        let (vals, est) = self.eval_all(s, d)?;
        Ok(EvalResult {
            value: vals[d],
            est_abs_error: est[d],
        })
    }

    /// All derivatives 0..=dmax at once (shared escalation), reflection
    /// included.
    pub(crate) fn eval_all(&self, s: Cx<T>, dmax: usize) -> Result<([Cx<T>; 3], [T; 3]), Error> {
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(Error::NonFinite { what: "eval input" });
        }
        if s.re < T::lit(-1.0) {
            fe_reflect_all(self, s, dmax)
        } else {
            self.eval_direct(s, dmax)
        }
    }

    /// Series-side evaluation (no reflection); requires `Re s >= -1` for full
    /// accuracy but is defined wherever the Euler–Maclaurin engine converges.
    pub(crate) fn eval_direct(&self, s: Cx<T>, dmax: usize) -> Result<([Cx<T>; 3], [T; 3]), Error> {
        let opts = EmOptions::default();
        match self.kind {
            Kind::RiemannZeta => riemann_zeta_all(s, dmax, &opts),
            Kind::DirichletLPsi5 => dirichlet_l_psi5_all(s, dmax, &opts),
            Kind::FactorZeta => factor_zeta_all(s, dmax, &opts),
            Kind::Family { tau } => family_all(tau, s, dmax, &opts),
        }
    }

    /// Partial derivative of the family member in `tau` (constant in `tau`
    /// itself): `d f/d tau = L(s, psi) - (1 + sqrt(5) 5^{-s}) zeta(s)`,
    /// optionally s-differentiated.
    ///
    /// Defined for every member so that callers can treat any spec as a point
    /// of the family; for `RiemannZeta` it still reports the conductor-5
    /// family direction.
    pub fn eval_dtau(&self, s: Cx<T>, deriv_order: u8) -> Result<EvalResult<T>, Error> {
        if deriv_order > 2 {
            return Err(Error::InvalidInput {
                what: format!("derivative order {deriv_order} > 2"),
            });
        }
        let d = deriv_order as usize;
        let (vals, est) = self.eval_dtau_all(s, d)?;
        Ok(EvalResult {
            value: vals[d],
            est_abs_error: est[d],
        })
    }

    /// s-derivatives 0..=dmax of `d f/d tau` in one pass.
    pub(crate) fn eval_dtau_all(&self, s: Cx<T>, dmax: usize) -> Result<([Cx<T>; 3], [T; 3]), Error> {
        let opts = EmOptions::default();
        let (l, l_est) = dirichlet_l_psi5_all(s, dmax, &opts)?;
        let (gz, gz_est) = factor_zeta_all(s, dmax, &opts)?;
        let mut vals = [Complex::new(T::zero(), T::zero()); 3];
        let mut est = [T::zero(); 3];
        for d in 0..=dmax.min(2) {
            vals[d] = l[d] - gz[d];
            est[d] = l_est[d] + gz_est[d];
        }
        Ok((vals, est))
    }
}

impl<T: Scalar> ComplexFn<T> for FunctionSpec<T> {
    fn eval_n(&self, s: Cx<T>, deriv: u8) -> Result<Cx<T>, Error> {
        self.eval(s, deriv).map(|r| r.value)
    }
}

/// The elementary factor `g(s) = 1 + 5^{1/2 - s}` and its derivatives.
fn factor_g<T: Scalar>(s: Cx<T>) -> [Cx<T>; 3] {
    let ln5 = T::lit(5.0).ln();
    let e = ((Complex::new(T::lit(0.5), T::zero()) - s) * ln5).exp();
    [
        e + T::one(),
        -e * ln5,
        e * (ln5 * ln5),
    ]
}

/// `(1 + sqrt(5) 5^{-s}) zeta(s)` with derivatives via the product rule.
pub(crate) fn factor_zeta_all<T: Scalar>(
    s: Cx<T>,
    dmax: usize,
    opts: &EmOptions<T>,
) -> Result<([Cx<T>; 3], [T; 3]), Error> {
    let (z, z_est) = riemann_zeta_all(s, dmax, opts)?;
    let g = factor_g(s);
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = [zero; 3];
    let mut est = [T::zero(); 3];
    out[0] = g[0] * z[0];
    est[0] = g[0].norm() * z_est[0];
    if dmax >= 1 {
        out[1] = g[1] * z[0] + g[0] * z[1];
        est[1] = g[1].norm() * z_est[0] + g[0].norm() * z_est[1];
        if dmax >= 2 {
            out[2] = g[2] * z[0] + g[1] * z[1] * T::lit(2.0) + g[0] * z[2];
            est[2] = g[2].norm() * z_est[0]
                + g[1].norm() * z_est[1] * T::lit(2.0)
                + g[0].norm() * z_est[2];
        }
    }
    Ok((out, est))
}

/// `f(s, tau)` with derivatives; the affine combination is taken term by term
/// so that `f(s, tau) = (1 - tau) f(s, 0) + tau f(s, 1)` holds to rounding.
pub(crate) fn family_all<T: Scalar>(
    tau: T,
    s: Cx<T>,
    dmax: usize,
    opts: &EmOptions<T>,
) -> Result<([Cx<T>; 3], [T; 3]), Error> {
    // Endpoints delegate to the pure members; in particular the tau = 1
    // member must not evaluate the factor piece, whose pole at s = 1 has
    // weight zero there.
    if tau == T::zero() {
        return factor_zeta_all(s, dmax, opts);
    }
    if tau == T::one() {
        return dirichlet_l_psi5_all(s, dmax, opts);
    }
    let (gz, gz_est) = factor_zeta_all(s, dmax, opts)?;
    let (l, l_est) = dirichlet_l_psi5_all(s, dmax, opts)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = [zero; 3];
    let mut est = [T::zero(); 3];
    let one_m = T::one() - tau;
    for j in 0..=dmax {
        out[j] = gz[j] * one_m + l[j] * tau;
        est[j] = gz_est[j] * one_m + l_est[j] * tau;
    }
    Ok((out, est))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn family_endpoints_match_members() {
        let s = cx::<f64>(0.7, 21.3);
        let f0 = FunctionSpec::family(0.0).unwrap().eval(s, 0).unwrap().value;
        let gz = FunctionSpec::<f64>::factor_zeta().eval(s, 0).unwrap().value;
        assert_eq!(f0, gz);
        let f1 = FunctionSpec::family(1.0).unwrap().eval(s, 0).unwrap().value;
        let l = FunctionSpec::<f64>::dirichlet_l_psi5()
            .eval(s, 0)
            .unwrap()
            .value;
        assert_eq!(f1, l);
    }

    #[test]
    fn family_is_affine_in_tau() {
        let s = cx::<f64>(0.5, 15.0);
        let f0 = FunctionSpec::family(0.0).unwrap().eval(s, 0).unwrap().value;
        let f1 = FunctionSpec::family(1.0).unwrap().eval(s, 0).unwrap().value;
        for &tau in &[0.125, 0.3, 0.5, 0.875] {
            let f = FunctionSpec::family(tau).unwrap().eval(s, 0).unwrap().value;
            let affine = f0 * (1.0 - tau) + f1 * tau;
            assert!((f - affine).norm() < 1e-12, "tau = {tau}");
        }
    }

    #[test]
    fn eval_dtau_is_constant_in_tau() {
        let s = cx::<f64>(0.4, 33.0);
        let a = FunctionSpec::family(0.2).unwrap().eval_dtau(s, 0).unwrap();
        let b = FunctionSpec::family(0.9).unwrap().eval_dtau(s, 0).unwrap();
        assert_eq!(a.value, b.value);
        // And it equals L - factor directly.
        let l = FunctionSpec::<f64>::dirichlet_l_psi5()
            .eval(s, 0)
            .unwrap()
            .value;
        let gz = FunctionSpec::<f64>::factor_zeta().eval(s, 0).unwrap().value;
        assert!((a.value - (l - gz)).norm() < 1e-14);
    }

    #[test]
    fn family_rejects_tau_outside_unit_interval() {
        assert!(FunctionSpec::<f64>::family(-0.01).is_err());
        assert!(FunctionSpec::<f64>::family(1.01).is_err());
        assert!(FunctionSpec::<f64>::family(f64::NAN).is_err());
    }

    #[test]
    fn pole_order_tracks_tau() {
        assert_eq!(FunctionSpec::<f64>::family(0.3).unwrap().pole_order, 1);
        assert_eq!(FunctionSpec::<f64>::family(1.0).unwrap().pole_order, 0);
        assert_eq!(FunctionSpec::<f64>::dirichlet_l_psi5().pole_order, 0);
    }

    #[test]
    fn factor_zeta_vanishes_at_factor_zero() {
        // 1 + 5^{1/2-s} = 0 at s = 1/2 + i pi/ln 5: first factor zero.
        let t1 = std::f64::consts::PI / 5.0_f64.ln();
        let s = cx::<f64>(0.5, t1);
        let v = FunctionSpec::<f64>::factor_zeta().eval(s, 0).unwrap();
        assert!(v.value.norm() < 1e-12, "{}", v.value);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let spec = FunctionSpec::<f64>::factor_zeta();
        let s = cx::<f64>(0.5, 12.0);
        let h = 1e-4;
        let d1 = spec.eval(s, 1).unwrap().value;
        let fd = (spec.eval(s + h, 0).unwrap().value - spec.eval(s - h, 0).unwrap().value)
            / (2.0 * h);
        assert!((d1 - fd).norm() < 1e-6);
    }

    #[test]
    fn family_pole_is_reported() {
        let spec = FunctionSpec::<f64>::family(0.5).unwrap();
        assert!(matches!(
            spec.eval(cx(1.0, 0.0), 0),
            Err(Error::PoleAtOne)
        ));
        // But the tau = 1 member is entire.
        let l = FunctionSpec::<f64>::family(1.0).unwrap();
        assert!(l.eval(cx(1.0, 0.0), 0).is_ok());
    }
}
