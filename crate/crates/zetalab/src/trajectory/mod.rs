//! Zero trajectories of the family `f(s, tau)` in the parameter `tau`:
//! predictor–corrector continuation, double-zero (collision) detection on the
//! critical line, Weierstrass-style local quadratic models, branch
//! classification around a collision, and a census over a height window.
//!
//! A zero trajectory is a continuous curve `rho(tau)` with
//! `f(rho(tau), tau) = 0`; the derivative `f'_s` has its own trajectories
//! `rho~(tau)`.  Trajectories of `f` that start on the critical line stay
//! there until two of them collide in a double zero; at such an event the
//! pair either re-separates along the line or leaves it as a mirror pair
//! `s` and `1 - conj(s)`.  The machinery here locates these events as
//! bifurcations of the rotated line function `z(t, tau)` and continues the
//! branches through them.

mod census;
mod classify;
mod collision;
mod trace;

pub use census::{
    assemble_census, census, census_guards, census_seeds, census_step_control, position_at,
    trace_seed, Census,
};
pub use classify::{classify_theorem3, ConditionTriple, Orientation, Theorem3Report};
pub use collision::{
    detect_double_zero, local_quadratic_fit, DoubleZeroEvent, LocalQuadraticModel,
};
pub use trace::trace;

use num_complex::Complex;

use crate::error::Error;
use crate::func::ComplexFn;
use crate::lfunc::FunctionSpec;
use crate::scalar::{Cx, Scalar};

/// A one-parameter family `f(s, tau)` of functions holomorphic in `s`.
///
/// The trajectory machinery needs point values with two s-derivatives, the
/// tau-derivative with one s-derivative, and a rotation phase `alpha(t)`
/// making `e^{i alpha(t)} f(1/2 + it, tau)` real for every `tau` (the line
/// symmetry that confines colliding zero pairs to the critical line).
/// [`ZetaFamily`] is the instance under study; tests plant small synthetic
/// families.
pub trait Family<T: Scalar>: Sync {
    /// s-derivatives `0..=dmax` of `f(s, tau)`; entries above `dmax` are
    /// unspecified.
    fn f_all(&self, s: Cx<T>, tau: T, dmax: usize) -> Result<[Cx<T>; 3], Error>;

    /// s-derivatives `0..=dmax` (`dmax <= 1`) of `df/dtau (s, tau)`.
    fn f_tau_all(&self, s: Cx<T>, tau: T, dmax: usize) -> Result<[Cx<T>; 2], Error>;

    /// Rotation phase `alpha(t)` and its first two t-derivatives.
    fn rotation(&self, t: T) -> Result<(T, T, T), Error>;

    /// Closed tau-domain of the family; probes are clamped to it.
    fn tau_domain(&self) -> (T, T) {
        (T::neg_infinity(), T::infinity())
    }
}

/// The family `f(s, tau) = (1 - tau)(1 + sqrt(5) 5^{-s}) zeta(s) + tau L(s, psi)`.
///
/// All members share the conductor-5 functional equation, so the rotation
/// phase is tau-independent and is served by a cached member spec.
pub struct ZetaFamily<T: Scalar> {
    rot_spec: FunctionSpec<T>,
}

impl<T: Scalar> ZetaFamily<T> {
    pub fn new() -> Self {
        ZetaFamily {
            rot_spec: FunctionSpec::factor_zeta(),
        }
    }
}

impl<T: Scalar> Default for ZetaFamily<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Family<T> for ZetaFamily<T> {
    fn f_all(&self, s: Cx<T>, tau: T, dmax: usize) -> Result<[Cx<T>; 3], Error> {
        let spec = FunctionSpec::family(tau)?;
        Ok(spec.eval_all(s, dmax)?.0)
    }

    fn f_tau_all(&self, s: Cx<T>, tau: T, dmax: usize) -> Result<[Cx<T>; 2], Error> {
        let _ = tau; // df/dtau = L - (1 + sqrt(5) 5^{-s}) zeta is tau-free.
        let (vals, _) = self.rot_spec.eval_dtau_all(s, dmax)?;
        Ok([vals[0], vals[1]])
    }

    fn rotation(&self, t: T) -> Result<(T, T, T), Error> {
        crate::lfunc::rotation_phase(&self.rot_spec, t)
    }

    fn tau_domain(&self) -> (T, T) {
        (T::zero(), T::one())
    }
}

/// Which function's zeros a trajectory follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Zeros of `f(s, tau)`.
    F,
    /// Zeros of the s-derivative `f'_s(s, tau)`.
    Fprime,
}

impl Target {
    /// Derivative offset: the target function is `f^(offset)`.
    pub(crate) fn offset(self) -> usize {
        match self {
            Target::F => 0,
            Target::Fprime => 1,
        }
    }
}

/// Which branch a trajectory follows when a collision throws it off the line
/// (or back onto it).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchRule {
    /// Continue on the branch with the smaller real part (lower ordinate when
    /// landing on the line).
    Left,
    /// Mirror of [`BranchRule::Left`].
    Right,
    /// Decide from the side of the collision the trajectory came from: the
    /// lower-ordinate member of a colliding line pair continues left, the
    /// upper one right; a left-of-line member lands on the lower line zero.
    BySide,
}

/// How a traced trajectory relates to the critical line.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification<T: Scalar> {
    /// Every sample satisfies `|Re rho - 1/2| < 1e-9`.
    StaysOnLine,
    /// The trajectory departs the line at the double zero `rho` at `tau`.
    LeavesAt { tau: T, rho: Cx<T> },
    /// Tracing could not be completed.
    Incomplete { reason: String },
}

/// A traced zero trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Scalar> {
    /// Function whose zero is followed.
    pub target: Target,
    /// Ordered `(tau, rho)` samples, each with `|f(rho, tau)| < 1e-9`
    /// (`|f'_s|` for the derivative target).
    pub samples: Vec<(T, Cx<T>)>,
    /// Line behavior over the traced range.
    pub classification: Classification<T>,
    /// Double-zero events encountered, in tau order.
    pub events: Vec<DoubleZeroEvent<T>>,
}

impl<T: Scalar> Trajectory<T> {
    /// First and last `(tau, rho)` samples.
    pub fn endpoints(&self) -> ((T, Cx<T>), (T, Cx<T>)) {
        (self.samples[0], *self.samples.last().unwrap())
    }
}

/// Adaptive step control for [`trace`].
///
/// The tau step starts at `dtau_init`, halves whenever the corrector shows
/// stress (more than `stress_iters` Newton iterations, a small target
/// derivative, or a rejected step), and doubles after `easy_streak` calm
/// steps, always staying in `[dtau_min, dtau_max]`.  A stalled step at the
/// floor with `|f_s|` below `fs_floor` engages the collision protocol.
#[derive(Debug, Clone)]
pub struct StepControl<T: Scalar> {
    pub dtau_init: T,
    pub dtau_min: T,
    pub dtau_max: T,
    /// Calm steps before the step size doubles.
    pub easy_streak: u32,
    /// Corrector iterations beyond this count as stress.
    pub stress_iters: u32,
    /// Corrector iterations beyond this reject the step.
    pub max_corrector_iters: u32,
    /// `|f_s|` below this counts as near-singular.
    pub fs_floor: T,
    /// Corrector convergence: `|step| <= step_tol * (1 + |s|)`.
    pub step_tol: T,
    /// Every sample must satisfy `|f| < residual_cap`.
    pub residual_cap: T,
    /// A point is on the line when `|Re s - 1/2| < line_tol`.
    pub line_tol: T,
    /// Cap on `|rho_{k+1} - rho_k|` between consecutive samples.
    pub spacing_cap: T,
    /// Total accepted-step budget.
    pub max_steps: u64,
    /// Branch choice at collisions.
    pub branch: BranchRule,
}

impl<T: Scalar> Default for StepControl<T> {
    fn default() -> Self {
        StepControl {
            dtau_init: T::lit(1e-3),
            dtau_min: T::lit(1e-6),
            dtau_max: T::lit(1e-2),
            easy_streak: 5,
            stress_iters: 4,
            max_corrector_iters: 12,
            fs_floor: T::lit(1e-4),
            step_tol: T::lit(1e-12).max(T::epsilon() * T::lit(64.0)),
            residual_cap: T::lit(1e-9),
            line_tol: T::lit(1e-9),
            spacing_cap: T::lit(0.25),
            max_steps: 400_000,
            branch: BranchRule::BySide,
        }
    }
}

/// View of one family member at fixed `tau` as a [`ComplexFn`], with an
/// optional derivative offset (0 for `f`, 1 for `f'_s`).
pub(crate) struct FamilySlice<'a, T: Scalar, F: Family<T> + ?Sized> {
    pub fam: &'a F,
    pub tau: T,
    pub offset: u8,
}

impl<'a, T: Scalar, F: Family<T> + ?Sized> ComplexFn<T> for FamilySlice<'a, T, F> {
    fn eval_n(&self, s: Cx<T>, deriv: u8) -> Result<Cx<T>, Error> {
        let d = (deriv + self.offset) as usize;
        if d > 2 {
            return Err(Error::InvalidInput {
                what: format!("family slice derivative order {d} > 2"),
            });
        }
        Ok(self.fam.f_all(s, self.tau, d)?[d])
    }
}

/// `z(t, tau) = Re(e^{i alpha(t)} f(1/2 + it, tau))` with t-derivatives up to
/// `dmax`; real on the line with `|z| = |f|`.
pub(crate) fn z_vals<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    t: T,
    tau: T,
    dmax: usize,
) -> Result<[T; 3], Error> {
    let (alpha, a1, a2) = fam.rotation(t)?;
    let s = Complex::new(T::lit(0.5), t);
    let f = fam.f_all(s, tau, dmax.min(2))?;
    let rot = Complex::from_polar(T::one(), alpha);
    let i = Complex::new(T::zero(), T::one());
    let mut out = [T::zero(); 3];
    out[0] = (rot * f[0]).re;
    if dmax >= 1 {
        out[1] = (i * rot * (f[0] * a1 + f[1])).re;
        if dmax >= 2 {
            let inner = -f[0] * (a1 * a1) - f[1] * (a1 + a1) + i * f[0] * a2 - f[2];
            out[2] = (rot * inner).re;
        }
    }
    Ok(out)
}

/// tau-derivatives of the rotated line sample: `(z_tau, z_t_tau)`.  The
/// rotation is tau-free, so these reduce to rotated values of `f_tau`.
pub(crate) fn z_tau_vals<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    t: T,
    tau: T,
    dmax: usize,
) -> Result<(T, T), Error> {
    let (alpha, a1, _) = fam.rotation(t)?;
    let s = Complex::new(T::lit(0.5), t);
    let ft = fam.f_tau_all(s, tau, dmax.min(1))?;
    let rot = Complex::from_polar(T::one(), alpha);
    let z_tau = (rot * ft[0]).re;
    let z_t_tau = if dmax >= 1 {
        let i = Complex::new(T::zero(), T::one());
        (i * rot * (ft[0] * a1 + ft[1])).re
    } else {
        T::zero()
    };
    Ok((z_tau, z_t_tau))
}

/// Ordinates of sign-change zeros of `z(., tau)` in `[t_lo, t_hi]`, on a grid
/// of `n` intervals, each bracket bisected to roundoff.  Tangential zeros are
/// invisible by design; the collision detector exploits exactly that.
pub(crate) fn z_sign_zeros<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    tau: T,
    t_lo: T,
    t_hi: T,
    n: usize,
) -> Result<Vec<T>, Error> {
    if !(t_lo < t_hi) || n < 2 {
        return Err(Error::InvalidInput {
            what: format!("bad sign-scan window [{t_lo}, {t_hi}] / {n}"),
        });
    }
    let nt = T::from_usize(n).unwrap();
    let step = (t_hi - t_lo) / nt;
    let mut zeros = Vec::new();
    let mut t_prev = t_lo;
    let mut z_prev = z_vals(fam, t_prev, tau, 0)?[0];
    for k in 1..=n {
        let t_next = if k == n {
            t_hi
        } else {
            t_lo + step * T::from_usize(k).unwrap()
        };
        let z_next = z_vals(fam, t_next, tau, 0)?[0];
        if z_prev == T::zero() {
            zeros.push(t_prev);
        } else if z_prev * z_next < T::zero() {
            let (mut a, mut za) = (t_prev, z_prev);
            let mut b = t_next;
            for _ in 0..60 {
                let mid = (a + b) * T::lit(0.5);
                if mid <= a || mid >= b {
                    break;
                }
                let zm = z_vals(fam, mid, tau, 0)?[0];
                if zm == T::zero() {
                    a = mid;
                    break;
                }
                if za * zm < T::zero() {
                    b = mid;
                } else {
                    a = mid;
                    za = zm;
                }
            }
            zeros.push((a + b) * T::lit(0.5));
        }
        t_prev = t_next;
        z_prev = z_next;
    }
    if z_prev == T::zero() {
        zeros.push(t_prev);
    }
    Ok(zeros)
}


#[cfg(test)]
mod tests {
    use super::testfam::*;
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn zeta_family_matches_member_specs() {
        let fam = ZetaFamily::<f64>::new();
        let s = cx(0.7, 21.3);
        for &tau in &[0.0, 0.37, 1.0] {
            let spec = FunctionSpec::<f64>::family(tau).unwrap();
            let direct = spec.eval(s, 1).unwrap().value;
            let via = fam.f_all(s, tau, 1).unwrap()[1];
            assert!((direct - via).norm() < 1e-12 * (1.0 + direct.norm()));
        }
        // Finite-difference check of the tau-derivative.
        let h = 1e-6;
        let lo = fam.f_all(s, 0.5 - h, 0).unwrap()[0];
        let hi = fam.f_all(s, 0.5 + h, 0).unwrap()[0];
        let fd = (hi - lo) / (2.0 * h);
        let ft = fam.f_tau_all(s, 0.5, 0).unwrap()[0];
        assert!((fd - ft).norm() < 1e-7 * (1.0 + ft.norm()), "{fd} vs {ft}");
    }

    #[test]
    fn rotated_sample_is_real_for_family_members() {
        // |z| = |f| on the line pins the rotation phase.
        let fam = ZetaFamily::<f64>::new();
        for &(t, tau) in &[(14.3, 0.0), (21.0, 0.5), (33.7, 1.0)] {
            let z = z_vals(&fam, t, tau, 0).unwrap()[0];
            let f = fam.f_all(cx(0.5, t), tau, 0).unwrap()[0];
            assert!(
                (z.abs() - f.norm()).abs() < 1e-10 * (1.0 + f.norm()),
                "t = {t}, tau = {tau}: |z| = {} vs |f| = {}",
                z.abs(),
                f.norm()
            );
        }
    }

    #[test]
    fn z_derivatives_match_finite_differences() {
        let fam = TiltedPinch {
            tau0: 0.5,
            c: 2.0,
            beta: -0.5,
        };
        let (t, tau) = (0.8, 0.3);
        let h = 1e-5;
        let z = |t: f64| z_vals(&fam, t, tau, 0).unwrap()[0];
        let all = z_vals(&fam, t, tau, 2).unwrap();
        let d1 = (z(t + h) - z(t - h)) / (2.0 * h);
        let d2 = (z(t + h) - 2.0 * z(t) + z(t - h)) / (h * h);
        assert!((all[1] - d1).abs() < 1e-8 * (1.0 + d1.abs()), "{} vs {d1}", all[1]);
        assert!((all[2] - d2).abs() < 1e-5 * (1.0 + d2.abs()), "{} vs {d2}", all[2]);

        let (zt, ztt) = z_tau_vals(&fam, t, tau, 1).unwrap();
        let zq = |tau: f64| z_vals(&fam, t, tau, 0).unwrap()[0];
        let dq = (zq(tau + h) - zq(tau - h)) / (2.0 * h);
        assert!((zt - dq).abs() < 1e-8 * (1.0 + dq.abs()));
        let zqt = |tt: f64| z_tau_vals(&fam, tt, tau, 0).unwrap().0;
        let dqt = (zqt(t + h) - zqt(t - h)) / (2.0 * h);
        assert!((ztt - dqt).abs() < 1e-8 * (1.0 + dqt.abs()));
    }

    #[test]
    fn sign_scan_finds_the_pinch_pair() {
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        // Before the event: pair at ±1 for tau = 0.
        let zs = z_sign_zeros(&fam, 0.0, -2.0, 2.0, 64).unwrap();
        assert_eq!(zs.len(), 2, "{zs:?}");
        assert!((zs[0] + 1.0).abs() < 1e-12 && (zs[1] - 1.0).abs() < 1e-12);
        // After: no line zeros.
        let zs = z_sign_zeros(&fam, 0.9, -2.0, 2.0, 64).unwrap();
        assert!(zs.is_empty(), "{zs:?}");
    }

    #[test]
    fn family_slice_serves_shifted_derivatives() {
        let fam = Planted {
            z1: cx(0.45, 2.0),
            z2: cx(0.55, 2.0),
        };
        let slice = FamilySlice {
            fam: &fam,
            tau: 0.0,
            offset: 1,
        };
        let s = cx(0.3, 1.7);
        let direct = fam.f_all(s, 0.0, 2).unwrap();
        assert_eq!(slice.eval_n(s, 0).unwrap(), direct[1]);
        assert_eq!(slice.eval_n(s, 1).unwrap(), direct[2]);
        assert!(slice.eval_n(s, 2).is_err());
    }
}
