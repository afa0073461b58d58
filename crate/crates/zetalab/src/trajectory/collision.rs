//! Double-zero events on the critical line and the local quadratic model.
//!
//! A collision is a parameter value `tau0` where two line zeros of
//! `f(., tau)` merge: `f(rho0, tau0) = f'_s(rho0, tau0) = 0` with
//! `f''_s(rho0, tau0) != 0` and `Re rho0 = 1/2`.  On the rotated line
//! function `z(t, tau)` this is a tangency `z = z_t = 0`, so the sign-change
//! count in a fixed t-bracket drops from 2 to 0 as `tau` crosses `tau0`.
//! Detection bisects on that count and polishes `(t, tau)` with a
//! two-dimensional Newton iteration on `(z, z_t)`.
//!
//! Near the event, Weierstrass preparation writes `f = u(s, tau) p(s, tau)`
//! with `p` a monic quadratic; its roots are the colliding pair.  The fit
//! here recovers `p` from the two zeros found inside a verification disk.

use num_complex::Complex;

use super::{z_sign_zeros, z_tau_vals, z_vals, Family, FamilySlice};
use crate::error::Error;
use crate::scalar::{Cx, Scalar};
use crate::zero::{scan_zeros, winding_count_nudged, Contour, Rect, ScanParams, WindingParams};

/// Event invariants: `|f| < 1e-8`, `|f'_s| < 1e-6`, `|f''_s| > 1e-4`.
pub(crate) const EVENT_F_TOL: f64 = 1e-8;
pub(crate) const EVENT_FS_TOL: f64 = 1e-6;
pub(crate) const EVENT_FSS_FLOOR: f64 = 1e-4;

/// A double zero of `f(., tau0)` on the critical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleZeroEvent<T: Scalar> {
    /// Collision parameter.
    pub tau0: T,
    /// Collision point; `Re rho0 = 1/2` exactly by construction.
    pub rho0: Cx<T>,
    /// `f''_s(rho0, tau0)`, nonzero.
    pub f_second_deriv: Cx<T>,
}

/// Monic quadratic local model `p(s) = s^2 + a1 s + a0` of `f(., tau)` near a
/// collision, with its labeled roots.
///
/// The roots are `(-a1 ± sqrt(a1^2 - 4 a0)) / 2`; `roots.0` carries the
/// principal branch of the square root (`Re >= 0`, positive imaginary part on
/// the negative real axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalQuadraticModel<T: Scalar> {
    pub tau: T,
    pub a1: Cx<T>,
    pub a0: Cx<T>,
    /// `(s1, s2)` with `s1 + s2 = -a1` and `s1 s2 = a0`.
    pub roots: (Cx<T>, Cx<T>),
    /// `a1^2 - 4 a0 = (s1 - s2)^2`.
    pub discriminant: Cx<T>,
}

impl<T: Scalar> LocalQuadraticModel<T> {
    /// Root with the smaller real part (the left member of a mirror pair).
    pub fn left_root(&self) -> Cx<T> {
        if self.roots.0.re <= self.roots.1.re {
            self.roots.0
        } else {
            self.roots.1
        }
    }

    /// Root with the larger real part.
    pub fn right_root(&self) -> Cx<T> {
        if self.roots.0.re <= self.roots.1.re {
            self.roots.1
        } else {
            self.roots.0
        }
    }

    /// Lower-ordinate root (the natural "lower" member of a line pair).
    pub fn lower_root(&self) -> Cx<T> {
        if self.roots.0.im <= self.roots.1.im {
            self.roots.0
        } else {
            self.roots.1
        }
    }

    /// Upper-ordinate root.
    pub fn upper_root(&self) -> Cx<T> {
        if self.roots.0.im <= self.roots.1.im {
            self.roots.1
        } else {
            self.roots.0
        }
    }
}

/// Sign-change zero count of `z(., tau)` in a bracket, on a 96-interval grid.
pub(crate) fn line_count<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    tau: T,
    t_bracket: (T, T),
) -> Result<usize, Error> {
    Ok(z_sign_zeros(fam, tau, t_bracket.0, t_bracket.1, 96)?.len())
}

/// Locates a collision of two line zeros inside the given brackets.
///
/// Preconditions: the sign-change count of `z(., tau)` in `t_bracket` must be
/// exactly 2 at one end of `tau_bracket` and 0 at the other.  Equal counts
/// report [`Error::NoCollision`]; any other combination is rejected as
/// invalid input.  The returned event has `Re rho0 = 1/2` exactly.
pub fn detect_double_zero<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    t_bracket: (T, T),
    tau_bracket: (T, T),
) -> Result<DoubleZeroEvent<T>, Error> {
    let (t_lo, t_hi) = t_bracket;
    let (tau_lo, tau_hi) = tau_bracket;
    if !(t_lo < t_hi) || !(tau_lo < tau_hi) {
        return Err(Error::InvalidInput {
            what: format!(
                "collision brackets t in [{t_lo}, {t_hi}], tau in [{tau_lo}, {tau_hi}] are empty"
            ),
        });
    }

    let c_lo = line_count(fam, tau_lo, t_bracket)?;
    let c_hi = line_count(fam, tau_hi, t_bracket)?;
    if c_lo == c_hi {
        return Err(Error::NoCollision {
            tau_lo: tau_lo.as_f64(),
            tau_hi: tau_hi.as_f64(),
        });
    }
    let (mut two, mut none) = match (c_lo, c_hi) {
        (2, 0) => (tau_lo, tau_hi),
        (0, 2) => (tau_hi, tau_lo),
        _ => {
            return Err(Error::InvalidInput {
                what: format!(
                    "collision bracket counts ({c_lo}, {c_hi}) are not a 2/0 pair"
                ),
            })
        }
    };

    // Bisect on the count.  Near the event the pair separation shrinks below
    // the scan grid and counts read 0; that only shifts the hand-off point,
    // which the 2D Newton polish absorbs.
    let mut pair = z_sign_zeros(fam, two, t_lo, t_hi, 96)?;
    let width_tol = T::lit(1e-9) * (T::one() + tau_lo.abs().max(tau_hi.abs()));
    for _ in 0..60 {
        if (none - two).abs() <= width_tol {
            break;
        }
        let mid = (two + none) * T::lit(0.5);
        let zs = z_sign_zeros(fam, mid, t_lo, t_hi, 96)?;
        if zs.len() >= 2 {
            two = mid;
            pair = zs;
        } else {
            none = mid;
        }
    }

    let mut t = if pair.len() >= 2 {
        (pair[0] + pair[pair.len() - 1]) * T::lit(0.5)
    } else {
        (t_lo + t_hi) * T::lit(0.5)
    };
    let mut tau = (two + none) * T::lit(0.5);

    // Newton on (z, z_t)(t, tau).  The Jacobian determinant at the solution
    // is -z_tau * z_tt, nonzero for a transversal collision.
    let (dom_lo, dom_hi) = fam.tau_domain();
    let span = tau_hi - tau_lo;
    let (excur_lo, excur_hi) = (
        (tau_lo - span).max(dom_lo),
        (tau_hi + span).min(dom_hi),
    );
    let tol = T::lit(1e-13);
    let mut iterations = 0u32;
    let mut converged = false;
    while iterations < 40 {
        iterations += 1;
        let z = z_vals(fam, t, tau, 2)?;
        let (z_tau, z_t_tau) = z_tau_vals(fam, t, tau, 1)?;
        let det = z[1] * z_t_tau - z_tau * z[2];
        if det == T::zero() || !det.is_finite() {
            break;
        }
        let dt = -(z[0] * z_t_tau - z_tau * z[1]) / det;
        let dq = -(z[1] * z[1] - z[0] * z[2]) / det;
        t = t + dt;
        tau = (tau + dq).max(excur_lo).min(excur_hi);
        if t < t_lo - (t_hi - t_lo) || t > t_hi + (t_hi - t_lo) {
            return Err(Error::NoCollision {
                tau_lo: tau_lo.as_f64(),
                tau_hi: tau_hi.as_f64(),
            });
        }
        if dt.abs() <= tol * (T::one() + t.abs()) && dq.abs() <= tol * (T::one() + tau.abs()) {
            converged = true;
            break;
        }
    }

    let rho0 = Complex::new(T::lit(0.5), t);
    let f = fam.f_all(rho0, tau, 2)?;
    let residual = f[0].norm();
    if !converged || residual >= T::lit(EVENT_F_TOL) || f[1].norm() >= T::lit(EVENT_FS_TOL) {
        return Err(Error::NewtonDiverged {
            iterations,
            re: rho0.re.as_f64(),
            im: rho0.im.as_f64(),
            residual: residual.max(f[1].norm()).as_f64(),
        });
    }
    if f[2].norm() <= T::lit(EVENT_FSS_FLOOR) {
        return Err(Error::SecondDerivativeVanishes {
            tau: tau.as_f64(),
            re: rho0.re.as_f64(),
            im: rho0.im.as_f64(),
            f_ss_abs: f[2].norm().as_f64(),
        });
    }
    Ok(DoubleZeroEvent {
        tau0: tau,
        rho0,
        f_second_deriv: f[2],
    })
}

/// Fits the monic quadratic with the two zeros of `f(., tau)` inside the disk
/// `|s - center| <= radius`.
///
/// The disk must contain exactly 2 zeros with multiplicity (verified by a
/// winding count; [`Error::WrongZeroCount`] otherwise).  The zeros themselves
/// come from a rectangle scan clipped to the disk.
pub fn local_quadratic_fit<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    tau: T,
    center: Cx<T>,
    radius: T,
) -> Result<LocalQuadraticModel<T>, Error> {
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::InvalidInput {
            what: format!("quadratic fit radius {radius} must be positive"),
        });
    }
    let slice = FamilySlice {
        fam,
        tau,
        offset: 0,
    };
    let winding = WindingParams::default();
    let (count, _) =
        winding_count_nudged(&slice, &Contour::circle(center, radius), 0, &winding)?;
    if count != 2 {
        return Err(Error::WrongZeroCount {
            expected: 2,
            found: count,
        });
    }

    // Scan a bounding square, then clip to the disk; the square may hold
    // extra corner zeros, the disk cannot.
    let pad = radius * T::lit(1.02);
    let rect = Rect::new(
        center.re - pad,
        center.re + pad,
        center.im - pad,
        center.im + pad,
    );
    let mut params: ScanParams<T> = ScanParams::default();
    params.min_cell = params.min_cell.min(radius * T::lit(1e-4)).max(
        T::epsilon() * T::lit(64.0) * (T::one() + center.norm()),
    );
    let records = scan_zeros(&slice, &rect, 0, &params)?;
    let in_disk = radius * (T::one() + T::lit(1e-9));
    let mut found: Vec<Cx<T>> = Vec::new();
    for rec in &records {
        if (rec.rho - center).norm() <= in_disk {
            for _ in 0..rec.multiplicity {
                found.push(rec.rho);
            }
        }
    }
    if found.len() != 2 {
        return Err(Error::WrongZeroCount {
            expected: 2,
            found: found.len() as i64,
        });
    }

    let (za, zb) = (found[0], found[1]);
    let a1 = -(za + zb);
    let a0 = za * zb;
    let disc = a1 * a1 - a0 * T::lit(4.0);
    let sq = disc.sqrt();
    let half = T::lit(0.5);
    let s1 = (-a1 + sq) * half;
    let s2 = (-a1 - sq) * half;
    Ok(LocalQuadraticModel {
        tau,
        a1,
        a0,
        roots: (s1, s2),
        discriminant: disc,
    })
}

#[cfg(test)]
mod tests {
    use super::super::testfam::*;
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn planted_product_is_recovered() {
        let fam = Planted {
            z1: cx(0.41, 1.93),
            z2: cx(0.62, 2.11),
        };
        let m = local_quadratic_fit(&fam, 0.0, cx(0.5, 2.0), 0.4).unwrap();
        let (lo, hi) = (m.lower_root(), m.upper_root());
        assert!((lo - fam.z1).norm() < 1e-9, "{lo}");
        assert!((hi - fam.z2).norm() < 1e-9, "{hi}");
        // Vieta relations hold as identities of the fit.
        assert!((m.roots.0 + m.roots.1 + m.a1).norm() < 1e-12);
        assert!((m.roots.0 * m.roots.1 - m.a0).norm() < 1e-12);
        // Principal branch: roots.0 carries Re sqrt >= 0.
        let sq = m.discriminant.sqrt();
        assert!(sq.re >= 0.0);
        assert!(((m.roots.0 - m.roots.1) - sq).norm() < 1e-12);
    }

    #[test]
    fn mirror_pair_fit_reflects_across_the_line() {
        let fam = Planted {
            z1: cx(0.45, 2.0),
            z2: cx(0.55, 2.0),
        };
        let m = local_quadratic_fit(&fam, 0.0, cx(0.5, 2.0), 0.3).unwrap();
        let (s1, s2) = m.roots;
        let mirror = cx::<f64>(1.0, 0.0) - s1.conj();
        assert!((s2 - mirror).norm() < 1e-8, "{s2} vs {mirror}");
        // Real positive discriminant for a mirror pair.
        assert!(m.discriminant.re > 0.0 && m.discriminant.im.abs() < 1e-10);
    }

    #[test]
    fn wrong_count_is_reported() {
        let fam = Planted {
            z1: cx(0.41, 1.93),
            z2: cx(0.62, 2.11),
        };
        // Disk holding only one zero.
        let err = local_quadratic_fit(&fam, 0.0, cx(0.41, 1.93), 0.05).unwrap_err();
        assert!(matches!(
            err,
            Error::WrongZeroCount {
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn pinch_discriminant_vanishes_at_the_event() {
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        // At the event tau0 the disk holds the double zero; discriminant -> 0.
        let m = local_quadratic_fit(&fam, 0.5, cx(0.5, 0.0), 0.2).unwrap();
        assert!(m.discriminant.norm() < 1e-7, "{}", m.discriminant);
        assert!((m.roots.0 - m.roots.1).norm() < 1e-3);
        // Just before: a line pair, real negative discriminant.
        let m = local_quadratic_fit(&fam, 0.4, cx(0.5, 0.0), 0.8).unwrap();
        assert!(m.discriminant.re < 0.0 && m.discriminant.im.abs() < 1e-9);
        assert!((m.roots.0.re - 0.5).abs() < 1e-9 && (m.roots.1.re - 0.5).abs() < 1e-9);
        // Just after: a mirror pair, real positive discriminant.
        let m = local_quadratic_fit(&fam, 0.6, cx(0.5, 0.0), 0.8).unwrap();
        assert!(m.discriminant.re > 0.0 && m.discriminant.im.abs() < 1e-9);
        assert!(m.left_root().re < 0.5 && m.right_root().re > 0.5);
    }

    #[test]
    fn pinch_collision_is_located() {
        let fam = Pinch {
            tau0: 0.3125,
            c: 2.0,
        };
        // Counts: 2 line zeros before tau0, none after.
        let ev = detect_double_zero(&fam, (-1.5, 1.5), (0.05, 0.6)).unwrap();
        assert!((ev.tau0 - 0.3125).abs() < 1e-8, "tau0 = {}", ev.tau0);
        assert_eq!(ev.rho0.re, 0.5);
        assert!(ev.rho0.im.abs() < 1e-8);
        assert!((ev.f_second_deriv - cx(2.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn tilted_pinch_collision_survives_a_rotation() {
        let fam = TiltedPinch {
            tau0: 0.4,
            c: 1.0,
            beta: -0.5,
        };
        let ev = detect_double_zero(&fam, (-1.2, 1.2), (0.1, 0.9)).unwrap();
        assert!((ev.tau0 - 0.4).abs() < 1e-8, "tau0 = {}", ev.tau0);
        assert!(ev.rho0.im.abs() < 1e-8);
    }

    #[test]
    fn reversed_orientation_is_accepted() {
        // Negative c flips the pinch: the pair lands on the line at tau0
        // instead of leaving it, so counts run 0 -> 2.
        let fam = Pinch { tau0: 0.2, c: -1.0 };
        let ev = detect_double_zero(&fam, (-1.0, 1.0), (0.05, 0.9)).unwrap();
        assert!((ev.tau0 - 0.2).abs() < 1e-8);
    }

    #[test]
    fn non_colliding_pair_reports_no_collision() {
        let fam = NonColliding;
        let err = detect_double_zero(&fam, (0.5, 3.5), (0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::NoCollision { .. }));
    }

    #[test]
    fn malformed_count_pairs_are_rejected() {
        // A bracket holding only the lower zero: counts (1, 1) at both ends
        // -> equal counts -> no collision; counts (2, 1) style mismatches are
        // invalid input.
        let fam = NonColliding;
        let err = detect_double_zero(&fam, (0.5, 1.8), (0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::NoCollision { .. }));
        let fam2 = Pinch { tau0: 0.5, c: 2.0 };
        // Bracket catching one zero of the pair before, none after: (1, 0).
        let err = detect_double_zero(&fam2, (0.2, 1.5), (0.0, 0.9)).unwrap_err();
        assert!(matches!(err, Error::InvalidInput { .. }));
    }
}
