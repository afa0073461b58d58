//! Speiser-type comparisons: zeros of `F` versus zeros of `F'` strictly left
//! of the critical line.
//!
//! The region is `{ |s - s0| <= r, Re s < 1/2 }`.  Its boundary is the arc
//! left of the line plus the chord on the line itself; critical-line zeros of
//! `F` inside the chord are bypassed through small semicircular indentations
//! bulging into the region, so they count for neither side.  For members of
//! the class under study the two counts agree; the comparison is reported,
//! not assumed, so synthetic functions violating the functional-equation
//! symmetry simply produce `equal = false`.

use crate::error::Error;
use crate::lfunc::{line_zeros, FunctionSpec, LineZerosParams};
use crate::scalar::{Cx, Scalar};
use crate::zero::{
    winding_count, zero_free_annulus, AnnulusParams, AnnulusResult, Contour, WindingParams,
};

/// Critical-line abscissa shared by every member of the family.
fn half<T: Scalar>() -> T {
    T::lit(0.5)
}

/// Controls for the half-disk comparisons.
#[derive(Debug, Clone)]
pub struct SpeiserParams<T: Scalar> {
    /// Indentation radius as a fraction of the half-disk radius.
    pub indent_factor: T,
    pub winding: WindingParams<T>,
    pub line: LineZerosParams<T>,
}

impl<T: Scalar> Default for SpeiserParams<T> {
    fn default() -> Self {
        SpeiserParams {
            indent_factor: T::lit(1e-7),
            winding: WindingParams::default(),
            line: LineZerosParams::default(),
        }
    }
}

/// Outcome of one half-disk comparison.
#[derive(Debug, Clone)]
pub struct SpeiserReport<T: Scalar> {
    /// Disk center, `Re s0 <= 1/2`.
    pub s0: Cx<T>,
    /// Disk radius.
    pub r: T,
    /// Zeros of `F` in the open region (with multiplicity).
    pub n_f: i64,
    /// Zeros of `F'` in the open region (with multiplicity).
    pub n_fprime: i64,
    /// `n_f == n_fprime`.
    pub equal: bool,
    /// Shell-search outcome when the radius came from the annulus pipeline.
    pub annulus: Option<AnnulusResult<T>>,
    /// Critical-line ordinates bypassed by indentations.
    pub line_zeros_bypassed: Vec<T>,
}

/// Count zeros of `F` and of `F'` in `{ |s - s0| <= r, Re s < 1/2 }` and
/// compare.
///
/// Critical-line zeros of `F` falling inside the chord are excluded from both
/// counts via indentations of radius `indent_factor * r`.  The contour is
/// never nudged: the region is part of the statement being checked, so a
/// zero of either function on the arc surfaces as
/// [`Error::ZeroOnContour`] for the caller to resolve by changing `r`.
pub fn speiser_compare<T: Scalar>(
    spec: &FunctionSpec<T>,
    s0: Cx<T>,
    r: T,
    params: &SpeiserParams<T>,
) -> Result<SpeiserReport<T>, Error> {
    let h = half::<T>();
    if !(s0.re <= h) || !(h - r < s0.re) {
        return Err(Error::InvalidInput {
            what: format!("need 1/2 - r < Re s0 <= 1/2; got Re s0 = {}, r = {r}", s0.re),
        });
    }
    if !(r > T::zero()) {
        return Err(Error::InvalidInput {
            what: format!("half-disk radius must be positive; got {r}"),
        });
    }

    // Chord extent on the critical line.
    let q = (h - s0.re) / r;
    let half_chord = r * (T::one() - q * q).sqrt();
    let t_bot = s0.im - half_chord;
    let t_top = s0.im + half_chord;

    // Critical-line zeros of F inside the chord get bypassed.  The window is
    // padded a hair so a zero just outside cannot be missed by the scan and
    // then collide with the corner margin check.
    let pad = half_chord * T::lit(1e-3);
    let bypass = line_zeros(spec, t_bot - pad, t_top + pad, &params.line)?;

    let indent_radius = params.indent_factor * r;
    let contour = Contour::half_disk_left(s0, r, h, &bypass, indent_radius)?;

    let n_f = winding_count(spec, &contour, 0, &params.winding)?;
    let n_fprime = winding_count(spec, &contour, 1, &params.winding)?;

    Ok(SpeiserReport {
        s0,
        r,
        n_f,
        n_fprime,
        equal: n_f == n_fprime,
        annulus: None,
        line_zeros_bypassed: bypass
            .into_iter()
            .filter(|&g| g > t_bot && g < t_top)
            .collect(),
    })
}

/// Full pipeline at height `T`: find a certified zero-free circle radius
/// around `1/2 + iT` by the shell search, then run the half-disk comparison
/// at that radius.
///
/// `c` is the representable surrogate for the theorem-scale decay constant
/// (whose literal radii underflow); the pigeonhole structure is preserved.
pub fn speiser_pipeline<T: Scalar>(
    spec: &FunctionSpec<T>,
    t: T,
    c: T,
    shells: u32,
    delta: T,
    params: &SpeiserParams<T>,
) -> Result<SpeiserReport<T>, Error> {
    let s0 = Cx::new(half::<T>(), t);
    let annulus_params = AnnulusParams {
        c,
        delta,
        k_max: shells,
        winding: params.winding,
    };
    let annulus = zero_free_annulus(spec, s0, &annulus_params)?;
    let mut report = speiser_compare(spec, s0, annulus.r_final, params)?;
    report.annulus = Some(annulus);
    Ok(report)
}

/// Controls for [`spira_line_check`].
#[derive(Debug, Clone, Copy)]
pub struct SpiraParams<T: Scalar> {
    /// `|F'(1/2 + it)|` below this flags a candidate line zero of `F'`.
    pub theta1: T,
    /// `|F(1/2 + it)|` must be below this at every candidate.
    pub theta2: T,
}

impl<T: Scalar> Default for SpiraParams<T> {
    fn default() -> Self {
        SpiraParams {
            theta1: T::lit(1e-6),
            theta2: T::lit(1e-4),
        }
    }
}

/// A grid point where `|F'|` nearly vanishes on the line but `|F|` does not.
#[derive(Debug, Clone, Copy)]
pub struct SpiraViolation<T: Scalar> {
    pub t: T,
    pub f_abs: T,
    pub fprime_abs: T,
}

/// Check the line property "`F'(1/2+it) = 0` implies `F(1/2+it) = 0`" over
/// `[t_lo, t_hi]`: locate local minima of `|F'|` on a grid, refine each by
/// golden-section search, and report every minimum below `theta1` where
/// `|F|` stays above `theta2`.  An empty result means no violation.
pub fn spira_line_check<T: Scalar>(
    spec: &FunctionSpec<T>,
    t_lo: T,
    t_hi: T,
    grid_step: T,
    params: &SpiraParams<T>,
) -> Result<Vec<SpiraViolation<T>>, Error> {
    if !(t_lo < t_hi) || !(grid_step > T::zero()) {
        return Err(Error::InvalidInput {
            what: format!("bad spira window [{t_lo}, {t_hi}] step {grid_step}"),
        });
    }
    if t_hi > T::lit(500.0) {
        return Err(Error::InvalidInput {
            what: "spira check is calibrated for t <= 500".into(),
        });
    }
    let fprime_abs = |t: T| -> Result<T, Error> {
        Ok(spec.eval(Cx::new(half::<T>(), t), 1)?.value.norm())
    };

    let n = ((t_hi - t_lo) / grid_step).ceil().to_usize().unwrap_or(0).max(2);
    let mut grid = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = t_lo + (t_hi - t_lo) * T::from_usize(k).expect("grid index")
            / T::from_usize(n).expect("grid size");
        grid.push((t, fprime_abs(t)?));
    }

    let mut violations = Vec::new();
    for i in 1..n {
        let (tm, gm) = grid[i];
        if gm > grid[i - 1].1 || gm > grid[i + 1].1 {
            continue;
        }
        let (t_star, g_star) = golden_min(&fprime_abs, grid[i - 1].0, grid[i + 1].0)?;
        let _ = tm;
        if g_star < params.theta1 {
            let f_abs = spec.eval(Cx::new(half::<T>(), t_star), 0)?.value.norm();
            if f_abs >= params.theta2 {
                violations.push(SpiraViolation {
                    t: t_star,
                    f_abs,
                    fprime_abs: g_star,
                });
            }
        }
    }
    Ok(violations)
}

/// Golden-section minimization of a unimodal bracket.
fn golden_min<T: Scalar>(
    f: &dyn Fn(T) -> Result<T, Error>,
    mut a: T,
    mut b: T,
) -> Result<(T, T), Error> {
    let phi = (T::lit(5.0).sqrt() - T::one()) * half::<T>();
    let tol = T::lit(1e-10) * (T::one() + a.abs().max(b.abs()));
    let mut c = b - (b - a) * phi;
    let mut d = a + (b - a) * phi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * phi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * phi;
            fd = f(d)?;
        }
    }
    let mid = (a + b) * half::<T>();
    Ok((mid, f(mid)?))
}

/// Outcome of [`logderiv_negativity`].
#[derive(Debug, Clone)]
pub struct NegativityReport<T: Scalar> {
    /// Largest `Re F'/F(1/2 + it)` over the included grid points.
    pub worst: T,
    /// Ordinate attaining it.
    pub worst_t: T,
    /// Grid points skipped because `|F|` was at or below the exclusion floor.
    pub excluded: Vec<T>,
    /// Number of grid points actually evaluated.
    pub included: usize,
}

/// Points with `|F(1/2+it)|` at or below this are too close to a zero for
/// the log-derivative to mean anything.
const NEGATIVITY_EXCLUSION: f64 = 1e-4;

/// Maximum of `Re F'/F(1/2 + it)` over a grid on `[t_lo, t_hi]`.
///
/// For every family member this is `-alpha'(t)` exactly, hence negative once
/// `t` clears the small-height regime; the report carries the worst value so
/// callers can assert the sign at their chosen heights.
pub fn logderiv_negativity<T: Scalar>(
    spec: &FunctionSpec<T>,
    t_lo: T,
    t_hi: T,
    grid_step: T,
) -> Result<NegativityReport<T>, Error> {
    if !(t_lo < t_hi) || !(grid_step > T::zero()) {
        return Err(Error::InvalidInput {
            what: format!("bad negativity window [{t_lo}, {t_hi}] step {grid_step}"),
        });
    }
    let n = ((t_hi - t_lo) / grid_step).ceil().to_usize().unwrap_or(0).max(1);
    let mut worst = T::neg_infinity();
    let mut worst_t = t_lo;
    let mut excluded = Vec::new();
    let mut included = 0usize;
    for k in 0..=n {
        let t = t_lo + (t_hi - t_lo) * T::from_usize(k).expect("grid index")
            / T::from_usize(n).expect("grid size");
        let s = Cx::new(half::<T>(), t);
        let f0 = spec.eval(s, 0)?.value;
        if f0.norm() <= T::lit(NEGATIVITY_EXCLUSION) {
            excluded.push(t);
            continue;
        }
        let f1 = spec.eval(s, 1)?.value;
        let v = (f1 / f0).re;
        included += 1;
        if v > worst {
            worst = v;
            worst_t = t;
        }
    }
    if included == 0 {
        return Err(Error::InvalidInput {
            what: "every grid point fell inside the zero-exclusion floor".into(),
        });
    }
    Ok(NegativityReport {
        worst,
        worst_t,
        excluded,
        included,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    const GAMMA_1: f64 = 14.134725141734693;

    #[test]
    fn zeta_half_disk_at_first_zero_counts_zero_zero() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let rep = speiser_compare(
            &spec,
            cx(0.5, GAMMA_1),
            0.3,
            &SpeiserParams::default(),
        )
        .unwrap();
        assert_eq!(rep.n_f, 0, "line zero must be excluded by the indentation");
        assert_eq!(rep.n_fprime, 0);
        assert!(rep.equal);
        assert_eq!(rep.line_zeros_bypassed.len(), 1);
        assert!((rep.line_zeros_bypassed[0] - GAMMA_1).abs() < 1e-9);
    }

    #[test]
    fn tiny_disk_at_generic_point_is_empty() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let rep = speiser_compare(
            &spec,
            cx(0.5, 100.3),
            1e-6,
            &SpeiserParams::default(),
        )
        .unwrap();
        assert_eq!((rep.n_f, rep.n_fprime), (0, 0));
        assert!(rep.equal);
        assert!(rep.line_zeros_bypassed.is_empty());
    }

    #[test]
    fn halving_indentations_changes_nothing() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let params = SpeiserParams::default();
        let halved = SpeiserParams {
            indent_factor: 5e-8,
            ..SpeiserParams::default()
        };
        let a = speiser_compare(&spec, cx(0.5, GAMMA_1), 0.3, &params).unwrap();
        let b = speiser_compare(&spec, cx(0.5, GAMMA_1), 0.3, &halved).unwrap();
        assert_eq!((a.n_f, a.n_fprime), (b.n_f, b.n_fprime));
    }

    #[test]
    fn pipeline_chains_annulus_into_comparison() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let rep = speiser_pipeline(&spec, 100.0, 20.0, 8, 0.1, &SpeiserParams::default())
            .unwrap();
        assert!(rep.equal);
        assert_eq!((rep.n_f, rep.n_fprime), (0, 0));
        let ann = rep.annulus.as_ref().unwrap();
        assert!((rep.r - ann.r_final).abs() < 1e-15);
        assert!(ann.r_final > 0.0 && ann.r_final < 1.0);
    }

    #[test]
    fn preconditions_on_center_and_radius() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let p = SpeiserParams::default();
        // Center right of the line.
        assert!(speiser_compare(&spec, cx(0.6, 50.0), 0.3, &p).is_err());
        // Disk does not reach the line.
        assert!(speiser_compare(&spec, cx(0.1, 50.0), 0.3, &p).is_err());
        // Degenerate radius.
        assert!(speiser_compare(&spec, cx(0.5, 50.0), 0.0, &p).is_err());
    }

    #[test]
    fn spira_check_is_clean_for_zeta() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let v = spira_line_check(&spec, 10.0, 60.0, 0.05, &SpiraParams::default()).unwrap();
        assert!(v.is_empty(), "unexpected Spira violations: {v:?}");
    }

    #[test]
    fn logderiv_is_negative_and_tracks_the_asymptotic() {
        let spec = FunctionSpec::<f64>::riemann_zeta();
        let rep = logderiv_negativity(&spec, 10.0, 100.0, 0.5).unwrap();
        assert!(rep.worst < 0.0, "worst = {} at t = {}", rep.worst, rep.worst_t);
        // Anchor: -(d_F/2) log t - log Q with O(1) slack, at the easiest
        // point of the window.
        let q = 1.0 / std::f64::consts::PI.sqrt();
        let anchor = -0.5 * 10.0_f64.ln() - q.ln();
        assert!(rep.worst <= anchor + 1.0);
        assert!(rep.included > 150);
    }

    #[test]
    fn negative_control_reports_unequal_counts() {
        // Symmetric zero pair at 0.45/0.55 + 20i times exp(0.3 s): zeros are
        // line-symmetric but the critical point of the product is pushed off
        // the line, so n_F = 1 against n_F' = 0 — reported, not asserted.
        let z1 = cx::<f64>(0.45, 20.0);
        let z2 = cx::<f64>(0.55, 20.0);
        let f = move |s: Cx<f64>, d: u8| -> Result<Cx<f64>, Error> {
            let e = (s * 0.3).exp();
            let p = (s - z1) * (s - z2);
            let p1 = (s - z1) + (s - z2);
            Ok(match d {
                0 => p * e,
                1 => (p1 + p * 0.3) * e,
                _ => (cx::<f64>(2.0, 0.0) + p1 * 0.6 + p * 0.09) * e,
            })
        };
        let contour =
            Contour::half_disk_left(cx::<f64>(0.5, 20.0), 0.2, 0.5, &[], 2e-8).unwrap();
        let w = WindingParams::default();
        let n_f = winding_count(&f, &contour, 0, &w).unwrap();
        let n_fp = winding_count(&f, &contour, 1, &w).unwrap();
        assert_eq!(n_f, 1);
        assert_eq!(n_fp, 0);

        // Mirror consistency: the conjugate-reflected function sees the same
        // count in the mirrored right half-disk.
        let mirrored = move |s: Cx<f64>, d: u8| -> Result<Cx<f64>, Error> {
            let w = cx::<f64>(1.0, 0.0) - s.conj();
            let v = f(w, d)?.conj();
            Ok(if d % 2 == 1 { -v } else { v })
        };
        let n_mirror = winding_count(&mirrored, &contour, 0, &w).unwrap();
        assert_eq!(n_mirror, n_f);
    }
}
