//! Strip zero counts and the Riemann–von Mangoldt comparison.
//!
//! Both operations reduce to winding counts over rectangles in the critical
//! strip `|sigma| <= sigma_F`: a short window `|t - T| <= 1/T` for the
//! density check, and the full range up to height `T` for the counting
//! estimate `N_F(T) ~ (d_F/pi) T log T + c_F T`.

use super::contour::Contour;
use super::winding::{winding_count_nudged, WindingParams};
use super::Rect;
use crate::error::Error;
use crate::lfunc::{FunctionSpec, Kind};
use crate::scalar::Scalar;

/// Result of [`strip_zero_count`].
#[derive(Debug, Clone, Copy)]
pub struct StripCount<T: Scalar> {
    pub t: T,
    /// Zeros (with multiplicity) of `F` in `|beta| <= sigma_F`,
    /// `|gamma - T| <= 1/T`.
    pub count: i64,
    /// Density bound `epsilon / log(2 + delta) * log T - 2` from the
    /// configured constants.  Reported, not asserted: it can be negative at
    /// small heights.
    pub bound: T,
    /// The sharper `0.225 log T` bound, reported for the Riemann zeta
    /// configuration only.
    pub zeta_bound: Option<T>,
}

/// Count zeros of `F` in the short strip window `|gamma - t| <= 1/t`.
///
/// Requires `t` above the configured threshold `t_bar` so the window stays
/// clear of the pole and the real axis.
pub fn strip_zero_count<T: Scalar>(
    spec: &FunctionSpec<T>,
    t: T,
    winding: &WindingParams<T>,
) -> Result<StripCount<T>, Error> {
    if t <= spec.density.t_bar {
        return Err(Error::InvalidInput {
            what: format!(
                "strip count needs t > t_bar = {}; got {}",
                spec.density.t_bar, t
            ),
        });
    }
    let half = t.recip();
    let rect = Rect::new(
        -spec.zero_free_sigma,
        spec.zero_free_sigma,
        t - half,
        t + half,
    );
    let (count, _) = winding_count_nudged(spec, &Contour::rectangle(&rect), 0, winding)?;
    let log_t = t.ln();
    let bound = spec.density.epsilon / (T::lit(2.0) + spec.density.delta).ln() * log_t
        - T::lit(2.0);
    let zeta_bound = match spec.kind {
        Kind::RiemannZeta => Some(T::lit(0.225) * log_t),
        _ => None,
    };
    Ok(StripCount {
        t,
        count,
        bound,
        zeta_bound,
    })
}

/// Result of [`rvm_estimate`].
#[derive(Debug, Clone, Copy)]
pub struct RvmEstimate<T: Scalar> {
    pub t: T,
    /// One-sided count: zeros with `0 < gamma <= T`, `|beta| <= sigma_F`.
    pub counted: i64,
    /// `2 * counted`, matching the two-sided `|gamma| < T` convention of the
    /// counting formula (zeros come in conjugate pairs).
    pub doubled: i64,
    /// Main term `(d_F / pi) T log T` of the two-sided count.
    pub main_term: T,
    /// Empirical linear coefficient `(doubled - main_term) / T`.
    pub c_f_fit: T,
}

/// Height floor for the counting rectangle: keeps the pole at `s = 1` and
/// any real-axis trivial zeros outside while losing no nontrivial zeros
/// (the lowest one in the family sits at `t = pi / log 5 > 1.9`).
const RVM_T_FLOOR: f64 = 0.05;

/// Scan-free Riemann–von Mangoldt comparison at height `T <= 500`.
pub fn rvm_estimate<T: Scalar>(
    spec: &FunctionSpec<T>,
    t: T,
    winding: &WindingParams<T>,
) -> Result<RvmEstimate<T>, Error> {
    if t <= T::lit(1.0) || t > T::lit(500.0) {
        return Err(Error::InvalidInput {
            what: format!("rvm_estimate needs 1 < T <= 500; got {t}"),
        });
    }
    let rect = Rect::new(
        -spec.zero_free_sigma,
        spec.zero_free_sigma,
        T::lit(RVM_T_FLOOR),
        t,
    );
    let (counted, _) = winding_count_nudged(spec, &Contour::rectangle(&rect), 0, winding)?;
    let doubled = 2 * counted;
    let main_term = spec.fe.degree / T::PI() * t * t.ln();
    let c_f_fit = (T::from_i64(doubled).expect("small count") - main_term) / t;
    Ok(RvmEstimate {
        t,
        counted,
        doubled,
        main_term,
        c_f_fit,
    })
}
