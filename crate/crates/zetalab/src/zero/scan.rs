//! Rectangle scans: locate every zero in a box by recursive bisection of
//! winding counts, then polish each one with a guarded Newton iteration.
//!
//! A cell whose count is zero is dropped; a cell with count one is handed to
//! the refiner; anything else is split along its longer side.  Split lines
//! that happen to graze a zero are detected by the boundary-zero floor of the
//! winding count and retried at slightly shifted fractions, so parent and
//! child counts always reconcile exactly.

use super::contour::Contour;
use super::winding::{winding_count, winding_count_nudged, WindingParams};
use super::{Rect, ZeroMethod, ZeroRecord};
use crate::error::Error;
use crate::func::ComplexFn;
use crate::scalar::{Cx, Scalar};

/// Split fractions tried in order when a bisection line grazes a zero.
const SPLIT_FRACTIONS: [f64; 5] = [0.5, 0.53, 0.47, 0.51, 0.49];

/// Controls for the Newton polish stage.
#[derive(Debug, Clone, Copy)]
pub struct RefineParams<T: Scalar> {
    /// Relative step tolerance: stop when `|step| <= tol * (1 + |s|)`.
    pub tol: T,
    /// Iteration cap.
    pub max_iters: u32,
    /// Steps are clamped to `trust_factor * trust_radius`.
    pub trust_factor: T,
}

impl<T: Scalar> Default for RefineParams<T> {
    fn default() -> Self {
        RefineParams {
            tol: T::lit(1e-12).max(T::epsilon() * T::lit(1e4)),
            max_iters: 80,
            trust_factor: T::lit(0.75),
        }
    }
}

/// Controls for [`scan_zeros`].
#[derive(Debug, Clone)]
pub struct ScanParams<T: Scalar> {
    /// Cells are never split below this diameter; a multi-zero cell this
    /// small is treated as one multiple zero.
    pub min_cell: T,
    /// Total cell budget for one scan.
    pub max_cells: u64,
    pub winding: WindingParams<T>,
    pub refine: RefineParams<T>,
}

impl<T: Scalar> Default for ScanParams<T> {
    fn default() -> Self {
        ScanParams {
            min_cell: T::lit(1e-7),
            max_cells: 20_000,
            winding: WindingParams::default(),
            refine: RefineParams::default(),
        }
    }
}

struct ScanCtx<'a, T: Scalar, F: ?Sized> {
    f: &'a F,
    deriv: u8,
    params: &'a ScanParams<T>,
    cells_used: u64,
}

/// All zeros of `f` (counted with multiplicity) inside `rect`, sorted by
/// imaginary part, then real part.
///
/// The rectangle boundary itself must be zero-free; a zero sitting exactly on
/// it surfaces as [`Error::ZeroOnContour`] so the caller can adjust the box.
pub fn scan_zeros<T: Scalar, F: ComplexFn<T> + ?Sized>(
    f: &F,
    rect: &Rect<T>,
    deriv: u8,
    params: &ScanParams<T>,
) -> Result<Vec<ZeroRecord<T>>, Error> {
    let total = winding_count(f, &Contour::rectangle(rect), deriv, &params.winding)?;
    if total < 0 {
        return Err(Error::InvalidInput {
            what: format!("scan rectangle winds {total}; it must not enclose a pole"),
        });
    }
    let mut ctx = ScanCtx {
        f,
        deriv,
        params,
        cells_used: 0,
    };
    let mut out = Vec::new();
    scan_cell(&mut ctx, rect, total, &mut out)?;
    out.sort_by(|a, b| {
        (a.rho.im, a.rho.re)
            .partial_cmp(&(b.rho.im, b.rho.re))
            .expect("finite zero coordinates")
    });
    // An even-order zero exactly on a split line is invisible to argument
    // tracking (its full 2-pi flip reads as zero), so each child counts half
    // of it and both refine to the same point.  Merge such duplicates; the
    // winding-verified multiplicity on each copy is already the full one.
    let merge_tol = params.min_cell * T::lit(0.5);
    let mut merged: Vec<ZeroRecord<T>> = Vec::with_capacity(out.len());
    for rec in out {
        match merged.last_mut() {
            Some(prev) if (prev.rho - rec.rho).norm() < merge_tol => {
                if rec.residual < prev.residual {
                    prev.rho = rec.rho;
                    prev.residual = rec.residual;
                }
                prev.multiplicity = prev.multiplicity.max(rec.multiplicity);
            }
            _ => merged.push(rec),
        }
    }
    let found: i64 = merged.iter().map(|r| i64::from(r.multiplicity)).sum();
    if found != total {
        return Err(Error::WrongZeroCount {
            expected: total,
            found,
        });
    }
    Ok(merged)
}

fn scan_cell<T: Scalar, F: ComplexFn<T> + ?Sized>(
    ctx: &mut ScanCtx<'_, T, F>,
    rect: &Rect<T>,
    count: i64,
    out: &mut Vec<ZeroRecord<T>>,
) -> Result<(), Error> {
    ctx.cells_used += 1;
    if ctx.cells_used > ctx.params.max_cells {
        return Err(Error::ScanBudgetExceeded {
            cells: ctx.params.max_cells,
        });
    }
    if count == 0 {
        return Ok(());
    }
    let diam = rect.diameter_linf();
    if count == 1 {
        // Newton from the cell center; on failure fall back to splitting as
        // long as the cell can still shrink.
        match refine_zero(
            ctx.f,
            ctx.deriv,
            rect.center(),
            diam,
            &ctx.params.refine,
            &ctx.params.winding,
        ) {
            Ok(rec) if rect_contains_loose(rect, rec.rho) => {
                out.push(rec);
                return Ok(());
            }
            Ok(_) | Err(Error::NewtonDiverged { .. }) | Err(Error::NewtonLeftBasin { .. })
                if diam > ctx.params.min_cell => {}
            Ok(rec) => {
                // Tiny cell and the polished zero left it: trust the count's
                // location over Newton's.
                let _ = rec;
                return Err(Error::UnresolvedCell {
                    re: rect.center().re.as_f64(),
                    im: rect.center().im.as_f64(),
                    size: diam.as_f64(),
                    winding: count,
                });
            }
            Err(e) => return Err(e),
        }
    }
    if diam <= ctx.params.min_cell {
        if count == 2 {
            return resolve_double(ctx, rect, out);
        }
        return Err(Error::UnresolvedCell {
            re: rect.center().re.as_f64(),
            im: rect.center().im.as_f64(),
            size: diam.as_f64(),
            winding: count,
        });
    }

    for &frac in &SPLIT_FRACTIONS {
        let (a, b) = split_rect(rect, T::lit(frac));
        // A split line exactly through a zero shows up either as a boundary
        // zero or as argument tracking that cannot settle; both mean "move
        // the line", not "give up".
        let ca = match winding_count(ctx.f, &Contour::rectangle(&a), ctx.deriv, &ctx.params.winding)
        {
            Ok(c) => c,
            Err(Error::ZeroOnContour { .. } | Error::WindingDepthExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        let cb = match winding_count(ctx.f, &Contour::rectangle(&b), ctx.deriv, &ctx.params.winding)
        {
            Ok(c) => c,
            Err(Error::ZeroOnContour { .. } | Error::WindingDepthExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        if ca + cb != count || ca < 0 || cb < 0 {
            // A zero straddles the split line below sampling resolution;
            // a shifted fraction separates cleanly.
            continue;
        }
        scan_cell(ctx, &a, ca, out)?;
        scan_cell(ctx, &b, cb, out)?;
        return Ok(());
    }
    Err(Error::UnresolvedCell {
        re: rect.center().re.as_f64(),
        im: rect.center().im.as_f64(),
        size: diam.as_f64(),
        winding: count,
    })
}

/// A count-2 cell at minimum size: either a genuine double zero or an
/// unresolvably tight pair.  Newton on the derivative lands on the double
/// zero; a winding check on `f` confirms multiplicity 2.
fn resolve_double<T: Scalar, F: ComplexFn<T> + ?Sized>(
    ctx: &mut ScanCtx<'_, T, F>,
    rect: &Rect<T>,
    out: &mut Vec<ZeroRecord<T>>,
) -> Result<(), Error> {
    let diam = rect.diameter_linf();
    let center = rect.center();
    let dview = crate::func::DerivView::new(ctx.f, 1);
    let crit = refine_zero(
        &dview,
        ctx.deriv,
        center,
        diam * T::lit(4.0),
        &ctx.params.refine,
        &ctx.params.winding,
    )
    .map_err(|_| Error::UnresolvedCell {
        re: center.re.as_f64(),
        im: center.im.as_f64(),
        size: diam.as_f64(),
        winding: 2,
    })?;
    let m = multiplicity(
        ctx.f,
        ctx.deriv,
        crit.rho,
        diam * T::lit(8.0),
        &ctx.params.winding,
    )?;
    if m != 2 {
        return Err(Error::UnresolvedCell {
            re: center.re.as_f64(),
            im: center.im.as_f64(),
            size: diam.as_f64(),
            winding: 2,
        });
    }
    let residual = ctx.f.eval_n(crit.rho, ctx.deriv)?.norm();
    out.push(ZeroRecord {
        rho: crit.rho,
        multiplicity: 2,
        residual,
        method: ZeroMethod::ScanNewton,
    });
    Ok(())
}

fn split_rect<T: Scalar>(rect: &Rect<T>, frac: T) -> (Rect<T>, Rect<T>) {
    if rect.width() >= rect.height() {
        let mid = rect.sigma_lo + rect.width() * frac;
        (
            Rect::new(rect.sigma_lo, mid, rect.t_lo, rect.t_hi),
            Rect::new(mid, rect.sigma_hi, rect.t_lo, rect.t_hi),
        )
    } else {
        let mid = rect.t_lo + rect.height() * frac;
        (
            Rect::new(rect.sigma_lo, rect.sigma_hi, rect.t_lo, mid),
            Rect::new(rect.sigma_lo, rect.sigma_hi, mid, rect.t_hi),
        )
    }
}

/// Containment with a margin of 5% of the cell diameter: Newton may polish a
/// zero across a nudged boundary by a hair.
// The margin covers zeros attributed to this cell by a nudged contour
// (displaced at most `extent * 2e-6 * retries`) plus polish roundoff.  It
// must stay far below any true zero separation, or Newton can hand a
// neighboring cell's zero to this one and the cell's own zero is never
// refined.
fn rect_contains_loose<T: Scalar>(rect: &Rect<T>, p: Cx<T>) -> bool {
    let m = rect.diameter_linf() * T::lit(1e-5);
    p.re >= rect.sigma_lo - m
        && p.re <= rect.sigma_hi + m
        && p.im >= rect.t_lo - m
        && p.im <= rect.t_hi + m
}

/// Polish a zero of `f` (its `deriv`-th derivative) by damped Newton from
/// `seed`, staying within `trust_radius` of the start.
///
/// The returned record carries the winding-verified multiplicity and the
/// final `|f|` as residual.
pub fn refine_zero<T: Scalar, F: ComplexFn<T> + ?Sized>(
    f: &F,
    deriv: u8,
    seed: Cx<T>,
    trust_radius: T,
    refine: &RefineParams<T>,
    winding: &WindingParams<T>,
) -> Result<ZeroRecord<T>, Error> {
    let mut s = seed;
    let cap = trust_radius * refine.trust_factor;
    let mut last_step = trust_radius;
    let mut converged = false;
    for iter in 0..refine.max_iters {
        let f0 = f.eval_n(s, deriv)?;
        if f0.norm() == T::zero() {
            converged = true;
            last_step = T::zero();
            break;
        }
        let f1 = f.eval_n(s, deriv + 1)?;
        if f1.norm() == T::zero() {
            return Err(Error::NewtonDiverged {
                iterations: iter,
                re: s.re.as_f64(),
                im: s.im.as_f64(),
                residual: f0.norm().as_f64(),
            });
        }
        let mut step = -f0 / f1;
        if !step.re.is_finite() || !step.im.is_finite() {
            return Err(Error::NewtonDiverged {
                iterations: iter,
                re: s.re.as_f64(),
                im: s.im.as_f64(),
                residual: f0.norm().as_f64(),
            });
        }
        if step.norm() > cap {
            step = step * (cap / step.norm());
        }
        s = s + step;
        last_step = step.norm();
        if (s - seed).norm() > trust_radius * T::lit(2.0) {
            return Err(Error::NewtonLeftBasin {
                dist: (s - seed).norm().as_f64(),
                basin: (trust_radius * T::lit(2.0)).as_f64(),
            });
        }
        if last_step <= refine.tol * (T::one() + s.norm()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NewtonDiverged {
            iterations: refine.max_iters,
            re: s.re.as_f64(),
            im: s.im.as_f64(),
            residual: f.eval_n(s, deriv)?.norm().as_f64(),
        });
    }
    let r_mult = mult_radius(s, last_step, trust_radius);
    let m = multiplicity(f, deriv, s, r_mult, winding)?;
    if m == 0 {
        return Err(Error::NotAZero {
            re: s.re.as_f64(),
            im: s.im.as_f64(),
            f_abs: f.eval_n(s, deriv)?.norm().as_f64(),
        });
    }
    let residual = f.eval_n(s, deriv)?.norm();
    Ok(ZeroRecord {
        rho: s,
        multiplicity: m,
        residual,
        method: ZeroMethod::ScanNewton,
    })
}

/// Radius for the multiplicity check: far above the final Newton step and
/// rounding noise, far below the trust region.
fn mult_radius<T: Scalar>(s: Cx<T>, last_step: T, trust_radius: T) -> T {
    let floor = T::lit(1e-9)
        .max(T::epsilon() * T::lit(1e4) * (T::one() + s.norm()))
        .max(last_step * T::lit(4.0));
    floor.min(trust_radius.max(T::lit(1e-6)))
}

/// Zeros of `f` (with multiplicity) strictly inside the circle `|z - s| < r`,
/// via a nudged winding count.
pub fn multiplicity<T: Scalar, F: ComplexFn<T> + ?Sized>(
    f: &F,
    deriv: u8,
    s: Cx<T>,
    r: T,
    winding: &WindingParams<T>,
) -> Result<u32, Error> {
    let (count, _) = winding_count_nudged(f, &Contour::circle(s, r), deriv, winding)?;
    if count < 0 {
        return Err(Error::InvalidInput {
            what: format!("multiplicity circle winds {count}; it must not enclose a pole"),
        });
    }
    Ok(count as u32)
}

/// Largest radius `r <= r_max` (from doubling `r_min` upward) whose circle
/// around the zero `s` still encloses only that zero's multiplicity.
pub fn isolation_radius<T: Scalar, F: ComplexFn<T> + ?Sized>(
    f: &F,
    deriv: u8,
    s: Cx<T>,
    r_max: T,
    winding: &WindingParams<T>,
) -> Result<T, Error> {
    let r_min = T::lit(1e-9).max(T::epsilon() * T::lit(1e4) * (T::one() + s.norm()));
    let m = multiplicity(f, deriv, s, r_min, winding)?;
    if m == 0 {
        return Err(Error::NotAZero {
            re: s.re.as_f64(),
            im: s.im.as_f64(),
            f_abs: f.eval_n(s, deriv)?.norm().as_f64(),
        });
    }
    let mut r = r_min;
    loop {
        let r_next = (r * T::lit(2.0)).min(r_max);
        if r_next <= r {
            return Ok(r);
        }
        match multiplicity(f, deriv, s, r_next, winding) {
            Ok(c) if c == m => r = r_next,
            Ok(_) => return Ok(r),
            // A zero of f sitting on the doubled circle even after nudges
            // still bounds the isolation radius from below by r.
            Err(Error::ZeroOnContour { .. }) => return Ok(r),
            Err(e) => return Err(e),
        }
        if r >= r_max {
            return Ok(r);
        }
    }
}
