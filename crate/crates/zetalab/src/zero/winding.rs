//! Argument-principle winding counts over closed contours.
//!
//! The winding number of `f` along a contour is accumulated from principal
//! arguments of value ratios between consecutive samples.  Each segment pair
//! is subdivided until the argument step drops below `pi/2`, which makes the
//! branch choice unambiguous; the sum over a closed contour is then `2 pi`
//! times the number of enclosed zeros (counted with multiplicity, minus
//! poles).  Function values indistinguishable from zero against the contour's
//! value scale abort the count — the caller can retry on a nudged contour.

use super::contour::{Contour, Segment};
use crate::error::Error;
use crate::func::ComplexFn;
use crate::scalar::{Cx, Scalar};

/// Headroom factor for the rotation-rate acceptance test.
const RATE_SLACK: f64 = 1.5;

/// Controls for [`winding_count`].
#[derive(Debug, Clone, Copy)]
pub struct WindingParams<T: Scalar> {
    /// Subdivision depth cap per sample pair.
    pub max_depth: u32,
    /// Largest accepted argument step between adjacent samples.
    pub max_arg_step: T,
    /// `|f|` below `zero_rel_tol * scale` counts as a zero on the contour,
    /// where `scale` is the largest sampled `|f|`.
    pub zero_rel_tol: T,
    /// Initial samples per line segment (arcs scale with angular span).
    pub min_line_samples: u32,
    /// Retries on progressively nudged contours in
    /// [`winding_count_nudged`].
    pub nudge_retries: u32,
    /// Evaluation budget.
    pub max_evals: u64,
}

impl<T: Scalar> Default for WindingParams<T> {
    fn default() -> Self {
        WindingParams {
            max_depth: 40,
            max_arg_step: T::FRAC_PI_2(),
            zero_rel_tol: T::lit(1e-12).max(T::epsilon() * T::lit(1e3)),
            min_line_samples: 8,
            nudge_retries: 3,
            max_evals: 2_000_000,
        }
    }
}

struct EvalCtx<'a, T: Scalar, F: ?Sized> {
    f: &'a F,
    deriv: u8,
    evals: u64,
    max_evals: u64,
    threshold: T,
}

/// One boundary sample: parameter, value, and the local rotation rate
/// `|f'/f|` (an upper bound on `d arg f / d arclength`).
#[derive(Clone, Copy)]
struct Sample<T: Scalar> {
    u: T,
    f: Cx<T>,
    rate: T,
}

impl<'a, T: Scalar, F: ComplexFn<T> + ?Sized> EvalCtx<'a, T, F> {
    fn eval(&mut self, p: Cx<T>, u: T) -> Result<Sample<T>, Error> {
        self.evals += 1;
        if self.evals > self.max_evals {
            return Err(Error::ScanBudgetExceeded {
                cells: self.max_evals,
            });
        }
        let v = self.f.eval_n(p, self.deriv)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite {
                what: "winding sample",
            });
        }
        // The derivative bounds how fast arg f can turn between samples; a
        // function without one degrades to pure argument subdivision.
        let rate = match self.f.eval_n(p, self.deriv + 1) {
            Ok(d) if v.norm() > T::zero() => {
                let r = (d / v).norm();
                if r.is_finite() {
                    r
                } else {
                    T::zero()
                }
            }
            _ => T::zero(),
        };
        Ok(Sample { u, f: v, rate })
    }

    fn check_above_floor(&self, p: Cx<T>, v: Cx<T>, retries: u32) -> Result<(), Error> {
        if v.norm() < self.threshold {
            return Err(Error::ZeroOnContour {
                re: p.re.as_f64(),
                im: p.im.as_f64(),
                f_abs: v.norm().as_f64(),
                retries,
            });
        }
        Ok(())
    }
}

/// Number of initial samples for a segment.
fn initial_samples<T: Scalar>(seg: &Segment<T>, params: &WindingParams<T>) -> u32 {
    match seg.arc_span() {
        // One sample per pi/16 of arc keeps position aliasing at bay.
        Some(span) => {
            let per = (span / T::lit(std::f64::consts::PI / 16.0)).ceil();
            per.to_u32().unwrap_or(u32::MAX).max(8)
        }
        None => params.min_line_samples.max(2),
    }
}

/// Arclength of a whole segment.
fn segment_length<T: Scalar>(seg: &Segment<T>) -> T {
    match *seg {
        Segment::Line { from, to } => (to - from).norm(),
        Segment::Arc { radius, .. } => radius * seg.arc_span().expect("arc has a span"),
    }
}

/// Winding number of `f` (or its `deriv`-th derivative) along `contour`,
/// i.e. the number of enclosed zeros counted with multiplicity (minus
/// enclosed poles).
///
/// Errors: [`Error::OpenContour`] when the contour does not close,
/// [`Error::ZeroOnContour`] when a boundary sample is numerically zero,
/// [`Error::WindingDepthExceeded`]/[`Error::NonIntegerWinding`] when argument
/// tracking cannot settle, [`Error::ScanBudgetExceeded`] on budget.
pub fn winding_count<T: Scalar, F: ComplexFn<T> + ?Sized>(
    f: &F,
    contour: &Contour<T>,
    deriv: u8,
    params: &WindingParams<T>,
) -> Result<i64, Error> {
    winding_count_inner(f, contour, deriv, params, 0)
}

fn winding_count_inner<T: Scalar, F: ComplexFn<T> + ?Sized>(
    f: &F,
    contour: &Contour<T>,
    deriv: u8,
    params: &WindingParams<T>,
    retries_used: u32,
) -> Result<i64, Error> {
    let diam = contour.diameter();
    if !contour.is_closed(diam * T::lit(1e-9) + T::epsilon()) {
        return Err(Error::OpenContour);
    }

    let mut ctx = EvalCtx {
        f,
        deriv,
        evals: 0,
        max_evals: params.max_evals,
        threshold: T::zero(), // set after the scale pass
    };

    // Scale pass: initial samples per segment fix the value scale first, so
    // the on-contour-zero test is relative to the whole contour.
    let mut samples: Vec<Vec<Sample<T>>> = Vec::with_capacity(contour.segments.len());
    let mut scale = T::zero();
    for seg in &contour.segments {
        let n = initial_samples(seg, params);
        let mut seg_samples = Vec::with_capacity(n as usize + 1);
        for k in 0..=n {
            let u = T::from_u32(k).expect("small u32") / T::from_u32(n).expect("small u32");
            let smp = ctx.eval(seg.point(u), u)?;
            scale = scale.max(smp.f.norm());
            seg_samples.push(smp);
        }
        samples.push(seg_samples);
    }
    ctx.threshold = scale * params.zero_rel_tol;
    if scale == T::zero() {
        return Err(Error::ZeroOnContour {
            re: contour.segments[0].start().re.as_f64(),
            im: contour.segments[0].start().im.as_f64(),
            f_abs: 0.0,
            retries: retries_used,
        });
    }

    let mut total = T::zero();
    for (seg, seg_samples) in contour.segments.iter().zip(&samples) {
        for pair in seg_samples.windows(2) {
            ctx.check_above_floor(seg.point(pair[0].u), pair[0].f, retries_used)?;
            total = total
                + arg_delta_adaptive(&mut ctx, seg, pair[0], pair[1], params, retries_used)?;
        }
        // Last sample of the segment.
        if let Some(smp) = seg_samples.last() {
            ctx.check_above_floor(seg.point(smp.u), smp.f, retries_used)?;
        }
    }

    let two_pi = T::lit(2.0) * T::PI();
    let raw = total / two_pi;
    let rounded = raw.round();
    if (raw - rounded).abs() > T::lit(1e-3) {
        return Err(Error::NonIntegerWinding { raw: raw.as_f64() });
    }
    Ok(rounded.to_i64().unwrap_or(0))
}

/// Argument change between two samples, subdividing until each step is small.
///
/// A pair is accepted only when the measured argument step is below the cap
/// AND the rotation rates at both endpoints certify that the true change
/// cannot have wrapped: `arclength * max|f'/f|` must stay comparable to the
/// cap.  The second test is what rules out silent `2 pi` slips on coarse
/// grids over fast-spinning functions.
fn arg_delta_adaptive<T: Scalar, F: ComplexFn<T> + ?Sized>(
    ctx: &mut EvalCtx<'_, T, F>,
    seg: &Segment<T>,
    lo: Sample<T>,
    hi: Sample<T>,
    params: &WindingParams<T>,
    retries_used: u32,
) -> Result<T, Error> {
    let seg_len = segment_length(seg);
    let rate_cap = params.max_arg_step * T::lit(RATE_SLACK);
    let mut acc = T::zero();
    let mut stack = vec![(lo, hi, 0u32)];
    let half = T::lit(0.5);
    while let Some((s0, s1, depth)) = stack.pop() {
        let delta = (s1.f * s0.f.conj()).arg();
        let len = seg_len * (s1.u - s0.u).abs();
        if delta.abs() <= params.max_arg_step && len * s0.rate.max(s1.rate) <= rate_cap {
            acc = acc + delta;
            continue;
        }
        if depth >= params.max_depth {
            return Err(Error::WindingDepthExceeded { depth });
        }
        let um = (s0.u + s1.u) * half;
        let pm = seg.point(um);
        let sm = ctx.eval(pm, um)?;
        ctx.check_above_floor(pm, sm.f, retries_used)?;
        stack.push((sm, s1, depth + 1));
        stack.push((s0, sm, depth + 1));
    }
    Ok(acc)
}

/// [`winding_count`] with automatic retries on nudged contours: when a zero
/// sits (numerically) on the boundary, the contour is scaled about its
/// centroid by `1 + 2e-6 k` for `k = 1..=nudge_retries` until the count
/// succeeds.  Returns the count together with the contour actually used.
pub fn winding_count_nudged<T: Scalar, F: ComplexFn<T> + ?Sized>(
    f: &F,
    contour: &Contour<T>,
    deriv: u8,
    params: &WindingParams<T>,
) -> Result<(i64, Contour<T>), Error> {
    let mut last_err = None;
    for k in 0..=params.nudge_retries {
        let candidate = if k == 0 {
            contour.clone()
        } else {
            contour.scaled_about_centroid(T::one() + T::lit(2e-6) * T::from_u32(k).expect("small"))
        };
        // Depth exhaustion is the same symptom as a boundary zero that stays
        // just above the relative floor: the contour grazes a zero, and a
        // nudge cures it.
        match winding_count_inner(f, &candidate, deriv, params, k) {
            Ok(count) => return Ok((count, candidate)),
            Err(e @ (Error::ZeroOnContour { .. } | Error::WindingDepthExceeded { .. })) => {
                last_err = Some(e)
            }
            Err(other) => return Err(other),
        }
    }
    Err(last_err.expect("at least one attempt"))
}
