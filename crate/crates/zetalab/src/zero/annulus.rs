//! Zero-free annulus search around a point.
//!
//! Nested circles of radius `r_k = exp(-c / (2 + delta)^k)` are drawn around
//! the center and the zeros inside each are counted by winding number.  The
//! differences give per-shell counts; the first empty shell (of index at
//! least 2) certifies an annulus free of zeros, and the returned radius
//! `r_final = r_j^(1 + delta/3)` lies strictly inside it, so the circle of
//! that radius is provably zero-free under the counts.

use super::contour::Contour;
use super::winding::{winding_count_nudged, WindingParams};
use crate::error::Error;
use crate::func::ComplexFn;
use crate::scalar::{Cx, Scalar};

/// Controls for [`zero_free_annulus`].
#[derive(Debug, Clone)]
pub struct AnnulusParams<T: Scalar> {
    /// Decay constant `c` in the shell radii (larger pushes shells inward).
    pub c: T,
    /// Geometric base offset `delta`; radii use base `2 + delta`.
    pub delta: T,
    /// Number of shells to examine.
    pub k_max: u32,
    pub winding: WindingParams<T>,
}

impl<T: Scalar> AnnulusParams<T> {
    pub fn new(c: T) -> Self {
        AnnulusParams {
            c,
            delta: T::lit(0.1),
            k_max: 8,
            winding: WindingParams::default(),
        }
    }
}

/// One shell `r_inner < |s - s0| <= r_outer` and its zero count.
#[derive(Debug, Clone, Copy)]
pub struct Shell<T: Scalar> {
    pub k: u32,
    pub r_inner: T,
    pub r_outer: T,
    pub count: i64,
    /// The shell was too small to sample and its count was set to zero
    /// without evaluation.
    pub forced_empty: bool,
}

/// Outcome of the shell search.
#[derive(Debug, Clone)]
pub struct AnnulusResult<T: Scalar> {
    /// Index of the selected empty shell (first empty with `k >= 2`).
    pub j: u32,
    /// Inner radius of the empty shell.
    pub r_inner: T,
    /// Outer radius of the empty shell.
    pub r_outer: T,
    /// Certified zero-free circle radius, strictly inside the empty shell.
    pub r_final: T,
    /// All shells in order `k = 1..=k_max`, with counts.
    pub shells: Vec<Shell<T>>,
    /// Zeros strictly inside the innermost circle `r_0`.
    pub innermost_count: i64,
}

impl<T: Scalar> AnnulusResult<T> {
    /// Per-shell zero counts in order `k = 1..=k_max`.
    pub fn zero_counts_per_shell(&self) -> Vec<i64> {
        self.shells.iter().map(|sh| sh.count).collect()
    }
}

fn shell_radius<T: Scalar>(c: T, delta: T, k: u32) -> T {
    let base = T::lit(2.0) + delta;
    (-c / base.powi(k as i32)).exp()
}

/// Search for a zero-free shell around `s0`.
///
/// Counts zeros of `f` in nested disks `|s - s0| <= r_k`; circles smaller
/// than the floating-point resolution around `s0` are treated as empty.
/// Fails with [`Error::NoEmptyShell`] when every shell of index 2 and above
/// holds a zero, and [`Error::ShellCountNegative`] when the disk counts are
/// inconsistent (e.g. a pole inside the region).
pub fn zero_free_annulus<T: Scalar, F: ComplexFn<T> + ?Sized>(
    f: &F,
    s0: Cx<T>,
    params: &AnnulusParams<T>,
) -> Result<AnnulusResult<T>, Error> {
    if params.k_max < 2 {
        return Err(Error::InvalidInput {
            what: "annulus search needs at least two shells".into(),
        });
    }
    if params.c <= T::zero() {
        return Err(Error::InvalidInput {
            what: "annulus decay constant must be positive".into(),
        });
    }
    // Circles below this radius cannot be sampled distinctly from s0.
    let ulp_floor = T::epsilon() * T::lit(64.0) * (T::one() + s0.norm());

    let mut disk_counts: Vec<i64> = Vec::with_capacity(params.k_max as usize + 1);
    let mut radii: Vec<T> = Vec::with_capacity(params.k_max as usize + 1);
    for k in 0..=params.k_max {
        let r = shell_radius(params.c, params.delta, k);
        let n = if r < ulp_floor {
            0
        } else {
            let (count, _) =
                winding_count_nudged(f, &Contour::circle(s0, r), 0, &params.winding)?;
            count
        };
        radii.push(r);
        disk_counts.push(n);
    }

    let mut shells = Vec::with_capacity(params.k_max as usize);
    for k in 1..=params.k_max {
        let inner = disk_counts[(k - 1) as usize];
        let outer = disk_counts[k as usize];
        if outer < inner {
            return Err(Error::ShellCountNegative { k, inner, outer });
        }
        shells.push(Shell {
            k,
            r_inner: radii[(k - 1) as usize],
            r_outer: radii[k as usize],
            count: outer - inner,
            forced_empty: radii[k as usize] < ulp_floor,
        });
    }

    let empty = shells
        .iter()
        .find(|sh| sh.k >= 2 && sh.count == 0)
        .ok_or_else(|| Error::NoEmptyShell {
            shells: params.k_max,
            counts: shells.iter().map(|sh| sh.count).collect(),
        })?;

    // r_final = r_j^(1 + delta/3) sits strictly between r_{j-1} and r_j:
    // the exponent shrinks the radius but by less than one base factor.
    let r_final = empty.r_outer.powf(T::one() + params.delta / T::lit(3.0));
    debug_assert!(r_final > empty.r_inner && r_final < empty.r_outer);
    Ok(AnnulusResult {
        j: empty.k,
        r_inner: empty.r_inner,
        r_outer: empty.r_outer,
        r_final,
        shells,
        innermost_count: disk_counts[0],
    })
}
