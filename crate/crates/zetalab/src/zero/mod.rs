//! Argument-principle machinery: contours, winding counts, zero scanning and
//! refinement, zero-free annulus search, and strip/Riemann–von Mangoldt
//! counts.

mod annulus;
mod contour;
mod counts;
mod scan;
mod winding;

pub use annulus::{zero_free_annulus, AnnulusParams, AnnulusResult, Shell};
pub use contour::{Contour, Indentation, Segment, Side};
pub use counts::{rvm_estimate, strip_zero_count, RvmEstimate, StripCount};
pub use scan::{
    isolation_radius, multiplicity, refine_zero, scan_zeros, RefineParams, ScanParams,
};
pub use winding::{winding_count, winding_count_nudged, WindingParams};

use crate::scalar::{Cx, Scalar};

/// How a zero was located, for provenance in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroMethod {
    /// Rectangle bisection scan followed by Newton refinement.
    ScanNewton,
    /// Direct Newton refinement from a caller-supplied guess.
    NewtonRefined,
    /// Sign change of the rotated sample on the critical line.
    LineSignChange,
    /// Root of a local quadratic model around a collision.
    QuadraticModel,
}

impl ZeroMethod {
    /// Stable string used in CSV/JSON output.
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroMethod::ScanNewton => "scan_newton",
            ZeroMethod::NewtonRefined => "newton_refined",
            ZeroMethod::LineSignChange => "line_sign_change",
            ZeroMethod::QuadraticModel => "quadratic_model",
        }
    }

    /// Inverse of [`ZeroMethod::as_str`].
    pub fn parse(s: &str) -> Option<ZeroMethod> {
        match s {
            "scan_newton" => Some(ZeroMethod::ScanNewton),
            "newton_refined" => Some(ZeroMethod::NewtonRefined),
            "line_sign_change" => Some(ZeroMethod::LineSignChange),
            "quadratic_model" => Some(ZeroMethod::QuadraticModel),
            _ => None,
        }
    }
}

/// A located zero with residual and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord<T: Scalar> {
    /// Zero position.
    pub rho: Cx<T>,
    /// Multiplicity (1 for simple zeros).
    pub multiplicity: u32,
    /// `|f(rho)|` after refinement.
    pub residual: T,
    /// How the zero was found.
    pub method: ZeroMethod,
}

/// Axis-aligned closed rectangle in the s-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T: Scalar> {
    pub sigma_lo: T,
    pub sigma_hi: T,
    pub t_lo: T,
    pub t_hi: T,
}

impl<T: Scalar> Rect<T> {
    pub fn new(sigma_lo: T, sigma_hi: T, t_lo: T, t_hi: T) -> Self {
        Rect {
            sigma_lo,
            sigma_hi,
            t_lo,
            t_hi,
        }
    }

    pub fn width(&self) -> T {
        self.sigma_hi - self.sigma_lo
    }

    pub fn height(&self) -> T {
        self.t_hi - self.t_lo
    }

    pub fn center(&self) -> Cx<T> {
        let half = T::lit(0.5);
        Cx::new(
            (self.sigma_lo + self.sigma_hi) * half,
            (self.t_lo + self.t_hi) * half,
        )
    }

    pub fn contains(&self, p: Cx<T>) -> bool {
        p.re >= self.sigma_lo && p.re <= self.sigma_hi && p.im >= self.t_lo && p.im <= self.t_hi
    }

    /// Longer side length.
    pub fn diameter_linf(&self) -> T {
        self.width().max(self.height())
    }
}
