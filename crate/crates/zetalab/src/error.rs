//! Library error type and its coarse classification.
//!
//! Every fallible operation returns [`Error`].  Variants carry the concrete
//! diagnostics a caller needs to adjust parameters (positions as `f64` pairs,
//! residuals, iteration counts).  [`Error::class`] buckets each variant into
//! one of three families that the command-line driver maps onto exit codes:
//! domain errors (bad input, poles, invalid geometry), convergence failures
//! (an iteration or search that did not settle), and budget exhaustion.

use thiserror::Error;

/// Coarse family of an [`Error`], used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Invalid input, pole hit, or invalid geometry.  Exit code 2.
    Domain,
    /// An iteration, search, or adaptive refinement failed to settle.  Exit code 3.
    Convergence,
    /// An explicit work budget was exhausted.  Exit code 4.
    Budget,
    /// Underlying I/O or serialization failure.  Exit code 2.
    Io,
}

impl ErrorClass {
    /// Process exit code conventionally associated with this class.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Domain | ErrorClass::Io => 2,
            ErrorClass::Convergence => 3,
            ErrorClass::Budget => 4,
        }
    }
}

/// Errors produced by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// An input or intermediate value was NaN or infinite.
    #[error("non-finite value encountered in {what}")]
    NonFinite { what: &'static str },

    /// A precondition on arguments failed.
    #[error("invalid input: {what}")]
    InvalidInput { what: String },

    /// Evaluation requested at (or numerically on top of) the pole s = 1.
    #[error("evaluation at the pole s = 1")]
    PoleAtOne,

    /// log-gamma family evaluated at a non-positive integer.
    #[error("gamma pole at s = {re} + {im}i (non-positive integer)")]
    PoleAtNonPositiveInteger { re: f64, im: f64 },

    /// The Euler–Maclaurin engine could not reach the requested tolerance.
    #[error("requested abs error {requested:.3e} unreachable; achieved {achieved:.3e}")]
    PrecisionUnreachable { requested: f64, achieved: f64 },

    /// Log-derivative requested too close to a zero of F.
    #[error("|F(1/2 + it)| = {f_abs:.3e} at t = {t}; too close to a zero for the log-derivative")]
    TooCloseToZero { t: f64, f_abs: f64 },

    /// Winding count requested over a contour that does not close.
    #[error("contour is not closed")]
    OpenContour,

    /// A function value on the contour was indistinguishable from zero.
    #[error("zero on contour near {re} + {im}i (|f| = {f_abs:.3e}) after {retries} nudge retries")]
    ZeroOnContour { re: f64, im: f64, f_abs: f64, retries: u32 },

    /// Adaptive argument-tracking hit its subdivision depth cap.
    #[error("argument tracking exceeded subdivision depth {depth}")]
    WindingDepthExceeded { depth: u32 },

    /// Accumulated winding was not close to an integer.
    #[error("accumulated winding {raw} is not within 1e-3 of an integer")]
    NonIntegerWinding { raw: f64 },

    /// Rectangle scan exceeded its cell budget.
    #[error("zero scan exceeded its budget of {cells} cells")]
    ScanBudgetExceeded { cells: u64 },

    /// A scan cell reached the minimum size with an unresolved cluster.
    #[error("cell at {re} + {im}i of size {size:.3e} still holds winding {winding}; cannot isolate")]
    UnresolvedCell {
        re: f64,
        im: f64,
        size: f64,
        winding: i64,
    },

    /// Newton refinement failed to converge.
    #[error("Newton refinement diverged after {iterations} iterations at {re} + {im}i (|f| = {residual:.3e})")]
    NewtonDiverged {
        iterations: u32,
        re: f64,
        im: f64,
        residual: f64,
    },

    /// Newton refinement walked out of its trust basin.
    #[error("Newton iterate left the basin: moved {dist:.3e} from the guess (allowed {basin:.3e})")]
    NewtonLeftBasin { dist: f64, basin: f64 },

    /// A point claimed as a zero fails the residual test.
    #[error("point {re} + {im}i is not a zero: |f| = {f_abs:.3e}")]
    NotAZero { re: f64, im: f64, f_abs: f64 },

    /// No empty shell found in the zero-free annulus search.
    #[error("no zero-free shell among {shells} shells (counts {counts:?})")]
    NoEmptyShell { shells: u32, counts: Vec<i64> },

    /// Shell counting produced a negative count (inner > outer), which is inconsistent.
    #[error("shell {k} has negative zero count: inner winding {inner} exceeds outer {outer}")]
    ShellCountNegative { k: u32, inner: i64, outer: i64 },

    /// Two chord indentations would overlap.
    #[error("indentations at t = {t_a} and t = {t_b} overlap (radius {radius:.3e})")]
    IndentationOverlap { t_a: f64, t_b: f64, radius: f64 },

    /// A line zero sits too close to a half-disk chord endpoint.
    #[error("line zero at t = {t} is too close to a contour corner to indent")]
    BoundaryZero { t: f64 },

    /// A winding count disagreed with the expected number of zeros.
    #[error("expected {expected} zeros by winding, found {found}")]
    WrongZeroCount { expected: i64, found: i64 },

    /// Double-zero detection found no collision in the bracket.
    #[error("no collision detected for tau in [{tau_lo}, {tau_hi}]")]
    NoCollision { tau_lo: f64, tau_hi: f64 },

    /// The local quadratic model is invalid: f'' vanishes at the collision.
    #[error("second derivative too small at collision (tau = {tau}, s = {re} + {im}i, |f''| = {f_ss_abs:.3e})")]
    SecondDerivativeVanishes {
        tau: f64,
        re: f64,
        im: f64,
        f_ss_abs: f64,
    },

    /// Trajectory stepping stalled on a singular point with no collision found.
    #[error("trajectory stalled at tau = {tau}, s = {re} + {im}i (|f_s| = {fs_abs:.3e})")]
    SingularStall {
        tau: f64,
        re: f64,
        im: f64,
        fs_abs: f64,
    },

    /// Step-size control drove d(tau) below its floor.
    #[error("step size underflow at tau = {tau}")]
    StepUnderflow { tau: f64 },

    /// A census run left trajectories unresolved.
    #[error("census incomplete: {incomplete} of {total} trajectories unresolved; first: {first_reason}")]
    CensusIncomplete {
        incomplete: usize,
        total: usize,
        first_reason: String,
    },

    /// Underlying I/O failure while writing results.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    /// Underlying JSON failure while encoding or decoding results.
    #[error("json failure: {0}")]
    Json(#[from] serde_json::Error),

    /// Underlying CSV failure while encoding or decoding results.
    #[error("csv failure: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Coarse classification used for exit codes and retry policy.
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            NonFinite { .. }
            | InvalidInput { .. }
            | PoleAtOne
            | PoleAtNonPositiveInteger { .. }
            | TooCloseToZero { .. }
            | OpenContour
            | IndentationOverlap { .. }
            | BoundaryZero { .. }
            | NotAZero { .. } => ErrorClass::Domain,

            PrecisionUnreachable { .. }
            | ZeroOnContour { .. }
            | WindingDepthExceeded { .. }
            | NonIntegerWinding { .. }
            | UnresolvedCell { .. }
            | NewtonDiverged { .. }
            | NewtonLeftBasin { .. }
            | NoEmptyShell { .. }
            | ShellCountNegative { .. }
            | WrongZeroCount { .. }
            | NoCollision { .. }
            | SecondDerivativeVanishes { .. }
            | SingularStall { .. }
            | StepUnderflow { .. }
            | CensusIncomplete { .. } => ErrorClass::Convergence,

            ScanBudgetExceeded { .. } => ErrorClass::Budget,

            Io(_) | Json(_) | Csv(_) => ErrorClass::Io,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_map_to_documented_exit_codes() {
        assert_eq!(Error::PoleAtOne.class().exit_code(), 2);
        assert_eq!(
            Error::NewtonDiverged {
                iterations: 3,
                re: 0.0,
                im: 0.0,
                residual: 1.0
            }
            .class()
            .exit_code(),
            3
        );
        assert_eq!(
            Error::ScanBudgetExceeded { cells: 1 }.class().exit_code(),
            4
        );
    }
}
