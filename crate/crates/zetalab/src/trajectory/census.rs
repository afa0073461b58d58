//! Census of all zero trajectories seeded in a height window.
//!
//! Seeds are the zeros of `f(., 0)` with `0 < Im rho <= H` found by a
//! verified rectangle scan; each is traced from `tau = 0` to `tau = 1` with
//! full collision handling.  The assembled census reports how many
//! trajectories stay on the critical line and how many leave it, together
//! with the deduplicated double-zero events.  Off-line tails are stored as
//! the left member (`Re rho < 1/2`); the mirror member is implied by the
//! `s <-> 1 - conj(s)` symmetry, which the assembly verifies numerically on
//! every stored trajectory.  Any trajectory that cannot be finished fails
//! the whole run: a census is all-or-nothing.

use num_complex::Complex;

use super::{
    trace, BranchRule, Classification, DoubleZeroEvent, Family, FamilySlice, StepControl, Target,
    Trajectory,
};
use crate::error::Error;
use crate::scalar::{Cx, Scalar};
use crate::zero::{scan_zeros, Rect, ScanParams, ZeroRecord};

/// Zeros with imaginary part at or below this are outside every census
/// window: the first zero of any family member sits at `t = pi / ln 5`, and
/// the floor also keeps the pole of zeta at `s = 1` off scan contours.
const T_FLOOR: f64 = 0.2;
/// Mirror residual bound asserted on stored off-line samples.
const MIRROR_TOL: f64 = 1e-8;

/// Result of a completed census: every seeded trajectory classified, no
/// incompletes.
#[derive(Debug, Clone)]
pub struct Census<T: Scalar> {
    /// Height window bound: seeds have `0 < Im rho(0) <= h`.
    pub h: T,
    /// Number of seeds (= stays + leaves).
    pub total: usize,
    pub stays: usize,
    pub leaves: usize,
    /// Deduplicated double-zero events, ordered by `(tau0, Im rho0)`.
    pub events: Vec<DoubleZeroEvent<T>>,
    /// One trajectory per seed, in seed order (ascending `Im rho(0)`).
    pub trajectories: Vec<Trajectory<T>>,
    /// The verified seed records at `tau = 0`.
    pub seeds: Vec<ZeroRecord<T>>,
}

/// Zeros of `f(., 0)` in the strip `-2 <= sigma <= 3`, `T_FLOOR < t <= h`,
/// ordered by ascending imaginary part.
pub fn census_seeds<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    h: T,
    scan: &ScanParams<T>,
) -> Result<Vec<ZeroRecord<T>>, Error> {
    if !(h > T::lit(T_FLOOR)) || !h.is_finite() {
        return Err(Error::InvalidInput {
            what: format!("census height {h} must exceed {T_FLOOR}"),
        });
    }
    let slice = FamilySlice {
        fam,
        tau: T::zero(),
        offset: 0,
    };
    let rect = Rect::new(T::lit(-2.0), T::lit(3.0), T::lit(T_FLOOR), h);
    let mut recs = scan_zeros(&slice, &rect, 0, scan)?;
    recs.sort_by(|a, b| {
        (a.rho.im, a.rho.re)
            .partial_cmp(&(b.rho.im, b.rho.re))
            .expect("zero ordinates are finite")
    });
    Ok(recs)
}

/// Traces one seed over the full `tau` range; failures become an incomplete
/// trajectory rather than an error, so a parallel driver can always collect
/// one result per seed and let [`assemble_census`] judge the run.
pub fn trace_seed<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    seed: &ZeroRecord<T>,
    ctrl: &StepControl<T>,
) -> Trajectory<T> {
    let stub = |reason: String| Trajectory {
        target: Target::F,
        samples: vec![(T::zero(), seed.rho)],
        classification: Classification::Incomplete { reason },
        events: Vec::new(),
    };
    if seed.multiplicity != 1 {
        return stub(format!(
            "seed {} has multiplicity {}; branch continuation undefined",
            seed.rho, seed.multiplicity
        ));
    }
    match trace(fam, Target::F, seed.rho, T::zero(), T::one(), ctrl) {
        Ok(traj) => traj,
        Err(e) => stub(e.to_string()),
    }
}

/// Validates per-seed trajectories, normalizes off-line tails to the left
/// member, collects and deduplicates events, and tallies the run.  Errors
/// with [`Error::CensusIncomplete`] when any trajectory is incomplete.
pub fn assemble_census<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    h: T,
    seeds: Vec<ZeroRecord<T>>,
    mut trajectories: Vec<Trajectory<T>>,
) -> Result<Census<T>, Error> {
    let half = T::lit(0.5);
    let line_tol = T::lit(1e-9);
    for traj in &mut trajectories {
        if matches!(traj.classification, Classification::Incomplete { .. }) {
            continue;
        }
        // Mirror assertion on a spread of off-line samples, then store the
        // left member.
        let off_idx: Vec<usize> = traj
            .samples
            .iter()
            .enumerate()
            .filter(|(_, (_, rho))| (rho.re - half).abs() >= line_tol)
            .map(|(i, _)| i)
            .collect();
        let mut mirror_failure = None;
        for (k, &i) in off_idx.iter().enumerate() {
            if k % 4 != 0 && k + 1 != off_idx.len() {
                continue;
            }
            let (tau, rho) = traj.samples[i];
            let mirror = Complex::new(T::one(), T::zero()) - rho.conj();
            // The mirror identity transfers zeros of the completed function
            // only where the gamma-factor ratio is regular.  A mirror point
            // next to s = 1 sits at the pole that absorbs the right member
            // of a real pair as tau -> 1; skip it rather than fail a healthy
            // trajectory.
            let from_pole = (mirror - Complex::new(T::one(), T::zero())).norm();
            if from_pole < T::lit(1e-2) {
                continue;
            }
            let fm = fam.f_all(mirror, tau, 1)?;
            let tol = T::lit(MIRROR_TOL) * (T::one() + fm[1].norm());
            if !(fm[0].norm() < tol) {
                mirror_failure = Some(format!(
                    "mirror residual |f({mirror})| = {} at tau = {tau}",
                    fm[0].norm()
                ));
                break;
            }
        }
        if let Some(reason) = mirror_failure {
            traj.classification = Classification::Incomplete { reason };
            continue;
        }
        for (_, rho) in traj.samples.iter_mut() {
            if rho.re - half >= line_tol {
                *rho = Complex::new(T::one(), T::zero()) - rho.conj();
            }
        }
    }

    let mut events: Vec<DoubleZeroEvent<T>> = Vec::new();
    for traj in &trajectories {
        events.extend(traj.events.iter().copied());
    }
    events.sort_by(|a, b| {
        (a.tau0, a.rho0.im)
            .partial_cmp(&(b.tau0, b.rho0.im))
            .expect("event coordinates are finite")
    });
    events.dedup_by(|a, b| {
        (a.tau0 - b.tau0).abs() < T::lit(1e-6) && (a.rho0.im - b.rho0.im).abs() < T::lit(1e-6)
    });

    let total = trajectories.len();
    let mut stays = 0;
    let mut leaves = 0;
    let mut incomplete = 0;
    let mut first_reason = None;
    for traj in &trajectories {
        match &traj.classification {
            Classification::StaysOnLine => stays += 1,
            Classification::LeavesAt { .. } => leaves += 1,
            Classification::Incomplete { reason } => {
                incomplete += 1;
                if first_reason.is_none() {
                    first_reason = Some(reason.clone());
                }
            }
        }
    }
    if incomplete > 0 {
        return Err(Error::CensusIncomplete {
            incomplete,
            total,
            first_reason: first_reason.unwrap_or_default(),
        });
    }
    Ok(Census {
        h,
        total,
        stays,
        leaves,
        events,
        trajectories,
        seeds,
    })
}

/// Domain checks shared by [`census`] and external drivers, cheap enough to
/// run before the seed scan.
pub fn census_guards<T: Scalar>(h: T, tau_step: T) -> Result<(), Error> {
    if !(h <= T::lit(500.0)) {
        return Err(Error::InvalidInput {
            what: format!("census height {h} exceeds the supported bound 500"),
        });
    }
    if !(tau_step > T::zero()) || !tau_step.is_finite() {
        return Err(Error::InvalidInput {
            what: format!("tau step {tau_step} must be positive"),
        });
    }
    Ok(())
}

/// Effective per-seed step control for a census at grid resolution
/// `tau_step`: the tracer may refine below the grid near events but never
/// steps coarser.  A degenerate grid (one step for the whole range) is
/// rejected with every one of the `n_seeds` trajectories incomplete.
///
/// Side-based continuation makes the two seeds of a colliding pair take
/// distinct branches (lower seed continues on the left member, upper on the
/// right), so no tail is duplicated and none is orphaned.  The sides are
/// unambiguous: merging line zeros stay ordered until the collision.
pub fn census_step_control<T: Scalar>(
    ctrl: &StepControl<T>,
    tau_step: T,
    n_seeds: usize,
) -> Result<StepControl<T>, Error> {
    if tau_step >= T::one() {
        return Err(Error::CensusIncomplete {
            incomplete: n_seeds,
            total: n_seeds,
            first_reason: format!(
                "degenerate tau grid: step {tau_step} covers the whole range in one step"
            ),
        });
    }
    Ok(StepControl {
        dtau_init: tau_step,
        dtau_min: ctrl.dtau_min.min(tau_step),
        dtau_max: tau_step,
        branch: BranchRule::BySide,
        ..ctrl.clone()
    })
}

/// Full census: seed, trace each seed over `tau in [0, 1]`, assemble.
pub fn census<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    h: T,
    tau_step: T,
    ctrl: &StepControl<T>,
) -> Result<Census<T>, Error> {
    census_guards(h, tau_step)?;
    let seeds = census_seeds(fam, h, &ScanParams::default())?;
    let ctrl_eff = census_step_control(ctrl, tau_step, seeds.len())?;
    let trajectories: Vec<Trajectory<T>> = seeds
        .iter()
        .map(|rec| trace_seed(fam, rec, &ctrl_eff))
        .collect();
    assemble_census(fam, h, seeds, trajectories)
}

/// Position of a traced trajectory at an intermediate `tau`: linear
/// interpolation between the bracketing samples, then a short Newton polish
/// on the target function (the line member keeps `Re rho = 1/2` exact).
pub fn position_at<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    traj: &Trajectory<T>,
    tau: T,
) -> Result<Cx<T>, Error> {
    let s = &traj.samples;
    if s.is_empty() {
        return Err(Error::InvalidInput {
            what: "trajectory has no samples".into(),
        });
    }
    let (lo, hi) = (s[0].0.min(s[s.len() - 1].0), s[0].0.max(s[s.len() - 1].0));
    if tau < lo || tau > hi {
        return Err(Error::InvalidInput {
            what: format!("tau = {tau} outside the traced range [{lo}, {hi}]"),
        });
    }
    let ascending = s[s.len() - 1].0 >= s[0].0;
    let pos = s.partition_point(|&(t, _)| if ascending { t < tau } else { t > tau });
    if pos < s.len() && s[pos].0 == tau {
        return Ok(s[pos].1);
    }
    let (a, b) = (s[pos - 1], s[pos]);
    let w = (tau - a.0) / (b.0 - a.0);
    let seed = a.1 + (b.1 - a.1) * Complex::new(w, T::zero());

    let off = traj.target.offset();
    let half = T::lit(0.5);
    let on_line = traj.target == Target::F
        && (a.1.re - half).abs() < T::lit(1e-9)
        && (b.1.re - half).abs() < T::lit(1e-9);
    if on_line {
        let mut t = seed.im;
        for _ in 0..8 {
            let z = super::z_vals(fam, t, tau, 1)?;
            if z[1] == T::zero() {
                break;
            }
            let step = -z[0] / z[1];
            t = t + step;
            if step.abs() <= T::lit(1e-13) * (T::one() + t.abs()) {
                break;
            }
        }
        Ok(Complex::new(half, t))
    } else {
        let mut rho = seed;
        for _ in 0..8 {
            let f = fam.f_all(rho, tau, off + 1)?;
            if f[off + 1].norm() == T::zero() {
                break;
            }
            let step = -f[off] / f[off + 1];
            rho = rho + step;
            if step.norm() <= T::lit(1e-13) * (T::one() + rho.norm()) {
                break;
            }
        }
        Ok(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::super::testfam::*;
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn pinch_census_finds_the_leaving_pair() {
        // One seed in the window: the upper member 1/2 + i of the pinch pair.
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        let ctrl = StepControl::default();
        let run = census(&fam, 3.0, 1e-2, &ctrl).unwrap();
        assert_eq!(run.total, 1);
        assert_eq!(run.stays, 0);
        assert_eq!(run.leaves, 1);
        assert_eq!(run.events.len(), 1);
        assert!((run.events[0].tau0 - 0.5).abs() < 1e-7);
        assert!(run.events[0].rho0.im.abs() < 1e-6);
        // Stored tail is the left member.
        let traj = &run.trajectories[0];
        let (_, last) = *traj.samples.last().unwrap();
        assert!((last - cx(-0.5, 0.0)).norm() < 1e-7, "{last}");
        assert!(matches!(
            traj.classification,
            Classification::LeavesAt { .. }
        ));
    }

    #[test]
    fn non_colliding_census_stays_on_line() {
        let fam = NonColliding;
        let run = census(&fam, 4.0, 1e-2, &StepControl::default()).unwrap();
        assert_eq!(run.total, 2);
        assert_eq!(run.stays, 2);
        assert_eq!(run.leaves, 0);
        assert!(run.events.is_empty());
        // Endpoints moved as prescribed: t = 1 + tau/4 and 3 - tau/4.
        let ends: Vec<f64> = run
            .trajectories
            .iter()
            .map(|tr| tr.samples.last().unwrap().1.im)
            .collect();
        assert!((ends[0] - 1.25).abs() < 1e-9, "{ends:?}");
        assert!((ends[1] - 2.75).abs() < 1e-9, "{ends:?}");
    }

    #[test]
    fn degenerate_grid_is_rejected() {
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        let err = census(&fam, 3.0, 1.0, &StepControl::default()).unwrap_err();
        match err {
            Error::CensusIncomplete {
                incomplete, total, ..
            } => {
                assert_eq!(incomplete, 1);
                assert_eq!(total, 1);
            }
            e => panic!("expected CensusIncomplete, got {e}"),
        }
    }

    #[test]
    fn position_interpolates_between_samples() {
        let fam = NonColliding;
        let traj = trace(
            &fam,
            Target::F,
            cx(0.5, 1.0),
            0.0,
            1.0,
            &StepControl::default(),
        )
        .unwrap();
        let rho = position_at(&fam, &traj, 0.355).unwrap();
        assert!((rho - cx(0.5, 1.0 + 0.355 / 4.0)).norm() < 1e-10, "{rho}");
        assert!(position_at(&fam, &traj, 1.5).is_err());
    }
}
