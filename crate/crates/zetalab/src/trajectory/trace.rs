//! Predictor–corrector continuation of zero trajectories in `tau`.
//!
//! On the critical line a trajectory of `f` is followed through the real
//! rotated function `z(t, tau)` (one real Newton per corrector pass keeps
//! `Re rho = 1/2` exact); off the line, and always for the derivative target,
//! plain complex Newton in `s` does the work.  The Euler predictor direction
//! is the implicit derivative `drho/dtau = -f_tau / f_s`.
//!
//! When the corrector stalls at the minimal step with a small `f_s`, two line
//! zeros are pinching into a double zero (or a mirror pair is landing): the
//! collision protocol brackets the event, hands it to the detector, and
//! continues on the branch selected by [`BranchRule`].

use num_complex::Complex;

use super::collision::line_count;
use super::{
    detect_double_zero, local_quadratic_fit, z_sign_zeros, z_tau_vals, z_vals, BranchRule,
    Classification, DoubleZeroEvent, Family, StepControl, Target, Trajectory,
};
use crate::error::Error;
use crate::scalar::{Cx, Scalar};

/// Where the moving zero currently lives.
#[derive(Debug, Clone, Copy)]
enum Mode<T: Scalar> {
    /// On the critical line at ordinate `t`; the real part is pinned to 1/2.
    Line { t: T },
    /// At a general point of the plane.
    Plane { rho: Cx<T> },
}

impl<T: Scalar> Mode<T> {
    fn rho(&self) -> Cx<T> {
        match *self {
            Mode::Line { t } => Complex::new(T::lit(0.5), t),
            Mode::Plane { rho } => rho,
        }
    }
}

/// Outcome of one tentative step to `tau_next`.
enum Attempt<T: Scalar> {
    Accept { mode: Mode<T>, stressed: bool },
    Reject,
}

/// Traces the zero trajectory of the target function through `tau`, from a
/// point `rho_start` with `|f(rho_start, tau_start)| < 1e-9`.
///
/// `tau_end` may lie on either side of `tau_start`; `tau_end == tau_start`
/// returns the single starting sample.  Double zeros encountered on the way
/// are resolved through the collision protocol and recorded on the returned
/// trajectory.
pub fn trace<T: Scalar, F: Family<T> + ?Sized>(
    fam: &F,
    target: Target,
    rho_start: Cx<T>,
    tau_start: T,
    tau_end: T,
    ctrl: &StepControl<T>,
) -> Result<Trajectory<T>, Error> {
    if !(ctrl.dtau_min > T::zero())
        || !(ctrl.dtau_min <= ctrl.dtau_max)
        || !(ctrl.spacing_cap > T::zero())
        || ctrl.max_corrector_iters == 0
    {
        return Err(Error::InvalidInput {
            what: "step control must have 0 < dtau_min <= dtau_max, a positive spacing cap, \
                   and at least one corrector iteration"
                .into(),
        });
    }
    let (dom_lo, dom_hi) = fam.tau_domain();
    for &tau in &[tau_start, tau_end] {
        if !tau.is_finite() || tau < dom_lo || tau > dom_hi {
            return Err(Error::InvalidInput {
                what: format!("tau = {tau} outside the family domain"),
            });
        }
    }

    let off = target.offset();
    let f0 = fam.f_all(rho_start, tau_start, off)?;
    let r0 = f0[off].norm();
    if !(r0 < ctrl.residual_cap) {
        return Err(Error::NotAZero {
            re: rho_start.re.as_f64(),
            im: rho_start.im.as_f64(),
            f_abs: r0.as_f64(),
        });
    }

    let on_line = (rho_start.re - T::lit(0.5)).abs() < ctrl.line_tol;
    let mode = if target == Target::F && on_line {
        Mode::Line {
            t: rho_start.im,
        }
    } else {
        Mode::Plane { rho: rho_start }
    };
    let first_leave = if on_line {
        None
    } else {
        Some((tau_start, rho_start))
    };

    let mut tracer = Tracer {
        fam,
        target,
        ctrl,
        dir: if tau_end >= tau_start { T::one() } else { -T::one() },
        tau_start,
        tau_end,
        tau: tau_start,
        mode,
        dtau: ctrl.dtau_init.min(ctrl.dtau_max).max(ctrl.dtau_min),
        easy: 0,
        steps: 0,
        samples: vec![(tau_start, mode.rho())],
        events: Vec::new(),
        first_leave,
    };
    if tau_end != tau_start {
        tracer.run()?;
    }
    Ok(tracer.finish())
}

struct Tracer<'a, T: Scalar, F: Family<T> + ?Sized> {
    fam: &'a F,
    target: Target,
    ctrl: &'a StepControl<T>,
    dir: T,
    tau_start: T,
    tau_end: T,
    tau: T,
    mode: Mode<T>,
    dtau: T,
    easy: u32,
    steps: u64,
    samples: Vec<(T, Cx<T>)>,
    events: Vec<DoubleZeroEvent<T>>,
    first_leave: Option<(T, Cx<T>)>,
}

impl<'a, T: Scalar, F: Family<T> + ?Sized> Tracer<'a, T, F> {
    fn run(&mut self) -> Result<(), Error> {
        loop {
            let remaining = (self.tau_end - self.tau) * self.dir;
            if remaining <= T::zero() {
                return Ok(());
            }
            self.steps += 1;
            if self.steps > self.ctrl.max_steps {
                return Err(Error::ScanBudgetExceeded {
                    cells: self.ctrl.max_steps,
                });
            }
            let h = self.dtau.min(remaining);
            let tau_next = if h >= remaining {
                self.tau_end
            } else {
                self.tau + h * self.dir
            };
            let attempt = match self.mode {
                Mode::Line { t } => self.attempt_line_step(t, tau_next)?,
                Mode::Plane { rho } => self.attempt_plane_step(rho, tau_next)?,
            };
            match attempt {
                Attempt::Accept { mode, stressed } => {
                    let mode = self.check_landing(self.mode, mode, tau_next)?;
                    self.mode = mode;
                    self.tau = tau_next;
                    self.samples.push((tau_next, mode.rho()));
                    if stressed {
                        self.dtau = (self.dtau * T::lit(0.5)).max(self.ctrl.dtau_min);
                        self.easy = 0;
                    } else {
                        self.easy += 1;
                        if self.easy >= self.ctrl.easy_streak {
                            self.dtau = (self.dtau + self.dtau).min(self.ctrl.dtau_max);
                            self.easy = 0;
                        }
                    }
                }
                Attempt::Reject => {
                    let halved = self.dtau * T::lit(0.5);
                    if halved >= self.ctrl.dtau_min {
                        self.dtau = halved;
                        self.easy = 0;
                        continue;
                    }
                    self.handle_stall()?;
                }
            }
        }
    }

    fn finish(self) -> Trajectory<T> {
        let classification = match self.first_leave {
            None => Classification::StaysOnLine,
            Some((tau, rho)) => Classification::LeavesAt { tau, rho },
        };
        Trajectory {
            target: self.target,
            samples: self.samples,
            classification,
            events: self.events,
        }
    }

    // ------------------------------------------------------------------
    // Stepping

    fn attempt_line_step(&mut self, t: T, tau_next: T) -> Result<Attempt<T>, Error> {
        let h = (tau_next - self.tau).abs();
        let z0 = z_vals(self.fam, t, self.tau, 1)?;
        if z0[1] == T::zero() || !z0[1].is_finite() {
            return Ok(Attempt::Reject);
        }
        let (z_tau, _) = z_tau_vals(self.fam, t, self.tau, 0)?;
        let move_pred = -(tau_next - self.tau) * z_tau / z0[1];
        if move_pred.abs() > self.ctrl.spacing_cap {
            return Ok(Attempt::Reject);
        }
        let t_pred = t + move_pred;
        let trust = (move_pred.abs() * T::lit(4.0)).max(h);

        let mut tc = t_pred;
        let mut iters = 0u32;
        let mut converged = false;
        while iters < self.ctrl.max_corrector_iters {
            iters += 1;
            let z = z_vals(self.fam, tc, tau_next, 1)?;
            if z[1] == T::zero() || !z[1].is_finite() {
                return Ok(Attempt::Reject);
            }
            let step = -z[0] / z[1];
            tc = tc + step;
            if (tc - t_pred).abs() > trust {
                return Ok(Attempt::Reject);
            }
            if step.abs() <= self.ctrl.step_tol * (T::one() + tc.abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Ok(Attempt::Reject);
        }
        let zf = z_vals(self.fam, tc, tau_next, 1)?;
        if !(zf[0].abs() < self.ctrl.residual_cap) || (tc - t).abs() > self.ctrl.spacing_cap {
            return Ok(Attempt::Reject);
        }
        let fs_small = zf[1].abs() < self.ctrl.fs_floor;
        Ok(Attempt::Accept {
            mode: Mode::Line { t: tc },
            stressed: iters > self.ctrl.stress_iters || fs_small,
        })
    }

    fn attempt_plane_step(&mut self, rho: Cx<T>, tau_next: T) -> Result<Attempt<T>, Error> {
        let h = (tau_next - self.tau).abs();
        let off = self.target.offset();
        let f = self.fam.f_all(rho, self.tau, off + 1)?;
        let gs = f[off + 1];
        if gs.norm() == T::zero() || !gs.re.is_finite() || !gs.im.is_finite() {
            return Ok(Attempt::Reject);
        }
        let gt = self.fam.f_tau_all(rho, self.tau, off)?[off];
        let velocity = -gt / gs;
        let move_pred = velocity * (tau_next - self.tau);
        if move_pred.norm() > self.ctrl.spacing_cap {
            return Ok(Attempt::Reject);
        }
        let rho_pred = rho + move_pred;
        let trust = (move_pred.norm() * T::lit(4.0)).max(h);

        let mut rc = rho_pred;
        let mut iters = 0u32;
        let mut converged = false;
        while iters < self.ctrl.max_corrector_iters {
            iters += 1;
            let f = self.fam.f_all(rc, tau_next, off + 1)?;
            let (g, gs) = (f[off], f[off + 1]);
            if gs.norm() == T::zero() || !gs.re.is_finite() || !gs.im.is_finite() {
                return Ok(Attempt::Reject);
            }
            let step = -g / gs;
            rc = rc + step;
            if (rc - rho_pred).norm() > trust {
                return Ok(Attempt::Reject);
            }
            if step.norm() <= self.ctrl.step_tol * (T::one() + rc.norm()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Ok(Attempt::Reject);
        }
        let f = self.fam.f_all(rc, tau_next, off + 1)?;
        if !(f[off].norm() < self.ctrl.residual_cap) || (rc - rho).norm() > self.ctrl.spacing_cap
        {
            return Ok(Attempt::Reject);
        }
        let fs_small = f[off + 1].norm() < self.ctrl.fs_floor;
        Ok(Attempt::Accept {
            mode: Mode::Plane { rho: rc },
            stressed: iters > self.ctrl.stress_iters || fs_small,
        })
    }

    /// Complex Newton can slide through a landing without stalling: the pair
    /// merges and the corrector converges straight to a point with
    /// `Re rho = 1/2`.  Record the event when it can be bracketed cleanly and
    /// hand the trajectory to line mode on the branch the step control picks.
    fn check_landing(
        &mut self,
        prev: Mode<T>,
        new: Mode<T>,
        tau_next: T,
    ) -> Result<Mode<T>, Error> {
        let (rho_prev, rho_new) = match (prev, new) {
            (Mode::Plane { rho: a }, Mode::Plane { rho: b }) => (a, b),
            _ => return Ok(new),
        };
        let half = T::lit(0.5);
        if self.target != Target::F || (rho_new.re - half).abs() >= self.ctrl.line_tol {
            return Ok(new);
        }
        let gap = (rho_prev.re - half).abs();
        let width = (gap * T::lit(32.0))
            .max(T::lit(1e-4) * (T::one() + rho_new.im.abs()))
            .min(T::lit(0.25));
        let bracket = (rho_new.im - width, rho_new.im + width);
        if line_count(self.fam, self.tau, bracket)? == 0
            && line_count(self.fam, tau_next, bracket)? == 2
        {
            let lo = self.tau.min(tau_next);
            let hi = self.tau.max(tau_next);
            if let Ok(event) = detect_double_zero(self.fam, bracket, (lo, hi)) {
                self.push_event_sample(event)?;
                self.events.push(event);
            }
        }
        let zs = z_sign_zeros(self.fam, tau_next, bracket.0, bracket.1, 96)?;
        let seed = if zs.len() == 2 {
            match self.ctrl.branch {
                BranchRule::Left => zs[0],
                BranchRule::Right => zs[1],
                BranchRule::BySide => {
                    if rho_prev.re <= half {
                        zs[0]
                    } else {
                        zs[1]
                    }
                }
            }
        } else {
            rho_new.im
        };
        let t = self.polish_line(seed, tau_next)?;
        Ok(Mode::Line { t })
    }

    // ------------------------------------------------------------------
    // Collision handling

    /// Called when the step size is at its floor and the corrector still
    /// rejects: either two zeros are pinching (handled), or the trajectory is
    /// genuinely stuck (reported).
    fn handle_stall(&mut self) -> Result<(), Error> {
        match self.mode {
            Mode::Line { t } if self.target == Target::F => self.stall_on_line(t),
            Mode::Plane { rho }
                if self.target == Target::F
                    && (rho.re - T::lit(0.5)).abs() < T::lit(0.02) =>
            {
                self.stall_near_line(rho)
            }
            mode => {
                let rho = mode.rho();
                let off = self.target.offset();
                let fs = self.fam.f_all(rho, self.tau, off + 1)?[off + 1].norm();
                if fs < self.ctrl.fs_floor {
                    Err(Error::SingularStall {
                        tau: self.tau.as_f64(),
                        re: rho.re.as_f64(),
                        im: rho.im.as_f64(),
                        fs_abs: fs.as_f64(),
                    })
                } else {
                    Err(Error::StepUnderflow {
                        tau: self.tau.as_f64(),
                    })
                }
            }
        }
    }

    /// Two line zeros are merging near the current ordinate.
    fn stall_on_line(&mut self, t_s: T) -> Result<(), Error> {
        // Pinch center: the critical point of z between the colliding pair.
        let mut tc = t_s;
        let mut centered = false;
        for _ in 0..30 {
            let z = z_vals(self.fam, tc, self.tau, 2)?;
            if z[2] == T::zero() || !z[2].is_finite() {
                break;
            }
            let step = -z[1] / z[2];
            tc = tc + step;
            if (tc - t_s).abs() > T::one() {
                break;
            }
            if step.abs() <= T::lit(1e-12) * (T::one() + tc.abs()) {
                centered = true;
                break;
            }
        }
        if !centered {
            return self.stall_error(Complex::new(T::lit(0.5), t_s));
        }
        let sep = (t_s - tc).abs().max(T::epsilon() * T::lit(1e3) * (T::one() + tc.abs()));

        // t-bracket holding exactly the colliding pair at a tau safely on the
        // two-zero side.
        let mut width = (sep * T::lit(8.0)).max(T::lit(1e-4) * (T::one() + tc.abs()));
        let mut bracketed = false;
        let tau_back = self.back_off_tau()?;
        for _ in 0..12 {
            let c = line_count(self.fam, tau_back, (tc - width, tc + width))?;
            match c {
                2 => {
                    bracketed = true;
                    break;
                }
                0 | 1 => width = width * T::lit(2.0),
                _ => width = width * T::lit(0.5),
            }
        }
        if !bracketed {
            return self.stall_error(Complex::new(T::lit(0.5), t_s));
        }
        let bracket = (tc - width, tc + width);

        // Forward probe for the zero-count side.
        match self.probe_forward(bracket, 0)? {
            Some(tau_fwd) => {
                let lo = tau_back.min(tau_fwd);
                let hi = tau_back.max(tau_fwd);
                match detect_double_zero(self.fam, bracket, (lo, hi)) {
                    Ok(event) => {
                        let from_low = t_s <= event.rho0.im;
                        self.resume_past_event(event, from_low, width)
                    }
                    // An unrelated zero inside the bracket can spoil the
                    // count pair; the bounce resume rechecks health directly.
                    Err(Error::NoCollision { .. } | Error::InvalidInput { .. }) => {
                        self.resume_line_bounce(bracket, t_s, tc)
                    }
                    Err(e) => Err(e),
                }
            }
            None => self.resume_line_bounce(bracket, t_s, tc),
        }
    }

    /// A mirror pair is landing on the line near the current point.
    fn stall_near_line(&mut self, rho_s: Cx<T>) -> Result<(), Error> {
        let gap = (rho_s.re - T::lit(0.5)).abs();
        let width = (gap * T::lit(32.0)).max(T::lit(1e-4) * (T::one() + rho_s.im.abs()));
        let bracket = (rho_s.im - width, rho_s.im + width);
        let tau_back = self.back_off_tau()?;
        if line_count(self.fam, tau_back, bracket)? != 0 {
            // Not the landing scenario after all.
            return self.stall_error(rho_s);
        }
        match self.probe_forward(bracket, 2)? {
            Some(tau_fwd) => {
                let lo = tau_back.min(tau_fwd);
                let hi = tau_back.max(tau_fwd);
                match detect_double_zero(self.fam, bracket, (lo, hi)) {
                    Ok(event) => {
                        let from_left = rho_s.re <= T::lit(0.5);
                        self.resume_past_event(event, from_left, width)
                    }
                    Err(Error::NoCollision { .. } | Error::InvalidInput { .. }) => {
                        self.resume_plane_bounce(rho_s)
                    }
                    Err(e) => Err(e),
                }
            }
            None => self.resume_plane_bounce(rho_s),
        }
    }

    /// A tau strictly behind the current point (toward `tau_start`), clamped
    /// to the traced range, where the pre-stall zero configuration holds.
    fn back_off_tau(&mut self) -> Result<T, Error> {
        let span = (self.tau - self.tau_start).abs();
        let step = (self.ctrl.dtau_min * T::lit(16.0)).min(span).max(T::zero());
        Ok(self.tau - step * self.dir)
    }

    /// Doubling tau probes ahead of the stall until the line-zero count in
    /// `bracket` equals `want`; `None` when the count never changes inside
    /// the probe horizon (a bounce rather than a crossing).
    fn probe_forward(&mut self, bracket: (T, T), want: usize) -> Result<Option<T>, Error> {
        let (dom_lo, dom_hi) = self.fam.tau_domain();
        let range = (self.tau_end - self.tau_start).abs();
        let horizon = (range * T::lit(0.25)).max(self.ctrl.dtau_min * T::lit(1024.0));
        let mut delta = self.ctrl.dtau_min * T::lit(32.0);
        for _ in 0..20 {
            let probe = (self.tau + delta * self.dir).max(dom_lo).min(dom_hi);
            if line_count(self.fam, probe, bracket)? == want {
                return Ok(Some(probe));
            }
            if delta >= horizon || probe == dom_lo || probe == dom_hi {
                return Ok(None);
            }
            delta = delta * T::lit(2.0);
        }
        Ok(None)
    }

    /// Continues on the branch chosen by the step control past a detected
    /// event; falls back to the line when the far side turns out to hold a
    /// line pair (a grazing rather than a crossing).
    fn resume_past_event(
        &mut self,
        event: DoubleZeroEvent<T>,
        from_low: bool,
        width: T,
    ) -> Result<(), Error> {
        // Event beyond the traced range: step straight to the end, which is
        // still on the near side of the collision.
        if (event.tau0 - self.tau_end) * self.dir > T::zero() {
            return self.finish_on_line_at(self.tau_end, event.rho0.im);
        }

        self.events.push(event);
        let f_tau = self.fam.f_tau_all(event.rho0, event.tau0, 0)?[0];
        let f_ss = event.f_second_deriv;
        let split_scale = (f_tau.norm() * T::lit(2.0) / f_ss.norm()).sqrt();

        let mut delta = (self.ctrl.dtau_min * T::lit(8.0))
            .min((self.tau_end - event.tau0) * self.dir)
            .max(T::zero());
        if delta == T::zero() {
            // The range ends exactly at the event.
            if event.rho0.im.is_finite() {
                self.push_event_sample(event)?;
            }
            self.tau = self.tau_end;
            return Ok(());
        }

        self.push_event_sample(event)?;
        let mut last_err: Option<Error> = None;
        for _ in 0..6 {
            let resume = event.tau0 + delta * self.dir;
            let radius = (split_scale * delta.sqrt() * T::lit(4.0))
                .max(T::epsilon() * T::lit(1e4) * (T::one() + event.rho0.norm()))
                .min(width);
            match local_quadratic_fit(self.fam, resume, event.rho0, radius) {
                Ok(fit) => {
                    let half = T::lit(0.5);
                    let (r0, r1) = fit.roots;
                    let off0 = (r0.re - half).abs() >= self.ctrl.line_tol;
                    let off1 = (r1.re - half).abs() >= self.ctrl.line_tol;
                    let next = if off0 && off1 {
                        // Mirror pair: the trajectory leaves the line.
                        if self.first_leave.is_none() {
                            self.first_leave = Some((event.tau0, event.rho0));
                        }
                        // An exit pair on the real axis means the collision
                        // partner was the conjugate zero, not another traced
                        // one: "side" is degenerate there, and only the left
                        // member survives to the far end of the range (the
                        // right one can drown in a pole of the family).
                        let real_exit = r0.im.abs() < self.ctrl.line_tol * (T::one() + r0.norm())
                            && r1.im.abs() < self.ctrl.line_tol * (T::one() + r1.norm());
                        let root = match self.ctrl.branch {
                            BranchRule::Left => fit.left_root(),
                            BranchRule::Right => fit.right_root(),
                            BranchRule::BySide if real_exit => fit.left_root(),
                            BranchRule::BySide => {
                                if from_low {
                                    fit.left_root()
                                } else {
                                    fit.right_root()
                                }
                            }
                        };
                        let rho = self.polish_plane(root, resume)?;
                        Mode::Plane { rho }
                    } else if !off0 && !off1 {
                        // Line pair: landing (or a grazing pass).
                        let root = match self.ctrl.branch {
                            BranchRule::Left => fit.lower_root(),
                            BranchRule::Right => fit.upper_root(),
                            BranchRule::BySide => {
                                if from_low {
                                    fit.lower_root()
                                } else {
                                    fit.upper_root()
                                }
                            }
                        };
                        let t = self.polish_line(root.im, resume)?;
                        Mode::Line { t }
                    } else {
                        return Err(Error::InvalidInput {
                            what: format!(
                                "quadratic roots {r0} / {r1} straddle the line inconsistently \
                                 at tau = {resume}"
                            ),
                        });
                    };
                    self.mode = next;
                    self.tau = resume;
                    self.samples.push((resume, next.rho()));
                    self.dtau = (self.ctrl.dtau_min * T::lit(8.0)).min(self.ctrl.dtau_max);
                    self.easy = 0;
                    return Ok(());
                }
                Err(
                    e @ (Error::WrongZeroCount { .. }
                    | Error::ZeroOnContour { .. }
                    | Error::UnresolvedCell { .. }),
                ) => {
                    last_err = Some(e);
                    delta = (delta * T::lit(2.0)).min((self.tau_end - event.tau0) * self.dir);
                }
                Err(e) => return Err(e),
            }
        }
        Err(last_err.unwrap_or(Error::NoCollision {
            tau_lo: event.tau0.as_f64(),
            tau_hi: self.tau_end.as_f64(),
        }))
    }

    fn push_event_sample(&mut self, event: DoubleZeroEvent<T>) -> Result<(), Error> {
        let f = self.fam.f_all(event.rho0, event.tau0, 0)?[0];
        if f.norm() < self.ctrl.residual_cap {
            self.samples.push((event.tau0, event.rho0));
        }
        Ok(())
    }

    /// The pinch never resolves into a crossing inside the probe horizon:
    /// the zeros approach and re-separate on the line (or the traced range
    /// ends before the collision).  Skip to the first probed tau where the
    /// pair is healthy again, keeping the same side; at the very end of the
    /// range the bisected sign-change zero is accepted as the final sample
    /// even when pinched, since bisection needs no derivative.
    fn resume_line_bounce(&mut self, bracket: (T, T), t_s: T, tc: T) -> Result<(), Error> {
        let (dom_lo, dom_hi) = self.fam.tau_domain();
        let range = (self.tau_end - self.tau_start).abs();
        let horizon = (range * T::lit(0.25)).max(self.ctrl.dtau_min * T::lit(1024.0));
        let mut delta = self.ctrl.dtau_min * T::lit(32.0);
        for _ in 0..20 {
            let probe = (self.tau + delta * self.dir)
                .max(dom_lo)
                .min(dom_hi)
                .max(self.tau_end.min(self.tau_start))
                .min(self.tau_end.max(self.tau_start));
            let at_end = probe == self.tau_end;
            let zs = z_sign_zeros(self.fam, probe, bracket.0, bracket.1, 96)?;
            if zs.len() == 2 {
                let ours = if t_s <= tc { zs[0] } else { zs[1] };
                if at_end {
                    let z = z_vals(self.fam, ours, probe, 0)?;
                    if z[0].abs() < self.ctrl.residual_cap {
                        self.mode = Mode::Line { t: ours };
                        self.tau = probe;
                        self.samples.push((probe, self.mode.rho()));
                        return Ok(());
                    }
                } else {
                    let healthy = z_vals(self.fam, ours, probe, 1)?[1].abs()
                        >= self.ctrl.fs_floor * T::lit(2.0);
                    if healthy {
                        let t = self.polish_line(ours, probe)?;
                        self.mode = Mode::Line { t };
                        self.tau = probe;
                        self.samples.push((probe, self.mode.rho()));
                        self.dtau = (self.ctrl.dtau_min * T::lit(8.0)).min(self.ctrl.dtau_max);
                        self.easy = 0;
                        return Ok(());
                    }
                }
            }
            if delta >= horizon && !at_end {
                break;
            }
            if at_end {
                break;
            }
            delta = delta * T::lit(2.0);
        }
        self.stall_error(Complex::new(T::lit(0.5), t_s))
    }

    /// Off-line analogue of the bounce: push the seed forward with the local
    /// velocity until plain Newton becomes healthy again.
    fn resume_plane_bounce(&mut self, rho_s: Cx<T>) -> Result<(), Error> {
        let off = self.target.offset();
        let f = self.fam.f_all(rho_s, self.tau, off + 1)?;
        let gs = f[off + 1];
        if gs.norm() == T::zero() {
            return self.stall_error(rho_s);
        }
        let gt = self.fam.f_tau_all(rho_s, self.tau, off)?[off];
        let velocity = -gt / gs;
        let (dom_lo, dom_hi) = self.fam.tau_domain();
        let range = (self.tau_end - self.tau_start).abs();
        let horizon = (range * T::lit(0.25)).max(self.ctrl.dtau_min * T::lit(1024.0));
        let mut delta = self.ctrl.dtau_min * T::lit(32.0);
        for _ in 0..20 {
            let probe = (self.tau + delta * self.dir)
                .max(dom_lo)
                .min(dom_hi)
                .max(self.tau_end.min(self.tau_start))
                .min(self.tau_end.max(self.tau_start));
            let at_end = probe == self.tau_end;
            let seed = rho_s + velocity * (probe - self.tau);
            if let Ok(rho) = self.polish_plane(seed, probe) {
                let healthy = at_end
                    || self.fam.f_all(rho, probe, off + 1)?[off + 1].norm()
                        >= self.ctrl.fs_floor * T::lit(2.0);
                if healthy && (rho - rho_s).norm() <= self.ctrl.spacing_cap {
                    self.mode = Mode::Plane { rho };
                    self.tau = probe;
                    self.samples.push((probe, rho));
                    self.dtau = (self.ctrl.dtau_min * T::lit(8.0)).min(self.ctrl.dtau_max);
                    self.easy = 0;
                    return Ok(());
                }
            }
            if delta >= horizon || at_end {
                break;
            }
            delta = delta * T::lit(2.0);
        }
        self.stall_error(rho_s)
    }

    /// Final corrector used when the collision sits beyond `tau_end`: the
    /// pair still exists there, but tangency slows Newton to linear
    /// convergence, so allow many iterations and no trust region.
    fn finish_on_line_at(&mut self, tau_target: T, t_seed: T) -> Result<(), Error> {
        let mut t = t_seed;
        for _ in 0..80 {
            let z = z_vals(self.fam, t, tau_target, 1)?;
            if z[1] == T::zero() || !z[1].is_finite() {
                break;
            }
            let step = -z[0] / z[1];
            t = t + step;
            if step.abs() <= self.ctrl.step_tol * (T::one() + t.abs()) {
                break;
            }
        }
        let z = z_vals(self.fam, t, tau_target, 0)?;
        if !(z[0].abs() < self.ctrl.residual_cap) {
            return self.stall_error(Complex::new(T::lit(0.5), t));
        }
        self.mode = Mode::Line { t };
        self.tau = tau_target;
        self.samples.push((tau_target, self.mode.rho()));
        Ok(())
    }

    /// A few Newton polish steps on the line; errors if the residual cap is
    /// not reached.
    fn polish_line(&mut self, t_seed: T, tau: T) -> Result<T, Error> {
        let mut t = t_seed;
        for _ in 0..12 {
            let z = z_vals(self.fam, t, tau, 1)?;
            if z[1] == T::zero() || !z[1].is_finite() {
                break;
            }
            let step = -z[0] / z[1];
            t = t + step;
            if step.abs() <= self.ctrl.step_tol * (T::one() + t.abs()) {
                break;
            }
        }
        let z = z_vals(self.fam, t, tau, 0)?;
        if !(z[0].abs() < self.ctrl.residual_cap) {
            return Err(Error::NotAZero {
                re: 0.5,
                im: t.as_f64(),
                f_abs: z[0].abs().as_f64(),
            });
        }
        Ok(t)
    }

    /// Complex Newton polish off the line.
    fn polish_plane(&mut self, seed: Cx<T>, tau: T) -> Result<Cx<T>, Error> {
        let off = self.target.offset();
        let mut rho = seed;
        for _ in 0..12 {
            let f = self.fam.f_all(rho, tau, off + 1)?;
            let (g, gs) = (f[off], f[off + 1]);
            if gs.norm() == T::zero() || !gs.re.is_finite() || !gs.im.is_finite() {
                break;
            }
            let step = -g / gs;
            rho = rho + step;
            if step.norm() <= self.ctrl.step_tol * (T::one() + rho.norm()) {
                break;
            }
        }
        let g = self.fam.f_all(rho, tau, off)?[off];
        if !(g.norm() < self.ctrl.residual_cap) {
            return Err(Error::NotAZero {
                re: rho.re.as_f64(),
                im: rho.im.as_f64(),
                f_abs: g.norm().as_f64(),
            });
        }
        Ok(rho)
    }

    fn stall_error(&self, rho: Cx<T>) -> Result<(), Error> {
        let off = self.target.offset();
        let fs = self
            .fam
            .f_all(rho, self.tau, off + 1)
            .map(|f| f[off + 1].norm())
            .unwrap_or(T::zero());
        if fs < self.ctrl.fs_floor {
            Err(Error::SingularStall {
                tau: self.tau.as_f64(),
                re: rho.re.as_f64(),
                im: rho.im.as_f64(),
                fs_abs: fs.as_f64(),
            })
        } else {
            Err(Error::StepUnderflow {
                tau: self.tau.as_f64(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testfam::*;
    use super::super::ZetaFamily;
    use super::*;
    use crate::scalar::cx;

    fn residuals_ok<F: Family<f64>>(fam: &F, traj: &Trajectory<f64>) {
        let off = traj.target.offset();
        for &(tau, rho) in &traj.samples {
            let f = fam.f_all(rho, tau, off).unwrap()[off];
            assert!(
                f.norm() < 1e-9,
                "sample at tau = {tau}: |f| = {}",
                f.norm()
            );
        }
        for pair in traj.samples.windows(2) {
            assert!(pair[0].0 <= pair[1].0 || pair[0].0 >= pair[1].0);
            assert!(
                (pair[1].1 - pair[0].1).norm() < 0.25,
                "jump {} -> {}",
                pair[0].1,
                pair[1].1
            );
        }
    }

    #[test]
    fn constant_range_returns_single_sample() {
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        let traj = trace(
            &fam,
            Target::F,
            cx(0.5, 1.0),
            0.0,
            0.0,
            &StepControl::default(),
        )
        .unwrap();
        assert_eq!(traj.samples.len(), 1);
        assert_eq!(traj.samples[0], (0.0, cx(0.5, 1.0)));
        assert_eq!(traj.classification, Classification::StaysOnLine);
    }

    #[test]
    fn non_zero_start_is_rejected() {
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        let err = trace(
            &fam,
            Target::F,
            cx(0.5, 1.3),
            0.0,
            0.5,
            &StepControl::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotAZero { .. }));
    }

    #[test]
    fn budget_is_enforced() {
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        let ctrl = StepControl {
            max_steps: 3,
            ..StepControl::default()
        };
        let err = trace(&fam, Target::F, cx(0.5, 1.0), 0.0, 0.4, &ctrl).unwrap_err();
        assert!(matches!(err, Error::ScanBudgetExceeded { .. }));
    }

    #[test]
    fn pinch_trajectory_leaves_at_the_event() {
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        // The pair collides at t = 0 and exits along the real axis, where
        // "side" is degenerate: the side rule falls back to the left member.
        let traj = trace(
            &fam,
            Target::F,
            cx(0.5, 1.0),
            0.0,
            1.0,
            &StepControl::default(),
        )
        .unwrap();
        residuals_ok(&fam, &traj);
        match traj.classification {
            Classification::LeavesAt { tau, rho } => {
                assert!((tau - 0.5).abs() < 1e-7, "tau* = {tau}");
                assert!(rho.im.abs() < 1e-6 && rho.re == 0.5);
            }
            ref c => panic!("expected a leaving trajectory, got {c:?}"),
        }
        assert_eq!(traj.events.len(), 1);
        let last = traj.samples.last().unwrap();
        assert_eq!(last.0, 1.0);
        assert!((last.1 - cx(-0.5, 0.0)).norm() < 1e-7, "{}", last.1);

        // Forcing the right branch lands on the mirror member.
        let ctrl = StepControl {
            branch: BranchRule::Right,
            ..StepControl::default()
        };
        let traj = trace(&fam, Target::F, cx(0.5, 1.0), 0.0, 1.0, &ctrl).unwrap();
        let last = traj.samples.last().unwrap();
        assert!((last.1 - cx(1.5, 0.0)).norm() < 1e-7, "{}", last.1);
    }

    #[test]
    fn lower_member_continues_left_by_side() {
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        let traj = trace(
            &fam,
            Target::F,
            cx(0.5, -1.0),
            0.0,
            1.0,
            &StepControl::default(),
        )
        .unwrap();
        residuals_ok(&fam, &traj);
        let last = traj.samples.last().unwrap();
        assert!((last.1 - cx(-0.5, 0.0)).norm() < 1e-7, "{}", last.1);
    }

    #[test]
    fn off_axis_pair_splits_by_side() {
        // An event away from the real axis: the lower seed exits on the left
        // member, the upper seed on the right, so the pair shares the event
        // but no tail.
        let fam = OffsetPinch {
            tau0: 0.5,
            c: 2.0,
            t0: 3.0,
        };
        let ctrl = StepControl::default();
        let lower = trace(&fam, Target::F, cx(0.5, 2.0), 0.0, 1.0, &ctrl).unwrap();
        let upper = trace(&fam, Target::F, cx(0.5, 4.0), 0.0, 1.0, &ctrl).unwrap();
        residuals_ok(&fam, &lower);
        residuals_ok(&fam, &upper);
        let l = lower.samples.last().unwrap().1;
        let u = upper.samples.last().unwrap().1;
        assert!((l - cx(-0.5, 3.0)).norm() < 1e-7, "lower end {l}");
        assert!((u - cx(1.5, 3.0)).norm() < 1e-7, "upper end {u}");
        for traj in [&lower, &upper] {
            match traj.classification {
                Classification::LeavesAt { tau, rho } => {
                    assert!((tau - 0.5).abs() < 1e-7);
                    assert!((rho - cx(0.5, 3.0)).norm() < 1e-6);
                }
                ref c => panic!("expected a leaving trajectory, got {c:?}"),
            }
        }
    }

    #[test]
    fn landing_pair_returns_to_the_line() {
        // c < 0 reverses the pinch: mirror pair for tau < tau0, line pair
        // after.  Start on the right member.
        let fam = Pinch { tau0: 0.2, c: -1.0 };
        let start = cx(0.5 + 0.2_f64.sqrt(), 0.0);
        let traj = trace(
            &fam,
            Target::F,
            start,
            0.0,
            1.0,
            &StepControl::default(),
        )
        .unwrap();
        residuals_ok(&fam, &traj);
        assert_eq!(traj.events.len(), 1, "{:?}", traj.events);
        assert!((traj.events[0].tau0 - 0.2).abs() < 1e-7);
        // Off-line start, so the classification reports the initial departure.
        assert!(matches!(
            traj.classification,
            Classification::LeavesAt { tau, .. } if tau == 0.0
        ));
        let last = traj.samples.last().unwrap();
        assert_eq!(last.0, 1.0);
        assert_eq!(last.1.re, 0.5);
        // Right member lands on the upper line zero: t = +sqrt(0.8).
        assert!((last.1.im - 0.8_f64.sqrt()).abs() < 1e-7, "{}", last.1);
    }

    #[test]
    fn trace_is_reversible_away_from_events() {
        let fam = Pinch { tau0: 0.5, c: 2.0 };
        let ctrl = StepControl::default();
        let fwd = trace(&fam, Target::F, cx(0.5, 1.0), 0.0, 0.3, &ctrl).unwrap();
        let (_, rho_mid) = *fwd.samples.last().unwrap();
        let back = trace(&fam, Target::F, rho_mid, 0.3, 0.0, &ctrl).unwrap();
        let (_, rho_home) = *back.samples.last().unwrap();
        assert!((rho_home - cx(0.5, 1.0)).norm() < 1e-7, "{rho_home}");
    }

    #[test]
    fn derivative_zero_crosses_the_line_transversally() {
        // For the tilted pinch the f' zero runs along the real axis from
        // right of the critical line to left of it as tau crosses tau0.
        let fam = TiltedPinch {
            tau0: 0.5,
            c: 2.0,
            beta: -0.5,
        };
        let b: f64 = -0.5;
        let w0 = (-1.0 + (1.0 - b * b * 2.0 * 0.5).sqrt()) / b;
        let start = cx(0.5 + w0, 0.0);
        let traj = trace(&fam, Target::Fprime, start, 0.0, 1.0, &StepControl::default())
            .unwrap();
        residuals_ok(&fam, &traj);
        let first = traj.samples.first().unwrap().1;
        let last = traj.samples.last().unwrap().1;
        assert!(first.re > 0.5 && last.re < 0.5, "{first} -> {last}");
        // Transversal crossing: no events, no stall.
        assert!(traj.events.is_empty());
    }

    #[test]
    fn factor_zero_of_the_real_family_drifts_on_the_line() {
        // First factor zero 1/2 + i pi/ln 5 of the tau = 0 member.
        let fam = ZetaFamily::<f64>::new();
        let t1 = std::f64::consts::PI / 5.0_f64.ln();
        let traj = trace(
            &fam,
            Target::F,
            cx(0.5, t1),
            0.0,
            0.1,
            &StepControl::default(),
        )
        .unwrap();
        residuals_ok(&fam, &traj);
        assert_eq!(traj.classification, Classification::StaysOnLine);
        for &(_, rho) in &traj.samples {
            assert_eq!(rho.re, 0.5);
        }
        // The zero actually moves.
        let (t_first, t_last) = (traj.samples[0].1.im, traj.samples.last().unwrap().1.im);
        assert!((t_first - t_last).abs() > 1e-4, "no drift: {t_first} vs {t_last}");

        // Round trip back to the start.
        let back = trace(
            &fam,
            Target::F,
            traj.samples.last().unwrap().1,
            0.1,
            0.0,
            &StepControl::default(),
        )
        .unwrap();
        let rho_home = back.samples.last().unwrap().1;
        assert!((rho_home.im - t1).abs() < 1e-7, "{rho_home}");
    }
}
