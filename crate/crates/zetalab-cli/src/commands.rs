//! Implementations of the subcommands: thin wrappers that map a [`RunConfig`]
//! onto library calls, with deterministic parallelism and checkpointing for
//! the batched ones.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use zetalab::io::{self, TrajectoryRecord, ZeroRecordDoc};
use zetalab::speiser::{speiser_compare, speiser_pipeline, SpeiserParams, SpeiserReport};
use zetalab::trajectory::{
    assemble_census, census_guards, census_seeds, census_step_control, trace, trace_seed,
    StepControl, Target, Trajectory, ZetaFamily,
};
use zetalab::zero::{scan_zeros, winding_count_nudged, Contour, Rect, ScanParams, ZeroRecord};
use zetalab::{Complex64, Error};

use crate::checkpoint::{open_writer, UnitResult};
use crate::config::{check_tolerances, tol, RunConfig};
use crate::pool::run_units;

/// Writes `text` (newline-terminated) to the output file, or stdout when no
/// file is configured.
fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn out_path(cfg: &RunConfig) -> Option<&Path> {
    cfg.out.as_deref().map(Path::new)
}

/// A region parameter that must be present (commands insert their own keys,
/// so absence is a programming error upstream of the config hash).
fn region(cfg: &RunConfig, key: &str) -> Result<f64, Error> {
    cfg.region
        .get(key)
        .copied()
        .ok_or_else(|| Error::InvalidInput {
            what: format!("missing region parameter {key:?}"),
        })
}

fn rect_from_region(cfg: &RunConfig) -> Result<Rect<f64>, Error> {
    let rect = Rect::new(
        region(cfg, "sigma_lo")?,
        region(cfg, "sigma_hi")?,
        region(cfg, "t_lo")?,
        region(cfg, "t_hi")?,
    );
    if !(rect.sigma_lo < rect.sigma_hi) || !(rect.t_lo < rect.t_hi) {
        return Err(Error::InvalidInput {
            what: format!(
                "rectangle sides must increase: sigma {}..{}, t {}..{}",
                rect.sigma_lo, rect.sigma_hi, rect.t_lo, rect.t_hi
            ),
        });
    }
    Ok(rect)
}

fn scan_params(cfg: &RunConfig) -> ScanParams<f64> {
    let mut params = ScanParams::default();
    if let Some(v) = tol(&cfg.tolerances, "min_cell") {
        params.min_cell = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "zero_rel_tol") {
        params.winding.zero_rel_tol = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "refine_tol") {
        params.refine.tol = v;
    }
    params
}

fn step_control(cfg: &RunConfig) -> StepControl<f64> {
    let mut ctrl = StepControl::default();
    if let Some(v) = tol(&cfg.tolerances, "dtau_init") {
        ctrl.dtau_init = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "dtau_min") {
        ctrl.dtau_min = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "dtau_max") {
        ctrl.dtau_max = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "fs_floor") {
        ctrl.fs_floor = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "step_tol") {
        ctrl.step_tol = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "residual_cap") {
        ctrl.residual_cap = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "line_tol") {
        ctrl.line_tol = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "spacing_cap") {
        ctrl.spacing_cap = v;
    }
    ctrl
}

const SCAN_TOLS: &[&str] = &["min_cell", "zero_rel_tol", "refine_tol"];
const STEP_TOLS: &[&str] = &[
    "dtau_init",
    "dtau_min",
    "dtau_max",
    "fs_floor",
    "step_tol",
    "residual_cap",
    "line_tol",
    "spacing_cap",
];

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EvalDoc<'a> {
    function: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    s: [f64; 2],
    deriv: u8,
    value: [f64; 2],
    est_abs_error: f64,
}

pub fn cmd_eval(cfg: &RunConfig, s: Complex64, deriv: u8) -> Result<(), Error> {
    check_tolerances(&cfg.tolerances, &[])?;
    let spec = cfg.function_spec()?;
    let result = spec.eval(s, deriv)?;
    let text = match cfg.format.as_str() {
        "csv" => {
            let header = "function,tau,s_re,s_im,deriv,value_re,value_im,est_abs_error";
            let tau = cfg.tau.map(io::fmt_f64).unwrap_or_default();
            format!(
                "{header}\n{},{tau},{},{},{deriv},{},{},{}",
                cfg.function,
                io::fmt_f64(s.re),
                io::fmt_f64(s.im),
                io::fmt_f64(result.value.re),
                io::fmt_f64(result.value.im),
                io::fmt_f64(result.est_abs_error),
            )
        }
        _ => serde_json::to_string(&EvalDoc {
            function: &cfg.function,
            tau: cfg.tau,
            s: [s.re, s.im],
            deriv,
            value: [result.value.re, result.value.im],
            est_abs_error: result.est_abs_error,
        })?,
    };
    emit(out_path(cfg), &text)
}

// ---------------------------------------------------------------------------
// count
// ---------------------------------------------------------------------------

pub fn cmd_count(cfg: &RunConfig) -> Result<(), Error> {
    check_tolerances(&cfg.tolerances, &["zero_rel_tol"])?;
    let spec = cfg.function_spec()?;
    let rect = rect_from_region(cfg)?;
    let params = scan_params(cfg);
    let (count, _) = winding_count_nudged(&spec, &Contour::rectangle(&rect), 0, &params.winding)?;
    emit(out_path(cfg), &count.to_string())
}

// ---------------------------------------------------------------------------
// zeros
// ---------------------------------------------------------------------------

/// Height of one scan band.  Bands are fixed by the rectangle alone, so the
/// work split (and with it every nudge decision) is independent of the thread
/// count.
const BAND_HEIGHT: f64 = 8.0;

fn band_rects(rect: &Rect<f64>) -> Vec<Rect<f64>> {
    let n = (rect.height() / BAND_HEIGHT).ceil().max(1.0) as usize;
    (0..n)
        .map(|k| {
            let lo = rect.t_lo + rect.height() * k as f64 / n as f64;
            let hi = if k + 1 == n {
                rect.t_hi
            } else {
                rect.t_lo + rect.height() * (k + 1) as f64 / n as f64
            };
            Rect::new(rect.sigma_lo, rect.sigma_hi, lo, hi)
        })
        .collect()
}

pub fn cmd_zeros(cfg: &RunConfig) -> Result<(), Error> {
    check_tolerances(&cfg.tolerances, SCAN_TOLS)?;
    let spec = cfg.function_spec()?;
    let rect = rect_from_region(cfg)?;
    let params = scan_params(cfg);
    let bands = band_rects(&rect);

    let mut writer = open_writer(
        cfg.checkpoint_path.clone().map(PathBuf::from),
        &cfg.run_id(),
        &cfg.work_hash(),
    )?;
    let mut prior: BTreeMap<usize, Vec<ZeroRecord<f64>>> = BTreeMap::new();
    for (&idx, unit) in writer.completed() {
        match unit {
            UnitResult::Zeros(docs) => {
                let recs: Result<Vec<_>, _> = docs.iter().map(ZeroRecord::try_from).collect();
                prior.insert(idx, recs?);
            }
            UnitResult::Trajectory(_) => {
                return Err(Error::InvalidInput {
                    what: "checkpoint holds trajectory units, not scan bands".into(),
                })
            }
        }
    }

    let work = |idx: usize| -> Result<Vec<ZeroRecord<f64>>, Error> {
        if let Some(done) = prior.get(&idx) {
            return Ok(done.clone());
        }
        scan_zeros(&spec, &bands[idx], 0, &params)
    };
    let mut ck_err: Option<Error> = None;
    let band_results = run_units(
        bands.len(),
        cfg.threads as usize,
        work,
        |idx, result: &Result<Vec<ZeroRecord<f64>>, Error>| {
            if ck_err.is_none() {
                if let Ok(recs) = result {
                    let docs = recs.iter().map(ZeroRecordDoc::from).collect();
                    if let Err(e) = writer.record(idx, UnitResult::Zeros(docs)) {
                        ck_err = Some(e);
                    }
                }
            }
        },
    );
    if let Some(e) = ck_err {
        return Err(e);
    }
    writer.finish()?;

    let mut zeros: Vec<ZeroRecord<f64>> = Vec::new();
    for band in band_results {
        zeros.extend(band?);
    }
    zeros.sort_by(|a, b| {
        (a.rho.im, a.rho.re)
            .partial_cmp(&(b.rho.im, b.rho.re))
            .expect("zero positions are finite")
    });
    // A zero close to a shared band edge can be claimed by both bands (the
    // nudged contours overlap a little); keep one copy.
    let dup_tol = params.min_cell * 0.5;
    zeros.dedup_by(|next, kept| (next.rho - kept.rho).norm() < dup_tol);

    // The merged list is verified against one winding count of the whole
    // rectangle, so a zero lost between bands cannot pass silently.
    let (total, _) = winding_count_nudged(&spec, &Contour::rectangle(&rect), 0, &params.winding)?;
    let with_mult: i64 = zeros.iter().map(|r| i64::from(r.multiplicity)).sum();
    if total != with_mult {
        return Err(Error::WrongZeroCount {
            expected: total,
            found: with_mult,
        });
    }

    let text = match cfg.format.as_str() {
        "csv" => io::zeros_to_csv(&zeros)?,
        _ => io::zeros_to_json(&zeros)?,
    };
    emit(out_path(cfg), &text)?;
    if cfg.out.is_some() {
        println!(
            "found {} zeros ({with_mult} with multiplicity) in [{}, {}] x [{}, {}]",
            zeros.len(),
            rect.sigma_lo,
            rect.sigma_hi,
            rect.t_lo,
            rect.t_hi
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// speiser
// ---------------------------------------------------------------------------

pub enum SpeiserMode {
    /// One half-disk comparison at an explicit center and radius.
    Single { s0: Complex64, r: f64 },
    /// Annulus pipeline at one or more heights.
    Pipeline {
        heights: Vec<f64>,
        c: f64,
        shells: u32,
        delta: f64,
    },
}

fn speiser_params(cfg: &RunConfig) -> SpeiserParams<f64> {
    let mut params = SpeiserParams::default();
    if let Some(v) = tol(&cfg.tolerances, "indent_factor") {
        params.indent_factor = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "zero_rel_tol") {
        params.winding.zero_rel_tol = v;
    }
    if let Some(v) = tol(&cfg.tolerances, "refine_tol") {
        params.line.refine_tol = v;
    }
    params
}

pub fn cmd_speiser(cfg: &RunConfig, mode: SpeiserMode) -> Result<(), Error> {
    check_tolerances(
        &cfg.tolerances,
        &["indent_factor", "zero_rel_tol", "refine_tol"],
    )?;
    let spec = cfg.function_spec()?;
    let params = speiser_params(cfg);

    let reports: Vec<SpeiserReport<f64>> = match &mode {
        SpeiserMode::Single { s0, r } => vec![speiser_compare(&spec, *s0, *r, &params)?],
        SpeiserMode::Pipeline {
            heights,
            c,
            shells,
            delta,
        } => {
            let results = run_units(
                heights.len(),
                cfg.threads as usize,
                |idx| speiser_pipeline(&spec, heights[idx], *c, *shells, *delta, &params),
                |_, _| {},
            );
            results.into_iter().collect::<Result<Vec<_>, _>>()?
        }
    };

    let text = if reports.len() == 1 && cfg.format != "csv" {
        io::speiser_to_json(&reports[0])?
    } else {
        io::speiser_batch_csv(&reports)?
    };
    emit(out_path(cfg), &text)?;
    if cfg.out.is_some() {
        let equal = reports.iter().filter(|r| r.equal).count();
        println!("{equal}/{} comparisons equal", reports.len());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

pub fn cmd_trace(cfg: &RunConfig, seed: Complex64, target: Target) -> Result<(), Error> {
    check_tolerances(&cfg.tolerances, STEP_TOLS)?;
    let tau0 = region(cfg, "tau0")?;
    let tau1 = region(cfg, "tau1")?;
    let fam = ZetaFamily::<f64>::new();
    let ctrl = step_control(cfg);
    let traj = trace(&fam, target, seed, tau0, tau1, &ctrl)?;
    let text = match cfg.format.as_str() {
        "csv" => io::plot_csv(std::slice::from_ref(&traj))?,
        _ => io::trajectory_to_json_line(&traj)?,
    };
    emit(out_path(cfg), &text)?;
    if cfg.out.is_some() {
        let (_, (tau_end, rho_end)) = traj.endpoints();
        println!(
            "traced {} samples to tau = {tau_end}, rho = {} + {}i",
            traj.samples.len(),
            rho_end.re,
            rho_end.im
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// census
// ---------------------------------------------------------------------------

pub fn cmd_census(cfg: &RunConfig) -> Result<(), Error> {
    let recognized: Vec<&str> = SCAN_TOLS.iter().chain(STEP_TOLS).copied().collect();
    check_tolerances(&cfg.tolerances, &recognized)?;
    let h = region(cfg, "h")?;
    let tau_step = region(cfg, "tau_step")?;
    census_guards(h, tau_step)?;

    let fam = ZetaFamily::<f64>::new();
    let seeds = census_seeds(&fam, h, &scan_params(cfg))?;
    let ctrl = census_step_control(&step_control(cfg), tau_step, seeds.len())?;

    let mut writer = open_writer(
        cfg.checkpoint_path.clone().map(PathBuf::from),
        &cfg.run_id(),
        &cfg.work_hash(),
    )?;
    let mut prior: BTreeMap<usize, Trajectory<f64>> = BTreeMap::new();
    for (&idx, unit) in writer.completed() {
        match unit {
            UnitResult::Trajectory(rec) => {
                prior.insert(idx, Trajectory::try_from(rec)?);
            }
            UnitResult::Zeros(_) => {
                return Err(Error::InvalidInput {
                    what: "checkpoint holds scan-band units, not trajectories".into(),
                })
            }
        }
    }

    let work = |idx: usize| -> Trajectory<f64> {
        match prior.get(&idx) {
            Some(done) => done.clone(),
            None => trace_seed(&fam, &seeds[idx], &ctrl),
        }
    };
    let mut ck_err: Option<Error> = None;
    let trajectories = run_units(
        seeds.len(),
        cfg.threads as usize,
        work,
        |idx, traj: &Trajectory<f64>| {
            if ck_err.is_none() {
                let unit = UnitResult::Trajectory(TrajectoryRecord::from(traj));
                if let Err(e) = writer.record(idx, unit) {
                    ck_err = Some(e);
                }
            }
        },
    );
    if let Some(e) = ck_err {
        return Err(e);
    }
    writer.finish()?;

    let census = assemble_census(&fam, h, seeds, trajectories)?;
    println!(
        "census H={h}: {} trajectories, {} stay, {} leave, {} events",
        census.total,
        census.stays,
        census.leaves,
        census.events.len()
    );
    if let Some(dir) = out_path(cfg) {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.csv"), io::census_summary_csv(&census)?)?;
        std::fs::write(
            dir.join("trajectories.jsonl"),
            io::trajectories_to_json_lines(&census.trajectories)?,
        )?;
        std::fs::write(dir.join("plot.csv"), io::plot_csv(&census.trajectories)?)?;
    }
    Ok(())
}
