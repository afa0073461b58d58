//! Machine-readable result formats.
//!
//! JSON documents carry complex numbers as `[re, im]` arrays; CSV fields use
//! full 17-significant-digit scientific decimals, so every double written by
//! either format parses back to the identical value.  The document types here
//! are the concrete `f64` shapes the command-line driver reads and writes;
//! conversions to and from the library structs are lossless.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lfunc::{
    DensityConstants, FunctionSpec, FunctionalEquationData, GammaFactor, GrowthConstants, Kind,
};
use crate::speiser::SpeiserReport;
use crate::trajectory::{
    Census, Classification, DoubleZeroEvent, Target, Trajectory,
};
use crate::zero::{AnnulusResult, Shell, ZeroMethod, ZeroRecord};

type Cx64 = Complex<f64>;

/// Formats one double with 17 significant digits, enough to round-trip any
/// `f64` exactly through its decimal representation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses a decimal field written by [`fmt_f64`] (or any `f64` literal).
pub fn parse_f64(field: &str) -> Result<f64, Error> {
    field.trim().parse().map_err(|_| Error::InvalidInput {
        what: format!("bad float field {field:?}"),
    })
}

fn pair(z: Cx64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> Cx64 {
    Complex::new(p[0], p[1])
}

fn csv_into_string(wtr: csv::Writer<Vec<u8>>) -> Result<String, Error> {
    let buf = wtr.into_inner().map_err(|e| Error::InvalidInput {
        what: format!("csv writer: {e}"),
    })?;
    String::from_utf8(buf).map_err(|e| Error::InvalidInput {
        what: format!("csv output not utf-8: {e}"),
    })
}

// ---------------------------------------------------------------------------
// Function descriptions
// ---------------------------------------------------------------------------

/// Serializable mirror of [`Kind`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindDoc {
    RiemannZeta,
    DirichletLPsi5,
    FactorZeta,
    Family { tau: f64 },
}

/// Serializable mirror of [`GammaFactor`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFactorDoc {
    pub lambda: f64,
    pub mu: [f64; 2],
}

/// Serializable mirror of [`FunctionalEquationData`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEquationDoc {
    pub q: f64,
    pub gamma_factors: Vec<GammaFactorDoc>,
    pub omega: [f64; 2],
    pub degree: f64,
}

/// Serializable mirror of [`GrowthConstants`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthDoc {
    pub sigma1: f64,
    pub c_lower: f64,
    pub b_upper: f64,
}

/// Serializable mirror of [`DensityConstants`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityDoc {
    pub epsilon: f64,
    pub delta: f64,
    pub t_bar: f64,
}

/// JSON document for a [`FunctionSpec`], field for field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpecDoc {
    pub kind: KindDoc,
    pub fe: FunctionalEquationDoc,
    pub pole_order: u32,
    pub growth: GrowthDoc,
    pub density: DensityDoc,
    pub zero_free_sigma: f64,
}

impl From<&FunctionSpec<f64>> for FunctionSpecDoc {
    fn from(spec: &FunctionSpec<f64>) -> Self {
        FunctionSpecDoc {
            kind: match spec.kind {
                Kind::RiemannZeta => KindDoc::RiemannZeta,
                Kind::DirichletLPsi5 => KindDoc::DirichletLPsi5,
                Kind::FactorZeta => KindDoc::FactorZeta,
                Kind::Family { tau } => KindDoc::Family { tau },
            },
            fe: FunctionalEquationDoc {
                q: spec.fe.q,
                gamma_factors: spec
                    .fe
                    .gamma_factors
                    .iter()
                    .map(|g| GammaFactorDoc {
                        lambda: g.lambda,
                        mu: pair(g.mu),
                    })
                    .collect(),
                omega: pair(spec.fe.omega),
                degree: spec.fe.degree,
            },
            pole_order: spec.pole_order,
            growth: GrowthDoc {
                sigma1: spec.growth.sigma1,
                c_lower: spec.growth.c_lower,
                b_upper: spec.growth.b_upper,
            },
            density: DensityDoc {
                epsilon: spec.density.epsilon,
                delta: spec.density.delta,
                t_bar: spec.density.t_bar,
            },
            zero_free_sigma: spec.zero_free_sigma,
        }
    }
}

impl From<FunctionSpecDoc> for FunctionSpec<f64> {
    fn from(doc: FunctionSpecDoc) -> Self {
        FunctionSpec {
            kind: match doc.kind {
                KindDoc::RiemannZeta => Kind::RiemannZeta,
                KindDoc::DirichletLPsi5 => Kind::DirichletLPsi5,
                KindDoc::FactorZeta => Kind::FactorZeta,
                KindDoc::Family { tau } => Kind::Family { tau },
            },
            fe: FunctionalEquationData {
                q: doc.fe.q,
                gamma_factors: doc
                    .fe
                    .gamma_factors
                    .into_iter()
                    .map(|g| GammaFactor {
                        lambda: g.lambda,
                        mu: unpair(g.mu),
                    })
                    .collect(),
                omega: unpair(doc.fe.omega),
                degree: doc.fe.degree,
            },
            pole_order: doc.pole_order,
            growth: GrowthConstants {
                sigma1: doc.growth.sigma1,
                c_lower: doc.growth.c_lower,
                b_upper: doc.growth.b_upper,
            },
            density: DensityConstants {
                epsilon: doc.density.epsilon,
                delta: doc.density.delta,
                t_bar: doc.density.t_bar,
            },
            zero_free_sigma: doc.zero_free_sigma,
        }
    }
}

/// One-line JSON document for a function description.
pub fn function_spec_to_json(spec: &FunctionSpec<f64>) -> Result<String, Error> {
    Ok(serde_json::to_string(&FunctionSpecDoc::from(spec))?)
}

/// Inverse of [`function_spec_to_json`].
pub fn function_spec_from_json(text: &str) -> Result<FunctionSpec<f64>, Error> {
    let doc: FunctionSpecDoc = serde_json::from_str(text)?;
    Ok(doc.into())
}

// ---------------------------------------------------------------------------
// Zero records
// ---------------------------------------------------------------------------

/// Serializable mirror of [`ZeroRecord`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecordDoc {
    pub rho: [f64; 2],
    pub multiplicity: u32,
    pub residual: f64,
    pub method: String,
}

impl From<&ZeroRecord<f64>> for ZeroRecordDoc {
    fn from(rec: &ZeroRecord<f64>) -> Self {
        ZeroRecordDoc {
            rho: pair(rec.rho),
            multiplicity: rec.multiplicity,
            residual: rec.residual,
            method: rec.method.as_str().to_string(),
        }
    }
}

impl TryFrom<&ZeroRecordDoc> for ZeroRecord<f64> {
    type Error = Error;

    fn try_from(doc: &ZeroRecordDoc) -> Result<Self, Error> {
        let method = ZeroMethod::parse(&doc.method).ok_or_else(|| Error::InvalidInput {
            what: format!("unknown zero method {:?}", doc.method),
        })?;
        Ok(ZeroRecord {
            rho: unpair(doc.rho),
            multiplicity: doc.multiplicity,
            residual: doc.residual,
            method,
        })
    }
}

/// JSON array of zero records.
pub fn zeros_to_json(recs: &[ZeroRecord<f64>]) -> Result<String, Error> {
    let docs: Vec<ZeroRecordDoc> = recs.iter().map(ZeroRecordDoc::from).collect();
    Ok(serde_json::to_string(&docs)?)
}

/// Inverse of [`zeros_to_json`].
pub fn zeros_from_json(text: &str) -> Result<Vec<ZeroRecord<f64>>, Error> {
    let docs: Vec<ZeroRecordDoc> = serde_json::from_str(text)?;
    docs.iter().map(ZeroRecord::try_from).collect()
}

/// CSV table of zero records: `beta,gamma,multiplicity,residual,method`.
pub fn zeros_to_csv(recs: &[ZeroRecord<f64>]) -> Result<String, Error> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["beta", "gamma", "multiplicity", "residual", "method"])?;
    for rec in recs {
        wtr.write_record([
            fmt_f64(rec.rho.re),
            fmt_f64(rec.rho.im),
            rec.multiplicity.to_string(),
            fmt_f64(rec.residual),
            rec.method.as_str().to_string(),
        ])?;
    }
    csv_into_string(wtr)
}

/// Inverse of [`zeros_to_csv`].
pub fn zeros_from_csv(text: &str) -> Result<Vec<ZeroRecord<f64>>, Error> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        if row.len() != 5 {
            return Err(Error::InvalidInput {
                what: format!("zero record row has {} fields, want 5", row.len()),
            });
        }
        let method = ZeroMethod::parse(&row[4]).ok_or_else(|| Error::InvalidInput {
            what: format!("unknown zero method {:?}", &row[4]),
        })?;
        out.push(ZeroRecord {
            rho: Complex::new(parse_f64(&row[0])?, parse_f64(&row[1])?),
            multiplicity: row[2].trim().parse().map_err(|_| Error::InvalidInput {
                what: format!("bad multiplicity field {:?}", &row[2]),
            })?,
            residual: parse_f64(&row[3])?,
            method,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Half-disk comparison reports
// ---------------------------------------------------------------------------

/// Serializable mirror of [`Shell`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellDoc {
    pub k: u32,
    pub r_inner: f64,
    pub r_outer: f64,
    pub count: i64,
    pub forced_empty: bool,
}

/// Serializable mirror of [`AnnulusResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusDoc {
    pub j: u32,
    pub r_inner: f64,
    pub r_outer: f64,
    pub r_final: f64,
    pub shells: Vec<ShellDoc>,
    pub innermost_count: i64,
}

impl From<&AnnulusResult<f64>> for AnnulusDoc {
    fn from(res: &AnnulusResult<f64>) -> Self {
        AnnulusDoc {
            j: res.j,
            r_inner: res.r_inner,
            r_outer: res.r_outer,
            r_final: res.r_final,
            shells: res
                .shells
                .iter()
                .map(|sh: &Shell<f64>| ShellDoc {
                    k: sh.k,
                    r_inner: sh.r_inner,
                    r_outer: sh.r_outer,
                    count: sh.count,
                    forced_empty: sh.forced_empty,
                })
                .collect(),
            innermost_count: res.innermost_count,
        }
    }
}

/// JSON document for a [`SpeiserReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeiserDoc {
    pub s0: [f64; 2],
    pub r: f64,
    pub n_f: i64,
    pub n_fprime: i64,
    pub equal: bool,
    pub annulus: Option<AnnulusDoc>,
    pub line_zeros_bypassed: Vec<f64>,
}

impl From<&SpeiserReport<f64>> for SpeiserDoc {
    fn from(rep: &SpeiserReport<f64>) -> Self {
        SpeiserDoc {
            s0: pair(rep.s0),
            r: rep.r,
            n_f: rep.n_f,
            n_fprime: rep.n_fprime,
            equal: rep.equal,
            annulus: rep.annulus.as_ref().map(AnnulusDoc::from),
            line_zeros_bypassed: rep.line_zeros_bypassed.clone(),
        }
    }
}

/// One-line JSON document for a half-disk comparison report.
pub fn speiser_to_json(rep: &SpeiserReport<f64>) -> Result<String, Error> {
    Ok(serde_json::to_string(&SpeiserDoc::from(rep))?)
}

/// Batch CSV: one row per comparison, `T,r,n_f,n_fprime,equal`, with `T` the
/// ordinate of the disk center.
pub fn speiser_batch_csv(reps: &[SpeiserReport<f64>]) -> Result<String, Error> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["T", "r", "n_f", "n_fprime", "equal"])?;
    for rep in reps {
        wtr.write_record([
            fmt_f64(rep.s0.im),
            fmt_f64(rep.r),
            rep.n_f.to_string(),
            rep.n_fprime.to_string(),
            rep.equal.to_string(),
        ])?;
    }
    csv_into_string(wtr)
}

// ---------------------------------------------------------------------------
// Trajectories and the census
// ---------------------------------------------------------------------------

/// Serializable mirror of [`Classification`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationDoc {
    StaysOnLine,
    LeavesAt { tau: f64, rho: [f64; 2] },
    Incomplete { reason: String },
}

impl From<&Classification<f64>> for ClassificationDoc {
    fn from(c: &Classification<f64>) -> Self {
        match c {
            Classification::StaysOnLine => ClassificationDoc::StaysOnLine,
            Classification::LeavesAt { tau, rho } => ClassificationDoc::LeavesAt {
                tau: *tau,
                rho: pair(*rho),
            },
            Classification::Incomplete { reason } => ClassificationDoc::Incomplete {
                reason: reason.clone(),
            },
        }
    }
}

impl From<&ClassificationDoc> for Classification<f64> {
    fn from(doc: &ClassificationDoc) -> Self {
        match doc {
            ClassificationDoc::StaysOnLine => Classification::StaysOnLine,
            ClassificationDoc::LeavesAt { tau, rho } => Classification::LeavesAt {
                tau: *tau,
                rho: unpair(*rho),
            },
            ClassificationDoc::Incomplete { reason } => Classification::Incomplete {
                reason: reason.clone(),
            },
        }
    }
}

/// Serializable mirror of [`DoubleZeroEvent`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventDoc {
    pub tau0: f64,
    pub rho0: [f64; 2],
    pub f_second_deriv: [f64; 2],
}

impl From<&DoubleZeroEvent<f64>> for EventDoc {
    fn from(ev: &DoubleZeroEvent<f64>) -> Self {
        EventDoc {
            tau0: ev.tau0,
            rho0: pair(ev.rho0),
            f_second_deriv: pair(ev.f_second_deriv),
        }
    }
}

impl From<&EventDoc> for DoubleZeroEvent<f64> {
    fn from(doc: &EventDoc) -> Self {
        DoubleZeroEvent {
            tau0: doc.tau0,
            rho0: unpair(doc.rho0),
            f_second_deriv: unpair(doc.f_second_deriv),
        }
    }
}

/// Published JSON-lines document for one trajectory: seed, ordered
/// `[tau, re, im]` samples, and the line classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDoc {
    pub seed: [f64; 2],
    pub samples: Vec<[f64; 3]>,
    pub classification: ClassificationDoc,
}

impl From<&Trajectory<f64>> for TrajectoryDoc {
    fn from(traj: &Trajectory<f64>) -> Self {
        TrajectoryDoc {
            seed: pair(traj.samples[0].1),
            samples: traj
                .samples
                .iter()
                .map(|&(tau, rho)| [tau, rho.re, rho.im])
                .collect(),
            classification: ClassificationDoc::from(&traj.classification),
        }
    }
}

/// Full-fidelity trajectory record, used by checkpoints: everything the
/// published [`TrajectoryDoc`] omits (target, events) is preserved, so a
/// resumed run reassembles results identical to an uninterrupted one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    /// `"f"` or `"fprime"`.
    pub target: String,
    pub samples: Vec<[f64; 3]>,
    pub classification: ClassificationDoc,
    pub events: Vec<EventDoc>,
}

impl From<&Trajectory<f64>> for TrajectoryRecord {
    fn from(traj: &Trajectory<f64>) -> Self {
        TrajectoryRecord {
            target: match traj.target {
                Target::F => "f".to_string(),
                Target::Fprime => "fprime".to_string(),
            },
            samples: traj
                .samples
                .iter()
                .map(|&(tau, rho)| [tau, rho.re, rho.im])
                .collect(),
            classification: ClassificationDoc::from(&traj.classification),
            events: traj.events.iter().map(EventDoc::from).collect(),
        }
    }
}

impl TryFrom<&TrajectoryRecord> for Trajectory<f64> {
    type Error = Error;

    fn try_from(rec: &TrajectoryRecord) -> Result<Self, Error> {
        let target = match rec.target.as_str() {
            "f" => Target::F,
            "fprime" => Target::Fprime,
            other => {
                return Err(Error::InvalidInput {
                    what: format!("unknown trajectory target {other:?}"),
                })
            }
        };
        if rec.samples.is_empty() {
            return Err(Error::InvalidInput {
                what: "trajectory record has no samples".into(),
            });
        }
        Ok(Trajectory {
            target,
            samples: rec
                .samples
                .iter()
                .map(|&[tau, re, im]| (tau, Complex::new(re, im)))
                .collect(),
            classification: Classification::from(&rec.classification),
            events: rec.events.iter().map(DoubleZeroEvent::from).collect(),
        })
    }
}

/// One trajectory as a single JSON line (no interior newlines).
pub fn trajectory_to_json_line(traj: &Trajectory<f64>) -> Result<String, Error> {
    Ok(serde_json::to_string(&TrajectoryDoc::from(traj))?)
}

/// JSON-lines document: one line per trajectory, trailing newline included.
pub fn trajectories_to_json_lines(trajs: &[Trajectory<f64>]) -> Result<String, Error> {
    let mut out = String::new();
    for traj in trajs {
        out.push_str(&trajectory_to_json_line(traj)?);
        out.push('\n');
    }
    Ok(out)
}

/// Census summary CSV: a single data row `h,total,stays,leaves,events`, the
/// last field holding `tau0 re im` triples separated by `;`.
pub fn census_summary_csv(census: &Census<f64>) -> Result<String, Error> {
    let events = census
        .events
        .iter()
        .map(|ev| {
            format!(
                "{} {} {}",
                fmt_f64(ev.tau0),
                fmt_f64(ev.rho0.re),
                fmt_f64(ev.rho0.im)
            )
        })
        .collect::<Vec<_>>()
        .join(";");
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["h", "total", "stays", "leaves", "events"])?;
    wtr.write_record([
        fmt_f64(census.h),
        census.total.to_string(),
        census.stays.to_string(),
        census.leaves.to_string(),
        events,
    ])?;
    csv_into_string(wtr)
}

/// Plot data for external tools: `trajectory,tau,re,im` rows, one per sample,
/// with `trajectory` the index into the input slice.
pub fn plot_csv(trajs: &[Trajectory<f64>]) -> Result<String, Error> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["trajectory", "tau", "re", "im"])?;
    for (idx, traj) in trajs.iter().enumerate() {
        for &(tau, rho) in &traj.samples {
            wtr.write_record([
                idx.to_string(),
                fmt_f64(tau),
                fmt_f64(rho.re),
                fmt_f64(rho.im),
            ])?;
        }
    }
    csv_into_string(wtr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn seventeen_digit_decimals_round_trip_exactly() {
        for &x in &[
            0.1,
            1.0 / 3.0,
            -2.225073858507201e-308,
            f64::MAX,
            f64::MIN_POSITIVE,
            4.9e-324,
            14.134725141734695,
            -0.9264856810021505,
        ] {
            let s = fmt_f64(x);
            assert_eq!(parse_f64(&s).unwrap(), x, "{s}");
        }
    }

    #[test]
    fn function_specs_round_trip_through_json() {
        let specs = [
            FunctionSpec::<f64>::riemann_zeta(),
            FunctionSpec::<f64>::dirichlet_l_psi5(),
            FunctionSpec::<f64>::factor_zeta(),
            FunctionSpec::<f64>::family(0.377281139).unwrap(),
        ];
        for spec in &specs {
            let text = function_spec_to_json(spec).unwrap();
            let back = function_spec_from_json(&text).unwrap();
            assert_eq!(&back, spec);
        }
    }

    #[test]
    fn family_kind_serializes_with_its_tau() {
        let spec = FunctionSpec::<f64>::family(0.25).unwrap();
        let text = function_spec_to_json(&spec).unwrap();
        assert!(text.contains(r#""kind":{"family":{"tau":0.25}}"#), "{text}");
        let zeta = FunctionSpec::<f64>::riemann_zeta();
        let text = function_spec_to_json(&zeta).unwrap();
        assert!(text.contains(r#""kind":"riemann_zeta""#), "{text}");
    }

    fn sample_zeros() -> Vec<ZeroRecord<f64>> {
        vec![
            ZeroRecord {
                rho: cx(0.5, 14.134725141734695),
                multiplicity: 1,
                residual: 3.1e-15,
                method: ZeroMethod::ScanNewton,
            },
            ZeroRecord {
                rho: cx(0.4997, 21.022039638771556),
                multiplicity: 2,
                residual: 0.0,
                method: ZeroMethod::QuadraticModel,
            },
        ]
    }

    #[test]
    fn zero_records_round_trip_through_csv_and_json() {
        let recs = sample_zeros();
        let csv_text = zeros_to_csv(&recs).unwrap();
        assert!(csv_text.starts_with("beta,gamma,multiplicity,residual,method\n"));
        assert_eq!(zeros_from_csv(&csv_text).unwrap(), recs);
        let json_text = zeros_to_json(&recs).unwrap();
        assert_eq!(zeros_from_json(&json_text).unwrap(), recs);
    }

    #[test]
    fn unknown_method_strings_are_rejected() {
        let mut doc = ZeroRecordDoc::from(&sample_zeros()[0]);
        doc.method = "guesswork".into();
        assert!(ZeroRecord::try_from(&doc).is_err());
    }

    #[test]
    fn speiser_batch_rows_carry_the_center_ordinate() {
        let rep = SpeiserReport {
            s0: cx(0.5, 74.0),
            r: 0.25,
            n_f: 2,
            n_fprime: 2,
            equal: true,
            annulus: None,
            line_zeros_bypassed: vec![73.9],
        };
        let text = speiser_batch_csv(&[rep.clone()]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "T,r,n_f,n_fprime,equal");
        let row = lines.next().unwrap();
        assert!(row.starts_with(&fmt_f64(74.0)), "{row}");
        assert!(row.ends_with("2,2,true"), "{row}");

        let json = speiser_to_json(&rep).unwrap();
        let doc: SpeiserDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(doc, SpeiserDoc::from(&rep));
    }

    fn sample_trajectory() -> Trajectory<f64> {
        Trajectory {
            target: Target::F,
            samples: vec![
                (0.0, cx(0.5, 60.5)),
                (0.5, cx(0.5, 60.7)),
                (1.0, cx(0.45, 60.9)),
            ],
            classification: Classification::LeavesAt {
                tau: 0.7,
                rho: cx(0.5, 60.8),
            },
            events: vec![DoubleZeroEvent {
                tau0: 0.7,
                rho0: cx(0.5, 60.8),
                f_second_deriv: cx(-0.3, 1.1),
            }],
        }
    }

    #[test]
    fn trajectory_records_round_trip_in_full() {
        let traj = sample_trajectory();
        let rec = TrajectoryRecord::from(&traj);
        let text = serde_json::to_string(&rec).unwrap();
        let back: TrajectoryRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(Trajectory::try_from(&back).unwrap(), traj);
    }

    #[test]
    fn trajectory_json_lines_hold_one_document_per_line() {
        let trajs = vec![sample_trajectory(), sample_trajectory()];
        let text = trajectories_to_json_lines(&trajs).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        for line in lines {
            let doc: TrajectoryDoc = serde_json::from_str(line).unwrap();
            assert_eq!(doc.seed, [0.5, 60.5]);
            assert_eq!(doc.samples.len(), 3);
            assert!(matches!(
                doc.classification,
                ClassificationDoc::LeavesAt { tau: 0.7, .. }
            ));
        }
    }

    #[test]
    fn census_summary_packs_events_into_one_field() {
        let census = Census {
            h: 100.0,
            total: 55,
            stays: 48,
            leaves: 7,
            events: vec![
                DoubleZeroEvent {
                    tau0: 0.3,
                    rho0: cx(0.5, 96.0),
                    f_second_deriv: cx(1.0, 0.0),
                },
                DoubleZeroEvent {
                    tau0: 0.9,
                    rho0: cx(0.5, 0.0),
                    f_second_deriv: cx(1.8, 0.0),
                },
            ],
            trajectories: Vec::new(),
            seeds: Vec::new(),
        };
        let text = census_summary_csv(&census).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "h,total,stays,leaves,events");
        let row = lines.next().unwrap();
        assert!(row.contains(",55,48,7,"), "{row}");
        assert_eq!(row.matches(';').count(), 1, "{row}");
    }

    #[test]
    fn plot_rows_group_samples_by_trajectory_index() {
        let trajs = vec![sample_trajectory(), sample_trajectory()];
        let text = plot_csv(&trajs).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "trajectory,tau,re,im");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines[1].starts_with("0,"));
        assert!(lines[4].starts_with("1,"));
    }
}
