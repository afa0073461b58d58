//! Run configuration: the complete, serializable description of one command
//! invocation.  Serialization round-trips exactly (ordered maps, lossless
//! floats), and the hash of the computation-determining fields identifies a
//! run for checkpoint resumption.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use zetalab::lfunc::FunctionSpec;
use zetalab::Error;

/// Everything a subcommand needs to reproduce its output.
///
/// `region` holds the command's numeric parameters (rectangle coordinates,
/// heights, radii, ...) under stable keys; `tolerances` holds named overrides
/// of the numerical knobs a command recognizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Subcommand name.
    pub command: String,
    /// Function selector: `zeta`, `lpsi5`, `factor`, or `family`.
    pub function: String,
    /// Family parameter for `function = "family"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub region: BTreeMap<String, f64>,
    /// Output format: `json` or `csv`.
    pub format: String,
    /// Output path (file, or directory for the census).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint_path: Option<String>,
    pub threads: u32,
}

impl RunConfig {
    /// Canonical one-line JSON; field order is fixed and maps are sorted, so
    /// equal configs serialize identically.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Parses a config serialized by [`RunConfig::canonical_json`].
    pub fn from_json(text: &str) -> Result<RunConfig, Error> {
        Ok(serde_json::from_str(text)?)
    }

    /// Hash over the fields that determine the computed results: command,
    /// function, tau, tolerances, and region.  Threads, output paths, and
    /// format are excluded so a checkpoint taken under one thread count or
    /// output arrangement resumes under another.
    pub fn work_hash(&self) -> String {
        #[derive(Serialize)]
        struct WorkFields<'a> {
            command: &'a str,
            function: &'a str,
            tau: &'a Option<f64>,
            tolerances: &'a BTreeMap<String, f64>,
            region: &'a BTreeMap<String, f64>,
        }
        let text = serde_json::to_string(&WorkFields {
            command: &self.command,
            function: &self.function,
            tau: &self.tau,
            tolerances: &self.tolerances,
            region: &self.region,
        })
        .expect("config serializes");
        format!("{:016x}", fnv1a(text.as_bytes()))
    }

    /// Checkpoint identifier: the command name plus the work hash.
    pub fn run_id(&self) -> String {
        format!("{}-{}", self.command, self.work_hash())
    }

    /// Builds the [`FunctionSpec`] named by `function` (and `tau`).
    pub fn function_spec(&self) -> Result<FunctionSpec<f64>, Error> {
        match self.function.as_str() {
            "zeta" => Ok(FunctionSpec::riemann_zeta()),
            "lpsi5" => Ok(FunctionSpec::dirichlet_l_psi5()),
            "factor" => Ok(FunctionSpec::factor_zeta()),
            "family" => {
                let tau = self.tau.ok_or_else(|| Error::InvalidInput {
                    what: "--f family requires --tau".into(),
                })?;
                FunctionSpec::family(tau)
            }
            other => Err(Error::InvalidInput {
                what: format!("unknown function {other:?}; use zeta, lpsi5, factor, or family"),
            }),
        }
    }
}

/// 64-bit FNV-1a; deterministic across platforms and builds, which the
/// standard library hasher does not promise.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Rejects tolerance keys outside the command's recognized set, so typos
/// cannot silently fall back to defaults.
pub fn check_tolerances(tols: &BTreeMap<String, f64>, recognized: &[&str]) -> Result<(), Error> {
    for key in tols.keys() {
        if !recognized.contains(&key.as_str()) {
            return Err(Error::InvalidInput {
                what: format!(
                    "unknown tolerance {key:?}; recognized: {}",
                    recognized.join(", ")
                ),
            });
        }
    }
    Ok(())
}

/// Looks up one tolerance override.
pub fn tol(tols: &BTreeMap<String, f64>, key: &str) -> Option<f64> {
    tols.get(key).copied()
}
