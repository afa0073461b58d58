//! Checkpointed runs: completed work units and their results, saved
//! atomically, so an interrupted command resumes to byte-identical output.
//!
//! A checkpoint is tied to the run through the hash of the config fields that
//! determine the computation; resuming under a different configuration is
//! refused.  Saves go through a temp-file-then-rename in the target
//! directory, so a kill mid-write leaves the previous checkpoint intact.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use zetalab::io::{TrajectoryRecord, ZeroRecordDoc};
use zetalab::Error;

/// Default seconds between checkpoint writes.
const CADENCE_SECS: u64 = 30;
/// Environment override for the write cadence (useful at `0` in tests).
const CADENCE_ENV: &str = "ZETALAB_CHECKPOINT_SECS";

/// Partial result of one work unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitResult {
    /// Zero records of one scan band.
    Zeros(Vec<ZeroRecordDoc>),
    /// Trajectory of one census seed.
    Trajectory(TrajectoryRecord),
}

/// On-disk state of a partially completed run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub run_id: String,
    pub config_hash: String,
    /// Finished units by index.
    pub completed: BTreeMap<usize, UnitResult>,
}

impl Checkpoint {
    pub fn new(run_id: String, config_hash: String) -> Self {
        Checkpoint {
            run_id,
            config_hash,
            completed: BTreeMap::new(),
        }
    }

    /// Loads a checkpoint, or returns `None` when the file does not exist.
    pub fn load(path: &Path) -> Result<Option<Checkpoint>, Error> {
        match std::fs::read_to_string(path) {
            Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes the checkpoint through a temp file and an atomic rename.
    pub fn save_atomic(&self, path: &Path) -> Result<(), Error> {
        let text = serde_json::to_string(self)?;
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Accumulates unit results and persists them on a time cadence, always
/// ending with a final save so a finished run leaves a complete checkpoint.
pub struct CheckpointWriter {
    path: Option<PathBuf>,
    checkpoint: Checkpoint,
    cadence: Duration,
    last_save: Instant,
}

impl CheckpointWriter {
    /// A writer over `path` (no persistence when `None`), seeded with any
    /// previously completed units.
    pub fn new(path: Option<PathBuf>, checkpoint: Checkpoint) -> Self {
        let cadence = std::env::var(CADENCE_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .map_or(Duration::from_secs(CADENCE_SECS), Duration::from_secs);
        CheckpointWriter {
            path,
            checkpoint,
            cadence,
            last_save: Instant::now(),
        }
    }

    /// Units already completed in the seeding checkpoint.
    pub fn completed(&self) -> &BTreeMap<usize, UnitResult> {
        &self.checkpoint.completed
    }

    /// Records one finished unit and saves if the cadence has elapsed.
    pub fn record(&mut self, idx: usize, result: UnitResult) -> Result<(), Error> {
        self.checkpoint.completed.insert(idx, result);
        if let Some(path) = &self.path {
            if self.last_save.elapsed() >= self.cadence {
                self.checkpoint.save_atomic(path)?;
                self.last_save = Instant::now();
            }
        }
        Ok(())
    }

    /// Final unconditional save.
    pub fn finish(self) -> Result<(), Error> {
        if let Some(path) = &self.path {
            self.checkpoint.save_atomic(path)?;
        }
        Ok(())
    }
}

/// Loads the checkpoint at `path` (if any), validates it against the current
/// run, and returns a writer seeded with its completed units.
pub fn open_writer(
    path: Option<PathBuf>,
    run_id: &str,
    config_hash: &str,
) -> Result<CheckpointWriter, Error> {
    let mut checkpoint = Checkpoint::new(run_id.to_string(), config_hash.to_string());
    if let Some(p) = &path {
        if let Some(existing) = Checkpoint::load(p)? {
            if existing.config_hash != config_hash {
                return Err(Error::InvalidInput {
                    what: format!(
                        "checkpoint {} belongs to run {} (config hash {}), not this \
                         configuration (hash {config_hash}); move it aside or change --checkpoint",
                        p.display(),
                        existing.run_id,
                        existing.config_hash,
                    ),
                });
            }
            checkpoint = existing;
        }
    }
    Ok(CheckpointWriter::new(path, checkpoint))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_unit() -> UnitResult {
        UnitResult::Zeros(vec![ZeroRecordDoc {
            rho: [0.5, 14.134725141734695],
            multiplicity: 1,
            residual: 1e-15,
            method: "scan_newton".into(),
        }])
    }

    #[test]
    fn save_load_round_trips_and_missing_files_are_none() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ckpt.json");
        assert!(Checkpoint::load(&path).unwrap().is_none());

        let mut ck = Checkpoint::new("zeros-abc".into(), "abc".into());
        ck.completed.insert(3, sample_unit());
        ck.save_atomic(&path).unwrap();
        assert_eq!(Checkpoint::load(&path).unwrap().unwrap(), ck);
        // The temp file does not linger.
        assert!(!dir.path().join("ckpt.json.tmp").exists());
    }

    #[test]
    fn foreign_checkpoints_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ckpt.json");
        Checkpoint::new("census-dead".into(), "dead".into())
            .save_atomic(&path)
            .unwrap();
        let err = open_writer(Some(path.clone()), "census-beef", "beef").unwrap_err();
        assert!(matches!(err, Error::InvalidInput { .. }));
        let ok = open_writer(Some(path), "census-dead", "dead").unwrap();
        assert!(ok.completed().is_empty());
    }

    #[test]
    fn writer_persists_previous_units_through_finish() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ckpt.json");
        let mut writer = open_writer(Some(path.clone()), "zeros-abc", "abc").unwrap();
        writer.record(0, sample_unit()).unwrap();
        writer.record(2, sample_unit()).unwrap();
        writer.finish().unwrap();

        let resumed = open_writer(Some(path), "zeros-abc", "abc").unwrap();
        assert_eq!(
            resumed.completed().keys().copied().collect::<Vec<_>>(),
            vec![0, 2]
        );
    }
}
