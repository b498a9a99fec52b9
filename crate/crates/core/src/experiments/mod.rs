//! Figure-level experiment runner: resolves an [`ExperimentConfig`], runs
//! its sub-tasks on a work pool and writes CSV/JSON outputs plus a manifest.

mod config;
mod plots;
mod runners;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{
    parse_kv, CoupledSet, ExperimentConfig, ExperimentKind, ModelSelector, PairSelection, SCHEMA,
};
pub use plots::emit_plots;
pub use runners::{
    ensemble_rows, ising_scaling_rows, median, scaling_medians, EnsembleRow, ScalingRow,
    MAXIMA_PROMINENCE,
};

use crate::error::{Error, Result};
use crate::output::{atomic_write, write_json};

/// File name of the manifest written into every bundle.
pub const MANIFEST: &str = "manifest.json";
/// Resolved config written next to the manifest; reusable with `--config`.
pub const CONFIG_ECHO: &str = "config.txt";

/// One output file produced by a sub-task.
#[derive(Clone, Debug)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn text(name: impl Into<String>, text: String) -> Self {
        Artifact {
            name: name.into(),
            bytes: text.into_bytes(),
        }
    }

    pub fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Result<Self> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        Ok(Self::text(name, text))
    }
}

type TaskFn = Box<dyn Fn() -> Result<Vec<Artifact>> + Send + Sync>;

/// A named unit of work inside an experiment.
pub struct Task {
    pub name: String,
    run: TaskFn,
}

impl Task {
    pub fn new(
        name: impl Into<String>,
        run: impl Fn() -> Result<Vec<Artifact>> + Send + Sync + 'static,
    ) -> Self {
        Task {
            name: name.into(),
            run: Box::new(run),
        }
    }
}

/// Outcome of one sub-task as recorded in the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubtaskRecord {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub files: Vec<String>,
}

/// Contents of `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub status: String,
    pub config: BTreeMap<String, String>,
    pub seeds: Vec<u64>,
    pub files: Vec<String>,
    pub subtasks: Vec<SubtaskRecord>,
}

impl Manifest {
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// A finished experiment directory.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

/// Runs the configured experiment and writes its bundle. A failing sub-task
/// does not stop the others; the manifest names it and the call returns an
/// error after the manifest is written.
pub fn run(config: &ExperimentConfig) -> Result<Bundle> {
    config.validate()?;
    let tasks = runners::tasks(config)?;
    let outcomes: Vec<(String, Result<Vec<Artifact>>)> = tasks
        .par_iter()
        .map(|t| (t.name.clone(), (t.run)()))
        .collect();
    let dir = config.out.clone();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut files = Vec::new();
    let mut subtasks = Vec::new();
    for (name, outcome) in outcomes {
        match outcome {
            Ok(artifacts) => {
                let mut written = Vec::new();
                for a in artifacts {
                    atomic_write(&dir.join(&a.name), &a.bytes)?;
                    written.push(a.name);
                }
                files.extend(written.iter().cloned());
                subtasks.push(SubtaskRecord {
                    name,
                    status: "ok".into(),
                    error: None,
                    files: written,
                });
            }
            Err(e) => subtasks.push(SubtaskRecord {
                name,
                status: "failed".into(),
                error: Some(e.to_string()),
                files: vec![],
            }),
        }
    }
    atomic_write(&dir.join(CONFIG_ECHO), config.to_kv().as_bytes())?;
    let failed: Vec<String> = subtasks
        .iter()
        .filter(|s| s.status != "ok")
        .map(|s| s.name.clone())
        .collect();
    let manifest = Manifest {
        experiment: config.experiment.as_str().into(),
        status: if failed.is_empty() {
            "ok"
        } else {
            "partial_failure"
        }
        .into(),
        config: config.to_map(),
        seeds: runners::seeds_used(config),
        files,
        subtasks,
    };
    write_json(&dir.join(MANIFEST), &manifest)?;
    if !failed.is_empty() {
        return Err(Error::Numerical(format!(
            "sub-tasks failed: {}",
            failed.join(", ")
        )));
    }
    Ok(Bundle { dir, manifest })
}

/// Machine-readable error record printed by the CLI on failure.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorRecord {
    pub status: &'static str,
    pub kind: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::Dimension(_) => "dimension",
            Error::IndexOutOfRange(_) => "index_out_of_range",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Degenerate(_) => "degenerate",
            Error::Numerical(_) => "numerical",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        };
        ErrorRecord {
            status: "error",
            kind,
            message: e.to_string(),
        }
    }
}
