//! Scenario files: one TOML document holding every parameter of a run.

use std::fs;
use std::path::{Path, PathBuf};

use diagscale_core::catalog::Catalog;
use diagscale_core::optimizer::{PenaltyParams, Policy, Thresholds};
use diagscale_core::workload::{self, WorkloadPoint, WorkloadSpec};
use diagscale_core::{ConfigSpace, Configuration, ModelParams};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSection {
    pub h_max: u32,
    pub delta_h: u32,
}

fn default_interval_seconds() -> f64 {
    5.0
}

/// Parsed scenario document.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub start: Configuration,
    #[serde(default)]
    pub policies: Vec<Policy>,
    /// Length of one control interval.
    #[serde(default = "default_interval_seconds")]
    pub interval_seconds: f64,
    /// Step budget for `optimize`; defaults to the grid size plus one.
    #[serde(default)]
    pub max_steps: Option<usize>,
    /// Restricts the `surface` sweep to these node counts.
    #[serde(default)]
    pub sweep_nodes: Option<Vec<u32>>,
    /// CSV trace (`t,demand,write_fraction`) replayed instead of generating
    /// one from `[workload]`. Relative to the scenario file.
    #[serde(default)]
    pub trace_file: Option<PathBuf>,
    pub space: SpaceSection,
    pub model: ModelParams,
    pub penalty: PenaltyParams,
    #[serde(default)]
    pub baseline_thresholds: Thresholds,
    pub workload: WorkloadSpec,
    pub catalog: Catalog,
}

/// A scenario that passed validation, plus what was derived from it.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub space: ConfigSpace,
    /// Original file bytes, copied verbatim next to the outputs.
    pub source: String,
    pub base_dir: PathBuf,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario> {
        toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string() + &span_hint(text, e.span())))
    }
}

fn span_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(r) => {
            let line = text[..r.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}

impl LoadedScenario {
    pub fn from_path(path: &Path, seed_override: Option<u64>) -> Result<Self> {
        let source = fs::read_to_string(path).map_err(CliError::io(path))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_source(source, base_dir, seed_override)
    }

    pub fn from_source(source: String, base_dir: PathBuf, seed_override: Option<u64>) -> Result<Self> {
        let mut scenario = Scenario::parse(&source)?;
        if let Some(seed) = seed_override {
            scenario.seed = seed;
        }
        scenario.workload.seed = scenario.seed;

        scenario.model.validate()?;
        scenario.penalty.validate()?;
        scenario.baseline_thresholds.validate()?;
        scenario.workload.validate()?;
        if !(scenario.interval_seconds > 0.0) || !scenario.interval_seconds.is_finite() {
            return Err(CliError::Config(
                "invalid `interval_seconds`: must be finite and > 0".into(),
            ));
        }
        if scenario.max_steps == Some(0) {
            return Err(CliError::Config("invalid `max_steps`: must be >= 1".into()));
        }
        let space = ConfigSpace::new(scenario.catalog.clone(), scenario.space.h_max, scenario.space.delta_h)?;
        if !space.contains(scenario.start) {
            return Err(CliError::Config(format!(
                "invalid `start`: {} is outside the grid",
                scenario.start
            )));
        }
        Ok(LoadedScenario {
            scenario,
            space,
            source,
            base_dir,
        })
    }

    pub fn policies(&self) -> Result<&[Policy]> {
        if self.scenario.policies.is_empty() {
            return Err(CliError::Config(
                "invalid `policies`: at least one policy is required".into(),
            ));
        }
        Ok(&self.scenario.policies)
    }

    /// The demand trace: replayed from `trace_file` when set, else generated.
    pub fn trace(&self) -> Result<Vec<WorkloadPoint>> {
        match &self.scenario.trace_file {
            Some(rel) => {
                let path = self.base_dir.join(rel);
                let file = fs::File::open(&path).map_err(CliError::io(&path))?;
                let mut trace = workload::read_trace_csv(file)?;
                for p in &mut trace {
                    p.skew = self.scenario.workload.skew;
                }
                Ok(trace)
            }
            None => Ok(workload::generate_trace(&self.scenario.workload)?),
        }
    }

    pub fn max_steps(&self) -> usize {
        self.scenario.max_steps.unwrap_or(self.space.len() + 1)
    }
}
