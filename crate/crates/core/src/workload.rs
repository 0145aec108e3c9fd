//! Deterministic demand traces over discrete control intervals.
//!
//! Demand at interval `t` is the throughput the cluster must deliver; the
//! simulator turns it into the SLA floor and, scaled by the write fraction,
//! into the write arrival rate.

use std::f64::consts::PI;
use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    Constant,
    Sinusoidal,
    Step,
    Burst,
}

/// Key-access skew. Carried through to outputs only; the surfaces have no
/// skew term.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkewLabel {
    #[default]
    Uniform,
    Zipfian(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkloadPoint {
    pub t: usize,
    /// Required throughput (ops/s).
    pub demand: f64,
    pub write_fraction: f64,
    pub skew: SkewLabel,
}

impl WorkloadPoint {
    /// Write arrival rate implied by this point.
    pub fn write_rate(&self) -> f64 {
        self.write_fraction * self.demand
    }
}

/// Parameters of a generated trace. Only the fields relevant to `pattern`
/// need to be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadSpec {
    pub pattern: Pattern,
    pub base_demand: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Sinusoid period in intervals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_times: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_levels: Option<Vec<f64>>,
    /// Explicit pulse start intervals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burst_times: Option<Vec<usize>>,
    /// Number of pulses placed at seeded-random intervals, used when
    /// `burst_times` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burst_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burst_height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burst_width: Option<usize>,
    pub write_fraction: f64,
    #[serde(default)]
    pub skew: SkewLabel,
    pub duration: usize,
    #[serde(default)]
    pub seed: u64,
}

impl WorkloadSpec {
    pub fn constant(base_demand: f64, write_fraction: f64, duration: usize) -> Self {
        WorkloadSpec {
            pattern: Pattern::Constant,
            base_demand,
            amplitude: None,
            period: None,
            step_times: None,
            step_levels: None,
            burst_times: None,
            burst_count: None,
            burst_height: None,
            burst_width: None,
            write_fraction,
            skew: SkewLabel::Uniform,
            duration,
            seed: 0,
        }
    }

    pub fn sinusoidal(base_demand: f64, amplitude: f64, period: f64, write_fraction: f64, duration: usize) -> Self {
        WorkloadSpec {
            pattern: Pattern::Sinusoidal,
            amplitude: Some(amplitude),
            period: Some(period),
            ..Self::constant(base_demand, write_fraction, duration)
        }
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("workload.base_demand", self.base_demand)?;
        if !(0.0..=1.0).contains(&self.write_fraction) {
            return Err(Error::config("workload.write_fraction", "must lie in [0, 1]"));
        }
        if self.duration < 1 {
            return Err(Error::config("workload.duration", "must be >= 1"));
        }
        if let SkewLabel::Zipfian(theta) = self.skew {
            if !(theta > 0.0) || !theta.is_finite() {
                return Err(Error::config(
                    "workload.skew",
                    "zipfian exponent must be finite and > 0",
                ));
            }
        }
        match self.pattern {
            Pattern::Constant => {}
            Pattern::Sinusoidal => {
                let amplitude = required("workload.amplitude", self.amplitude)?;
                non_negative("workload.amplitude", amplitude)?;
                let period = required("workload.period", self.period)?;
                if !(period > 0.0) || !period.is_finite() {
                    return Err(Error::config("workload.period", "must be finite and > 0"));
                }
            }
            Pattern::Step => {
                let times = required("workload.step_times", self.step_times.as_ref())?;
                let levels = required("workload.step_levels", self.step_levels.as_ref())?;
                if times.len() != levels.len() {
                    return Err(Error::config(
                        "workload.step_levels",
                        format!(
                            "expected {} levels to match step_times, got {}",
                            times.len(),
                            levels.len()
                        ),
                    ));
                }
                if times.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::config("workload.step_times", "must be strictly increasing"));
                }
                for &level in levels {
                    non_negative("workload.step_levels", level)?;
                }
            }
            Pattern::Burst => {
                let height = required("workload.burst_height", self.burst_height)?;
                non_negative("workload.burst_height", height)?;
                let width = required("workload.burst_width", self.burst_width)?;
                if width < 1 {
                    return Err(Error::config("workload.burst_width", "must be >= 1"));
                }
                match (&self.burst_times, self.burst_count) {
                    (Some(_), _) => {}
                    (None, Some(count)) if count <= self.duration => {}
                    (None, Some(_)) => {
                        return Err(Error::config("workload.burst_count", "cannot exceed duration"));
                    }
                    (None, None) => {
                        return Err(Error::config(
                            "workload.burst_times",
                            "burst_times or burst_count is required",
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn pulse_starts(&self) -> Vec<usize> {
        match (&self.burst_times, self.burst_count) {
            (Some(times), _) => times.clone(),
            (None, Some(count)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let mut starts = rand::seq::index::sample(&mut rng, self.duration, count).into_vec();
                starts.sort_unstable();
                starts
            }
            (None, None) => Vec::new(),
        }
    }

    fn demand_series(&self) -> Vec<f64> {
        let n = self.duration;
        match self.pattern {
            Pattern::Constant => vec![self.base_demand; n],
            Pattern::Sinusoidal => {
                let amplitude = self.amplitude.unwrap_or(0.0);
                let period = self.period.unwrap_or(1.0);
                (0..n)
                    .map(|t| (self.base_demand + amplitude * (2.0 * PI * t as f64 / period).sin()).max(0.0))
                    .collect()
            }
            Pattern::Step => {
                let times = self.step_times.as_deref().unwrap_or_default();
                let levels = self.step_levels.as_deref().unwrap_or_default();
                (0..n)
                    .map(|t| {
                        let switched = times.partition_point(|&s| s <= t);
                        if switched == 0 {
                            self.base_demand
                        } else {
                            levels[switched - 1]
                        }
                    })
                    .collect()
            }
            Pattern::Burst => {
                let height = self.burst_height.unwrap_or(0.0);
                let width = self.burst_width.unwrap_or(1);
                let mut demand = vec![self.base_demand; n];
                for start in self.pulse_starts() {
                    for d in demand.iter_mut().skip(start).take(width) {
                        *d += height;
                    }
                }
                demand
            }
        }
    }
}

fn required<T>(field: &str, value: Option<T>) -> Result<T> {
    value.ok_or_else(|| Error::config(field, "required for this pattern"))
}

fn non_negative(field: &str, value: f64) -> Result<()> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(Error::config(field, format!("must be finite and >= 0, got {value}")));
    }
    Ok(())
}

/// Builds the trace described by `spec`. Identical specs (seed included)
/// give identical traces of exactly `duration` points.
pub fn generate_trace(spec: &WorkloadSpec) -> Result<Vec<WorkloadPoint>> {
    spec.validate()?;
    Ok(spec
        .demand_series()
        .into_iter()
        .enumerate()
        .map(|(t, demand)| WorkloadPoint {
            t,
            demand,
            write_fraction: spec.write_fraction,
            skew: spec.skew,
        })
        .collect())
}

#[derive(Serialize, Deserialize)]
struct TraceRow {
    t: usize,
    demand: f64,
    write_fraction: f64,
}

/// Writes `t,demand,write_fraction` rows. Values use the shortest
/// representation that parses back to the same float.
pub fn write_trace_csv<W: Write>(trace: &[WorkloadPoint], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for p in trace {
        w.serialize(TraceRow {
            t: p.t,
            demand: p.demand,
            write_fraction: p.write_fraction,
        })
        .map_err(|e| Error::Trace(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Trace(e.to_string()))
}

/// Reads a trace written by [`write_trace_csv`] or produced externally.
/// Rows must be numbered `0, 1, 2, ...` in order.
pub fn read_trace_csv<R: Read>(input: R) -> Result<Vec<WorkloadPoint>> {
    let mut r = csv::Reader::from_reader(input);
    let mut trace = Vec::new();
    for (i, row) in r.deserialize::<TraceRow>().enumerate() {
        let row = row.map_err(|e| Error::Trace(e.to_string()))?;
        if row.t != i {
            return Err(Error::Trace(format!("row {i} has t={}, expected {i}", row.t)));
        }
        if !(row.demand >= 0.0) || !row.demand.is_finite() {
            return Err(Error::Trace(format!("row {i}: demand must be finite and >= 0")));
        }
        if !(0.0..=1.0).contains(&row.write_fraction) {
            return Err(Error::Trace(format!("row {i}: write_fraction must lie in [0, 1]")));
        }
        trace.push(WorkloadPoint {
            t: row.t,
            demand: row.demand,
            write_fraction: row.write_fraction,
            skew: SkewLabel::Uniform,
        });
    }
    if trace.is_empty() {
        return Err(Error::Trace("trace has no rows".into()));
    }
    Ok(trace)
}
