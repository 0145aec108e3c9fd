//! Discrete-time policy evaluation against a demand trace.
//!
//! Each interval the template parameters are specialized to the current
//! demand (SLA floor = demand, write rate = write fraction x demand), the
//! policy is invoked once, its decision takes effect immediately and metrics
//! are recorded at the resulting configuration.

use crate::catalog::{ConfigSpace, Configuration};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::optimizer::{surfaces_at, ActionKind, PenaltyParams, Policy, Thresholds};
use crate::workload::WorkloadPoint;

/// Everything a run needs besides the policy, trace and start point.
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    pub space: &'a ConfigSpace,
    pub params: &'a ModelParams,
    pub penalty: &'a PenaltyParams,
    pub thresholds: Thresholds,
    /// Length of one control interval.
    pub interval_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRecord {
    pub t: usize,
    pub config: Configuration,
    /// ms
    pub latency: f64,
    /// ops/s
    pub throughput_capacity: f64,
    /// ops/s
    pub demand: f64,
    /// currency/hour
    pub cost_rate: f64,
    pub feasible: bool,
    pub sla_violation: bool,
    pub action_kind: ActionKind,
    pub shards_moved: u64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub latency_p50: f64,
    pub latency_p95: f64,
    pub latency_p99: f64,
    /// currency
    pub total_cost: f64,
    /// currency per served operation
    pub cost_per_op: f64,
    pub action_count: usize,
    /// Actions that moved at least one shard.
    pub rebalance_count: usize,
    pub total_shards_moved: u64,
    pub sla_violation_rate: f64,
}

/// Nearest-rank percentile, `p` in (0, 100].
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

impl Simulation<'_> {
    fn validate(&self, trace: &[WorkloadPoint], start: Configuration) -> Result<()> {
        self.params.validate()?;
        self.penalty.validate()?;
        self.thresholds.validate()?;
        if !(self.interval_seconds > 0.0) || !self.interval_seconds.is_finite() {
            return Err(Error::config("interval_seconds", "must be finite and > 0"));
        }
        if trace.is_empty() {
            return Err(Error::config("workload", "trace is empty"));
        }
        self.space
            .check(start)
            .map_err(|e| Error::config("start", e.to_string()))
    }

    pub fn simulate(
        &self,
        policy: Policy,
        trace: &[WorkloadPoint],
        start: Configuration,
    ) -> Result<(Vec<SimulationRecord>, SimulationSummary)> {
        self.validate(trace, start)?;
        let mut records = Vec::with_capacity(trace.len());
        let mut current = start;
        for point in trace {
            let params = self.params.for_demand(point.demand, point.write_fraction);
            let decision = policy.step(self.space, &params, self.penalty, &self.thresholds, current)?;
            current = decision.chosen;
            let s = surfaces_at(self.space, &params, current)?;
            records.push(SimulationRecord {
                t: point.t,
                config: current,
                latency: s.latency,
                throughput_capacity: s.throughput,
                demand: point.demand,
                cost_rate: s.cost,
                feasible: s.feasible,
                sla_violation: !s.feasible,
                action_kind: decision.action_kind,
                shards_moved: decision.shards_moved,
                objective: s.objective,
            });
        }
        let summary = self.summarize(&records);
        Ok((records, summary))
    }

    pub fn summarize(&self, records: &[SimulationRecord]) -> SimulationSummary {
        let mut latencies: Vec<f64> = records.iter().map(|r| r.latency).collect();
        latencies.sort_by(f64::total_cmp);

        let hours = self.interval_seconds / 3600.0;
        let total_cost: f64 = records.iter().map(|r| r.cost_rate * hours).sum();
        let served: f64 = records
            .iter()
            .map(|r| r.demand.min(r.throughput_capacity) * self.interval_seconds)
            .sum();
        let cost_per_op = if served > 0.0 {
            total_cost / served
        } else if total_cost > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        let violations = records.iter().filter(|r| r.sla_violation).count();

        SimulationSummary {
            latency_p50: nearest_rank(&latencies, 50.0),
            latency_p95: nearest_rank(&latencies, 95.0),
            latency_p99: nearest_rank(&latencies, 99.0),
            total_cost,
            cost_per_op,
            action_count: records.iter().filter(|r| r.action_kind != ActionKind::Hold).count(),
            rebalance_count: records.iter().filter(|r| r.shards_moved > 0).count(),
            total_shards_moved: records.iter().map(|r| r.shards_moved).sum(),
            sla_violation_rate: violations as f64 / records.len() as f64,
        }
    }

    /// Runs every policy on the identical trace and start point.
    pub fn compare(&self, trace: &[WorkloadPoint], start: Configuration, policies: &[Policy]) -> Result<Comparison> {
        if policies.is_empty() {
            return Err(Error::config("policies", "at least one policy is required"));
        }
        let runs = policies
            .iter()
            .map(|&p| Ok((p, self.simulate(p, trace, start)?)))
            .collect::<Result<Vec<_>>>()?;
        let reference = if policies.contains(&Policy::Diagonal) {
            Policy::Diagonal
        } else {
            policies[0]
        };
        let base = runs
            .iter()
            .find(|(p, _)| *p == reference)
            .map(|(_, (_, s))| s.clone())
            .expect("reference policy was run");
        let rows = runs
            .into_iter()
            .map(|(policy, (records, summary))| ComparisonRow {
                ratios: Ratios::between(&summary, &base),
                policy,
                records,
                summary,
            })
            .collect();
        Ok(Comparison { reference, rows })
    }
}

/// Policy metric divided by the reference policy's metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratios {
    pub cost_per_op: f64,
    pub p95: f64,
    pub rebalances: f64,
}

fn ratio(a: f64, b: f64) -> f64 {
    if a == b {
        1.0
    } else if b == 0.0 {
        f64::INFINITY
    } else {
        a / b
    }
}

impl Ratios {
    fn between(s: &SimulationSummary, reference: &SimulationSummary) -> Self {
        Ratios {
            cost_per_op: ratio(s.cost_per_op, reference.cost_per_op),
            p95: ratio(s.latency_p95, reference.latency_p95),
            rebalances: ratio(s.rebalance_count as f64, reference.rebalance_count as f64),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub policy: Policy,
    pub records: Vec<SimulationRecord>,
    pub summary: SimulationSummary,
    pub ratios: Ratios,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    /// Denominator of every ratio: `diagonal` when compared, else the first
    /// listed policy.
    pub reference: Policy,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn get(&self, policy: Policy) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.policy == policy)
    }
}
