//! The four subcommands. Each is a pure function of the scenario to the
//! files it writes under the output directory.

use std::path::{Path, PathBuf};

use diagscale_core::optimizer::{self, is_interior, Policy};
use diagscale_core::simulator::{Comparison, Simulation};
use diagscale_core::workload::{self, WorkloadPoint};
use diagscale_core::{SimulationRecord, SimulationSummary};
use serde_json::json;

use crate::error::{CliError, Result};
use crate::output::{ensure_dir, flag, num, write_text, CsvFile};
use crate::scenario::LoadedScenario;

pub const SURFACE_HEADER: [&str; 9] = ["h", "tier", "tier_name", "L", "T", "K", "C", "F", "feasible"];
pub const GRADIENT_HEADER: [&str; 5] = ["h", "tier", "dF_dH_forward", "dF_dV_forward", "descent_direction"];
pub const TRAJECTORY_HEADER: [&str; 7] = ["step", "h", "tier", "action", "F", "F_penalized", "shards_moved"];
pub const TIMESERIES_HEADER: [&str; 10] = [
    "t",
    "h",
    "tier",
    "demand",
    "latency",
    "capacity",
    "cost_rate",
    "action",
    "shards_moved",
    "sla_violation",
];
pub const SUMMARY_HEADER: [&str; 10] = [
    "policy",
    "p50",
    "p95",
    "p99",
    "total_cost",
    "cost_per_op",
    "actions",
    "rebalances",
    "shards_moved",
    "sla_violation_rate",
];
pub const RATIOS_HEADER: [&str; 5] = [
    "policy",
    "reference",
    "cost_per_op_ratio",
    "p95_ratio",
    "rebalance_ratio",
];

/// Resolved output directory: the `--out` flag wins over the scenario's
/// `output_dir`.
pub fn output_dir(loaded: &LoadedScenario, flag_out: Option<&Path>) -> Result<PathBuf> {
    flag_out
        .map(Path::to_path_buf)
        .or_else(|| loaded.scenario.output_dir.clone())
        .ok_or_else(|| CliError::Config("no output directory: pass --out or set `output_dir`".into()))
}

fn prepare(loaded: &LoadedScenario, out: &Path) -> Result<()> {
    ensure_dir(out)?;
    write_text(&out.join("scenario.toml"), &loaded.source)
}

/// `surface.csv`, `gradient.csv` and `minimizer.json`.
pub fn cmd_surface(loaded: &LoadedScenario, out: &Path) -> Result<()> {
    prepare(loaded, out)?;
    let space = &loaded.space;
    let params = &loaded.scenario.model;
    let configs = match &loaded.scenario.sweep_nodes {
        Some(nodes) => space.configurations_at(nodes),
        None => space.all_configurations(),
    };
    let table = optimizer::grid_sweep_at(space, params, &configs)?;

    let mut csv = CsvFile::create(&out.join("surface.csv"), &SURFACE_HEADER)?;
    for row in &table.rows {
        let s = &row.surfaces;
        csv.row([
            row.config.node_count.to_string(),
            row.config.tier.to_string(),
            row.tier_name.clone(),
            num(s.latency),
            num(s.throughput),
            num(s.overhead),
            num(s.cost),
            num(s.objective),
            flag(s.feasible).to_string(),
        ])?;
    }
    csv.finish()?;

    let mut csv = CsvFile::create(&out.join("gradient.csv"), &GRADIENT_HEADER)?;
    for c in space.all_configurations() {
        if let Ok(g) = optimizer::discrete_gradient(space, params, c) {
            csv.row([
                c.node_count.to_string(),
                c.tier.to_string(),
                num(g.d_nodes),
                num(g.d_tier),
                g.descent_kind().to_string(),
            ])?;
        }
    }
    csv.finish()?;

    let minimizer = table.minimizer_row().map(|row| {
        let s = &row.surfaces;
        json!({
            "h": row.config.node_count,
            "tier": row.config.tier,
            "tier_name": row.tier_name,
            "L": s.latency,
            "T": s.throughput,
            "K": s.overhead,
            "C": s.cost,
            "F": s.objective,
            "interior": is_interior(space, row.config),
        })
    });
    let doc = json!({
        "feasible_minimizer": minimizer,
        "tied": table.tied.iter().map(|c| json!({"h": c.node_count, "tier": c.tier})).collect::<Vec<_>>(),
        "feasible_count": table.rows.iter().filter(|r| r.surfaces.feasible).count(),
        "rows": table.rows.len(),
    });
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    write_text(&out.join("minimizer.json"), &text)
}

/// `trajectory.csv`: one row per local-search decision from `start`.
pub fn cmd_optimize(loaded: &LoadedScenario, out: &Path) -> Result<()> {
    prepare(loaded, out)?;
    let s = &loaded.scenario;
    let trace = optimizer::run_to_convergence(&loaded.space, &s.model, &s.penalty, s.start, loaded.max_steps())?;
    let mut csv = CsvFile::create(&out.join("trajectory.csv"), &TRAJECTORY_HEADER)?;
    for (step, d) in trace.iter().enumerate() {
        csv.row([
            step.to_string(),
            d.chosen.node_count.to_string(),
            d.chosen.tier.to_string(),
            d.action_kind.to_string(),
            num(d.objective_after),
            num(d.objective_after_penalized),
            d.shards_moved.to_string(),
        ])?;
    }
    csv.finish()
}

fn simulation(loaded: &LoadedScenario) -> Simulation<'_> {
    let s = &loaded.scenario;
    Simulation {
        space: &loaded.space,
        params: &s.model,
        penalty: &s.penalty,
        thresholds: s.baseline_thresholds,
        interval_seconds: s.interval_seconds,
    }
}

fn write_trace(out: &Path, trace: &[WorkloadPoint]) -> Result<()> {
    let path = out.join("trace.csv");
    let file = std::fs::File::create(&path).map_err(CliError::io(&path))?;
    workload::write_trace_csv(trace, std::io::BufWriter::new(file)).map_err(|e| CliError::Io {
        path,
        source: std::io::Error::other(e),
    })
}

fn write_timeseries(out: &Path, policy: Policy, records: &[SimulationRecord]) -> Result<()> {
    let mut csv = CsvFile::create(&out.join(format!("timeseries_{policy}.csv")), &TIMESERIES_HEADER)?;
    for r in records {
        csv.row([
            r.t.to_string(),
            r.config.node_count.to_string(),
            r.config.tier.to_string(),
            num(r.demand),
            num(r.latency),
            num(r.throughput_capacity),
            num(r.cost_rate),
            r.action_kind.to_string(),
            r.shards_moved.to_string(),
            flag(r.sla_violation).to_string(),
        ])?;
    }
    csv.finish()
}

fn summary_fields(policy: Policy, s: &SimulationSummary) -> [String; 10] {
    [
        policy.to_string(),
        num(s.latency_p50),
        num(s.latency_p95),
        num(s.latency_p99),
        num(s.total_cost),
        num(s.cost_per_op),
        s.action_count.to_string(),
        s.rebalance_count.to_string(),
        s.total_shards_moved.to_string(),
        num(s.sla_violation_rate),
    ]
}

/// Runs the first listed policy: `timeseries_<policy>.csv`, `summary.csv`,
/// `trace.csv`.
pub fn cmd_simulate(loaded: &LoadedScenario, out: &Path) -> Result<()> {
    let policy = loaded.policies()?[0];
    let trace = loaded.trace()?;
    prepare(loaded, out)?;
    let (records, summary) = simulation(loaded).simulate(policy, &trace, loaded.scenario.start)?;
    write_trace(out, &trace)?;
    write_timeseries(out, policy, &records)?;
    let mut csv = CsvFile::create(&out.join("summary.csv"), &SUMMARY_HEADER)?;
    csv.row(summary_fields(policy, &summary))?;
    csv.finish()
}

/// Runs every listed policy on the same trace; adds `ratios.csv` against the
/// reference policy.
pub fn cmd_compare(loaded: &LoadedScenario, out: &Path) -> Result<Comparison> {
    let policies = loaded.policies()?.to_vec();
    let trace = loaded.trace()?;
    prepare(loaded, out)?;
    let cmp = simulation(loaded).compare(&trace, loaded.scenario.start, &policies)?;
    write_trace(out, &trace)?;
    let mut summary = CsvFile::create(&out.join("summary.csv"), &SUMMARY_HEADER)?;
    let mut ratios = CsvFile::create(&out.join("ratios.csv"), &RATIOS_HEADER)?;
    for row in &cmp.rows {
        write_timeseries(out, row.policy, &row.records)?;
        summary.row(summary_fields(row.policy, &row.summary))?;
        ratios.row([
            row.policy.to_string(),
            cmp.reference.to_string(),
            num(row.ratios.cost_per_op),
            num(row.ratios.p95),
            num(row.ratios.rebalances),
        ])?;
    }
    summary.finish()?;
    ratios.finish()?;
    Ok(cmp)
}
