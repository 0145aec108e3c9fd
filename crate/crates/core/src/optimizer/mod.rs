//! Local search over the configuration grid.
//!
//! [`diagonal_scale_step`] evaluates every horizontal, vertical and diagonal
//! neighbor of the current configuration, discards those violating the SLA,
//! adds a rebalance penalty to the objective of each survivor and moves to the
//! best one only if it beats the current objective by more than `epsilon`.
//! Repeating the step under fixed parameters ([`run_to_convergence`]) is a
//! strict descent on a finite set and therefore terminates at a local minimum.

mod baseline;
mod sweep;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, ConfigSpace, Configuration};
use crate::error::{Error, Result};
use crate::model::{self, ModelParams, Surfaces};

pub use baseline::{horizontal_only_step, utilization, vertical_only_step, Thresholds};
pub use sweep::{discrete_gradient, grid_sweep, grid_sweep_at, is_interior, Gradient, SweepRow, SweepTable};

/// Weights of the rebalance penalty and the acceptance rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyParams {
    /// Per node added or removed.
    pub lambda1: f64,
    /// Per unit of normalized tier distance.
    pub lambda2: f64,
    /// Per shard moved.
    pub lambda3: f64,
    /// Multiplier applied to the whole penalty before it is added to the
    /// candidate's objective.
    pub w_stab: f64,
    /// A move is accepted only if it improves the objective by more than this.
    pub epsilon: f64,
    pub total_shards: u64,
}

impl Default for PenaltyParams {
    fn default() -> Self {
        PenaltyParams {
            lambda1: 0.0,
            lambda2: 0.0,
            lambda3: 0.0,
            w_stab: 0.0,
            epsilon: 1e-6,
            total_shards: 1,
        }
    }
}

impl PenaltyParams {
    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("lambda3", self.lambda3),
            ("w_stab", self.w_stab),
            ("epsilon", self.epsilon),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::config(field, format!("must be finite and >= 0, got {value}")));
            }
        }
        if self.total_shards < 1 {
            return Err(Error::config("total_shards", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Hold,
    Horizontal,
    Vertical,
    Diagonal,
}

impl ActionKind {
    pub fn classify(from: Configuration, to: Configuration) -> Self {
        match (from.node_count != to.node_count, from.tier != to.tier) {
            (false, false) => ActionKind::Hold,
            (true, false) => ActionKind::Horizontal,
            (false, true) => ActionKind::Vertical,
            (true, true) => ActionKind::Diagonal,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ActionKind::Hold => "hold",
            ActionKind::Horizontal => "horizontal",
            ActionKind::Vertical => "vertical",
            ActionKind::Diagonal => "diagonal",
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Audit record of one policy invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub from: Configuration,
    pub chosen: Configuration,
    pub action_kind: ActionKind,
    /// Unpenalized objective at `from`.
    pub objective_before: f64,
    /// Unpenalized objective at `chosen`.
    pub objective_after: f64,
    /// Penalized objective of `chosen`; equals `objective_before` on hold.
    pub objective_after_penalized: f64,
    /// Rebalance penalty of the move (before `w_stab`); zero on hold.
    pub penalty: f64,
    pub shards_moved: u64,
    pub feasible_neighbor_count: usize,
    pub current_feasible: bool,
    /// Current configuration infeasible and no feasible neighbor to escape to.
    pub stranded: bool,
}

impl Decision {
    pub fn is_hold(&self) -> bool {
        self.action_kind == ActionKind::Hold
    }

    fn hold(from: Configuration, current: &Surfaces, feasible_neighbor_count: usize) -> Self {
        Decision {
            from,
            chosen: from,
            action_kind: ActionKind::Hold,
            objective_before: current.objective,
            objective_after: current.objective,
            objective_after_penalized: current.objective,
            penalty: 0.0,
            shards_moved: 0,
            feasible_neighbor_count,
            current_feasible: current.feasible,
            stranded: !current.feasible && feasible_neighbor_count == 0,
        }
    }
}

/// Autoscaling policies that can drive the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Diagonal,
    HOnly,
    VOnly,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::Diagonal, Policy::HOnly, Policy::VOnly];

    pub fn as_str(&self) -> &'static str {
        match self {
            Policy::Diagonal => "diagonal",
            Policy::HOnly => "h_only",
            Policy::VOnly => "v_only",
        }
    }

    pub fn step(
        &self,
        space: &ConfigSpace,
        params: &ModelParams,
        penalty: &PenaltyParams,
        thresholds: &Thresholds,
        current: Configuration,
    ) -> Result<Decision> {
        match self {
            Policy::Diagonal => diagonal_scale_step(space, params, penalty, current),
            Policy::HOnly => horizontal_only_step(space, params, penalty, thresholds, current),
            Policy::VOnly => vertical_only_step(space, params, penalty, thresholds, current),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::config("policies", format!("unknown policy `{s}`")))
    }
}

pub(crate) fn surfaces_at(space: &ConfigSpace, params: &ModelParams, c: Configuration) -> Result<Surfaces> {
    let tier = space.tier(c)?;
    model::evaluate(params, c.node_count, &tier.resources, tier.hourly_cost)
}

/// Shards relocated when moving between node counts, under a consistent
/// hashing ring: `total_shards * |h' - h| / max(h, h')`, rounded to nearest.
/// Tier changes are in-place resizes and move nothing.
pub fn shard_movement(penalty: &PenaltyParams, from: Configuration, to: Configuration) -> u64 {
    if from.node_count == to.node_count {
        return 0;
    }
    let delta = f64::from(from.node_count.abs_diff(to.node_count));
    let larger = f64::from(from.node_count.max(to.node_count));
    (penalty.total_shards as f64 * delta / larger).round() as u64
}

/// `lambda1 |dH| + lambda2 * tier_distance + lambda3 * shards_moved`.
pub fn rebalance_penalty(
    penalty: &PenaltyParams,
    catalog: &Catalog,
    from: Configuration,
    to: Configuration,
) -> Result<f64> {
    let node_delta = f64::from(from.node_count.abs_diff(to.node_count));
    let tier_delta = catalog.tier_distance(from.tier, to.tier)?;
    let shards = shard_movement(penalty, from, to) as f64;
    Ok(penalty.lambda1 * node_delta + penalty.lambda2 * tier_delta + penalty.lambda3 * shards)
}

struct Candidate {
    config: Configuration,
    objective: f64,
    penalized: f64,
    penalty: f64,
}

impl Candidate {
    // Penalized objective, then penalty, then node count, then tier.
    fn rank(&self, other: &Candidate) -> Ordering {
        self.penalized
            .total_cmp(&other.penalized)
            .then(self.penalty.total_cmp(&other.penalty))
            .then(self.config.node_count.cmp(&other.config.node_count))
            .then(self.config.tier.cmp(&other.config.tier))
    }
}

/// One invocation of the diagonal local-search policy.
///
/// When `current` itself violates the SLA any feasible neighbor is accepted
/// (the best by penalized objective), so the policy can escape infeasibility
/// instead of holding on a cheaper but non-compliant configuration.
pub fn diagonal_scale_step(
    space: &ConfigSpace,
    params: &ModelParams,
    penalty: &PenaltyParams,
    current: Configuration,
) -> Result<Decision> {
    let neighbors = space.neighborhood(current)?;
    let here = surfaces_at(space, params, current)?;

    let mut best: Option<Candidate> = None;
    let mut feasible = 0;
    for config in neighbors {
        let s = surfaces_at(space, params, config)?;
        if !s.feasible {
            continue;
        }
        feasible += 1;
        let p = rebalance_penalty(penalty, &space.catalog, current, config)?;
        let candidate = Candidate {
            config,
            objective: s.objective,
            penalized: s.objective + penalty.w_stab * p,
            penalty: p,
        };
        if best.as_ref().is_none_or(|b| candidate.rank(b) == Ordering::Less) {
            best = Some(candidate);
        }
    }

    let threshold = if here.feasible {
        here.objective - penalty.epsilon
    } else {
        f64::INFINITY
    };
    match best {
        Some(b) if b.penalized < threshold => Ok(Decision {
            from: current,
            chosen: b.config,
            action_kind: ActionKind::classify(current, b.config),
            objective_before: here.objective,
            objective_after: b.objective,
            objective_after_penalized: b.penalized,
            penalty: b.penalty,
            shards_moved: shard_movement(penalty, current, b.config),
            feasible_neighbor_count: feasible,
            current_feasible: here.feasible,
            stranded: false,
        }),
        _ => Ok(Decision::hold(current, &here, feasible)),
    }
}

/// Applies [`diagonal_scale_step`] under fixed parameters until it holds or
/// `max_steps` decisions have been made. The returned trace ends in a hold
/// unless the step budget ran out.
pub fn run_to_convergence(
    space: &ConfigSpace,
    params: &ModelParams,
    penalty: &PenaltyParams,
    start: Configuration,
    max_steps: usize,
) -> Result<Vec<Decision>> {
    if max_steps < 1 {
        return Err(Error::config("max_steps", "must be >= 1"));
    }
    let mut trace = Vec::new();
    let mut current = start;
    while trace.len() < max_steps {
        let decision = diagonal_scale_step(space, params, penalty, current)?;
        let done = decision.is_hold();
        current = decision.chosen;
        trace.push(decision);
        if done {
            break;
        }
    }
    Ok(trace)
}
