//! Rule-based single-axis autoscalers used as comparison baselines.
//!
//! Both react to utilization, defined as demanded throughput (`t_min`) over
//! the current cluster throughput, with a classic upper/lower threshold band.

use serde::{Deserialize, Serialize};

use super::{rebalance_penalty, shard_movement, surfaces_at, ActionKind, Decision, PenaltyParams};
use crate::catalog::{ConfigSpace, Configuration};
use crate::error::{Error, Result};
use crate::model::{self, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    pub upper: f64,
    pub lower: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { upper: 0.8, lower: 0.3 }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.lower >= 0.0 && self.lower < self.upper && self.upper.is_finite()) {
            return Err(Error::config(
                "baseline_thresholds",
                format!("need 0 <= lower < upper, got lower={} upper={}", self.lower, self.upper),
            ));
        }
        Ok(())
    }
}

pub fn utilization(space: &ConfigSpace, params: &ModelParams, c: Configuration) -> Result<f64> {
    let tier = space.tier(c)?;
    let capacity = model::cluster_throughput(params, c.node_count, &tier.resources)?;
    Ok(params.t_min / capacity)
}

#[derive(Clone, Copy)]
enum Axis {
    Nodes,
    Tier,
}

fn axis_neighbors(space: &ConfigSpace, c: Configuration, axis: Axis) -> (Option<Configuration>, Option<Configuration>) {
    match axis {
        Axis::Nodes => {
            let up = c.node_count.saturating_add(space.delta_h).min(space.h_max);
            let down = c.node_count.saturating_sub(space.delta_h).max(1);
            (
                (up != c.node_count).then_some(Configuration::new(up, c.tier)),
                (down != c.node_count).then_some(Configuration::new(down, c.tier)),
            )
        }
        Axis::Tier => (
            (c.tier < space.max_tier()).then_some(Configuration::new(c.node_count, c.tier + 1)),
            c.tier.checked_sub(1).map(|t| Configuration::new(c.node_count, t)),
        ),
    }
}

fn threshold_step(
    space: &ConfigSpace,
    params: &ModelParams,
    penalty: &PenaltyParams,
    thresholds: &Thresholds,
    current: Configuration,
    axis: Axis,
) -> Result<Decision> {
    space.check(current)?;
    let here = surfaces_at(space, params, current)?;
    let util = params.t_min / here.throughput;
    let (up, down) = axis_neighbors(space, current, axis);

    let mut feasible = 0;
    for c in [up, down].into_iter().flatten() {
        if surfaces_at(space, params, c)?.feasible {
            feasible += 1;
        }
    }

    let target = if util > thresholds.upper {
        up
    } else if util < thresholds.lower {
        down
    } else {
        None
    };

    let chosen = target.unwrap_or(current);
    let after = surfaces_at(space, params, chosen)?;
    let moved = chosen != current;
    Ok(Decision {
        from: current,
        chosen,
        action_kind: ActionKind::classify(current, chosen),
        objective_before: here.objective,
        objective_after: after.objective,
        objective_after_penalized: after.objective,
        penalty: rebalance_penalty(penalty, &space.catalog, current, chosen)?,
        shards_moved: shard_movement(penalty, current, chosen),
        feasible_neighbor_count: feasible,
        current_feasible: here.feasible,
        stranded: !moved && !here.feasible && feasible == 0,
    })
}

/// Scale out by `delta_h` above the upper threshold, in by `delta_h` below the
/// lower one (capped at `h_max`, floored at 1). Never changes tier.
pub fn horizontal_only_step(
    space: &ConfigSpace,
    params: &ModelParams,
    penalty: &PenaltyParams,
    thresholds: &Thresholds,
    current: Configuration,
) -> Result<Decision> {
    threshold_step(space, params, penalty, thresholds, current, Axis::Nodes)
}

/// Move one tier up or down on the same thresholds. Never changes node count.
pub fn vertical_only_step(
    space: &ConfigSpace,
    params: &ModelParams,
    penalty: &PenaltyParams,
    thresholds: &Thresholds,
    current: Configuration,
) -> Result<Decision> {
    threshold_step(space, params, penalty, thresholds, current, Axis::Tier)
}
