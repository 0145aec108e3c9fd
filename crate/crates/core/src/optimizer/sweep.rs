//! Exhaustive evaluation of the grid and discrete directional analysis.

use super::{surfaces_at, ActionKind};
use crate::catalog::{ConfigSpace, Configuration};
use crate::error::{Error, Result};
use crate::model::{ModelParams, Surfaces};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: Configuration,
    pub tier_name: String,
    pub surfaces: Surfaces,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Feasible configuration with the smallest unpenalized objective; the
    /// first in row order when several tie exactly.
    pub minimizer: Option<Configuration>,
    /// Every feasible configuration sharing the minimal objective, including
    /// `minimizer`. Length > 1 means the minimizer is not unique.
    pub tied: Vec<Configuration>,
}

impl SweepTable {
    pub fn row(&self, c: Configuration) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.config == c)
    }

    pub fn minimizer_row(&self) -> Option<&SweepRow> {
        self.minimizer.and_then(|c| self.row(c))
    }
}

/// Evaluates every surface on the full grid. Rebalance penalties are
/// path-dependent and play no part here.
pub fn grid_sweep(space: &ConfigSpace, params: &ModelParams) -> Result<SweepTable> {
    grid_sweep_at(space, params, &space.all_configurations())
}

pub fn grid_sweep_at(space: &ConfigSpace, params: &ModelParams, configs: &[Configuration]) -> Result<SweepTable> {
    let rows = configs
        .iter()
        .map(|&config| {
            Ok(SweepRow {
                config,
                tier_name: space.tier(config)?.name.clone(),
                surfaces: surfaces_at(space, params, config)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let best = rows
        .iter()
        .filter(|r| r.surfaces.feasible)
        .map(|r| r.surfaces.objective)
        .min_by(f64::total_cmp);
    let tied: Vec<_> = match best {
        Some(f) => rows
            .iter()
            .filter(|r| r.surfaces.feasible && r.surfaces.objective == f)
            .map(|r| r.config)
            .collect(),
        None => Vec::new(),
    };
    Ok(SweepTable {
        minimizer: tied.first().copied(),
        tied,
        rows,
    })
}

/// Strictly inside the plane on both axes.
pub fn is_interior(space: &ConfigSpace, c: Configuration) -> bool {
    c.node_count > 1 && c.node_count < space.h_max && c.tier > 0 && c.tier < space.max_tier()
}

/// Forward differences of the unpenalized objective along each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gradient {
    /// `F(h+1, tier) - F(h, tier)`.
    pub d_nodes: f64,
    /// `F(h, tier+1) - F(h, tier)`.
    pub d_tier: f64,
}

impl Gradient {
    /// Which kind of single grid move points down the discrete gradient.
    /// Axis-aligned only when one component vanishes exactly.
    pub fn descent_kind(&self) -> ActionKind {
        match (self.d_nodes != 0.0, self.d_tier != 0.0) {
            (false, false) => ActionKind::Hold,
            (true, false) => ActionKind::Horizontal,
            (false, true) => ActionKind::Vertical,
            (true, true) => ActionKind::Diagonal,
        }
    }

    /// Discrete stand-in for the trajectory slope: node steps per tier step
    /// along the descent direction.
    pub fn slope(&self) -> f64 {
        self.d_nodes / self.d_tier
    }
}

pub fn discrete_gradient(space: &ConfigSpace, params: &ModelParams, c: Configuration) -> Result<Gradient> {
    space.check(c)?;
    let up_h = Configuration::new(c.node_count + 1, c.tier);
    let up_t = Configuration::new(c.node_count, c.tier + 1);
    if !space.contains(up_h) || !space.contains(up_t) {
        return Err(Error::Range(format!("{c} has no forward neighbor on both axes")));
    }
    let f = surfaces_at(space, params, c)?.objective;
    Ok(Gradient {
        d_nodes: surfaces_at(space, params, up_h)?.objective - f,
        d_tier: surfaces_at(space, params, up_t)?.objective - f,
    })
}
