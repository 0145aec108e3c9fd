//! Multi-dimensional autoscaling on the (node count, instance tier) plane.
//!
//! The crate is layered bottom-up:
//!
//! - [`model`]: closed-form latency, throughput, coordination-overhead, cost
//!   and objective surfaces over a configuration.
//! - [`catalog`]: the discrete configuration grid, instance tiers and
//!   local-search neighborhoods.
//! - [`optimizer`]: the diagonal local-search step, rebalance penalty,
//!   horizontal-only / vertical-only baselines, the exhaustive grid sweep and
//!   discrete directional analysis.
//! - [`workload`]: deterministic demand traces (constant, sinusoidal, step,
//!   burst) and their CSV form.
//! - [`simulator`]: drives a policy over a trace and summarizes latency
//!   percentiles, cost, stability and SLA violations.

// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod model;
pub mod optimizer;
pub mod simulator;
pub mod workload;

pub use catalog::{Catalog, ConfigSpace, Configuration, InstanceTier};
pub use error::{Error, Result};
pub use model::{ModelParams, ResourceVector, Surfaces};
pub use optimizer::{ActionKind, Decision, PenaltyParams, Policy, Thresholds};
pub use simulator::{Comparison, Simulation, SimulationRecord, SimulationSummary};
pub use workload::{WorkloadPoint, WorkloadSpec};
