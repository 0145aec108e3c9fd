//! Closed-form performance and cost surfaces over a configuration.
//!
//! Every function here is pure. A configuration is described by a node count
//! `h >= 1` and a per-node [`ResourceVector`]; the hourly price of one node is
//! passed separately so the model stays independent of any catalog.
//!
//! Units: latency in ms, throughput in ops/s, cost in currency/hour. The
//! coordination overhead is dimensionless. All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-node capacities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceVector {
    /// Normalized vCPU units.
    pub cpu: f64,
    /// GiB.
    pub ram: f64,
    /// Gbps.
    pub bandwidth: f64,
    /// kIOPS.
    pub iops: f64,
}

impl ResourceVector {
    pub fn new(cpu: f64, ram: f64, bandwidth: f64, iops: f64) -> Result<Self> {
        let v = ResourceVector {
            cpu,
            ram,
            bandwidth,
            iops,
        };
        v.validate()?;
        Ok(v)
    }

    pub fn components(&self) -> [f64; 4] {
        [self.cpu, self.ram, self.bandwidth, self.iops]
    }

    pub fn validate(&self) -> Result<()> {
        const NAMES: [&str; 4] = ["cpu", "ram", "bandwidth", "iops"];
        for (name, value) in NAMES.iter().zip(self.components()) {
            // `!(x > 0)` also rejects NaN.
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::Domain(format!(
                    "resource component `{name}` must be finite and > 0, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Surface constants, objective weights and SLA bounds.
///
/// The latency sensitivities (`alpha`..`delta`) and the objective weights
/// (`w_latency`, `w_cost`, `w_overhead`) are distinct parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// CPU sensitivity of node latency.
    pub alpha: f64,
    /// RAM sensitivity.
    pub beta: f64,
    /// Bandwidth sensitivity.
    pub gamma: f64,
    /// IOPS sensitivity.
    pub delta: f64,
    /// Logarithmic coordination constant (ms).
    pub eta: f64,
    /// Power-law coordination constant (ms).
    pub mu: f64,
    /// Power-law exponent, strictly inside (0, 1).
    pub theta: f64,
    /// Throughput per unit of the scarcest resource (ops/s).
    pub kappa: f64,
    /// Parallelism decay.
    pub omega: f64,
    /// Coordination overhead scale.
    pub rho: f64,
    /// Write arrival rate (ops/s).
    pub lambda_w: f64,
    pub w_latency: f64,
    pub w_cost: f64,
    pub w_overhead: f64,
    /// Latency ceiling (ms). May be `inf`.
    pub l_max: f64,
    /// Throughput floor (ops/s).
    pub t_min: f64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let non_negative = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("eta", self.eta),
            ("mu", self.mu),
            ("omega", self.omega),
            ("rho", self.rho),
            ("lambda_w", self.lambda_w),
            ("w_latency", self.w_latency),
            ("w_cost", self.w_cost),
            ("w_overhead", self.w_overhead),
            ("t_min", self.t_min),
        ];
        for (field, value) in non_negative {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::config(field, format!("must be finite and >= 0, got {value}")));
            }
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::config(
                "theta",
                format!("must lie in (0, 1), got {}", self.theta),
            ));
        }
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::config(
                "kappa",
                format!("must be finite and > 0, got {}", self.kappa),
            ));
        }
        if !(self.l_max > 0.0) {
            return Err(Error::config("l_max", format!("must be > 0, got {}", self.l_max)));
        }
        if self.w_latency + self.w_cost + self.w_overhead <= 0.0 {
            return Err(Error::config(
                "w_latency",
                "at least one of w_latency, w_cost, w_overhead must be > 0",
            ));
        }
        Ok(())
    }

    /// Copy of these parameters with the SLA floor and write rate driven by
    /// the instantaneous demand.
    pub fn for_demand(&self, demand: f64, write_fraction: f64) -> ModelParams {
        ModelParams {
            t_min: demand,
            lambda_w: write_fraction * demand,
            ..self.clone()
        }
    }
}

fn check_nodes(h: u32) -> Result<f64> {
    if h < 1 {
        return Err(Error::Domain(format!("node count must be >= 1, got {h}")));
    }
    Ok(f64::from(h))
}

/// Weighted harmonic node latency `alpha/c + beta/r + gamma/b + delta/s`.
pub fn node_latency(params: &ModelParams, v: &ResourceVector) -> Result<f64> {
    v.validate()?;
    Ok(params.alpha / v.cpu + params.beta / v.ram + params.gamma / v.bandwidth + params.delta / v.iops)
}

/// `eta * ln(h) + mu * h^theta`.
pub fn coord_latency(params: &ModelParams, h: u32) -> Result<f64> {
    let h = check_nodes(h)?;
    Ok(params.eta * h.ln() + params.mu * h.powf(params.theta))
}

pub fn total_latency(params: &ModelParams, h: u32, v: &ResourceVector) -> Result<f64> {
    Ok(node_latency(params, v)? + coord_latency(params, h)?)
}

/// `1 / (1 + omega * ln(h))`, in (0, 1].
pub fn parallelism_factor(params: &ModelParams, h: u32) -> Result<f64> {
    let h = check_nodes(h)?;
    Ok(1.0 / (1.0 + params.omega * h.ln()))
}

/// `kappa * min(c, r, b, s)`. Components are compared on their raw scale.
pub fn node_throughput(params: &ModelParams, v: &ResourceVector) -> f64 {
    let scarcest = v.components().into_iter().fold(f64::INFINITY, f64::min);
    params.kappa * scarcest
}

pub fn cluster_throughput(params: &ModelParams, h: u32, v: &ResourceVector) -> Result<f64> {
    v.validate()?;
    let phi = parallelism_factor(params, h)?;
    Ok(f64::from(h) * node_throughput(params, v) * phi)
}

/// `rho * L_coord(h) * lambda_w / T(h, v)`.
pub fn coordination_overhead(params: &ModelParams, h: u32, v: &ResourceVector) -> Result<f64> {
    let throughput = cluster_throughput(params, h, v)?;
    if !(throughput > 0.0) {
        return Err(Error::Domain(
            "cluster throughput is zero; coordination overhead is undefined".into(),
        ));
    }
    Ok(params.rho * coord_latency(params, h)? * params.lambda_w / throughput)
}

pub fn cluster_cost(tier_cost: f64, h: u32) -> f64 {
    f64::from(h) * tier_cost
}

/// `w_latency * L + w_cost * C + w_overhead * K`.
pub fn objective(params: &ModelParams, h: u32, v: &ResourceVector, tier_cost: f64) -> Result<f64> {
    Ok(evaluate(params, h, v, tier_cost)?.objective)
}

/// Closed SLA check: `L <= l_max && T >= t_min`.
pub fn is_feasible(params: &ModelParams, h: u32, v: &ResourceVector) -> Result<bool> {
    let latency = total_latency(params, h, v)?;
    let throughput = cluster_throughput(params, h, v)?;
    Ok(latency <= params.l_max && throughput >= params.t_min)
}

/// All surfaces at one point of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Surfaces {
    pub latency: f64,
    pub throughput: f64,
    pub overhead: f64,
    pub cost: f64,
    pub objective: f64,
    pub feasible: bool,
}

pub fn evaluate(params: &ModelParams, h: u32, v: &ResourceVector, tier_cost: f64) -> Result<Surfaces> {
    let latency = total_latency(params, h, v)?;
    let throughput = cluster_throughput(params, h, v)?;
    let overhead = coordination_overhead(params, h, v)?;
    let cost = cluster_cost(tier_cost, h);
    let objective = params.w_latency * latency + params.w_cost * cost + params.w_overhead * overhead;
    Ok(Surfaces {
        latency,
        throughput,
        overhead,
        cost,
        objective,
        feasible: latency <= params.l_max && throughput >= params.t_min,
    })
}
