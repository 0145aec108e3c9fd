//! Fixtures for the criterion benches: the shipped default scenario built in
//! code, so benches do not depend on the scenario loader.

use diagscale_core::catalog::Catalog;
use diagscale_core::{ConfigSpace, Configuration, ModelParams, PenaltyParams, WorkloadSpec};

pub fn space() -> ConfigSpace {
    ConfigSpace::new(Catalog::default_tiers(), 12, 1).expect("valid grid")
}

pub fn params() -> ModelParams {
    ModelParams {
        alpha: 12.0,
        beta: 15.0,
        gamma: 0.34,
        delta: 0.53,
        eta: 0.27,
        mu: 0.16,
        theta: 0.7,
        kappa: 1000.0,
        omega: 0.34,
        rho: 0.66,
        lambda_w: 500.0,
        w_latency: 1.0,
        w_cost: 30.0,
        w_overhead: 0.068,
        l_max: 5.1,
        t_min: 5000.0,
    }
}

pub fn penalty() -> PenaltyParams {
    PenaltyParams {
        lambda1: 0.13,
        lambda2: 0.1,
        lambda3: 0.014,
        w_stab: 1.0,
        epsilon: 1e-6,
        total_shards: 1024,
    }
}

pub fn start() -> Configuration {
    Configuration::new(4, 2)
}

pub fn sinusoidal() -> WorkloadSpec {
    WorkloadSpec {
        seed: 42,
        ..WorkloadSpec::sinusoidal(5000.0, 2500.0, 96.0, 0.1, 288)
    }
}
