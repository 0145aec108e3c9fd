//! Brute-force reference evaluator for the local-search step.
//!
//! Recomputes every surface straight from the closed forms using only the
//! raw numbers held by the parameter structs; it never calls the crate's
//! model, catalog or optimizer functions. Shared by the core property tests
//! and the acceptance suite.

#![allow(dead_code)]

use diagscale_core::catalog::{Catalog, InstanceTier};
use diagscale_core::optimizer::PenaltyParams;
use diagscale_core::{ConfigSpace, Configuration, ModelParams, ResourceVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Oracle {
    pub p: ModelParams,
    pub pen: PenaltyParams,
    /// (cpu, ram, bandwidth, iops), hourly cost
    pub tiers: Vec<([f64; 4], f64)>,
    pub h_max: i64,
    pub delta_h: i64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub f: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Choice {
    pub h: i64,
    pub tier: i64,
    /// Penalized objective of the move; unpenalized F on hold.
    pub f_pen: f64,
    pub moved: bool,
}

impl Oracle {
    pub fn new(space: &ConfigSpace, p: &ModelParams, pen: &PenaltyParams) -> Self {
        let tiers = space
            .catalog
            .tiers()
            .iter()
            .map(|t| {
                let r = &t.resources;
                ([r.cpu, r.ram, r.bandwidth, r.iops], t.hourly_cost)
            })
            .collect();
        Oracle {
            p: p.clone(),
            pen: pen.clone(),
            tiers,
            h_max: i64::from(space.h_max),
            delta_h: i64::from(space.delta_h),
        }
    }

    pub fn in_grid(&self, h: i64, tier: i64) -> bool {
        h >= 1 && h <= self.h_max && tier >= 0 && (tier as usize) < self.tiers.len()
    }

    /// (latency, throughput, objective)
    pub fn surfaces(&self, h: i64, tier: i64) -> (f64, f64, f64) {
        let p = &self.p;
        let ([c, r, b, s], price) = self.tiers[tier as usize];
        let n = h as f64;
        let l_node = p.alpha / c + p.beta / r + p.gamma / b + p.delta / s;
        let l_coord = p.eta * n.ln() + p.mu * n.powf(p.theta);
        let latency = l_node + l_coord;
        let smallest = [c, r, b, s].iter().cloned().fold(f64::MAX, f64::min);
        let throughput = n * p.kappa * smallest / (1.0 + p.omega * n.ln());
        let overhead = p.rho * l_coord * p.lambda_w / throughput;
        let cost = n * price;
        let f = p.w_latency * latency + p.w_cost * cost + p.w_overhead * overhead;
        (latency, throughput, f)
    }

    pub fn point(&self, h: i64, tier: i64) -> Point {
        let (latency, throughput, f) = self.surfaces(h, tier);
        Point {
            f,
            feasible: latency <= self.p.l_max && throughput >= self.p.t_min,
        }
    }

    pub fn shards(&self, h0: i64, h1: i64) -> f64 {
        if h0 == h1 {
            0.0
        } else {
            (self.pen.total_shards as f64 * (h1 - h0).abs() as f64 / h0.max(h1) as f64).round()
        }
    }

    pub fn penalty(&self, h0: i64, t0: i64, h1: i64, t1: i64) -> f64 {
        let base = self.tiers[0].0;
        let (a, b) = (self.tiers[t0 as usize].0, self.tiers[t1 as usize].0);
        let l1: f64 = (0..4).map(|i| (a[i] / base[i] - b[i] / base[i]).abs()).sum();
        self.pen.lambda1 * (h1 - h0).abs() as f64 + self.pen.lambda2 * l1 + self.pen.lambda3 * self.shards(h0, h1)
    }

    pub fn neighbors(&self, h: i64, tier: i64) -> Vec<(i64, i64)> {
        let d = self.delta_h;
        [
            (h + d, tier + 1),
            (h + d, tier - 1),
            (h - d, tier + 1),
            (h - d, tier - 1),
            (h + d, tier),
            (h - d, tier),
            (h, tier + 1),
            (h, tier - 1),
        ]
        .into_iter()
        .filter(|&(a, b)| self.in_grid(a, b))
        .collect()
    }

    /// One decision: best feasible neighbor by (F', penalty, h, tier), taken
    /// when it beats F(current) - epsilon, or unconditionally when the
    /// current configuration is infeasible.
    pub fn step(&self, h: i64, tier: i64) -> Choice {
        let here = self.point(h, tier);
        let mut best: Option<(f64, f64, i64, i64)> = None;
        for (nh, nt) in self.neighbors(h, tier) {
            let q = self.point(nh, nt);
            if !q.feasible {
                continue;
            }
            let pen = self.penalty(h, tier, nh, nt);
            let key = (q.f + self.pen.w_stab * pen, pen, nh, nt);
            let better = match best {
                None => true,
                Some(b) => {
                    key.0 < b.0
                        || (key.0 == b.0
                            && (key.1 < b.1 || (key.1 == b.1 && (key.2 < b.2 || (key.2 == b.2 && key.3 < b.3)))))
                }
            };
            if better {
                best = Some(key);
            }
        }
        match best {
            Some((f_pen, _, nh, nt)) if !here.feasible || f_pen < here.f - self.pen.epsilon => Choice {
                h: nh,
                tier: nt,
                f_pen,
                moved: true,
            },
            _ => Choice {
                h,
                tier,
                f_pen: here.f,
                moved: false,
            },
        }
    }

    /// No feasible neighbor improves the penalized objective by more than
    /// epsilon.
    pub fn is_local_min(&self, h: i64, tier: i64) -> bool {
        let here = self.point(h, tier);
        self.neighbors(h, tier).into_iter().all(|(nh, nt)| {
            let q = self.point(nh, nt);
            !q.feasible || q.f + self.pen.w_stab * self.penalty(h, tier, nh, nt) >= here.f - self.pen.epsilon
        })
    }
}

/// A randomized but well-formed problem instance.
pub struct RandomCase {
    pub space: ConfigSpace,
    pub params: ModelParams,
    pub penalty: PenaltyParams,
    pub start: Configuration,
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

pub fn random_case(seed: u64) -> RandomCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_tiers = rng.random_range(1..=6);
    let mut res = [
        log_uniform(&mut rng, 0.5, 4.0),
        log_uniform(&mut rng, 1.0, 8.0),
        log_uniform(&mut rng, 0.5, 4.0),
        log_uniform(&mut rng, 1.0, 8.0),
    ];
    let mut cost = log_uniform(&mut rng, 0.02, 0.5);
    let mut tiers = Vec::new();
    for i in 0..n_tiers {
        tiers.push(InstanceTier::new(
            format!("t{i}"),
            ResourceVector::new(res[0], res[1], res[2], res[3]).unwrap(),
            cost,
        ));
        for r in &mut res {
            *r *= rng.random_range(1.2..2.5);
        }
        cost *= rng.random_range(1.5..3.0);
    }
    let space = ConfigSpace::new(
        Catalog::new(tiers).unwrap(),
        rng.random_range(1..=16),
        rng.random_range(1..=3),
    )
    .unwrap();

    let kappa = log_uniform(&mut rng, 100.0, 5000.0);
    let mut params = ModelParams {
        alpha: log_uniform(&mut rng, 0.1, 20.0),
        beta: log_uniform(&mut rng, 0.1, 20.0),
        gamma: log_uniform(&mut rng, 0.1, 20.0),
        delta: log_uniform(&mut rng, 0.1, 20.0),
        eta: log_uniform(&mut rng, 0.05, 5.0),
        mu: log_uniform(&mut rng, 0.05, 5.0),
        theta: rng.random_range(0.05..0.95),
        kappa,
        omega: rng.random_range(0.0..1.0),
        rho: log_uniform(&mut rng, 0.01, 20.0),
        lambda_w: rng.random_range(0.0..kappa * 4.0),
        w_latency: rng.random_range(0.0..2.0),
        w_cost: log_uniform(&mut rng, 0.1, 50.0),
        w_overhead: rng.random_range(0.0..3.0),
        l_max: f64::INFINITY,
        t_min: 0.0,
    };
    let penalty = PenaltyParams {
        lambda1: rng.random_range(0.0..1.0),
        lambda2: rng.random_range(0.0..1.0),
        lambda3: log_uniform(&mut rng, 1e-6, 1e-2),
        w_stab: if rng.random_bool(0.2) {
            0.0
        } else {
            log_uniform(&mut rng, 0.01, 5.0)
        },
        epsilon: if rng.random_bool(0.3) {
            0.0
        } else {
            log_uniform(&mut rng, 1e-9, 1.0)
        },
        total_shards: rng.random_range(1..=4096),
    };
    // SLA bounds anchored at surface values of random grid points, so most
    // instances have a feasible region of nontrivial shape.
    let probe = Oracle::new(&space, &params, &penalty);
    let mut anchor = || {
        let h = rng.random_range(1..=space.h_max);
        let t = rng.random_range(0..space.catalog.len());
        probe.surfaces(i64::from(h), t as i64)
    };
    let (l_anchor, t_anchor) = (anchor().0, anchor().1);
    if rng.random_bool(0.8) {
        params.l_max = l_anchor * rng.random_range(1.0..1.5);
    }
    if rng.random_bool(0.8) {
        params.t_min = t_anchor * rng.random_range(0.1..1.0);
    }
    let start = Configuration::new(
        rng.random_range(1..=space.h_max),
        rng.random_range(0..space.catalog.len()),
    );
    RandomCase {
        space,
        params,
        penalty,
        start,
    }
}
