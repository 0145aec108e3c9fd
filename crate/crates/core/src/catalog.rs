//! The discrete configuration grid: node counts crossed with an ordered
//! catalog of instance tiers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ResourceVector;

/// A named, priced instance type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceTier {
    pub name: String,
    #[serde(flatten)]
    pub resources: ResourceVector,
    /// Currency per node-hour.
    pub hourly_cost: f64,
}

impl InstanceTier {
    pub fn new(name: impl Into<String>, resources: ResourceVector, hourly_cost: f64) -> Self {
        InstanceTier {
            name: name.into(),
            resources,
            hourly_cost,
        }
    }
}

/// Tiers ordered from smallest to largest. Position in the list is the tier
/// index used by [`Configuration`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<InstanceTier>", into = "Vec<InstanceTier>")]
pub struct Catalog {
    tiers: Vec<InstanceTier>,
}

impl Catalog {
    /// Builds a catalog, rejecting it unless every tier strictly dominates its
    /// predecessor in all four resources and costs strictly more.
    pub fn new(tiers: Vec<InstanceTier>) -> Result<Self> {
        if tiers.is_empty() {
            return Err(Error::config("catalog", "must contain at least one tier"));
        }
        for (i, tier) in tiers.iter().enumerate() {
            tier.resources
                .validate()
                .map_err(|e| Error::config(format!("catalog[{i}]"), e.to_string()))?;
            if !(tier.hourly_cost >= 0.0) || !tier.hourly_cost.is_finite() {
                return Err(Error::config(
                    format!("catalog[{i}].hourly_cost"),
                    "must be finite and >= 0",
                ));
            }
        }
        for (i, pair) in tiers.windows(2).enumerate() {
            let (lo, hi) = (&pair[0], &pair[1]);
            let dominates = lo
                .resources
                .components()
                .iter()
                .zip(hi.resources.components())
                .all(|(a, b)| b > *a);
            if !dominates {
                return Err(Error::config(
                    format!("catalog[{}]", i + 1),
                    format!("`{}` must exceed `{}` in every resource", hi.name, lo.name),
                ));
            }
            if !(hi.hourly_cost > lo.hourly_cost) {
                return Err(Error::config(
                    format!("catalog[{}].hourly_cost", i + 1),
                    format!("`{}` must cost strictly more than `{}`", hi.name, lo.name),
                ));
            }
        }
        Ok(Catalog { tiers })
    }

    /// Small / Medium / Large / XLarge with superlinear pricing.
    pub fn default_tiers() -> Self {
        let tier = |name: &str, c, r, b, s, cost| {
            InstanceTier::new(
                name,
                ResourceVector {
                    cpu: c,
                    ram: r,
                    bandwidth: b,
                    iops: s,
                },
                cost,
            )
        };
        Catalog::new(vec![
            tier("Small", 2.0, 4.0, 1.0, 3.0, 0.10),
            tier("Medium", 4.0, 8.0, 2.0, 6.0, 0.22),
            tier("Large", 8.0, 16.0, 4.0, 12.0, 0.48),
            tier("XLarge", 16.0, 32.0, 8.0, 24.0, 1.05),
        ])
        .expect("default catalog is well ordered")
    }

    pub fn len(&self) -> usize {
        self.tiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiers.is_empty()
    }

    pub fn tiers(&self) -> &[InstanceTier] {
        &self.tiers
    }

    pub fn get(&self, index: usize) -> Result<&InstanceTier> {
        self.tiers
            .get(index)
            .ok_or_else(|| Error::Domain(format!("tier index {index} not in catalog of {}", self.len())))
    }

    /// L1 distance between two tiers, each component normalized by the
    /// smallest tier's value for that component.
    pub fn tier_distance(&self, a: usize, b: usize) -> Result<f64> {
        let base = self.get(0)?.resources.components();
        let ra = self.get(a)?.resources.components();
        let rb = self.get(b)?.resources.components();
        Ok((0..4).map(|i| ((ra[i] - rb[i]) / base[i]).abs()).sum())
    }
}

impl TryFrom<Vec<InstanceTier>> for Catalog {
    type Error = Error;

    fn try_from(tiers: Vec<InstanceTier>) -> Result<Self> {
        Catalog::new(tiers)
    }
}

impl From<Catalog> for Vec<InstanceTier> {
    fn from(catalog: Catalog) -> Self {
        catalog.tiers
    }
}

/// A point `(H, tier)` of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    pub node_count: u32,
    pub tier: usize,
}

impl Configuration {
    pub const fn new(node_count: u32, tier: usize) -> Self {
        Configuration { node_count, tier }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(h={}, tier={})", self.node_count, self.tier)
    }
}

/// The searchable region: `1..=h_max` nodes times every catalog tier.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigSpace {
    pub catalog: Catalog,
    pub h_max: u32,
    /// Horizontal step used by neighborhoods and the horizontal baseline.
    pub delta_h: u32,
}

impl ConfigSpace {
    pub fn new(catalog: Catalog, h_max: u32, delta_h: u32) -> Result<Self> {
        if h_max < 1 {
            return Err(Error::config("h_max", "must be >= 1"));
        }
        if delta_h < 1 {
            return Err(Error::config("delta_h", "must be >= 1"));
        }
        Ok(ConfigSpace {
            catalog,
            h_max,
            delta_h,
        })
    }

    pub fn max_tier(&self) -> usize {
        self.catalog.len() - 1
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.h_max as usize * self.catalog.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, c: Configuration) -> bool {
        (1..=self.h_max).contains(&c.node_count) && c.tier < self.catalog.len()
    }

    pub fn check(&self, c: Configuration) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{c} outside the grid (1..={} nodes, {} tiers)",
                self.h_max,
                self.catalog.len()
            )))
        }
    }

    pub fn tier(&self, c: Configuration) -> Result<&InstanceTier> {
        self.catalog.get(c.tier)
    }

    /// Horizontal, vertical and diagonal moves around `c`. Moves leaving the
    /// grid are dropped rather than clamped, so the result never contains
    /// duplicates or `c` itself.
    pub fn neighborhood(&self, c: Configuration) -> Result<Vec<Configuration>> {
        self.check(c)?;
        let dh = i64::from(self.delta_h);
        let mut out = Vec::with_capacity(8);
        for step_h in [-dh, 0, dh] {
            for step_t in [-1i64, 0, 1] {
                if step_h == 0 && step_t == 0 {
                    continue;
                }
                let h = i64::from(c.node_count) + step_h;
                let t = c.tier as i64 + step_t;
                if h < 1 || h > i64::from(self.h_max) || t < 0 || t as usize >= self.catalog.len() {
                    continue;
                }
                out.push(Configuration::new(h as u32, t as usize));
            }
        }
        Ok(out)
    }

    /// Every grid point, ordered by node count then tier.
    pub fn all_configurations(&self) -> Vec<Configuration> {
        self.configurations_at(&(1..=self.h_max).collect::<Vec<_>>())
    }

    /// Grid points restricted to the listed node counts (out-of-range counts
    /// are skipped), ordered as given then by tier.
    pub fn configurations_at(&self, node_counts: &[u32]) -> Vec<Configuration> {
        node_counts
            .iter()
            .filter(|&&h| (1..=self.h_max).contains(&h))
            .flat_map(|&h| (0..self.catalog.len()).map(move |t| Configuration::new(h, t)))
            .collect()
    }
}
