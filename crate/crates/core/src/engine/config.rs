use serde::{Deserialize, Serialize};

use super::rng::default_pool;
use crate::groebner::Budget;
use crate::invariants::{DEFAULT_COLENGTH_CEILING, DEFAULT_MAX_DIMENSION};
use crate::par::Parallelism;
use crate::rational::{serde_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PoolEntry(#[serde(with = "serde_rational")] pub Rational);

/// Everything that determines an engine run besides the domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub seed: u64,
    /// Coefficients for generic draws.
    pub pool: Vec<PoolEntry>,
    /// Fresh draws allowed for each generic choice.
    pub max_retries: u32,
    /// Hard cap on every power search, on top of the `m²` bound.
    pub power_cap: u32,
    pub budget: Budget,
    /// Longest fiber-differentiation chain attempted.
    pub max_chain_length: u32,
    pub colength_ceiling: u64,
    pub max_dimension: usize,
    /// Rounds of the Jacobian/radical iteration used when the short-cut
    /// does not close.
    pub iteration_rounds: u32,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            seed: 0,
            pool: default_pool().into_iter().map(PoolEntry).collect(),
            max_retries: 6,
            power_cap: 4096,
            budget: Budget::default(),
            max_chain_length: 32,
            colength_ceiling: DEFAULT_COLENGTH_CEILING,
            max_dimension: DEFAULT_MAX_DIMENSION,
            iteration_rounds: 8,
            parallelism: Parallelism::default(),
        }
    }
}

impl EngineConfig {
    pub fn with_seed(seed: u64) -> Self {
        EngineConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn pool(&self) -> Vec<Rational> {
        self.pool.iter().map(|p| p.0.clone()).collect()
    }

    pub fn validate(&self) -> Result<(), String> {
        let mut distinct = self.pool();
        distinct.sort();
        distinct.dedup();
        if distinct.len() < 8 {
            return Err("coefficient pool needs at least 8 distinct values".into());
        }
        if distinct.iter().any(|v| *v == Rational::from_integer(0.into())) {
            return Err("coefficient pool must not contain zero".into());
        }
        if self.max_retries < 1 {
            return Err("max_retries must be at least 1".into());
        }
        Ok(())
    }

    /// Power-search bound for an ideal of colength `m`.
    pub fn power_bound(&self, m: u64) -> u32 {
        let sq = m.saturating_mul(m).max(1);
        sq.min(self.power_cap as u64) as u32
    }
}
