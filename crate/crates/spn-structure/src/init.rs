//! Initial structure by recursive random region decomposition.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spn_core::{NodeId, Polarity, SpnBuilder, SpnGraph};

use crate::error::StructureError;

#[derive(Debug, Clone)]
pub struct StructureConfig {
    /// Sum nodes per region. The root region always gets a single sum (the
    /// root itself).
    pub k: usize,
    /// Independent random binary partitions drawn per region (duplicates
    /// are discarded, so small scopes may end up with fewer).
    pub num_decompositions_per_region: usize,
    /// Regions at or below this size stop decomposing and are modeled as a
    /// mixture over their complete joint states (for a single variable:
    /// the two indicators). Sizes above 1 trade nodes for direct local
    /// correlation capacity; the per-region state count is 2^size.
    pub max_region_size_for_leaf: usize,
    /// Hard cap on generated nodes; generation fails beyond it.
    pub max_nodes: usize,
    pub seed: u64,
}

impl Default for StructureConfig {
    fn default() -> Self {
        StructureConfig {
            k: 10,
            num_decompositions_per_region: 2,
            max_region_size_for_leaf: 1,
            max_nodes: 1_000_000,
            seed: 0,
        }
    }
}

struct Ctx<'a> {
    builder: SpnBuilder,
    memo: HashMap<Vec<usize>, Vec<NodeId>>,
    rng: ChaCha8Rng,
    cfg: &'a StructureConfig,
}

impl Ctx<'_> {
    fn check_budget(&self) -> Result<(), StructureError> {
        if self.builder.node_count() > self.cfg.max_nodes {
            return Err(StructureError::NodeBudget {
                nodes: self.builder.node_count(),
                budget: self.cfg.max_nodes,
            });
        }
        Ok(())
    }

    /// Strictly positive random weights summing to 1.
    fn weights(&mut self, n: usize) -> Vec<f64> {
        let mut ws: Vec<f64> = (0..n).map(|_| self.rng.gen_range(0.1..1.0)).collect();
        let total: f64 = ws.iter().sum();
        for w in &mut ws {
            *w /= total;
        }
        ws
    }

    /// All complete-state nodes of a small scope: for one variable the two
    /// indicators, otherwise one product of indicators per joint state.
    fn state_nodes(&mut self, scope: &[usize]) -> Result<Vec<NodeId>, StructureError> {
        if scope.len() == 1 {
            let pos = self.builder.leaf(scope[0], Polarity::Positive)?;
            let neg = self.builder.leaf(scope[0], Polarity::Negative)?;
            return Ok(vec![pos, neg]);
        }
        let mut states = Vec::with_capacity(1 << scope.len());
        for mask in 0u64..(1u64 << scope.len()) {
            let mut leaves = Vec::with_capacity(scope.len());
            for (bit, var) in scope.iter().enumerate() {
                let polarity = if mask & (1 << bit) != 0 {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                };
                leaves.push(self.builder.leaf(*var, polarity)?);
            }
            states.push(self.builder.product(leaves)?);
            self.check_budget()?;
        }
        Ok(states)
    }

    fn region(&mut self, scope: &[usize], n_sums: usize) -> Result<Vec<NodeId>, StructureError> {
        if n_sums == self.cfg.k {
            if let Some(sums) = self.memo.get(scope) {
                return Ok(sums.clone());
            }
        }

        let children = if scope.len() <= self.cfg.max_region_size_for_leaf || scope.len() == 1 {
            self.state_nodes(scope)?
        } else {
            let mut partitions: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
            for _ in 0..self.cfg.num_decompositions_per_region {
                let mut shuffled = scope.to_vec();
                shuffled.shuffle(&mut self.rng);
                let cut = self.rng.gen_range(1..scope.len());
                let mut left = shuffled[..cut].to_vec();
                let mut right = shuffled[cut..].to_vec();
                left.sort_unstable();
                right.sort_unstable();
                if right[0] < left[0] {
                    std::mem::swap(&mut left, &mut right);
                }
                if !partitions.contains(&(left.clone(), right.clone())) {
                    partitions.push((left, right));
                }
            }
            let mut products = Vec::new();
            for (left, right) in &partitions {
                let left_sums = self.region(left, self.cfg.k)?;
                let right_sums = self.region(right, self.cfg.k)?;
                for &l in &left_sums {
                    for &r in &right_sums {
                        products.push(self.builder.product([l, r])?);
                    }
                    self.check_budget()?;
                }
            }
            products
        };

        let mut sums = Vec::with_capacity(n_sums);
        for _ in 0..n_sums {
            let ws = self.weights(children.len());
            sums.push(self.builder.sum(children.iter().copied().zip(ws))?);
        }
        self.check_budget()?;
        if n_sums == self.cfg.k {
            self.memo.insert(scope.to_vec(), sums.clone());
        }
        Ok(sums)
    }
}

/// Generate the initial network over `num_variables` inputs. The result
/// passes validation for any seed and any configuration within budget, its
/// root covers every variable, and all weights are strictly positive and
/// normalized per sum node. Deterministic given the seed.
pub fn init_structure(
    num_variables: usize,
    config: &StructureConfig,
) -> Result<SpnGraph, StructureError> {
    if num_variables < 2 {
        return Err(StructureError::TooFewVariables(num_variables));
    }
    if config.k == 0 {
        return Err(StructureError::InvalidK);
    }
    if config.num_decompositions_per_region == 0 {
        return Err(StructureError::InvalidDecompositions);
    }
    let mut ctx = Ctx {
        builder: SpnBuilder::new(num_variables),
        memo: HashMap::new(),
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        cfg: config,
    };
    let scope: Vec<usize> = (0..num_variables).collect();
    let root = ctx.region(&scope, 1)?[0];
    Ok(ctx.builder.build(root)?)
}
