//! Seeded generation of random valid networks. Used by oracle tests and
//! benchmarks across the workspace: the generator recursively splits the
//! variable set, so completeness and decomposability hold by construction,
//! and scopes are memoized so the result is a reconvergent DAG rather than
//! a tree.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::evidence::{Evidence, VarState};
use crate::graph::{NodeId, Polarity, SpnBuilder, SpnGraph};

#[derive(Debug, Clone)]
pub struct RandomSpnConfig {
    pub num_variables: usize,
    /// Soft node budget. Generation degrades to minimal branching near it
    /// but pending subtrees still complete, so the result can overshoot by
    /// up to about `6 * num_variables * max_decompositions` nodes; leave
    /// that margin below any hard limit.
    pub max_nodes: usize,
    /// Mixtures exposed per scope (1..=this, drawn per scope).
    pub max_sums_per_scope: usize,
    /// Random binary partitions drawn per scope (1..=this, deduplicated).
    pub max_decompositions: usize,
    /// Normalize each sum node's weights to 1.
    pub normalized: bool,
    pub seed: u64,
}

impl Default for RandomSpnConfig {
    fn default() -> Self {
        RandomSpnConfig {
            num_variables: 6,
            max_nodes: 200,
            max_sums_per_scope: 2,
            max_decompositions: 2,
            normalized: false,
            seed: 0,
        }
    }
}

struct Gen<'a> {
    builder: SpnBuilder,
    memo: HashMap<Vec<usize>, Vec<NodeId>>,
    rng: ChaCha8Rng,
    cfg: &'a RandomSpnConfig,
}

impl Gen<'_> {
    fn tight(&self, scope_len: usize) -> bool {
        self.builder.node_count() + 6 * scope_len + 8 > self.cfg.max_nodes
    }

    fn clamp_sums(&self, wanted: usize) -> usize {
        wanted
            .min(self.cfg.max_nodes.saturating_sub(self.builder.node_count()))
            .max(1)
    }

    fn weights(&mut self, n: usize) -> Vec<f64> {
        let mut ws: Vec<f64> = (0..n).map(|_| self.rng.gen_range(0.2..1.0)).collect();
        if self.cfg.normalized {
            let total: f64 = ws.iter().sum();
            for w in &mut ws {
                *w /= total;
            }
        }
        ws
    }

    fn build_scope(&mut self, scope: &[usize]) -> Vec<NodeId> {
        if let Some(sums) = self.memo.get(scope) {
            return sums.clone();
        }
        let tight = self.tight(scope.len());
        let n_sums = if tight { 1 } else { self.rng.gen_range(1..=self.cfg.max_sums_per_scope) };

        let sums = if scope.len() == 1 {
            let var = scope[0];
            let pos = self.builder.leaf(var, Polarity::Positive).unwrap();
            let neg = self.builder.leaf(var, Polarity::Negative).unwrap();
            let n_sums = self.clamp_sums(n_sums);
            (0..n_sums)
                .map(|_| {
                    let ws = self.weights(2);
                    self.builder.sum([(pos, ws[0]), (neg, ws[1])]).unwrap()
                })
                .collect::<Vec<_>>()
        } else {
            let n_decomp =
                if tight { 1 } else { self.rng.gen_range(1..=self.cfg.max_decompositions) };
            let mut partitions: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
            for _ in 0..n_decomp {
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
                let left_sums = self.build_scope(left);
                let right_sums = self.build_scope(right);
                let room = self.cfg.max_nodes.saturating_sub(self.builder.node_count());
                if left_sums.len() * right_sums.len() + 8 > room {
                    products.push(
                        self.builder.product([left_sums[0], right_sums[0]]).unwrap(),
                    );
                } else {
                    for &l in &left_sums {
                        for &r in &right_sums {
                            products.push(self.builder.product([l, r]).unwrap());
                        }
                    }
                }
            }
            let n_sums = self.clamp_sums(n_sums);
            (0..n_sums)
                .map(|_| {
                    let ws = self.weights(products.len());
                    self.builder
                        .sum(products.iter().copied().zip(ws))
                        .unwrap()
                })
                .collect::<Vec<_>>()
        };

        self.memo.insert(scope.to_vec(), sums.clone());
        sums
    }
}

/// Generate a random valid network: it passes `validate()` for every seed.
pub fn random_spn(cfg: &RandomSpnConfig) -> SpnGraph {
    assert!(cfg.num_variables >= 1);
    let mut gen = Gen {
        builder: SpnBuilder::new(cfg.num_variables),
        memo: HashMap::new(),
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        cfg,
    };
    let scope: Vec<usize> = (0..cfg.num_variables).collect();
    let sums = gen.build_scope(&scope);
    let root = sums[0];
    let mut graph =
        gen.builder.build(root).expect("generated graph is structurally well formed");
    // Alternate mixtures of already-built scopes may end up without a
    // parent when the budget clamps product creation; discard them.
    graph.drop_unreachable();
    graph
}

/// Random evidence with the given probability of marginalizing each
/// variable.
pub fn random_evidence(num_variables: usize, p_marginalized: f64, rng: &mut impl Rng) -> Evidence {
    Evidence::new(
        (0..num_variables)
            .map(|_| {
                if rng.gen_bool(p_marginalized) {
                    VarState::Marginalized
                } else if rng.gen_bool(0.5) {
                    VarState::True
                } else {
                    VarState::False
                }
            })
            .collect(),
    )
}
