//! Edge pruning under a budget. Edges whose weight falls below the
//! threshold are candidates, tried in ascending weight order. A candidate
//! is tentatively zeroed and the objective is re-evaluated on a fixed
//! seeded subsample of pairs; the cut is committed only if the objective
//! does not decrease (beyond 1e-9 of float noise). Cutting stops once the
//! edge count drops below the budget, and parentless nodes are deleted at
//! the end.

use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spn_core::{EdgeId, Mpn, SpnGraph};

use crate::data::AttributeVector;
use crate::error::RankError;
use crate::pairs::PairSets;
use crate::train::{objective, RankTrainConfig};

/// Slack allowed on the commit rule; a committed cut never lowers the
/// subsample objective by more than this.
pub const COMMIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PruneReport {
    /// Candidate edges examined (weight below threshold).
    pub candidates: usize,
    /// Cuts committed.
    pub committed: usize,
    /// Subsample-objective change per committed cut, in commit order. Each
    /// entry is >= -COMMIT_TOLERANCE by the commit rule.
    pub objective_deltas: Vec<f64>,
    pub initial_edge_count: usize,
    pub final_edge_count: usize,
    /// Whether cutting stopped because the edge count dropped below the
    /// budget (as opposed to running out of candidates).
    pub reached_budget: bool,
    pub nodes_removed: usize,
}

/// Edge count after zero-weight edges and the nodes they orphan are gone,
/// without mutating the graph.
fn effective_edge_count(graph: &SpnGraph) -> usize {
    let mut g = graph.clone();
    g.remove_zero_weight_children();
    g.drop_unreachable();
    g.edge_count()
}

fn subsample_pairs(
    pairs: &PairSets,
    size: usize,
    seed: u64,
) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let total = pairs.p1.len() + pairs.p2.len();
    if total <= size {
        return (pairs.p1.clone(), pairs.p2.clone());
    }
    let mut n1 = (size as f64 * pairs.p1.len() as f64 / total as f64).round() as usize;
    if !pairs.p1.is_empty() {
        n1 = n1.clamp(1, pairs.p1.len().min(size));
    }
    let n2 = (size - n1).min(pairs.p2.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |set: &[(usize, usize)], n: usize, rng: &mut ChaCha8Rng| {
        let mut idx: Vec<usize> = (0..set.len()).collect();
        idx.shuffle(rng);
        idx.truncate(n);
        idx.sort_unstable();
        idx.into_iter().map(|i| set[i]).collect::<Vec<_>>()
    };
    let s1 = pick(&pairs.p1, n1, &mut rng);
    let s2 = pick(&pairs.p2, n2, &mut rng);
    (s1, s2)
}

/// Prune in place on an MPN whose weights are being trained. Edge ids are
/// invalidated when any cut commits.
pub(crate) fn prune_in_place(
    mpn: &mut Mpn,
    dataset: &[AttributeVector],
    pairs: &PairSets,
    config: &RankTrainConfig,
) -> Result<PruneReport, RankError> {
    let initial_edge_count = mpn.graph().edge_count();
    let (s1, s2) = subsample_pairs(pairs, config.prune_subsample_size, config.prune_subsample_seed);

    // Candidates by ascending weight, then edge id for determinism.
    let mut candidates: Vec<(f64, EdgeId)> = mpn
        .graph()
        .weighted_edges()
        .filter_map(|(edge, _, _)| {
            let w = mpn.graph().edge_weight(edge);
            (w > 0.0 && w < config.prune_weight_threshold).then_some((w, edge))
        })
        .collect();
    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let mut report = PruneReport {
        candidates: candidates.len(),
        committed: 0,
        objective_deltas: Vec::new(),
        initial_edge_count,
        final_edge_count: initial_edge_count,
        reached_budget: false,
        nodes_removed: 0,
    };
    if candidates.is_empty() {
        report.reached_budget = effective_edge_count(mpn.graph()) < config.edge_budget;
        return Ok(report);
    }

    let mut current = objective(mpn, dataset, &s1, &s2, config.lambda1, config.lambda2)?.value;
    for (w, edge) in candidates {
        if effective_edge_count(mpn.graph()) < config.edge_budget {
            report.reached_budget = true;
            break;
        }
        // Never cut a sum's last live child.
        let (node, _) = mpn.graph().edge(edge);
        let live = mpn
            .graph()
            .sum_weights(node)
            .map(|ws| ws.iter().filter(|w| **w > 0.0).count())
            .unwrap_or(0);
        if live <= 1 {
            continue;
        }
        mpn.graph_mut().set_edge_weight(edge, 0.0)?;
        let trial = objective(mpn, dataset, &s1, &s2, config.lambda1, config.lambda2)?.value;
        if trial.is_finite() && trial >= current - COMMIT_TOLERANCE {
            report.objective_deltas.push(trial - current);
            report.committed += 1;
            current = trial;
        } else {
            mpn.graph_mut().set_edge_weight(edge, w)?;
        }
    }

    if report.committed > 0 {
        mpn.graph_mut().remove_zero_weight_children();
        report.nodes_removed = mpn.graph_mut().drop_unreachable();
    }
    report.final_edge_count = mpn.graph().edge_count();
    Ok(report)
}

/// Prune a trained graph against its pair sets. Returns the pruned graph
/// and a report; the input graph is untouched.
pub fn prune(
    graph: &SpnGraph,
    dataset: &[AttributeVector],
    pairs: &PairSets,
    config: &RankTrainConfig,
) -> Result<(SpnGraph, PruneReport), RankError> {
    let mut mpn = graph.to_mpn();
    let report = prune_in_place(&mut mpn, dataset, pairs, config)?;
    Ok((mpn.into_graph(), report))
}
