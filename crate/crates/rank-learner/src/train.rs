//! Weight learning from pairs.
//!
//! For a pair of items, both are run through max-product inference and the
//! per-edge traversal-count difference dt_i = t_i(first) - t_i(second) is
//! the gradient of the score difference with respect to log w_i, so
//! dt_i / w_i is the plain-weight gradient. Ordered pairs take a step of
//! alpha1 * dn * dt_i / w_i on the higher-liked item's side; near-tie pairs
//! take a constant-rate step of alpha2 * (-dt_i) / w_i against the
//! currently-higher item, pulling the two scores together. Updates touch
//! only edges with dt_i != 0, weights are clamped to a positive floor, and
//! sum weights are never renormalized here: the root is an unnormalized
//! score, and hard-EM pre-training is the only normalizing phase.

use std::io::Write;

use spn_core::{Mpn, SpnGraph};

use crate::data::AttributeVector;
use crate::error::{DataError, RankError};
use crate::pairs::PairSets;
use crate::prune::{prune_in_place, PruneReport};
use crate::score::{pair_accuracy, score};

#[derive(Debug, Clone)]
pub struct RankTrainConfig {
    /// Ordered-pair learning rate; the effective rate is alpha1 * dn.
    pub alpha1: f64,
    /// Near-tie learning rate.
    pub alpha2: f64,
    /// Objective weight on the ordered-pair term.
    pub lambda1: f64,
    /// Objective weight on the near-tie term.
    pub lambda2: f64,
    /// Edge budget E0: pruning cuts candidate edges until the total edge
    /// count drops below this.
    pub edge_budget: usize,
    /// Edges with weight below this are pruning candidates.
    pub prune_weight_threshold: f64,
    pub iterations: usize,
    /// Weights never drop below this during updates (pruning alone sets
    /// exact zeros).
    pub min_weight_floor: f64,
    /// Optional percentile (0,1] capping dn on ordered pairs; bounds step
    /// sizes on heavy-tailed like counts.
    pub delta_n_cap_percentile: Option<f64>,
    /// Pruning evaluates the objective on a fixed seeded subsample of at
    /// most this many pairs.
    pub prune_subsample_size: usize,
    pub prune_subsample_seed: u64,
}

impl Default for RankTrainConfig {
    fn default() -> Self {
        RankTrainConfig {
            alpha1: 0.01,
            alpha2: 0.001,
            lambda1: 1.0,
            lambda2: 1.0,
            edge_budget: usize::MAX,
            prune_weight_threshold: 0.01,
            iterations: 10,
            min_weight_floor: 1e-8,
            delta_n_cap_percentile: None,
            prune_subsample_size: 1000,
            prune_subsample_seed: 0,
        }
    }
}

/// The ranking objective: lambda1 * sum over ordered pairs of the score gap
/// minus lambda2 * sum over near-ties of the absolute score gap, evaluated
/// on log scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankObjective {
    pub value: f64,
    pub p1_term: f64,
    pub p2_term: f64,
    pub edge_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainRecord {
    pub iteration: usize,
    pub objective: RankObjective,
    pub train_pair_accuracy: f64,
}

/// Evaluate the objective over the given pair subsets. Scores are computed
/// once per distinct item index.
pub fn objective(
    mpn: &Mpn,
    dataset: &[AttributeVector],
    p1: &[(usize, usize)],
    p2: &[(usize, usize)],
    lambda1: f64,
    lambda2: f64,
) -> Result<RankObjective, RankError> {
    let mut scores: Vec<Option<f64>> = vec![None; dataset.len()];
    let mut get = |idx: usize, mpn: &Mpn| -> Result<f64, RankError> {
        if scores[idx].is_none() {
            scores[idx] = Some(score(mpn, &dataset[idx])?);
        }
        Ok(scores[idx].unwrap())
    };
    let mut p1_term = 0.0;
    for &(h, l) in p1 {
        p1_term += get(h, mpn)? - get(l, mpn)?;
    }
    let mut p2_term = 0.0;
    for &(a, b) in p2 {
        p2_term += (get(a, mpn)? - get(b, mpn)?).abs();
    }
    Ok(RankObjective {
        value: lambda1 * p1_term - lambda2 * p2_term,
        p1_term,
        p2_term,
        edge_count: mpn.graph().edge_count(),
    })
}

/// Per-edge traversal-count difference between the two items' MPE traces.
pub fn pair_gradient(
    mpn: &Mpn,
    first: &AttributeVector,
    second: &AttributeVector,
) -> Result<Vec<i64>, RankError> {
    let r1 = mpn.mpe_infer(&first.evidence())?;
    let r2 = mpn.mpe_infer(&second.evidence())?;
    Ok(r1
        .traversal_counts
        .iter()
        .zip(&r2.traversal_counts)
        .map(|(a, b)| *a as i64 - *b as i64)
        .collect())
}

fn apply_update(
    mpn: &mut Mpn,
    delta_t: &[i64],
    rate: f64,
    floor: f64,
) -> Result<(), RankError> {
    for (i, dt) in delta_t.iter().enumerate() {
        if *dt == 0 {
            continue;
        }
        let edge = spn_core::EdgeId(i);
        let w = mpn.graph().edge_weight(edge);
        if w <= 0.0 {
            continue; // pruned edge, stays cut
        }
        let new = w + rate * (*dt as f64) / w;
        if !new.is_finite() {
            let (node, child) = mpn.graph().edge(edge);
            return Err(RankError::NonFiniteUpdate { edge: i, node: node.0, child });
        }
        mpn.graph_mut().set_edge_weight(edge, new.max(floor))?;
    }
    Ok(())
}

fn delta_n_cap(dataset: &[AttributeVector], p1: &[(usize, usize)], percentile: f64) -> f64 {
    let mut gaps: Vec<f64> = p1
        .iter()
        .map(|&(h, l)| (dataset[h].like_count - dataset[l].like_count) as f64)
        .collect();
    if gaps.is_empty() {
        return f64::INFINITY;
    }
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = ((percentile * gaps.len() as f64).ceil() as usize).clamp(1, gaps.len());
    gaps[k - 1]
}

/// Train weights on the pair sets for `config.iterations` passes. Each
/// iteration processes every ordered pair then every near-tie pair in
/// order, runs pruning, and records the objective and the ordered-pair
/// training accuracy. Deterministic given (graph, pair order, config).
pub fn train(
    graph: &SpnGraph,
    dataset: &[AttributeVector],
    pairs: &PairSets,
    config: &RankTrainConfig,
) -> Result<(SpnGraph, Vec<TrainRecord>), RankError> {
    let (mpn, history, _) = train_mpn(graph, dataset, pairs, config)?;
    Ok((mpn.into_graph(), history))
}

/// As [`train`], also returning the per-iteration prune reports.
pub fn train_mpn(
    graph: &SpnGraph,
    dataset: &[AttributeVector],
    pairs: &PairSets,
    config: &RankTrainConfig,
) -> Result<(Mpn, Vec<TrainRecord>, Vec<PruneReport>), RankError> {
    if pairs.is_empty() {
        let mpn = graph.to_mpn();
        return Ok((mpn, Vec::new(), Vec::new()));
    }
    let cap = match config.delta_n_cap_percentile {
        Some(p) => delta_n_cap(dataset, &pairs.p1, p),
        None => f64::INFINITY,
    };
    let mut mpn = graph.to_mpn();
    let mut history = Vec::with_capacity(config.iterations);
    let mut prune_reports = Vec::with_capacity(config.iterations);
    for iteration in 0..config.iterations {
        for &(h, l) in &pairs.p1 {
            let dn = ((dataset[h].like_count - dataset[l].like_count) as f64).min(cap);
            let delta_t = pair_gradient(&mpn, &dataset[h], &dataset[l])?;
            apply_update(&mut mpn, &delta_t, config.alpha1 * dn, config.min_weight_floor)?;
        }
        for &(a, b) in &pairs.p2 {
            let sa = score(&mpn, &dataset[a])?;
            let sb = score(&mpn, &dataset[b])?;
            if sa == sb {
                continue; // exact tie contributes no update
            }
            let (hi, lo) = if sa > sb { (a, b) } else { (b, a) };
            let delta_t = pair_gradient(&mpn, &dataset[hi], &dataset[lo])?;
            // Step against the currently-larger side.
            let neg: Vec<i64> = delta_t.iter().map(|dt| -dt).collect();
            apply_update(&mut mpn, &neg, config.alpha2, config.min_weight_floor)?;
        }
        prune_reports.push(prune_in_place(&mut mpn, dataset, pairs, config)?);
        let obj = objective(
            &mpn,
            dataset,
            &pairs.p1,
            &pairs.p2,
            config.lambda1,
            config.lambda2,
        )?;
        let acc = pair_accuracy(&mpn, dataset, &pairs.p1)?;
        history.push(TrainRecord { iteration, objective: obj, train_pair_accuracy: acc.value() });
    }
    Ok((mpn, history, prune_reports))
}

/// Training history CSV: one row per iteration.
pub fn write_history<W: Write>(writer: W, history: &[TrainRecord]) -> Result<(), DataError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "iteration",
        "objective",
        "p1_term",
        "p2_term",
        "edge_count",
        "train_pair_accuracy",
    ])?;
    for rec in history {
        wtr.write_record([
            rec.iteration.to_string(),
            format!("{:.17e}", rec.objective.value),
            format!("{:.17e}", rec.objective.p1_term),
            format!("{:.17e}", rec.objective.p2_term),
            rec.objective.edge_count.to_string(),
            format!("{:.17e}", rec.train_pair_accuracy),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::make_pairs;
    use spn_core::{Polarity, SpnBuilder};

    fn two_var_demo() -> SpnGraph {
        let mut b = SpnBuilder::new(2);
        let x0 = b.leaf(0, Polarity::Positive).unwrap();
        let nx0 = b.leaf(0, Polarity::Negative).unwrap();
        let x1 = b.leaf(1, Polarity::Positive).unwrap();
        let nx1 = b.leaf(1, Polarity::Negative).unwrap();
        let s_a = b.sum([(x0, 0.2), (nx0, 0.8)]).unwrap();
        let s_b = b.sum([(x1, 0.4), (nx1, 0.6)]).unwrap();
        let s_c = b.sum([(x0, 0.7), (nx0, 0.3)]).unwrap();
        let s_d = b.sum([(x1, 0.1), (nx1, 0.9)]).unwrap();
        let p1 = b.product([s_a, s_b]).unwrap();
        let p2 = b.product([s_c, s_d]).unwrap();
        let root = b.sum([(p1, 0.8), (p2, 0.2)]).unwrap();
        b.build(root).unwrap()
    }

    #[test]
    fn identical_items_have_zero_gradient() {
        let mpn = two_var_demo().into_mpn();
        let a = AttributeVector::new("a", 0, vec![true, false]);
        let dt = pair_gradient(&mpn, &a, &a).unwrap();
        assert!(dt.iter().all(|d| *d == 0));
    }

    #[test]
    fn hand_traced_gradient_on_demo_graph() {
        // (1,0) traces root->p2, s_c->x0+, s_d->x1-;
        // (0,1) traces root->p1, s_a->x0-, s_b->x1+.
        let g = two_var_demo();
        let mpn = g.to_mpn();
        let i1 = AttributeVector::new("a", 0, vec![true, false]);
        let i2 = AttributeVector::new("b", 0, vec![false, true]);
        let dt = pair_gradient(&mpn, &i1, &i2).unwrap();
        // Edge ids follow (node order, child order): s_a has edges 0,1;
        // s_b 2,3; s_c 4,5; s_d 6,7; root 8 (p1), 9 (p2).
        assert_eq!(dt, vec![0, -1, -1, 0, 1, 0, 0, 1, -1, 1]);
    }

    #[test]
    fn empty_pairs_leave_graph_unchanged() {
        let g = two_var_demo();
        let pairs = PairSets { p1: vec![], p2: vec![], c1: 1, c2: 0 };
        let (out, history) = train(&g, &[], &pairs, &RankTrainConfig::default()).unwrap();
        assert_eq!(out.nodes(), g.nodes());
        assert!(history.is_empty());
    }

    #[test]
    fn single_ordered_pair_increases_score_gap() {
        let g = two_var_demo();
        let data = vec![
            AttributeVector::new("hi", 30, vec![true, false]),
            AttributeVector::new("lo", 2, vec![false, true]),
        ];
        let pairs = make_pairs(&data, 10, 0, usize::MAX, 0).unwrap();
        assert_eq!(pairs.p1, vec![(0, 1)]);
        let before = {
            let mpn = g.to_mpn();
            score(&mpn, &data[0]).unwrap() - score(&mpn, &data[1]).unwrap()
        };
        let config = RankTrainConfig { iterations: 1, alpha1: 1e-4, ..Default::default() };
        let (out, history) = train(&g, &data, &pairs, &config).unwrap();
        let mpn = out.to_mpn();
        let after = score(&mpn, &data[0]).unwrap() - score(&mpn, &data[1]).unwrap();
        assert!(after > before, "gap {before} -> {after}");
        assert_eq!(history.len(), 1);
    }

    #[test]
    fn first_order_ascent_under_tiny_rate() {
        // With a rate small enough that no MPE path flips, the post-update
        // gap must be at least the pre-update gap for several consecutive
        // single steps.
        let g = two_var_demo();
        let data = vec![
            AttributeVector::new("hi", 100, vec![true, true]),
            AttributeVector::new("lo", 2, vec![false, false]),
        ];
        let pairs = make_pairs(&data, 10, 0, usize::MAX, 0).unwrap();
        let config = RankTrainConfig { iterations: 1, alpha1: 1e-7, ..Default::default() };
        let mut current = g;
        for _ in 0..5 {
            let mpn = current.to_mpn();
            let before = score(&mpn, &data[0]).unwrap() - score(&mpn, &data[1]).unwrap();
            let (next, _) = train(&current, &data, &pairs, &config).unwrap();
            let mpn = next.to_mpn();
            let after = score(&mpn, &data[0]).unwrap() - score(&mpn, &data[1]).unwrap();
            assert!(after >= before);
            current = next;
        }
    }

    #[test]
    fn near_tie_pairs_shrink_the_gap() {
        let g = two_var_demo();
        let data = vec![
            AttributeVector::new("a", 5, vec![true, false]),
            AttributeVector::new("b", 5, vec![false, true]),
        ];
        let pairs = make_pairs(&data, 1, 0, usize::MAX, 0).unwrap();
        assert_eq!(pairs.p2, vec![(0, 1)]);
        let before = {
            let mpn = g.to_mpn();
            (score(&mpn, &data[0]).unwrap() - score(&mpn, &data[1]).unwrap()).abs()
        };
        let config = RankTrainConfig { iterations: 1, alpha2: 1e-4, ..Default::default() };
        let (out, _) = train(&g, &data, &pairs, &config).unwrap();
        let mpn = out.to_mpn();
        let after = (score(&mpn, &data[0]).unwrap() - score(&mpn, &data[1]).unwrap()).abs();
        assert!(after < before, "gap {before} -> {after}");
    }

    #[test]
    fn training_is_deterministic() {
        let g = two_var_demo();
        let data: Vec<AttributeVector> = (0..8)
            .map(|i| {
                AttributeVector::new(
                    format!("i{i}"),
                    (i * 13 % 40) as u64,
                    vec![i % 2 == 0, i % 3 == 0],
                )
            })
            .collect();
        let pairs = make_pairs(&data, 5, 1, usize::MAX, 3).unwrap();
        let config = RankTrainConfig { iterations: 3, ..Default::default() };
        let (g1, h1) = train(&g, &data, &pairs, &config).unwrap();
        let (g2, h2) = train(&g, &data, &pairs, &config).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(spn_core::io::to_json(&g1), spn_core::io::to_json(&g2));
    }

    #[test]
    fn weights_stay_at_or_above_floor() {
        let g = two_var_demo();
        let data = vec![
            AttributeVector::new("hi", 200, vec![true, false]),
            AttributeVector::new("lo", 2, vec![false, true]),
        ];
        let pairs = make_pairs(&data, 10, 0, usize::MAX, 0).unwrap();
        let config =
            RankTrainConfig { iterations: 4, alpha1: 0.5, min_weight_floor: 1e-6, ..Default::default() };
        let (out, _) = train(&g, &data, &pairs, &config).unwrap();
        for (edge, _, _) in out.weighted_edges() {
            assert!(out.edge_weight(edge) >= 1e-6);
        }
    }
}
