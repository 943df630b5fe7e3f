//! Finite-difference oracle for the pair gradient: away from argmax ties,
//! the traversal-count difference dt_i equals the slope of
//! [log M(I1) - log M(I2)] with respect to log w_i.

use rank_learner::{pair_gradient, AttributeVector};
use spn_core::random::{random_spn, RandomSpnConfig};
use spn_core::{Evidence, Mpn, Node, SpnGraph};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smallest log-domain gap between the best and second-best child over all
/// max nodes under the given evidence. Configurations this close to a tie
/// are skipped: the finite-difference slope is undefined across a tie.
fn min_margin(mpn: &Mpn, evidence: &Evidence) -> f64 {
    let g = mpn.graph();
    let mut values = vec![f64::NEG_INFINITY; g.node_count()];
    let mut margin = f64::INFINITY;
    for &id in g.topological_order() {
        values[id.0] = match g.node(id) {
            Node::Leaf { variable, polarity } => {
                if evidence.activates(*variable, *polarity) {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            Node::Sum { children, weights } => {
                let mut best = f64::NEG_INFINITY;
                let mut second = f64::NEG_INFINITY;
                for (c, w) in children.iter().zip(weights) {
                    let v = if *w > 0.0 { w.ln() + values[c.0] } else { f64::NEG_INFINITY };
                    if v > best {
                        second = best;
                        best = v;
                    } else if v > second {
                        second = v;
                    }
                }
                if best.is_finite() && second.is_finite() {
                    margin = margin.min(best - second);
                }
                best
            }
            Node::Product { children } => children.iter().map(|c| values[c.0]).sum(),
        };
    }
    margin
}

fn score_diff(graph: &SpnGraph, a: &Evidence, b: &Evidence) -> f64 {
    let mpn = graph.to_mpn();
    mpn.log_evaluate(a).unwrap() - mpn.log_evaluate(b).unwrap()
}

#[test]
fn traversal_difference_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut accepted = 0u32;
    let mut seed = 0u64;
    let step = 1e-6f64;
    while accepted < 50 {
        seed += 1;
        assert!(seed < 4000, "ran out of seeds before 50 tie-free cases");
        let cfg = RandomSpnConfig {
            num_variables: 2 + (seed as usize % 7),
            max_nodes: 150,
            seed,
            ..Default::default()
        };
        let graph = random_spn(&cfg);
        let mpn = graph.to_mpn();
        let bits_a: Vec<bool> = (0..cfg.num_variables).map(|_| rng.gen_bool(0.5)).collect();
        let bits_b: Vec<bool> = (0..cfg.num_variables).map(|_| rng.gen_bool(0.5)).collect();
        let item_a = AttributeVector::new("a", 0, bits_a);
        let item_b = AttributeVector::new("b", 0, bits_b);
        let ev_a = item_a.evidence();
        let ev_b = item_b.evidence();
        if min_margin(&mpn, &ev_a) < 1e-3 || min_margin(&mpn, &ev_b) < 1e-3 {
            continue;
        }
        accepted += 1;

        let delta_t = pair_gradient(&mpn, &item_a, &item_b).unwrap();
        for (edge, _, _) in graph.weighted_edges() {
            let w = graph.edge_weight(edge);
            let mut plus = graph.clone();
            plus.set_edge_weight(edge, w * step.exp()).unwrap();
            let mut minus = graph.clone();
            minus.set_edge_weight(edge, w * (-step).exp()).unwrap();
            let slope = (score_diff(&plus, &ev_a, &ev_b) - score_diff(&minus, &ev_a, &ev_b))
                / (2.0 * step);
            let expected = delta_t[edge.0] as f64;
            let tol = 1e-4 * expected.abs().max(1.0);
            assert!(
                (slope - expected).abs() <= tol,
                "seed {seed} edge {edge:?}: slope {slope}, dt {expected}"
            );
        }
    }
}
