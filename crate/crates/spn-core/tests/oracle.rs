//! Brute-force oracles for evaluation and max-product inference. The
//! oracle enumerates all 2^d complete states, scores each one as an
//! explicit product over the graph, and aggregates by sum or max. It never
//! touches the bottom-up evaluators it checks.

use spn_core::random::{random_evidence, random_spn, RandomSpnConfig};
use spn_core::{Evidence, Node, SpnGraph, VarState};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Linear-space value of one complete state, by naive recursion over the
/// node array (memoized per node, nothing shared with the library's
/// evaluators beyond the node data itself).
fn state_value(graph: &SpnGraph, bits: &[bool]) -> f64 {
    fn rec(graph: &SpnGraph, bits: &[bool], node: usize, memo: &mut [Option<f64>]) -> f64 {
        if let Some(v) = memo[node] {
            return v;
        }
        let v = match &graph.nodes()[node] {
            Node::Leaf { variable, polarity } => {
                let on = match polarity {
                    spn_core::Polarity::Positive => bits[*variable],
                    spn_core::Polarity::Negative => !bits[*variable],
                };
                if on {
                    1.0
                } else {
                    0.0
                }
            }
            Node::Sum { children, weights } => children
                .iter()
                .zip(weights)
                .map(|(c, w)| w * rec(graph, bits, c.0, memo))
                .sum(),
            Node::Product { children } => {
                children.iter().map(|c| rec(graph, bits, c.0, memo)).product()
            }
        };
        memo[node] = Some(v);
        v
    }
    let mut memo = vec![None; graph.node_count()];
    rec(graph, bits, graph.root().0, &mut memo)
}

/// Max-product value of one complete state.
fn state_max_value(graph: &SpnGraph, bits: &[bool]) -> f64 {
    fn rec(graph: &SpnGraph, bits: &[bool], node: usize, memo: &mut [Option<f64>]) -> f64 {
        if let Some(v) = memo[node] {
            return v;
        }
        let v = match &graph.nodes()[node] {
            Node::Leaf { variable, polarity } => {
                let on = match polarity {
                    spn_core::Polarity::Positive => bits[*variable],
                    spn_core::Polarity::Negative => !bits[*variable],
                };
                if on {
                    1.0
                } else {
                    0.0
                }
            }
            Node::Sum { children, weights } => children
                .iter()
                .zip(weights)
                .map(|(c, w)| w * rec(graph, bits, c.0, memo))
                .fold(0.0f64, f64::max),
            Node::Product { children } => {
                children.iter().map(|c| rec(graph, bits, c.0, memo)).product()
            }
        };
        memo[node] = Some(v);
        v
    }
    let mut memo = vec![None; graph.node_count()];
    rec(graph, bits, graph.root().0, &mut memo)
}

fn completions(evidence: &Evidence) -> Vec<Vec<bool>> {
    let d = evidence.len();
    let free: Vec<usize> = (0..d)
        .filter(|&i| evidence.get(i) == VarState::Marginalized)
        .collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u64..(1u64 << free.len()) {
        let mut bits: Vec<bool> = (0..d)
            .map(|i| matches!(evidence.get(i), VarState::True))
            .collect();
        for (j, &var) in free.iter().enumerate() {
            bits[var] = mask & (1 << j) != 0;
        }
        out.push(bits);
    }
    out
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn evaluation_matches_state_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..60u64 {
        let cfg = RandomSpnConfig {
            num_variables: 1 + (seed as usize % 10),
            max_nodes: 200,
            seed,
            ..Default::default()
        };
        let g = random_spn(&cfg);
        assert!(g.validate().is_valid());
        for _ in 0..4 {
            let ev = random_evidence(cfg.num_variables, 0.4, &mut rng);
            let expected: f64 = completions(&ev).iter().map(|b| state_value(&g, b)).sum();
            let got = g.evaluate(&ev).unwrap();
            assert!(
                rel_close(got, expected, 1e-9),
                "seed {seed}: got {got}, oracle {expected}"
            );
            let lin = g.evaluate_linear(&ev).unwrap();
            assert!(rel_close(lin, expected, 1e-9));
        }
    }
}

#[test]
fn mpn_root_matches_state_maximum_and_mpe_attains_it() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for seed in 100..160u64 {
        let cfg = RandomSpnConfig {
            num_variables: 1 + (seed as usize % 10),
            max_nodes: 200,
            seed,
            ..Default::default()
        };
        let g = random_spn(&cfg);
        let mpn = g.to_mpn();
        for _ in 0..3 {
            let ev = random_evidence(cfg.num_variables, 0.5, &mut rng);
            let expected = completions(&ev)
                .iter()
                .map(|b| state_max_value(&g, b))
                .fold(0.0f64, f64::max);
            let got = mpn.evaluate(&ev).unwrap();
            assert!(
                rel_close(got, expected, 1e-9),
                "seed {seed}: got {got}, oracle {expected}"
            );
            // The inferred assignment is a completion whose max-product
            // value attains the brute-force maximum.
            let r = mpn.mpe_infer(&ev).unwrap();
            for (i, s) in ev.states().iter().enumerate() {
                match s {
                    VarState::True => assert!(r.assignment[i]),
                    VarState::False => assert!(!r.assignment[i]),
                    VarState::Marginalized => {}
                }
            }
            let attained = state_max_value(&g, &r.assignment);
            assert!(
                rel_close(attained, expected, 1e-9),
                "seed {seed}: assignment attains {attained}, oracle max {expected}"
            );
        }
    }
}

#[test]
fn plug_back_reproduces_mpe_root_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 200..240u64 {
        let cfg = RandomSpnConfig {
            num_variables: 2 + (seed as usize % 9),
            max_nodes: 200,
            seed,
            ..Default::default()
        };
        let g = random_spn(&cfg);
        let mpn = g.to_mpn();
        let ev = random_evidence(cfg.num_variables, 0.6, &mut rng);
        let r = mpn.mpe_infer(&ev).unwrap();
        let back = mpn.log_evaluate(&r.assignment_evidence()).unwrap();
        assert_eq!(back.to_bits(), r.log_value.to_bits());
    }
}

#[test]
fn adding_evidence_never_increases_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for seed in 300..340u64 {
        let cfg = RandomSpnConfig {
            num_variables: 2 + (seed as usize % 8),
            max_nodes: 200,
            seed,
            ..Default::default()
        };
        let g = random_spn(&cfg);
        let mut ev = Evidence::all_marginalized(cfg.num_variables);
        let mut last = g.evaluate(&ev).unwrap();
        let mut order: Vec<usize> = (0..cfg.num_variables).collect();
        for i in 0..order.len() {
            let j = rng.gen_range(i..order.len());
            order.swap(i, j);
        }
        for var in order {
            let state = if rng.gen_bool(0.5) { VarState::True } else { VarState::False };
            ev.set(var, state);
            let v = g.evaluate(&ev).unwrap();
            assert!(v <= last + 1e-12 * last.abs(), "seed {seed}: {v} > {last}");
            last = v;
        }
    }
}

#[test]
fn log_and_linear_agree_where_linear_does_not_underflow() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for seed in 400..440u64 {
        let cfg = RandomSpnConfig {
            num_variables: 1 + (seed as usize % 10),
            max_nodes: 200,
            seed,
            ..Default::default()
        };
        let g = random_spn(&cfg);
        let ev = random_evidence(cfg.num_variables, 0.3, &mut rng);
        let lin = g.evaluate_linear(&ev).unwrap();
        let log = g.log_evaluate(&ev).unwrap();
        if lin > f64::MIN_POSITIVE * 1e6 {
            assert!(rel_close(log.exp(), lin, 1e-9));
        }
    }
}

#[test]
fn serialization_round_trip_preserves_evaluation_on_large_graph() {
    let cfg = RandomSpnConfig {
        num_variables: 40,
        max_nodes: 12_000,
        max_sums_per_scope: 4,
        max_decompositions: 3,
        seed: 3,
        ..Default::default()
    };
    let g = random_spn(&cfg);
    assert!(g.node_count() >= 10_000);
    let back = spn_core::io::from_json(&spn_core::io::to_json(&g)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..100 {
        let ev = random_evidence(cfg.num_variables, 0.2, &mut rng);
        let a = g.log_evaluate(&ev).unwrap();
        let b = back.log_evaluate(&ev).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn normalized_networks_marginalize_to_one() {
    for seed in 500..540u64 {
        let cfg = RandomSpnConfig {
            num_variables: 1 + (seed as usize % 10),
            max_nodes: 200,
            normalized: true,
            seed,
            ..Default::default()
        };
        let g = random_spn(&cfg);
        let v = g.evaluate(&Evidence::all_marginalized(cfg.num_variables)).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "seed {seed}: {v}");
    }
}
