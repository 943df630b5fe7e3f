//! Bottom-up evaluation. The log-space pass is the default numeric path;
//! the linear pass exists for cross-checks on small graphs where nothing
//! underflows.

use crate::error::SpnError;
use crate::evidence::Evidence;
use crate::graph::{Node, SpnGraph};
use crate::log_add;

impl SpnGraph {
    fn check_evidence(&self, evidence: &Evidence) -> Result<(), SpnError> {
        if !self.is_acyclic() {
            return Err(SpnError::CyclicGraph);
        }
        if evidence.len() != self.num_variables() {
            return Err(SpnError::DimensionMismatch {
                expected: self.num_variables(),
                got: evidence.len(),
            });
        }
        Ok(())
    }

    /// Log of the root value under the given evidence. Zero-probability
    /// branches contribute negative infinity.
    pub fn log_evaluate(&self, evidence: &Evidence) -> Result<f64, SpnError> {
        self.check_evidence(evidence)?;
        let mut values = vec![f64::NEG_INFINITY; self.node_count()];
        for &id in self.topological_order() {
            values[id.0] = match self.node(id) {
                Node::Leaf { variable, polarity } => {
                    if evidence.activates(*variable, *polarity) {
                        0.0
                    } else {
                        f64::NEG_INFINITY
                    }
                }
                Node::Sum { children, weights } => {
                    let mut acc = f64::NEG_INFINITY;
                    for (c, w) in children.iter().zip(weights) {
                        if *w > 0.0 {
                            acc = log_add(acc, w.ln() + values[c.0]);
                        }
                    }
                    acc
                }
                Node::Product { children } => {
                    let mut acc = 0.0;
                    for c in children {
                        acc += values[c.0];
                        if acc == f64::NEG_INFINITY {
                            break;
                        }
                    }
                    acc
                }
            };
        }
        Ok(values[self.root().0])
    }

    /// Root value under the given evidence, computed through the log-space
    /// pass.
    pub fn evaluate(&self, evidence: &Evidence) -> Result<f64, SpnError> {
        Ok(self.log_evaluate(evidence)?.exp())
    }

    /// Root value via a direct linear-space pass. Underflows on large
    /// graphs; kept for agreement checks against [`log_evaluate`].
    pub fn evaluate_linear(&self, evidence: &Evidence) -> Result<f64, SpnError> {
        self.check_evidence(evidence)?;
        let mut values = vec![0.0f64; self.node_count()];
        for &id in self.topological_order() {
            values[id.0] = match self.node(id) {
                Node::Leaf { variable, polarity } => {
                    if evidence.activates(*variable, *polarity) {
                        1.0
                    } else {
                        0.0
                    }
                }
                Node::Sum { children, weights } => children
                    .iter()
                    .zip(weights)
                    .map(|(c, w)| w * values[c.0])
                    .sum(),
                Node::Product { children } => children.iter().map(|c| values[c.0]).product(),
            };
        }
        Ok(values[self.root().0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::VarState;
    use crate::graph::{Polarity, SpnBuilder};

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
    fn worked_two_var_value() {
        // 0.8 * 0.2 * 0.6 + 0.2 * 0.7 * 0.9 = 0.222
        let g = two_var_demo();
        let ev = Evidence::from_bits(&[true, false]);
        let v = g.evaluate(&ev).unwrap();
        assert!((v - 0.222).abs() < 1e-9, "got {v}");
        let lin = g.evaluate_linear(&ev).unwrap();
        assert!((lin - 0.222).abs() < 1e-12);
    }

    #[test]
    fn full_marginalization_is_one_for_normalized_weights() {
        let g = two_var_demo();
        let ev = Evidence::all_marginalized(2);
        assert!((g.evaluate(&ev).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_marginalization_sums_states() {
        let g = two_var_demo();
        let mut ev = Evidence::all_marginalized(2);
        ev.set(1, VarState::True);
        // Sum over x0 of P(x0, x1=1).
        let direct = g.evaluate(&ev).unwrap();
        let a = g.evaluate(&Evidence::from_bits(&[true, true])).unwrap();
        let b = g.evaluate(&Evidence::from_bits(&[false, true])).unwrap();
        assert!((direct - (a + b)).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let g = two_var_demo();
        let ev = Evidence::from_bits(&[true]);
        assert!(matches!(
            g.log_evaluate(&ev),
            Err(SpnError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn zero_weight_children_do_not_contribute() {
        let mut b = SpnBuilder::new(1);
        let x0 = b.leaf(0, Polarity::Positive).unwrap();
        let nx0 = b.leaf(0, Polarity::Negative).unwrap();
        let root = b.sum([(x0, 0.0), (nx0, 0.5)]).unwrap();
        let g = b.build(root).unwrap();
        let v = g.evaluate(&Evidence::from_bits(&[true])).unwrap();
        assert_eq!(v, 0.0);
        let v = g.evaluate(&Evidence::from_bits(&[false])).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }
}
