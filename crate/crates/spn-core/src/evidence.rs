//! Evidence over binary variables. Internally each variable maps to a pair
//! of indicator activations: True is (1,0), False is (0,1), and a
//! marginalized variable activates both indicators, (1,1). The pair (0,0)
//! is not representable, so inconsistent evidence cannot be constructed.

use crate::graph::Polarity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarState {
    True,
    False,
    Marginalized,
}

impl VarState {
    /// Indicator activations (positive, negative).
    pub fn indicators(self) -> (bool, bool) {
        match self {
            VarState::True => (true, false),
            VarState::False => (false, true),
            VarState::Marginalized => (true, true),
        }
    }

    /// Inverse of [`indicators`](Self::indicators); `(false, false)` has no state.
    pub fn from_indicators(positive: bool, negative: bool) -> Option<Self> {
        match (positive, negative) {
            (true, false) => Some(VarState::True),
            (false, true) => Some(VarState::False),
            (true, true) => Some(VarState::Marginalized),
            (false, false) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    states: Vec<VarState>,
}

impl Evidence {
    pub fn new(states: Vec<VarState>) -> Self {
        Evidence { states }
    }

    pub fn all_marginalized(num_variables: usize) -> Self {
        Evidence { states: vec![VarState::Marginalized; num_variables] }
    }

    /// Complete evidence from a bit vector: a set bit means True.
    pub fn from_bits(bits: &[bool]) -> Self {
        Evidence {
            states: bits
                .iter()
                .map(|&b| if b { VarState::True } else { VarState::False })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, var: usize) -> VarState {
        self.states[var]
    }

    pub fn set(&mut self, var: usize, state: VarState) {
        self.states[var] = state;
    }

    pub fn states(&self) -> &[VarState] {
        &self.states
    }

    /// Whether the indicator leaf (variable, polarity) is active.
    pub fn activates(&self, var: usize, polarity: Polarity) -> bool {
        let (pos, neg) = self.states[var].indicators();
        match polarity {
            Polarity::Positive => pos,
            Polarity::Negative => neg,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_pairs() {
        assert_eq!(VarState::True.indicators(), (true, false));
        assert_eq!(VarState::False.indicators(), (false, true));
        assert_eq!(VarState::Marginalized.indicators(), (true, true));
        assert_eq!(VarState::from_indicators(false, false), None);
        for s in [VarState::True, VarState::False, VarState::Marginalized] {
            let (p, n) = s.indicators();
            assert_eq!(VarState::from_indicators(p, n), Some(s));
        }
    }

    #[test]
    fn bits_round_trip() {
        let ev = Evidence::from_bits(&[true, false, true]);
        assert_eq!(ev.get(0), VarState::True);
        assert_eq!(ev.get(1), VarState::False);
        assert!(ev.activates(2, Polarity::Positive));
        assert!(!ev.activates(2, Polarity::Negative));
    }
}
