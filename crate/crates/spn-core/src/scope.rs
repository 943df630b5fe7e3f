//! Compact variable sets. Scopes are interned per graph, so equality checks
//! during validation are id comparisons; the bitset itself is only touched
//! for unions and overlap tests.

/// A set of variable indices, stored as a fixed-width bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scope {
    num_variables: usize,
    blocks: Vec<u64>,
}

impl Scope {
    pub fn empty(num_variables: usize) -> Self {
        let blocks = vec![0u64; num_variables.div_ceil(64)];
        Scope { num_variables, blocks }
    }

    pub fn singleton(num_variables: usize, var: usize) -> Self {
        let mut s = Scope::empty(num_variables);
        s.insert(var);
        s
    }

    pub fn insert(&mut self, var: usize) {
        debug_assert!(var < self.num_variables);
        self.blocks[var / 64] |= 1u64 << (var % 64);
    }

    pub fn contains(&self, var: usize) -> bool {
        var < self.num_variables && self.blocks[var / 64] & (1u64 << (var % 64)) != 0
    }

    pub fn union_with(&mut self, other: &Scope) {
        debug_assert_eq!(self.num_variables, other.num_variables);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersects(&self, other: &Scope) -> bool {
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|b| *b == 0)
    }

    /// Variables in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, block)| {
            let block = *block;
            (0..64).filter_map(move |bit| {
                if block & (1u64 << bit) != 0 {
                    Some(i * 64 + bit)
                } else {
                    None
                }
            })
        })
    }
}
