//! Scoring and pairwise ranking. An item's score is the log root value of
//! the max-product network with the item's bits as complete evidence.

use spn_core::{Mpn, SpnError};

use crate::data::AttributeVector;
use crate::error::RankError;

pub fn score(mpn: &Mpn, item: &AttributeVector) -> Result<f64, SpnError> {
    mpn.log_evaluate(&item.evidence())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOrder {
    /// First item scores strictly higher.
    First,
    /// Second item scores strictly higher.
    Second,
    /// Scores are exactly equal.
    Tie,
}

impl PairOrder {
    pub fn reversed(self) -> PairOrder {
        match self {
            PairOrder::First => PairOrder::Second,
            PairOrder::Second => PairOrder::First,
            PairOrder::Tie => PairOrder::Tie,
        }
    }
}

pub fn rank_pair(
    mpn: &Mpn,
    a: &AttributeVector,
    b: &AttributeVector,
) -> Result<PairOrder, RankError> {
    let sa = score(mpn, a)?;
    let sb = score(mpn, b)?;
    Ok(order_scores(sa, sb))
}

pub fn order_scores(sa: f64, sb: f64) -> PairOrder {
    if sa > sb {
        PairOrder::First
    } else if sb > sa {
        PairOrder::Second
    } else {
        PairOrder::Tie
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Accuracy {
    pub pair_count: usize,
    pub correct: usize,
    pub ties: usize,
}

impl Accuracy {
    /// Fraction correct with exact ties excluded from the denominator;
    /// 0.5 when every pair tied.
    pub fn value(&self) -> f64 {
        let denom = self.pair_count - self.ties;
        if denom == 0 {
            0.5
        } else {
            self.correct as f64 / denom as f64
        }
    }
}

/// Accuracy over ordered (higher, lower) index pairs. Scores are computed
/// once per distinct item.
pub fn pair_accuracy(
    mpn: &Mpn,
    dataset: &[AttributeVector],
    ordered_pairs: &[(usize, usize)],
) -> Result<Accuracy, RankError> {
    let mut scores: Vec<Option<f64>> = vec![None; dataset.len()];
    let mut acc = Accuracy { pair_count: ordered_pairs.len(), ..Default::default() };
    for &(h, l) in ordered_pairs {
        for idx in [h, l] {
            if scores[idx].is_none() {
                scores[idx] = Some(score(mpn, &dataset[idx])?);
            }
        }
        match order_scores(scores[h].unwrap(), scores[l].unwrap()) {
            PairOrder::First => acc.correct += 1,
            PairOrder::Second => {}
            PairOrder::Tie => acc.ties += 1,
        }
    }
    Ok(acc)
}
