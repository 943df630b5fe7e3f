//! Pairwise hinge-loss linear ranker, trained by stochastic subgradient on
//! ordered pairs. This is the comparison baseline for the network ranker;
//! it scores an item as a dot product over its bits, so any signal carried
//! only by attribute interactions is invisible to it.

use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::AttributeVector;
use crate::score::{order_scores, Accuracy, PairOrder};

#[derive(Debug, Clone)]
pub struct LinearRankerConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for LinearRankerConfig {
    fn default() -> Self {
        LinearRankerConfig { epochs: 20, learning_rate: 0.1, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRanker {
    pub weights: Vec<f64>,
}

impl LinearRanker {
    pub fn score(&self, item: &AttributeVector) -> f64 {
        self.weights
            .iter()
            .zip(&item.bits)
            .map(|(w, b)| if *b { *w } else { 0.0 })
            .sum()
    }

    pub fn rank_pair(&self, a: &AttributeVector, b: &AttributeVector) -> PairOrder {
        order_scores(self.score(a), self.score(b))
    }

    /// Accuracy over ordered (higher, lower) pairs, ties excluded from the
    /// denominator (0.5 when everything ties).
    pub fn pair_accuracy(
        &self,
        dataset: &[AttributeVector],
        ordered_pairs: &[(usize, usize)],
    ) -> Accuracy {
        let scores: Vec<f64> = dataset.iter().map(|item| self.score(item)).collect();
        let mut acc = Accuracy { pair_count: ordered_pairs.len(), ..Default::default() };
        for &(h, l) in ordered_pairs {
            match order_scores(scores[h], scores[l]) {
                PairOrder::First => acc.correct += 1,
                PairOrder::Second => {}
                PairOrder::Tie => acc.ties += 1,
            }
        }
        acc
    }
}

/// Subgradient training: for each ordered pair (h, l), if the margin
/// w.(x_h - x_l) is below 1, step toward the difference vector. No bias
/// term; it cancels in pairwise differences.
pub fn train_linear(
    dataset: &[AttributeVector],
    ordered_pairs: &[(usize, usize)],
    config: &LinearRankerConfig,
) -> LinearRanker {
    let dim = dataset.first().map(|i| i.bits.len()).unwrap_or(0);
    let mut weights = vec![0.0f64; dim];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..ordered_pairs.len()).collect();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &k in &order {
            let (h, l) = ordered_pairs[k];
            let hi = &dataset[h].bits;
            let lo = &dataset[l].bits;
            let margin: f64 = weights
                .iter()
                .zip(hi.iter().zip(lo))
                .map(|(w, (a, b))| w * (*a as i8 - *b as i8) as f64)
                .sum();
            if margin < 1.0 {
                for (w, (a, b)) in weights.iter_mut().zip(hi.iter().zip(lo)) {
                    *w += config.learning_rate * (*a as i8 - *b as i8) as f64;
                }
            }
        }
    }
    LinearRanker { weights }
}
