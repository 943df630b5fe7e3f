//! Learning to rank with a sum-product network.
//!
//! Items are binary attribute vectors carrying a like count. Training
//! supervision comes as two pair sets: ordered pairs whose like-count gap
//! exceeds C1 (the first item should score higher) and near-tie pairs whose
//! gap is at most C2 (the two scores should move together). An item's score
//! is the log root value of the max-product network under the item's bits
//! as complete evidence; weight updates follow the per-edge traversal-count
//! gradient of that log value, and low-weight edges are pruned against an
//! objective recheck under an edge budget.

pub mod baseline;
pub mod data;
pub mod error;
pub mod pairs;
pub mod prune;
pub mod score;
pub mod train;

pub use baseline::{train_linear, LinearRanker, LinearRankerConfig};
pub use data::AttributeVector;
pub use error::{DataError, RankError};
pub use pairs::{make_pairs, PairSets};
pub use prune::{prune, PruneReport};
pub use score::{pair_accuracy, rank_pair, score, Accuracy, PairOrder};
pub use train::{objective, pair_gradient, train, RankObjective, RankTrainConfig, TrainRecord};
