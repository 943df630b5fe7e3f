//! Training pair generation. P1 holds ordered pairs (higher-liked item
//! first) whose like-count gap exceeds C1; P2 holds unordered near-ties
//! with gap at most C2. Pairs reference dataset indices; the CSV format
//! uses item ids.

use std::io::{Read, Write};

use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::AttributeVector;
use crate::error::{DataError, RankError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSets {
    /// Ordered (higher, lower) index pairs with like-count gap > C1.
    pub p1: Vec<(usize, usize)>,
    /// Unordered index pairs with like-count gap <= C2.
    pub p2: Vec<(usize, usize)>,
    pub c1: u64,
    pub c2: u64,
}

impl PairSets {
    pub fn is_empty(&self) -> bool {
        self.p1.is_empty() && self.p2.is_empty()
    }
}

/// Enumerate all qualifying pairs, then subsample each set uniformly to
/// `max_pairs_per_set` using the seed. Output order is the enumeration
/// order (ascending index pairs), so generation is deterministic.
pub fn make_pairs(
    dataset: &[AttributeVector],
    c1: u64,
    c2: u64,
    max_pairs_per_set: usize,
    seed: u64,
) -> Result<PairSets, RankError> {
    if dataset.is_empty() {
        return Err(RankError::EmptyDataset);
    }
    if c1 == 0 {
        return Err(RankError::InvalidC1);
    }
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    for i in 0..dataset.len() {
        for j in (i + 1)..dataset.len() {
            let ni = dataset[i].like_count;
            let nj = dataset[j].like_count;
            let gap = ni.abs_diff(nj);
            if gap > c1 {
                if ni > nj {
                    p1.push((i, j));
                } else {
                    p1.push((j, i));
                }
            }
            if gap <= c2 {
                p2.push((i, j));
            }
        }
    }
    if p1.is_empty() && p2.is_empty() {
        return Err(RankError::NoQualifyingPairs { c1, c2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    subsample(&mut p1, max_pairs_per_set, &mut rng);
    subsample(&mut p2, max_pairs_per_set, &mut rng);
    Ok(PairSets { p1, p2, c1, c2 })
}

fn subsample(pairs: &mut Vec<(usize, usize)>, max: usize, rng: &mut ChaCha8Rng) {
    if pairs.len() <= max {
        return;
    }
    let mut idx: Vec<usize> = (0..pairs.len()).collect();
    idx.shuffle(rng);
    idx.truncate(max);
    idx.sort_unstable();
    *pairs = idx.into_iter().map(|i| pairs[i]).collect();
}

/// Pair CSV format: `id_a,id_b,set` where set is "P1" or "P2". P1 rows are
/// ordered (id_a is the higher-liked item).
pub fn write_pairs<W: Write>(
    writer: W,
    dataset: &[AttributeVector],
    pairs: &PairSets,
) -> Result<(), DataError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["id_a", "id_b", "set"])?;
    for &(a, b) in &pairs.p1 {
        wtr.write_record([dataset[a].id.as_str(), dataset[b].id.as_str(), "P1"])?;
    }
    for &(a, b) in &pairs.p2 {
        wtr.write_record([dataset[a].id.as_str(), dataset[b].id.as_str(), "P2"])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_pairs<R: Read>(
    reader: R,
    dataset: &[AttributeVector],
    c1: u64,
    c2: u64,
) -> Result<PairSets, DataError> {
    let mut index = std::collections::HashMap::new();
    for (i, item) in dataset.iter().enumerate() {
        if index.insert(item.id.as_str(), i).is_some() {
            return Err(DataError::DuplicateId(item.id.clone()));
        }
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let line = i as u64 + 2;
        let record = record?;
        if record.len() != 3 {
            return Err(DataError::Parse { line, msg: format!("expected 3 fields, got {}", record.len()) });
        }
        let a = *index
            .get(&record[0])
            .ok_or_else(|| DataError::UnknownId { id: record[0].to_string(), line })?;
        let b = *index
            .get(&record[1])
            .ok_or_else(|| DataError::UnknownId { id: record[1].to_string(), line })?;
        match &record[2] {
            "P1" => p1.push((a, b)),
            "P2" => p2.push((a, b)),
            other => {
                return Err(DataError::Parse { line, msg: format!("set must be P1|P2, got {other:?}") })
            }
        }
    }
    Ok(PairSets { p1, p2, c1, c2 })
}
