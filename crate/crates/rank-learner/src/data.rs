//! Attribute vectors and the dataset CSV format:
//!
//! ```csv
//! id,like_count,bits
//! img-001,142,0110...01
//! ```
//!
//! `bits` is a string of '0'/'1' of the network's input dimension.

use std::io::{Read, Write};

use spn_core::Evidence;

use crate::error::DataError;

/// One ranked item: a binary attribute vector with its like count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeVector {
    pub id: String,
    pub like_count: u64,
    pub bits: Vec<bool>,
}

impl AttributeVector {
    pub fn new(id: impl Into<String>, like_count: u64, bits: Vec<bool>) -> Self {
        AttributeVector { id: id.into(), like_count, bits }
    }

    pub fn dimension(&self) -> usize {
        self.bits.len()
    }

    /// The item's bits as complete evidence (set bit means True).
    pub fn evidence(&self) -> Evidence {
        Evidence::from_bits(&self.bits)
    }
}

pub fn read_dataset<R: Read>(reader: R) -> Result<Vec<AttributeVector>, DataError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let expected = ["id", "like_count", "bits"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(DataError::Parse {
            line: 1,
            msg: format!("header must be id,like_count,bits, got {headers:?}"),
        });
    }
    let mut out: Vec<AttributeVector> = Vec::new();
    let mut width: Option<usize> = None;
    for (i, record) in rdr.records().enumerate() {
        let line = i as u64 + 2;
        let record = record?;
        if record.len() != 3 {
            return Err(DataError::Parse { line, msg: format!("expected 3 fields, got {}", record.len()) });
        }
        let id = record[0].to_string();
        let like_count: u64 = record[1]
            .parse()
            .map_err(|_| DataError::Parse { line, msg: format!("bad like_count {:?}", &record[1]) })?;
        let bits: Vec<bool> = record[2]
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(DataError::Parse { line, msg: format!("bad bit character {other:?}") }),
            })
            .collect::<Result<_, _>>()?;
        if let Some(w) = width {
            if bits.len() != w {
                return Err(DataError::RaggedBits { line, got: bits.len(), expected: w });
            }
        } else {
            width = Some(bits.len());
        }
        out.push(AttributeVector { id, like_count, bits });
    }
    Ok(out)
}

pub fn write_dataset<W: Write>(writer: W, items: &[AttributeVector]) -> Result<(), DataError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["id", "like_count", "bits"])?;
    for item in items {
        let bits: String = item.bits.iter().map(|b| if *b { '1' } else { '0' }).collect();
        wtr.write_record([item.id.as_str(), &item.like_count.to_string(), &bits])?;
    }
    wtr.flush()?;
    Ok(())
}
