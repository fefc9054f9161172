//! Text and feature ingestion primitives plus a synthetic multi-view source.
//!
//! Everything here is pure; reading and writing files is the companion
//! crate's job.

mod synth;
mod vocab;

use alloc::string::String;
use alloc::vec::Vec;

use crate::numerics::Vector;

pub use synth::{synth_multiview, Mixing, SynthConfig, SynthData, SynthEntity};
pub use vocab::{build_vocab, vectorize, BowMode, Vocabulary, DEFAULT_MIN_COUNT};

pub use crate::numerics::SparseVector;

/// Precomputed real-valued features, e.g. image descriptors.
pub type DenseVector = Vector;

/// Splits on whitespace, optionally lowercases, and trims non-alphanumeric
/// characters from both ends of every token. Tokens that end up empty are
/// dropped.
pub fn tokenize(text: &str, lowercase: bool) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let t = raw.trim_matches(|c: char| !c.is_alphanumeric());
            if t.is_empty() {
                None
            } else if lowercase {
                Some(t.to_lowercase())
            } else {
                Some(String::from(t))
            }
        })
        .collect()
}

/// One side of a parallel record.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Tokens(Vec<String>),
    Features(DenseVector),
}

/// Positionally aligned records between a view and the pivot.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelCorpus {
    pub view: String,
    pub pivot: String,
    pub records: Vec<(Document, Document)>,
}

impl ParallelCorpus {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}
