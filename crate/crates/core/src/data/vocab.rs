use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::SparseVector;

/// Tokens must occur strictly more often than this to enter a vocabulary.
pub const DEFAULT_MIN_COUNT: u64 = 5;

/// Ordered token list with corpus counts.
///
/// Canonical order is count descending, then token ascending (byte order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    counts: Vec<u64>,
    index: BTreeMap<String, usize>,
    min_count: u64,
}

impl Vocabulary {
    /// Keeps tokens whose total count is `> min_count`.
    pub fn build<D, T>(docs: &[D], min_count: u64) -> Result<Self>
    where
        D: AsRef<[T]>,
        T: AsRef<str>,
    {
        if docs.is_empty() {
            return Err(Error::Empty("vocabulary corpus"));
        }
        let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
        for d in docs {
            for t in d.as_ref() {
                *freq.entry(t.as_ref()).or_insert(0) += 1;
            }
        }
        let mut kept: Vec<(&str, u64)> = freq.into_iter().filter(|&(_, c)| c > min_count).collect();
        if kept.is_empty() {
            return Err(Error::Config(format!(
                "no token occurs more than {min_count} times; vocabulary would be empty"
            )));
        }
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let entries = kept.into_iter().map(|(t, c)| (String::from(t), c)).collect();
        Self::from_entries(entries, min_count)
    }

    /// Rebuilds a vocabulary from `(token, count)` entries in stored order.
    pub fn from_entries(entries: Vec<(String, u64)>, min_count: u64) -> Result<Self> {
        let mut index = BTreeMap::new();
        let mut tokens = Vec::with_capacity(entries.len());
        let mut counts = Vec::with_capacity(entries.len());
        for (i, (t, c)) in entries.into_iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate vocabulary token {t:?}")));
            }
            tokens.push(t);
            counts.push(c);
        }
        if tokens.is_empty() {
            return Err(Error::Empty("vocabulary"));
        }
        Ok(Vocabulary { tokens, counts, index, min_count })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn get(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn token(&self, i: usize) -> &str {
        &self.tokens[i]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.tokens.iter().map(String::as_str).zip(self.counts.iter().copied())
    }
}

/// Free-function form of [`Vocabulary::build`].
pub fn build_vocab<D, T>(docs: &[D], min_count: u64) -> Result<Vocabulary>
where
    D: AsRef<[T]>,
    T: AsRef<str>,
{
    Vocabulary::build(docs, min_count)
}

/// Term weighting for bag-of-words vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BowMode {
    #[default]
    Count,
    Binary,
    /// Counts scaled to unit Euclidean norm.
    L2Count,
}

impl core::str::FromStr for BowMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(BowMode::Count),
            "binary" => Ok(BowMode::Binary),
            "l2" | "l2-normalized-count" => Ok(BowMode::L2Count),
            _ => Err(Error::InvalidArgument(format!("unknown bag-of-words mode {s:?}"))),
        }
    }
}

/// Bag-of-words vector of `doc` over `vocab`; unknown tokens are skipped.
pub fn vectorize<T: AsRef<str>>(vocab: &Vocabulary, doc: &[T], mode: BowMode) -> SparseVector {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for t in doc {
        if let Some(i) = vocab.get(t.as_ref()) {
            *counts.entry(i).or_insert(0.0) += 1.0;
        }
    }
    let mut entries: Vec<(usize, f64)> = counts.into_iter().collect();
    match mode {
        BowMode::Count => {}
        BowMode::Binary => entries.iter_mut().for_each(|e| e.1 = 1.0),
        BowMode::L2Count => {
            let norm = libm::sqrt(entries.iter().map(|e| e.1 * e.1).sum::<f64>());
            if norm > 0.0 {
                entries.iter_mut().for_each(|e| e.1 /= norm);
            }
        }
    }
    SparseVector::new(vocab.len(), entries).expect("positions come from a sorted map")
}
