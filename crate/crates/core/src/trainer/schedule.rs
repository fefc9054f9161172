use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use super::PairSet;
use crate::error::{Error, Result};
use crate::numerics::Rng;
use crate::objective::Minibatch;

/// A contiguous slice of one pair set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduledBatch {
    pub set: usize,
    pub range: Range<usize>,
}

impl ScheduledBatch {
    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_empty()
    }

    pub fn minibatch<'a>(&self, sets: &'a [PairSet]) -> Minibatch<'a> {
        let set = &sets[self.set];
        Minibatch::new(set.left, set.right, set.pairs[self.range.clone()].iter().collect())
    }
}

/// Splits each set into consecutive batches of `batch_size`, in set order.
///
/// A remainder of at least 2 becomes its own short batch; a remainder of
/// exactly 1 is folded into the preceding batch.
pub fn partition(sets: &[PairSet], batch_size: usize) -> Result<Vec<ScheduledBatch>> {
    if batch_size < 2 {
        return Err(Error::Config(format!("batch_size must be >= 2, got {batch_size}")));
    }
    let mut out = Vec::new();
    for (s, set) in sets.iter().enumerate() {
        let n = set.len();
        if n < 2 {
            return Err(Error::Config(format!("pair set {s} has {n} pairs; at least 2 are needed")));
        }
        let mut start = 0;
        while start < n {
            let mut end = (start + batch_size).min(n);
            if n - end == 1 {
                end = n;
            }
            out.push(ScheduledBatch { set: s, range: start..end });
            start = end;
        }
    }
    Ok(out)
}

/// [`partition`] followed by a shuffle of the pooled batch list.
pub fn make_schedule(rng: &mut Rng, sets: &[PairSet], batch_size: usize) -> Result<Vec<ScheduledBatch>> {
    let mut plan = partition(sets, batch_size)?;
    rng.shuffle(&mut plan);
    Ok(plan)
}
