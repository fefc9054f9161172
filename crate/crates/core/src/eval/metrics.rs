use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::numerics::squared_distance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassF1 {
    pub class: usize,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct F1Report {
    pub per_class: Vec<ClassF1>,
    /// Unweighted mean of the per-class F1 scores.
    pub macro_f1: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Per-class precision, recall and F1 for multi-label predictions.
///
/// Any ratio with a zero denominator is 0, so a class that is never
/// predicted and never gold scores F1 = 0.
pub fn f1_report<P, G>(predictions: &[P], gold: &[G], classes: usize) -> Result<F1Report>
where
    P: AsRef<[usize]>,
    G: AsRef<[usize]>,
{
    check_dim("f1 predictions vs gold", gold.len(), predictions.len())?;
    let mut tp = vec![0usize; classes];
    let mut fp = vec![0usize; classes];
    let mut fn_ = vec![0usize; classes];
    for (p, g) in predictions.iter().zip(gold) {
        let (p, g) = (p.as_ref(), g.as_ref());
        for c in 0..classes {
            match (p.contains(&c), g.contains(&c)) {
                (true, true) => tp[c] += 1,
                (true, false) => fp[c] += 1,
                (false, true) => fn_[c] += 1,
                (false, false) => {}
            }
        }
    }
    let per_class: Vec<ClassF1> = (0..classes)
        .map(|c| {
            let precision = ratio(tp[c] as f64, (tp[c] + fp[c]) as f64);
            let recall = ratio(tp[c] as f64, (tp[c] + fn_[c]) as f64);
            ClassF1 {
                class: c,
                tp: tp[c],
                fp: fp[c],
                fn_: fn_[c],
                precision,
                recall,
                f1: ratio(2.0 * precision * recall, precision + recall),
            }
        })
        .collect();
    let macro_f1 = if classes == 0 { 0.0 } else { per_class.iter().map(|c| c.f1).sum::<f64>() / classes as f64 };
    Ok(F1Report { per_class, macro_f1 })
}

/// Recall at each cutoff for a set of queries.
#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalReport {
    pub ks: Vec<usize>,
    /// Fraction of queries with at least one relevant document in the top k.
    pub recall: Vec<f64>,
    /// Mean fraction of each query's relevant documents found in the top k.
    pub item_recall: Vec<f64>,
    /// Queries that contributed (had a non-empty relevance set).
    pub queries: usize,
    /// Queries skipped because nothing was relevant to them.
    pub excluded: usize,
}

/// Documents ordered by Euclidean distance to `query`, ties by index.
pub fn rank<Q: AsRef<[f64]>, D: AsRef<[f64]>>(query: Q, docs: &[D]) -> Result<Vec<usize>> {
    let q = query.as_ref();
    let mut scored = Vec::with_capacity(docs.len());
    for (i, d) in docs.iter().enumerate() {
        check_dim("retrieval document", q.len(), d.as_ref().len())?;
        scored.push((squared_distance(q, d.as_ref()), i));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(scored.into_iter().map(|(_, i)| i).collect())
}

/// Position of `target` in the ranking of `docs` for `query`.
fn rank_of(dists: &[f64], target: usize) -> usize {
    let dt = dists[target];
    dists.iter().enumerate().filter(|&(i, &d)| d < dt || (d == dt && i < target)).count()
}

/// Euclidean-distance retrieval with recall@k.
///
/// `relevance[q]` lists the documents relevant to query `q`; queries with an
/// empty list are excluded and counted in [`RetrievalReport::excluded`].
pub fn retrieve<Q, D, R>(queries: &[Q], docs: &[D], relevance: &[R], ks: &[usize]) -> Result<RetrievalReport>
where
    Q: AsRef<[f64]>,
    D: AsRef<[f64]>,
    R: AsRef<[usize]>,
{
    if queries.is_empty() {
        return Err(Error::Empty("retrieval queries"));
    }
    if docs.is_empty() {
        return Err(Error::Empty("retrieval documents"));
    }
    check_dim("relevance lists vs queries", queries.len(), relevance.len())?;
    if ks.contains(&0) {
        return Err(Error::InvalidArgument("recall cutoffs must be >= 1".into()));
    }
    let dim = docs[0].as_ref().len();
    for d in docs {
        check_dim("retrieval document", dim, d.as_ref().len())?;
    }
    let mut hits = vec![0usize; ks.len()];
    let mut item = vec![0.0; ks.len()];
    let mut used = 0usize;
    let mut excluded = 0usize;
    for (q, rel) in queries.iter().zip(relevance) {
        let q = q.as_ref();
        check_dim("retrieval query", dim, q.len())?;
        let rel = rel.as_ref();
        if rel.is_empty() {
            excluded += 1;
            continue;
        }
        if let Some(&bad) = rel.iter().find(|&&r| r >= docs.len()) {
            return Err(Error::InvalidArgument(format!(
                "relevant document {bad} out of range ({} documents)",
                docs.len()
            )));
        }
        used += 1;
        let dists: Vec<f64> = docs.iter().map(|d| squared_distance(q, d.as_ref())).collect();
        let ranks: Vec<usize> = rel.iter().map(|&r| rank_of(&dists, r)).collect();
        let best = *ranks.iter().min().expect("non-empty");
        for (i, &k) in ks.iter().enumerate() {
            if best < k {
                hits[i] += 1;
            }
            item[i] += ranks.iter().filter(|&&r| r < k).count() as f64 / ranks.len() as f64;
        }
    }
    if used == 0 {
        return Err(Error::Empty("queries with at least one relevant document"));
    }
    Ok(RetrievalReport {
        ks: ks.to_vec(),
        recall: hits.iter().map(|&h| h as f64 / used as f64).collect(),
        item_recall: item.iter().map(|&s| s / used as f64).collect(),
        queries: used,
        excluded,
    })
}
