//! Downstream evaluation in the learned common space.
//!
//! * transfer classification: train an averaged perceptron on embeddings of
//!   one view, apply it unchanged to embeddings of another;
//! * cross-view retrieval by Euclidean distance with recall@k;
//! * nearest-word probes, a two-model pipeline baseline, and a whole-set
//!   correlation diagnostic.

mod metrics;
mod perceptron;

use alloc::string::String;
use alloc::vec::Vec;

use crate::data::{SparseVector, Vocabulary};
use crate::error::{check_dim, Error, Result};
use crate::model::{Input, ModelParams};
use crate::numerics::{Rng, Vector};
use crate::objective::correlation;
use crate::trainer::PairSet;

pub use metrics::{f1_report, rank, retrieve, ClassF1, F1Report, RetrievalReport};
pub use perceptron::{train_perceptron, LabeledEmbedding, PerceptronModel};

/// Epoch count of the transfer-classification protocol.
pub const PERCEPTRON_EPOCHS: usize = 10;

/// A view input with its class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDoc {
    pub input: Input,
    pub labels: Vec<usize>,
}

/// Encodes every input through one view's encoder.
pub fn embed_all(model: &ModelParams, view: usize, inputs: &[Input]) -> Result<Vec<Vector>> {
    inputs.iter().map(|x| model.encode_view(view, x)).collect()
}

/// Trains on `source` embedded through view `source_view`, then classifies
/// `target` embedded through `target_view`.
#[allow(clippy::too_many_arguments)]
pub fn cross_view_transfer(
    model: &ModelParams,
    source_view: usize,
    source: &[LabeledDoc],
    target_view: usize,
    target: &[LabeledDoc],
    classes: usize,
    epochs: usize,
    rng: &mut Rng,
) -> Result<F1Report> {
    let train: Vec<LabeledEmbedding> = source
        .iter()
        .map(|d| Ok(LabeledEmbedding::new(model.encode_view(source_view, &d.input)?, d.labels.iter().copied())))
        .collect::<Result<_>>()?;
    let clf = train_perceptron(&train, classes, epochs, rng)?;
    let mut predictions = Vec::with_capacity(target.len());
    for d in target {
        let h = model.encode_view(target_view, &d.input)?;
        predictions.push(clf.classify(&h)?);
    }
    let gold: Vec<&[usize]> = target.iter().map(|d| d.labels.as_slice()).collect();
    f1_report(&predictions, &gold, classes)
}

/// Tokens of `target_view` whose one-hot embeddings lie closest to the
/// one-hot embedding of `query_token` in `query_view`.
pub fn nearest_words(
    model: &ModelParams,
    query_view: usize,
    query_vocab: &Vocabulary,
    query_token: &str,
    target_view: usize,
    target_vocab: &Vocabulary,
    top_n: usize,
) -> Result<Vec<(String, f64)>> {
    let one_hot = |vocab: &Vocabulary, view: usize, i: usize| -> Result<Vector> {
        let x = SparseVector::new(vocab.len(), alloc::vec![(i, 1.0)])?;
        model.encode_view(view, &Input::Sparse(x))
    };
    for (view, vocab) in [(query_view, query_vocab), (target_view, target_vocab)] {
        let spec = model.views.get(view).ok_or(Error::UnknownView(view))?;
        check_dim("vocabulary size vs view dim", spec.dim, vocab.len())?;
    }
    let qi = query_vocab.get(query_token).ok_or_else(|| Error::OutOfVocabulary(query_token.into()))?;
    let q = one_hot(query_vocab, query_view, qi)?;
    let targets: Vec<Vector> =
        (0..target_vocab.len()).map(|i| one_hot(target_vocab, target_view, i)).collect::<Result<_>>()?;
    let order = rank(&q, &targets)?;
    Ok(order
        .into_iter()
        .take(top_n)
        .map(|i| {
            let d = crate::numerics::euclidean(&q, &targets[i]).expect("same k");
            (String::from(target_vocab.token(i)), d)
        })
        .collect())
}

/// Two independently trained models chained through a shared bridge view.
#[derive(Debug, Clone, Copy)]
pub struct Pipeline<'a> {
    pub first: &'a ModelParams,
    pub first_query_view: usize,
    pub first_bridge_view: usize,
    pub second: &'a ModelParams,
    pub second_bridge_view: usize,
    pub second_doc_view: usize,
}

/// Pipeline retrieval: each query is replaced by its nearest bridge document
/// in the first model's space, and that bridge document then ranks the final
/// documents in the second model's space.
pub fn pipeline_retrieve<R: AsRef<[usize]>>(
    pipe: &Pipeline<'_>,
    queries: &[Input],
    bridge: &[Input],
    docs: &[Input],
    relevance: &[R],
    ks: &[usize],
) -> Result<RetrievalReport> {
    let d1 = pipe.first.views.get(pipe.first_bridge_view).ok_or(Error::UnknownView(pipe.first_bridge_view))?.dim;
    let d2 = pipe.second.views.get(pipe.second_bridge_view).ok_or(Error::UnknownView(pipe.second_bridge_view))?.dim;
    check_dim("bridge view dim across models", d1, d2)?;
    if bridge.is_empty() {
        return Err(Error::Empty("bridge documents"));
    }
    let bridge_first = embed_all(pipe.first, pipe.first_bridge_view, bridge)?;
    let bridge_second = embed_all(pipe.second, pipe.second_bridge_view, bridge)?;
    let mut routed = Vec::with_capacity(queries.len());
    for q in queries {
        let h = pipe.first.encode_view(pipe.first_query_view, q)?;
        let nearest = rank(&h, &bridge_first)?[0];
        routed.push(bridge_second[nearest].clone());
    }
    let doc_emb = embed_all(pipe.second, pipe.second_doc_view, docs)?;
    retrieve(&routed, &doc_emb, relevance, ks)
}

/// Correlation term evaluated over a whole pair set.
pub fn dataset_correlation(model: &ModelParams, set: &PairSet) -> Result<f64> {
    let mut hx = Vec::with_capacity(set.len());
    let mut hy = Vec::with_capacity(set.len());
    for p in &set.pairs {
        hx.push(model.encode_view(set.left, &p.left)?);
        hy.push(model.encode_view(set.right, &p.right)?);
    }
    correlation(&hx, &hy)
}
