//! JSON reports: an array of `{metric, k | class, value, counts}` records.

use bridge_corrnet::eval::{F1Report, RetrievalReport};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub metric: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
    pub value: f64,
    pub counts: Map<String, Value>,
}

impl Record {
    pub fn new(metric: &str, value: f64) -> Self {
        Record { metric: metric.to_owned(), k: None, class: None, value, counts: Map::new() }
    }

    pub fn at_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn for_class(mut self, class: usize) -> Self {
        self.class = Some(class);
        self
    }

    pub fn count(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.counts.insert(key.to_owned(), v.into());
        self
    }
}

/// `recall@k` and `item_recall@k` for every cutoff.
pub fn retrieval_records(r: &RetrievalReport) -> Vec<Record> {
    let mut out = Vec::with_capacity(2 * r.ks.len());
    for (metric, values) in [("recall", &r.recall), ("item_recall", &r.item_recall)] {
        for (&k, &v) in r.ks.iter().zip(values) {
            out.push(Record::new(metric, v).at_k(k).count("queries", r.queries).count("excluded", r.excluded));
        }
    }
    out
}

/// Per-class F1 followed by the macro average.
pub fn f1_records(r: &F1Report) -> Vec<Record> {
    let mut out: Vec<Record> = r
        .per_class
        .iter()
        .map(|c| {
            Record::new("f1", c.f1)
                .for_class(c.class)
                .count("tp", c.tp)
                .count("fp", c.fp)
                .count("fn", c.fn_)
                .count("precision", json!(c.precision))
                .count("recall", json!(c.recall))
        })
        .collect();
    out.push(Record::new("macro_f1", r.macro_f1).count("classes", r.per_class.len()));
    out
}

pub fn to_json(records: &[Record]) -> String {
    serde_json::to_string_pretty(records).expect("records are plain data") + "\n"
}
