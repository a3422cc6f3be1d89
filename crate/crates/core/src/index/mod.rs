//! Tokenization, the inverted index and BM25 candidate retrieval.
//!
//! Scores use Okapi BM25 with `k1 = 1.2`, `b = 0.75` and the smoothed idf
//! `ln(1 + (N - df + 0.5) / (df + 0.5))`, which is strictly positive. Query
//! terms are deduplicated and visited in lexicographic order so that every
//! score is a fixed sequence of floating-point additions.

mod tokenize;

pub use tokenize::{content_tokens, is_stopword, tokenize, tokenize_spans, STOPWORDS};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;

pub const K1: f64 = 1.2;
pub const B: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("unknown document id `{0}`")]
    UnknownDoc(String),
    #[error("k must be a positive integer")]
    InvalidK,
    #[error("index is inconsistent: {0}")]
    Corrupt(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub raw: String,
    pub tokens: Vec<String>,
    pub content_tokens: Vec<String>,
}

impl Query {
    pub fn new(raw: &str) -> Self {
        let tokens = tokenize(raw);
        let content_tokens = content_tokens(&tokens);
        Query {
            raw: raw.into(),
            tokens,
            content_tokens,
        }
    }

    /// Distinct tokens in lexicographic order.
    pub fn terms(&self) -> BTreeSet<&str> {
        self.tokens.iter().map(String::as_str).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    /// Ordinal into [`Index::doc_ids`].
    pub doc: u32,
    pub tf: u32,
}

/// Inverted index over a corpus.
///
/// Documents are addressed by their position in `doc_ids`, which is sorted,
/// so postings sorted by ordinal are also sorted by document id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Index {
    doc_ids: Vec<String>,
    doc_len: Vec<u32>,
    postings: BTreeMap<String, Vec<Posting>>,
    avgdl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredDoc {
    pub doc_id: String,
    pub score: f64,
}

impl Index {
    pub fn build(corpus: &Corpus) -> Self {
        Self::from_texts(corpus.documents().iter().map(|d| (d.id.as_str(), d.body.as_str())))
    }

    /// Builds from `(id, text)` pairs. Ids are assumed unique.
    pub fn from_texts<'a, I>(docs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut docs: Vec<(&str, Vec<String>)> = docs.into_iter().map(|(id, text)| (id, tokenize(text))).collect();
        docs.sort_by(|a, b| a.0.cmp(b.0));

        let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
        let mut doc_ids = Vec::with_capacity(docs.len());
        let mut doc_len = Vec::with_capacity(docs.len());
        for (ord, (id, tokens)) in docs.into_iter().enumerate() {
            let mut tf: BTreeMap<String, u32> = BTreeMap::new();
            for t in &tokens {
                *tf.entry(t.clone()).or_default() += 1;
            }
            for (term, count) in tf {
                postings.entry(term).or_default().push(Posting { doc: ord as u32, tf: count });
            }
            doc_ids.push(String::from(id));
            doc_len.push(tokens.len() as u32);
        }
        let avgdl = mean_len(&doc_len);
        Index { doc_ids, doc_len, postings, avgdl }
    }

    /// Reassembles an index from raw parts, checking every structural
    /// invariant. `avgdl` is recomputed from `doc_len`.
    pub fn from_parts(
        doc_ids: Vec<String>,
        doc_len: Vec<u32>,
        postings: BTreeMap<String, Vec<Posting>>,
    ) -> Result<Self, IndexError> {
        if doc_ids.len() != doc_len.len() {
            return Err(IndexError::Corrupt("doc_ids and doc_len differ in length"));
        }
        if !doc_ids.windows(2).all(|w| w[0] < w[1]) {
            return Err(IndexError::Corrupt("doc ids not strictly ascending"));
        }
        let n = doc_ids.len() as u32;
        for list in postings.values() {
            if list.is_empty() {
                return Err(IndexError::Corrupt("empty postings list"));
            }
            if !list.windows(2).all(|w| w[0].doc < w[1].doc) || list.iter().any(|p| p.doc >= n || p.tf == 0) {
                return Err(IndexError::Corrupt("postings list unsorted or out of range"));
            }
        }
        let avgdl = mean_len(&doc_len);
        Ok(Index { doc_ids, doc_len, postings, avgdl })
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn avgdl(&self) -> f64 {
        self.avgdl
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_lengths(&self) -> &[u32] {
        &self.doc_len
    }

    pub fn postings(&self) -> &BTreeMap<String, Vec<Posting>> {
        &self.postings
    }

    pub fn postings_for(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn doc_freq(&self, term: &str) -> usize {
        self.postings_for(term).len()
    }

    pub fn doc_len(&self, doc_id: &str) -> Option<u32> {
        self.ordinal(doc_id).map(|o| self.doc_len[o])
    }

    fn ordinal(&self, doc_id: &str) -> Option<usize> {
        self.doc_ids.binary_search_by(|d| d.as_str().cmp(doc_id)).ok()
    }

    /// Smoothed inverse document frequency; terms absent from the index get
    /// `ln(1 + (N + 0.5) / 0.5)`.
    pub fn idf(&self, term: &str) -> f64 {
        idf(self.doc_count(), self.doc_freq(term))
    }

    fn term_score(&self, idf: f64, tf: u32, dl: u32) -> f64 {
        term_score(idf, tf, dl, self.avgdl)
    }
}

fn mean_len(doc_len: &[u32]) -> f64 {
    if doc_len.is_empty() {
        0.0
    } else {
        doc_len.iter().map(|&l| l as f64).sum::<f64>() / doc_len.len() as f64
    }
}

pub(crate) fn idf(n: usize, df: usize) -> f64 {
    let (n, df) = (n as f64, df as f64);
    libm::log(1.0 + (n - df + 0.5) / (df + 0.5))
}

fn term_score(idf: f64, tf: u32, dl: u32, avgdl: f64) -> f64 {
    let tf = tf as f64;
    let norm = if avgdl > 0.0 { dl as f64 / avgdl } else { 0.0 };
    idf * (tf * (K1 + 1.0)) / (tf + K1 * (1.0 - B + B * norm))
}

/// BM25 score of one document for `query`.
pub fn bm25_score(index: &Index, query: &Query, doc_id: &str) -> Result<f64, IndexError> {
    let ord = index.ordinal(doc_id).ok_or_else(|| IndexError::UnknownDoc(doc_id.into()))?;
    let dl = index.doc_len[ord];
    let mut score = 0.0;
    for term in query.terms() {
        let postings = index.postings_for(term);
        if let Ok(i) = postings.binary_search_by(|p| p.doc.cmp(&(ord as u32))) {
            score += index.term_score(index.idf(term), postings[i].tf, dl);
        }
    }
    Ok(score)
}

/// Top-`k` documents with a positive score, best first, ties by id.
pub fn retrieve(index: &Index, query: &Query, k: usize) -> Result<Vec<ScoredDoc>, IndexError> {
    if k == 0 {
        return Err(IndexError::InvalidK);
    }
    let mut acc = vec![0.0f64; index.doc_count()];
    let mut touched = vec![false; index.doc_count()];
    for term in query.terms() {
        let postings = index.postings_for(term);
        if postings.is_empty() {
            continue;
        }
        let idf = index.idf(term);
        for p in postings {
            let d = p.doc as usize;
            acc[d] += index.term_score(idf, p.tf, index.doc_len[d]);
            touched[d] = true;
        }
    }
    let mut hits: Vec<ScoredDoc> = acc
        .into_iter()
        .zip(touched)
        .enumerate()
        .filter(|&(_, (s, t))| t && s > 0.0)
        .map(|(d, (score, _))| ScoredDoc {
            doc_id: index.doc_ids[d].clone(),
            score,
        })
        .collect();
    hits.sort_by(rank_order);
    hits.truncate(k);
    Ok(hits)
}

/// Descending score, then ascending document id.
pub fn rank_order(a: &ScoredDoc, b: &ScoredDoc) -> Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.doc_id.cmp(&b.doc_id))
}
