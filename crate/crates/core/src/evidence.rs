//! Evidence sentences corroborating a perspective.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Document, Span};
use crate::index::{tokenize, Index, Query};
use crate::responses::{relevance, Perspective};
use crate::stance::{BaselineStance, StanceClassifier, StanceError, StanceLabel};

/// At most this many evidence sentences are kept per perspective.
pub const MAX_EVIDENCE: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceSentence {
    pub doc_id: String,
    pub span: Span,
    pub text: String,
    pub evidence_prob: f64,
    pub relevance: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvidenceError {
    #[error("perspective belongs to document `{perspective}`, not `{doc}`")]
    ForeignPerspective { perspective: String, doc: String },
    #[error("beta must lie in [0, 1], got {0}")]
    InvalidBeta(f64),
    #[error(transparent)]
    Stance(#[from] StanceError),
}

/// What a candidate sentence must support to count as evidence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConsistencyTarget {
    /// The perspective text, used as the stance "query".
    #[default]
    Perspective,
    /// The user query itself.
    Query,
}

/// `beta * relevance(sentence, perspective) + (1 - beta) * relevance(sentence, query)`.
pub fn evidence_score<S: AsRef<str>>(
    sentence: &[S],
    perspective: &Perspective,
    query: &Query,
    index: &Index,
    beta: f64,
) -> f64 {
    evidence_score_with(sentence, &Query::new(&perspective.text), query, index, beta)
}

fn evidence_score_with<S: AsRef<str>>(sentence: &[S], persp: &Query, query: &Query, index: &Index, beta: f64) -> f64 {
    let s = beta * relevance(sentence, persp, index) + (1.0 - beta) * relevance(sentence, query, index);
    s.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidenceMiner {
    pub beta: f64,
    pub target: ConsistencyTarget,
}

impl Default for EvidenceMiner {
    fn default() -> Self {
        EvidenceMiner {
            beta: 0.6,
            target: ConsistencyTarget::Perspective,
        }
    }
}

impl EvidenceMiner {
    /// Scores every sentence except the perspective's own, keeps those the
    /// classifier labels Support, and returns up to three ordered by
    /// relevance to the query, then by position.
    pub fn mine<C: StanceClassifier + ?Sized>(
        &self,
        doc: &Document,
        perspective: &Perspective,
        query: &Query,
        index: &Index,
        classifier: &C,
    ) -> Result<Vec<EvidenceSentence>, EvidenceError> {
        if perspective.doc_id != doc.id {
            return Err(EvidenceError::ForeignPerspective {
                perspective: perspective.doc_id.clone(),
                doc: doc.id.clone(),
            });
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(EvidenceError::InvalidBeta(self.beta));
        }
        let persp_query = Query::new(&perspective.text);
        let stance_target = match self.target {
            ConsistencyTarget::Perspective => &persp_query,
            ConsistencyTarget::Query => query,
        };

        let mut kept = Vec::new();
        for (span, text) in doc.sentence_texts() {
            if span == perspective.span {
                continue;
            }
            let tokens = tokenize(text);
            let stance = classifier.classify(text, stance_target)?;
            if stance.label != StanceLabel::Support {
                continue;
            }
            kept.push(EvidenceSentence {
                doc_id: doc.id.clone(),
                span,
                text: String::from(text),
                evidence_prob: evidence_score_with(&tokens, &persp_query, query, index, self.beta),
                relevance: relevance(&tokens, query, index),
                consistent: true,
            });
        }
        kept.sort_by(|a, b| b.relevance.total_cmp(&a.relevance).then(a.span.start.cmp(&b.span.start)));
        kept.truncate(MAX_EVIDENCE);
        Ok(kept)
    }
}

/// [`EvidenceMiner::mine`] with `beta = 0.6` and the baseline classifier.
/// A perspective from another document yields no evidence.
pub fn mine_evidence(doc: &Document, perspective: &Perspective, query: &Query, index: &Index) -> Vec<EvidenceSentence> {
    EvidenceMiner::default()
        .mine(doc, perspective, query, index, &BaselineStance::default())
        .unwrap_or_default()
}
