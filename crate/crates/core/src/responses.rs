//! Picks, per document, the sentence that best answers the query.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;

use once_cell::race::OnceBox;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Document, Span};
use crate::index::{tokenize, Index, Query};
use crate::lexicon::{Lexicon, LexiconError, ARGUMENT_MARKERS};
use crate::stance::StanceLabel;
use crate::vector::TermVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResponseError {
    #[error("document `{0}` has no sentences")]
    NoSentences(String),
    #[error("alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
}

/// One document's direct answer to the query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perspective {
    pub doc_id: String,
    pub span: Span,
    pub text: String,
    pub relevance: f64,
    pub argument: f64,
    pub combined: f64,
    pub stance: StanceLabel,
    pub stance_confidence: f64,
}

/// Cosine between idf-weighted content-token vectors of `sentence` and the
/// query. Zero when either has no content tokens.
pub fn relevance<S: AsRef<str>>(sentence: &[S], query: &Query, index: &Index) -> f64 {
    let a = TermVector::new(sentence, index, |_| false);
    let b = TermVector::new(&query.content_tokens, index, |_| false);
    a.cosine(&b)
}

/// Marker terms whose occurrences signal argumentative text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentMarkers {
    terms: BTreeSet<String>,
}

impl ArgumentMarkers {
    /// Hits needed for a full score.
    pub const SATURATION: f64 = 3.0;

    pub fn from_lexicon(lexicon: &Lexicon) -> Result<Self, LexiconError> {
        let mut terms = BTreeSet::new();
        for name in ["modal", "connective", "assertive"] {
            terms.extend(lexicon.require(name)?.iter().cloned());
        }
        Ok(ArgumentMarkers { terms })
    }

    pub fn builtin() -> &'static Self {
        static BUILTIN: OnceBox<ArgumentMarkers> = OnceBox::new();
        BUILTIN.get_or_init(|| {
            let lexicon = Lexicon::parse(ARGUMENT_MARKERS).expect("bundled marker lexicon parses");
            Box::new(ArgumentMarkers::from_lexicon(&lexicon).expect("bundled marker lexicon is complete"))
        })
    }

    pub fn hits<S: AsRef<str>>(&self, tokens: &[S]) -> usize {
        tokens.iter().filter(|t| self.terms.contains(t.as_ref())).count()
    }

    pub fn strength<S: AsRef<str>>(&self, tokens: &[S]) -> f64 {
        (self.hits(tokens) as f64 / Self::SATURATION).min(1.0)
    }
}

/// `min(1, hits / 3)` against the bundled marker lexicon.
pub fn argument_strength<S: AsRef<str>>(sentence: &[S]) -> f64 {
    ArgumentMarkers::builtin().strength(sentence)
}

pub fn extract_perspective(doc: &Document, query: &Query, index: &Index, alpha: f64) -> Result<Perspective, ResponseError> {
    extract_perspective_with(doc, query, index, alpha, ArgumentMarkers::builtin())
}

/// Returns the sentence with the highest `alpha * relevance + (1 - alpha) *
/// argument`; the earliest sentence wins ties. Stance is left `Neutral`.
pub fn extract_perspective_with(
    doc: &Document,
    query: &Query,
    index: &Index,
    alpha: f64,
    markers: &ArgumentMarkers,
) -> Result<Perspective, ResponseError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(ResponseError::InvalidAlpha(alpha));
    }
    let mut best: Option<(Span, f64, f64, f64)> = None;
    for (span, text) in doc.sentence_texts() {
        let tokens = tokenize(text);
        let rel = relevance(&tokens, query, index);
        let arg = markers.strength(&tokens);
        let combined = alpha * rel + (1.0 - alpha) * arg;
        if best.is_none_or(|(_, _, _, c)| combined > c) {
            best = Some((span, rel, arg, combined));
        }
    }
    let (span, relevance, argument, combined) = best.ok_or_else(|| ResponseError::NoSentences(doc.id.clone()))?;
    Ok(Perspective {
        doc_id: doc.id.clone(),
        span,
        text: String::from(doc.sentence_text(span)),
        relevance,
        argument,
        combined,
        stance: StanceLabel::Neutral,
        stance_confidence: 0.0,
    })
}
