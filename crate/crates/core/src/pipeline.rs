//! End-to-end search: retrieve, extract, filter, label, mine evidence,
//! group, and assemble result cards.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{trust_lookup, Corpus, Span};
use crate::evidence::{ConsistencyTarget, EvidenceError, EvidenceMiner};
use crate::graph::{cluster_perspectives, ScoredPerspective};
use crate::index::{retrieve, Index, IndexError, Query, ScoredDoc};
use crate::responses::{extract_perspective, ResponseError};
use crate::stance::{StanceClassifier, StanceError, StanceLabel};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StanceMode {
    #[default]
    Baseline,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StanceConfig {
    pub mode: StanceMode,
    pub endpoint: Option<String>,
    pub timeout_ms: u64,
    /// Substitute the baseline when the remote service fails.
    pub fallback_to_baseline: bool,
    /// Minimum query overlap for the baseline to assign a polar label.
    pub overlap_gate: f64,
}

impl Default for StanceConfig {
    fn default() -> Self {
        StanceConfig {
            mode: StanceMode::Baseline,
            endpoint: None,
            timeout_ms: 2000,
            fallback_to_baseline: true,
            overlap_gate: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub k: usize,
    /// Relevance weight when picking a perspective sentence.
    pub alpha: f64,
    /// Perspective weight in the evidence score.
    pub beta: f64,
    /// Grouping threshold for near-duplicate perspectives.
    pub theta: f64,
    pub min_relevance: f64,
    pub evidence_consistency: ConsistencyTarget,
    pub seed: u64,
    pub stance: StanceConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            k: 10,
            alpha: 0.7,
            beta: 0.6,
            theta: 0.6,
            min_relevance: 0.05,
            evidence_consistency: ConsistencyTarget::Perspective,
            seed: 0,
            stance: StanceConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("k must be a positive integer")]
    ZeroK,
    #[error("`{name}` must lie in [0, 1], got {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("`theta` must be finite and non-negative, got {0}")]
    BadTheta(f64),
    #[error("stance mode `remote` requires `stance.endpoint`")]
    MissingEndpoint,
    #[error("`stance.timeout_ms` must be positive")]
    ZeroTimeout,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k == 0 {
            return Err(ConfigError::ZeroK);
        }
        for (name, value) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("min_relevance", self.min_relevance),
            ("stance.overlap_gate", self.stance.overlap_gate),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::OutOfRange { name, value });
            }
        }
        // theta above 1 is allowed and disables grouping.
        if !(self.theta.is_finite() && self.theta >= 0.0) {
            return Err(ConfigError::BadTheta(self.theta));
        }
        if self.stance.mode == StanceMode::Remote && self.stance.endpoint.is_none() {
            return Err(ConfigError::MissingEndpoint);
        }
        if self.stance.timeout_ms == 0 {
            return Err(ConfigError::ZeroTimeout);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid query: `{0}` has no content terms")]
    InvalidQuery(String),
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Stance(#[from] StanceError),
    #[error("index refers to document `{0}` missing from the corpus")]
    MissingDocument(String),
}

impl From<EvidenceError> for SearchError {
    fn from(e: EvidenceError) -> Self {
        match e {
            EvidenceError::Stance(s) => SearchError::Stance(s),
            EvidenceError::InvalidBeta(b) => SearchError::Config(ConfigError::OutOfRange { name: "beta", value: b }),
            EvidenceError::ForeignPerspective { perspective, .. } => SearchError::MissingDocument(perspective),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardSource {
    pub domain: String,
    pub name: String,
    pub kind: crate::corpus::SourceKind,
    pub trusted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardEvidence {
    pub text: String,
    pub span: Span,
    pub relevance: f64,
}

/// One document's entry in a stance bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Card {
    pub doc_id: String,
    pub url: String,
    pub title: String,
    pub source: CardSource,
    pub published: Option<String>,
    pub perspective: String,
    pub span: Span,
    pub stance: StanceLabel,
    pub stance_confidence: f64,
    pub relevance: f64,
    pub retrieval_score: f64,
    /// Index of the near-duplicate group within the bucket.
    pub group: usize,
    pub representative: bool,
    pub evidence: Vec<CardEvidence>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Buckets {
    pub support: Vec<Card>,
    pub refute: Vec<Card>,
    pub neutral: Vec<Card>,
}

impl Buckets {
    pub fn bucket(&self, label: StanceLabel) -> &[Card] {
        match label {
            StanceLabel::Support => &self.support,
            StanceLabel::Refute => &self.refute,
            StanceLabel::Neutral => &self.neutral,
        }
    }

    pub fn cards(&self) -> impl Iterator<Item = &Card> {
        self.support.iter().chain(&self.refute).chain(&self.neutral)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResponse {
    pub query: String,
    pub k: usize,
    pub retrieved: Vec<ScoredDoc>,
    /// Retrieved documents whose best sentence fell below `min_relevance`.
    pub dropped: usize,
    pub clusters: Buckets,
}

/// Runs the full pipeline for `query_text`.
pub fn search<C: StanceClassifier + ?Sized>(
    query_text: &str,
    config: &PipelineConfig,
    corpus: &Corpus,
    index: &Index,
    classifier: &C,
) -> Result<SearchResponse, SearchError> {
    config.validate()?;
    let query = Query::new(query_text);
    if query.content_tokens.is_empty() {
        return Err(SearchError::InvalidQuery(String::from(query_text)));
    }
    let retrieved = retrieve(index, &query, config.k)?;
    let miner = EvidenceMiner {
        beta: config.beta,
        target: config.evidence_consistency,
    };

    let mut scored = Vec::new();
    let mut evidence = BTreeMap::new();
    let mut dropped = 0;
    for hit in &retrieved {
        let doc = corpus
            .get(&hit.doc_id)
            .ok_or_else(|| SearchError::MissingDocument(hit.doc_id.clone()))?;
        let mut perspective = match extract_perspective(doc, &query, index, config.alpha) {
            Ok(p) => p,
            Err(ResponseError::NoSentences(_)) => {
                dropped += 1;
                continue;
            }
            Err(ResponseError::InvalidAlpha(a)) => {
                return Err(ConfigError::OutOfRange { name: "alpha", value: a }.into())
            }
        };
        if perspective.relevance < config.min_relevance {
            dropped += 1;
            continue;
        }
        let stance = classifier.classify(&perspective.text, &query)?;
        perspective.stance = stance.label;
        perspective.stance_confidence = stance.confidence;
        evidence.insert(doc.id.clone(), miner.mine(doc, &perspective, &query, index, classifier)?);
        scored.push(ScoredPerspective {
            perspective,
            retrieval_score: hit.score,
        });
    }

    let clusters = cluster_perspectives(&scored, &query, config.theta, index);
    let score_of: BTreeMap<&str, f64> = retrieved.iter().map(|h| (h.doc_id.as_str(), h.score)).collect();

    let mut buckets = Buckets::default();
    for label in StanceLabel::ALL {
        let mut cards = Vec::new();
        for (group_ix, group) in clusters.bucket(label).iter().enumerate() {
            for member in &group.members {
                let doc = corpus.get(&member.doc_id).expect("clustered documents come from the corpus");
                let retrieval_score = score_of[member.doc_id.as_str()];
                cards.push(Card {
                    doc_id: doc.id.clone(),
                    url: doc.url.clone(),
                    title: doc.title.clone(),
                    source: CardSource {
                        domain: doc.source.domain.clone(),
                        name: doc.source.name.clone(),
                        kind: doc.source.kind,
                        trusted: trust_lookup(&doc.source.domain, corpus),
                    },
                    published: doc.published.clone(),
                    perspective: member.text.clone(),
                    span: member.span,
                    stance: member.stance,
                    stance_confidence: member.stance_confidence,
                    relevance: member.relevance,
                    retrieval_score,
                    group: group_ix,
                    representative: group.representative.doc_id == member.doc_id,
                    evidence: evidence
                        .remove(&doc.id)
                        .unwrap_or_default()
                        .into_iter()
                        .map(|e| CardEvidence {
                            text: e.text,
                            span: e.span,
                            relevance: e.relevance,
                        })
                        .collect(),
                });
            }
        }
        cards.sort_by(|a, b| {
            b.retrieval_score
                .total_cmp(&a.retrieval_score)
                .then_with(|| a.doc_id.cmp(&b.doc_id))
        });
        match label {
            StanceLabel::Support => buckets.support = cards,
            StanceLabel::Refute => buckets.refute = cards,
            StanceLabel::Neutral => buckets.neutral = cards,
        }
    }

    Ok(SearchResponse {
        query: String::from(query_text),
        k: config.k,
        retrieved,
        dropped,
        clusters: buckets,
    })
}
