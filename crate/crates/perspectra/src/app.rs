//! Shared search state and output rendering used by both the CLI and the
//! HTTP service, so the two paths emit identical bytes.

use std::fmt::Write as _;

use perspectra_core::corpus::Corpus;
use perspectra_core::index::Index;
use perspectra_core::pipeline::{search, ConfigError, PipelineConfig, SearchError, SearchResponse};
use perspectra_core::stance::StanceLabel;
use serde::Serialize;
use thiserror::Error;

use crate::remote::Classifier;

#[derive(Debug, Error)]
pub enum ApiError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("missing query parameter `{0}`")]
    MissingParam(&'static str),
    #[error("query parameter `{name}` is invalid: {message}")]
    BadParam { name: &'static str, message: String },
    #[error("no document with id `{0}`")]
    NotFound(String),
    #[error("no route for `{0}`")]
    UnknownRoute(String),
}

impl ApiError {
    pub fn status(&self) -> u16 {
        match self {
            ApiError::Search(SearchError::InvalidQuery(_) | SearchError::Config(_)) => 400,
            ApiError::Search(SearchError::Stance(_)) => 502,
            ApiError::Search(_) => 500,
            ApiError::MissingParam(_) | ApiError::BadParam { .. } => 400,
            ApiError::NotFound(_) | ApiError::UnknownRoute(_) => 404,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ApiError::Search(SearchError::InvalidQuery(_)) => "invalid_query",
            ApiError::Search(SearchError::Config(_)) => "invalid_parameter",
            ApiError::Search(SearchError::Stance(_)) => "stance_unavailable",
            ApiError::Search(_) => "internal",
            ApiError::MissingParam(_) | ApiError::BadParam { .. } => "invalid_parameter",
            ApiError::NotFound(_) | ApiError::UnknownRoute(_) => "not_found",
        }
    }

    /// `{"error": {"code": .., "message": ..}}`
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Inner<'a> {
            code: &'a str,
            message: String,
        }
        #[derive(Serialize)]
        struct Body<'a> {
            error: Inner<'a>,
        }
        render_json(&Body {
            error: Inner {
                code: self.code(),
                message: self.to_string(),
            },
        })
    }
}

/// Pretty JSON followed by a newline.
pub fn render_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("response types always serialize");
    s.push('\n');
    s
}

/// Plain-text rendering for terminals.
pub fn render_text(response: &SearchResponse) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Query: {}", response.query);
    let _ = writeln!(
        out,
        "Retrieved {} document(s), {} dropped as off-topic",
        response.retrieved.len(),
        response.dropped
    );
    for label in StanceLabel::ALL {
        let cards = response.clusters.bucket(label);
        let _ = writeln!(out, "\n== {} ({}) ==", label.as_str().to_uppercase(), cards.len());
        for card in cards {
            let trust = if card.source.trusted { "trusted" } else { "unverified" };
            let _ = writeln!(out, "\n* {}", card.perspective);
            let _ = writeln!(
                out,
                "  {} | {} ({}, {}) | confidence {:.2} | group {}",
                card.title,
                card.source.name,
                card.source.domain,
                trust,
                card.stance_confidence,
                card.group
            );
            let _ = writeln!(out, "  {}", card.url);
            for e in &card.evidence {
                let _ = writeln!(out, "    - {}", e.text);
            }
        }
    }
    out
}

pub struct App {
    pub corpus: Corpus,
    pub index: Index,
    pub config: PipelineConfig,
    pub classifier: Classifier,
}

impl App {
    pub fn new(corpus: Corpus, index: Index, config: PipelineConfig) -> Self {
        let classifier = Classifier::from_config(&config);
        App {
            corpus,
            index,
            config,
            classifier,
        }
    }

    /// Runs a search; `k` overrides the configured cutoff.
    pub fn search(&self, query: &str, k: Option<usize>) -> Result<SearchResponse, ApiError> {
        let mut config = self.config.clone();
        if let Some(k) = k {
            if k == 0 {
                return Err(SearchError::Config(ConfigError::ZeroK).into());
            }
            config.k = k;
        }
        Ok(search(query, &config, &self.corpus, &self.index, &self.classifier)?)
    }

    pub fn search_json(&self, query: &str, k: Option<usize>) -> Result<String, ApiError> {
        self.search(query, k).map(|r| render_json(&r))
    }

    pub fn doc_json(&self, id: &str) -> Result<String, ApiError> {
        self.corpus
            .get(id)
            .map(render_json)
            .ok_or_else(|| ApiError::NotFound(id.to_string()))
    }
}
