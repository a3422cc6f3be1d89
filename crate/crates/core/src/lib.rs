//! Perspective-oriented search over a local news corpus.
//!
//! Given a debate-worthy query, the pipeline retrieves candidate documents
//! with BM25, extracts one sentence per document that answers the query,
//! labels its stance, mines up to three supporting evidence sentences, and
//! groups the answers into stance buckets with near-duplicates merged.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the HTTP service live in the `perspectra` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod evalstats;
pub mod evidence;
pub mod graph;
pub mod index;
pub mod lexicon;
pub mod pipeline;
pub mod responses;
pub mod stance;
mod vector;

pub use corpus::{segment_sentences, trust_lookup, Corpus, CorpusError, Document, Source, SourceKind, Span};
pub use evidence::{evidence_score, mine_evidence, EvidenceSentence};
pub use graph::{cluster_perspectives, conditional_similarity, Group, PerspectiveClusters, ScoredPerspective};
pub use index::{bm25_score, retrieve, tokenize, Index, IndexError, Query, ScoredDoc};
pub use pipeline::{search, PipelineConfig, SearchError, SearchResponse};
pub use responses::{argument_strength, extract_perspective, relevance, Perspective};
pub use stance::{classify_stance, BaselineStance, StanceClassifier, StanceError, StanceLabel, StanceResult};
