//! Data files compiled into the binary: a ten-article demo corpus, the
//! default trust list and a set of controversial queries.

use perspectra_core::corpus::Corpus;
use perspectra_core::index::Index;

pub const DEMO_CORPUS: &str = include_str!("../data/demo_corpus.jsonl");
pub const TRUSTED_SOURCES: &str = include_str!("../data/trusted_sources.txt");
pub const QUERIES: &str = include_str!("../data/queries.txt");

/// Default trust list.
pub fn trust_list() -> std::collections::BTreeSet<String> {
    crate::ingest::parse_trust_list(TRUSTED_SOURCES).expect("bundled trust list is valid")
}

/// Demo corpus and its index.
pub fn demo() -> (Corpus, Index) {
    let corpus = crate::ingest::parse_corpus(DEMO_CORPUS, trust_list()).expect("bundled corpus is valid");
    let index = Index::build(&corpus);
    (corpus, index)
}

/// Queries in file order, comment lines skipped.
pub fn queries() -> Vec<&'static str> {
    QUERIES
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}
