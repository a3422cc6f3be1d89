//! Single-file JSON snapshot holding the corpus, trust list and inverted
//! index. Loading revalidates everything, so a hand-edited file cannot
//! produce an inconsistent index.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use perspectra_core::corpus::{Corpus, CorpusError, Document};
use perspectra_core::index::{Index, IndexError, Posting};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT: &str = "perspectra-index";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("cannot read `{}`: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write `{}`: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("`{}` is not a valid snapshot: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("unsupported snapshot {format} v{version}")]
    Version { format: String, version: u32 },
    #[error("snapshot corpus is invalid: {0}")]
    Corpus(#[from] CorpusError),
    #[error("snapshot index is invalid: {0}")]
    Index(#[from] IndexError),
    #[error("snapshot index and corpus disagree: {0}")]
    Mismatch(String),
}

#[derive(Serialize, Deserialize)]
struct IndexParts {
    doc_ids: Vec<String>,
    doc_len: Vec<u32>,
    postings: BTreeMap<String, Vec<Posting>>,
}

#[derive(Serialize, Deserialize)]
struct SnapshotFile {
    format: String,
    version: u32,
    trust_list: BTreeSet<String>,
    documents: Vec<Document>,
    index: IndexParts,
}

pub fn to_json(corpus: &Corpus, index: &Index) -> String {
    let file = SnapshotFile {
        format: FORMAT.into(),
        version: VERSION,
        trust_list: corpus.trust_list().clone(),
        documents: corpus.documents().to_vec(),
        index: IndexParts {
            doc_ids: index.doc_ids().to_vec(),
            doc_len: index.doc_lengths().to_vec(),
            postings: index.postings().clone(),
        },
    };
    serde_json::to_string(&file).expect("snapshot types always serialize")
}

pub fn from_json(text: &str, path: &Path) -> Result<(Corpus, Index), SnapshotError> {
    let file: SnapshotFile = serde_json::from_str(text).map_err(|e| SnapshotError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if file.format != FORMAT || file.version != VERSION {
        return Err(SnapshotError::Version {
            format: file.format,
            version: file.version,
        });
    }
    let mut docs = Vec::with_capacity(file.documents.len());
    for d in file.documents {
        let rebuilt = Document::new(d.id, d.url, d.title, d.body, d.source, d.published)?;
        if rebuilt.sentences != d.sentences {
            return Err(SnapshotError::Mismatch(format!("sentence spans of `{}` are stale", rebuilt.id)));
        }
        docs.push(rebuilt);
    }
    let corpus = Corpus::new(docs, &file.trust_list)?;
    let index = Index::from_parts(file.index.doc_ids, file.index.doc_len, file.index.postings)?;
    let corpus_ids: BTreeSet<&str> = corpus.documents().iter().map(|d| d.id.as_str()).collect();
    if !index.doc_ids().iter().map(String::as_str).eq(corpus_ids.iter().copied()) {
        return Err(SnapshotError::Mismatch("indexed ids differ from corpus ids".into()));
    }
    Ok((corpus, index))
}

pub fn save(path: &Path, corpus: &Corpus, index: &Index) -> Result<(), SnapshotError> {
    fs::write(path, to_json(corpus, index)).map_err(|source| SnapshotError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load(path: &Path) -> Result<(Corpus, Index), SnapshotError> {
    let text = fs::read_to_string(path).map_err(|source| SnapshotError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    from_json(&text, path)
}
