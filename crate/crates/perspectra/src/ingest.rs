//! JSONL corpus and trust-list loading.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use perspectra_core::corpus::{Corpus, CorpusError, Document, Source, SourceKind};
use serde_json::{Map, Value};
use thiserror::Error;

/// Fields every corpus record must carry as strings.
pub const REQUIRED_FIELDS: [&str; 7] = ["id", "url", "title", "body", "source_domain", "source_name", "source_kind"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read `{}`: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed JSON: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: missing required field `{field}`")]
    MissingField { line: usize, field: &'static str },
    #[error("line {line}: field `{field}` must be a string")]
    FieldType { line: usize, field: &'static str },
    #[error("line {line}: duplicate document id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: {source}")]
    Record {
        line: usize,
        #[source]
        source: CorpusError,
    },
    #[error("trust list line {line}: {source}")]
    TrustEntry {
        line: usize,
        #[source]
        source: CorpusError,
    },
}

impl IngestError {
    pub fn line(&self) -> Option<usize> {
        match self {
            IngestError::Io { .. } => None,
            IngestError::Json { line, .. }
            | IngestError::MissingField { line, .. }
            | IngestError::FieldType { line, .. }
            | IngestError::DuplicateId { line, .. }
            | IngestError::Record { line, .. }
            | IngestError::TrustEntry { line, .. } => Some(*line),
        }
    }
}

fn read(path: &Path) -> Result<String, IngestError> {
    fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a corpus file and a trust list and resolves every source's trust
/// flag against that list.
pub fn load_corpus(path: &Path, trust_path: &Path) -> Result<Corpus, IngestError> {
    let body = read(path)?;
    let trust = load_trust_list(trust_path)?;
    parse_corpus(&body, trust)
}

pub fn load_trust_list(path: &Path) -> Result<BTreeSet<String>, IngestError> {
    parse_trust_list(&read(path)?)
}

/// One domain per line; `#` starts a comment, blank lines are skipped.
pub fn parse_trust_list(text: &str) -> Result<BTreeSet<String>, IngestError> {
    let mut out = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let entry = raw.split('#').next().unwrap_or("").trim();
        if entry.is_empty() {
            continue;
        }
        let domain = perspectra_core::corpus::normalize_domain(entry)
            .map_err(|source| IngestError::TrustEntry { line: i + 1, source })?;
        out.insert(domain);
    }
    Ok(out)
}

pub fn parse_corpus<I, S>(jsonl: &str, trust_list: I) -> Result<Corpus, IngestError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut docs = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in jsonl.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(raw).map_err(|e| IngestError::Json {
            line,
            message: e.to_string(),
        })?;
        let Value::Object(record) = value else {
            return Err(IngestError::Json {
                line,
                message: "expected a JSON object".into(),
            });
        };
        let doc = parse_record(&record, line)?;
        if !seen.insert(doc.id.clone()) {
            return Err(IngestError::DuplicateId { line, id: doc.id });
        }
        docs.push(doc);
    }
    Ok(Corpus::new(docs, trust_list).expect("ids were checked for duplicates above"))
}

fn parse_record(record: &Map<String, Value>, line: usize) -> Result<Document, IngestError> {
    let mut fields = [""; REQUIRED_FIELDS.len()];
    for (slot, field) in fields.iter_mut().zip(REQUIRED_FIELDS) {
        *slot = match record.get(field) {
            None | Some(Value::Null) => return Err(IngestError::MissingField { line, field }),
            Some(Value::String(s)) => s.as_str(),
            Some(_) => return Err(IngestError::FieldType { line, field }),
        };
    }
    let [id, url, title, body, domain, name, kind] = fields;
    let published = match record.get("published") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(IngestError::FieldType { line, field: "published" }),
    };
    let record_err = |source| IngestError::Record { line, source };
    let kind: SourceKind = kind.parse().map_err(record_err)?;
    let source = Source::new(domain, name, kind).map_err(record_err)?;
    Document::new(id, url, title, body, source, published).map_err(record_err)
}

/// Serializes documents back to the JSONL record format.
pub fn to_jsonl(corpus: &Corpus) -> String {
    let mut out = String::new();
    for d in corpus.documents() {
        let mut record = Map::new();
        record.insert("id".into(), d.id.clone().into());
        record.insert("url".into(), d.url.clone().into());
        record.insert("title".into(), d.title.clone().into());
        record.insert("body".into(), d.body.clone().into());
        record.insert("source_domain".into(), d.source.domain.clone().into());
        record.insert("source_name".into(), d.source.name.clone().into());
        record.insert("source_kind".into(), d.source.kind.as_str().into());
        if let Some(p) = &d.published {
            record.insert("published".into(), p.clone().into());
        }
        out.push_str(&Value::Object(record).to_string());
        out.push('\n');
    }
    out
}
