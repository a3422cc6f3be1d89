//! Documents, sources and the sentence segmenter.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("document id must be nonempty")]
    EmptyId,
    #[error("invalid source domain `{0}`: expected a bare hostname")]
    InvalidDomain(String),
    #[error("invalid publication date `{0}`: expected ISO-8601 (YYYY-MM-DD...)")]
    InvalidDate(String),
    #[error("unknown source kind `{0}`")]
    UnknownKind(String),
}

/// Byte range `[start, end)` into a document body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn text<'a>(&self, body: &'a str) -> &'a str {
        &body[self.start..self.end]
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    News,
    Health,
    Science,
    Government,
    Other,
}

impl SourceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceKind::News => "news",
            SourceKind::Health => "health",
            SourceKind::Science => "science",
            SourceKind::Government => "government",
            SourceKind::Other => "other",
        }
    }
}

impl core::str::FromStr for SourceKind {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "news" => Ok(SourceKind::News),
            "health" => Ok(SourceKind::Health),
            "science" => Ok(SourceKind::Science),
            "government" => Ok(SourceKind::Government),
            "other" => Ok(SourceKind::Other),
            _ => Err(CorpusError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Source {
    pub domain: String,
    pub name: String,
    pub kind: SourceKind,
    pub trusted: bool,
}

impl Source {
    /// Builds an untrusted source; `trusted` is resolved when the document
    /// joins a [`Corpus`].
    pub fn new(domain: &str, name: impl Into<String>, kind: SourceKind) -> Result<Self, CorpusError> {
        Ok(Source {
            domain: normalize_domain(domain)?,
            name: name.into(),
            kind,
            trusted: false,
        })
    }
}

/// Lowercases a hostname and rejects anything carrying a scheme, path,
/// whitespace or port.
pub fn normalize_domain(domain: &str) -> Result<String, CorpusError> {
    let d = domain.trim().to_lowercase();
    let bad = d.is_empty()
        || d.contains("://")
        || d.chars().any(|c| c.is_whitespace() || matches!(c, '/' | '?' | '#' | ':' | '@'));
    if bad {
        return Err(CorpusError::InvalidDomain(domain.to_string()));
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub url: String,
    pub title: String,
    pub body: String,
    pub source: Source,
    pub published: Option<String>,
    pub sentences: Vec<Span>,
}

impl Document {
    /// Builds a document and segments its body.
    pub fn new(
        id: impl Into<String>,
        url: impl Into<String>,
        title: impl Into<String>,
        body: impl Into<String>,
        source: Source,
        published: Option<String>,
    ) -> Result<Self, CorpusError> {
        let id = id.into();
        if id.is_empty() {
            return Err(CorpusError::EmptyId);
        }
        if let Some(date) = &published {
            if !is_iso_date(date) {
                return Err(CorpusError::InvalidDate(date.clone()));
            }
        }
        let body = body.into();
        let sentences = segment_sentences(&body);
        Ok(Document {
            id,
            url: url.into(),
            title: title.into(),
            body,
            source,
            published,
            sentences,
        })
    }

    pub fn sentence_text(&self, span: Span) -> &str {
        span.text(&self.body)
    }

    pub fn sentence_texts(&self) -> impl Iterator<Item = (Span, &str)> + '_ {
        self.sentences.iter().map(move |&s| (s, s.text(&self.body)))
    }
}

/// Accepts `YYYY-MM-DD`, optionally followed by a `T...` time part.
fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    if b.len() < 10 {
        return false;
    }
    let digits = |r: core::ops::Range<usize>| b[r].iter().all(u8::is_ascii_digit);
    if !(digits(0..4) && b[4] == b'-' && digits(5..7) && b[7] == b'-' && digits(8..10)) {
        return false;
    }
    let month = (b[5] - b'0') * 10 + (b[6] - b'0');
    let day = (b[8] - b'0') * 10 + (b[9] - b'0');
    (1..=12).contains(&month) && (1..=31).contains(&day) && (b.len() == 10 || b[10] == b'T')
}

/// An immutable document collection plus the trusted-domain list.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    documents: Vec<Document>,
    trust_list: BTreeSet<String>,
    by_id: BTreeMap<String, usize>,
}

impl Corpus {
    /// Resolves every document's `source.trusted` against `trust_list` and
    /// rejects duplicate ids.
    pub fn new<I, S>(documents: Vec<Document>, trust_list: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let trust_list: BTreeSet<String> = trust_list
            .into_iter()
            .map(|d| d.as_ref().trim().to_lowercase())
            .filter(|d| !d.is_empty())
            .collect();
        let mut by_id = BTreeMap::new();
        let mut documents = documents;
        for (i, doc) in documents.iter_mut().enumerate() {
            if by_id.insert(doc.id.clone(), i).is_some() {
                return Err(CorpusError::DuplicateId(doc.id.clone()));
            }
            doc.source.trusted = trust_list.contains(&doc.source.domain.to_lowercase());
        }
        Ok(Corpus { documents, trust_list, by_id })
    }

    pub fn empty() -> Self {
        Corpus {
            documents: Vec::new(),
            trust_list: BTreeSet::new(),
            by_id: BTreeMap::new(),
        }
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn trust_list(&self) -> &BTreeSet<String> {
        &self.trust_list
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.by_id.get(id).map(|&i| &self.documents[i])
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn is_trusted(&self, domain: &str) -> bool {
        self.trust_list.contains(&domain.trim().to_lowercase())
    }
}

/// Whether `domain` is on the corpus trust list, ignoring case.
pub fn trust_lookup(domain: &str, corpus: &Corpus) -> bool {
    corpus.is_trusted(domain)
}

const ABBREVIATIONS: &[&str] = &[
    "Dr.", "Mr.", "Mrs.", "Ms.", "U.S.", "U.K.", "e.g.", "i.e.", "vs.", "etc.", "No.", "Fig.", "St.",
];

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '\u{201c}' | '\u{2018}')
}

/// Splits `text` into trimmed sentence spans.
///
/// A boundary falls after a run of `.`, `!` or `?` (plus any closing quotes
/// or brackets) that is followed by whitespace and then an uppercase letter
/// or digit, optionally behind an opening quote. A blank line always ends a
/// sentence. A period closing one of [`ABBREVIATIONS`] never splits.
pub fn segment_sentences(text: &str) -> Vec<Span> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let n = chars.len();
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut word_start = 0usize;
    let mut last_end = 0usize;

    let mut i = 0;
    while i < n {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            if c == '\n' && blank_line_follows(&chars, i) {
                if let Some(s) = start.take() {
                    spans.push(Span::new(s, last_end));
                }
            }
            i += 1;
            continue;
        }
        if i == 0 || chars[i - 1].1.is_whitespace() {
            word_start = pos;
        }
        if start.is_none() {
            start = Some(pos);
        }
        last_end = pos + c.len_utf8();
        if !is_terminal(c) {
            i += 1;
            continue;
        }

        let mut j = i + 1;
        while j < n && is_terminal(chars[j].1) {
            j += 1;
        }
        while j < n && is_closer(chars[j].1) {
            j += 1;
        }
        let run_end = if j < n { chars[j].0 } else { text.len() };
        if j < n && chars[j].1.is_whitespace() {
            let mut k = j;
            while k < n && chars[k].1.is_whitespace() {
                k += 1;
            }
            while k < n && is_opener(chars[k].1) {
                k += 1;
            }
            let starts_sentence = k < n && (chars[k].1.is_uppercase() || chars[k].1.is_numeric());
            let abbreviated = c == '.' && j == i + 1 && is_abbreviation(&text[word_start..run_end]);
            if starts_sentence && !abbreviated {
                if let Some(s) = start.take() {
                    spans.push(Span::new(s, run_end));
                }
                i = j;
                continue;
            }
        }
        last_end = run_end;
        i = j;
    }
    if let Some(s) = start {
        spans.push(Span::new(s, last_end));
    }
    spans
}

fn blank_line_follows(chars: &[(usize, char)], newline: usize) -> bool {
    chars[newline + 1..]
        .iter()
        .map(|&(_, c)| c)
        .take_while(|c| c.is_whitespace())
        .any(|c| c == '\n')
}

fn is_abbreviation(word: &str) -> bool {
    let word = word.trim_start_matches(is_opener);
    ABBREVIATIONS.contains(&word)
}
