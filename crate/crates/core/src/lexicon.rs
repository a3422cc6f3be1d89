//! Sectioned term lists.
//!
//! ```text
//! # comment
//! [category]
//! term
//! term
//! ```

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};

use thiserror::Error;

pub const ARGUMENT_MARKERS: &str = include_str!("../data/argument_markers.txt");
pub const STANCE_CUES: &str = include_str!("../data/stance_cues.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: term `{term}` appears before any [section] header")]
    NoSection { line: usize, term: String },
    #[error("line {line}: malformed section header")]
    BadHeader { line: usize },
    #[error("missing required section [{0}]")]
    MissingSection(&'static str),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    sections: BTreeMap<String, BTreeSet<String>>,
}

impl Lexicon {
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut sections: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or(LexiconError::BadHeader { line: i + 1 })?.trim();
                if name.is_empty() {
                    return Err(LexiconError::BadHeader { line: i + 1 });
                }
                sections.entry(name.to_string()).or_default();
                current = Some(name.to_string());
                continue;
            }
            let Some(section) = &current else {
                return Err(LexiconError::NoSection { line: i + 1, term: line.to_string() });
            };
            sections.get_mut(section).expect("section registered").insert(line.to_lowercase());
        }
        Ok(Lexicon { sections })
    }

    pub fn section(&self, name: &str) -> Option<&BTreeSet<String>> {
        self.sections.get(name)
    }

    pub fn require(&self, name: &'static str) -> Result<&BTreeSet<String>, LexiconError> {
        self.section(name).ok_or(LexiconError::MissingSection(name))
    }

    pub fn sections(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.sections.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// True if `term` is in any section.
    pub fn contains(&self, term: &str) -> bool {
        self.sections.values().any(|s| s.contains(term))
    }
}
