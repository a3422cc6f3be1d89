//! Stance of a statement toward the query: support, refute or neutral.
//!
//! The built-in classifier is a cue lexicon with negation handling, gated on
//! lexical overlap with the query. Other classifiers (for example a remote
//! model) plug in through [`StanceClassifier`].

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;

use once_cell::race::OnceBox;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index::{tokenize, Query};
use crate::lexicon::{Lexicon, LexiconError, STANCE_CUES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StanceLabel {
    Support,
    Refute,
    Neutral,
}

impl StanceLabel {
    pub const ALL: [StanceLabel; 3] = [StanceLabel::Support, StanceLabel::Refute, StanceLabel::Neutral];

    pub fn as_str(self) -> &'static str {
        match self {
            StanceLabel::Support => "support",
            StanceLabel::Refute => "refute",
            StanceLabel::Neutral => "neutral",
        }
    }

    /// Support and Refute are opposed; Neutral opposes nothing.
    pub fn opposes(self, other: StanceLabel) -> bool {
        matches!(
            (self, other),
            (StanceLabel::Support, StanceLabel::Refute) | (StanceLabel::Refute, StanceLabel::Support)
        )
    }
}

impl core::fmt::Display for StanceLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for StanceLabel {
    type Err = StanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "support" => Ok(StanceLabel::Support),
            "refute" => Ok(StanceLabel::Refute),
            "neutral" => Ok(StanceLabel::Neutral),
            _ => Err(StanceError::Contract {
                field: "label",
                message: alloc::format!("`{s}` is not one of support, refute, neutral"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StanceResult {
    pub label: StanceLabel,
    pub confidence: f64,
}

impl StanceResult {
    pub const DEGENERATE: StanceResult = StanceResult {
        label: StanceLabel::Neutral,
        confidence: 0.0,
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StanceError {
    #[error("stance service request timed out")]
    Timeout,
    #[error("stance service unreachable: {0}")]
    Transport(String),
    #[error("stance service returned HTTP {0}")]
    Status(u16),
    #[error("stance service response violates contract at `{field}`: {message}")]
    Contract { field: &'static str, message: String },
}

pub trait StanceClassifier {
    fn classify(&self, statement: &str, query: &Query) -> Result<StanceResult, StanceError>;
}

impl<T: StanceClassifier + ?Sized> StanceClassifier for &T {
    fn classify(&self, statement: &str, query: &Query) -> Result<StanceResult, StanceError> {
        (**self).classify(statement, query)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StanceCues {
    affirmative: BTreeSet<String>,
    negative: BTreeSet<String>,
    negators: BTreeSet<String>,
}

impl StanceCues {
    pub fn from_lexicon(lexicon: &Lexicon) -> Result<Self, LexiconError> {
        Ok(StanceCues {
            affirmative: lexicon.require("affirmative")?.clone(),
            negative: lexicon.require("negative")?.clone(),
            negators: lexicon.require("negator")?.clone(),
        })
    }

    pub fn builtin() -> &'static Self {
        static BUILTIN: OnceBox<StanceCues> = OnceBox::new();
        BUILTIN.get_or_init(|| {
            let lexicon = Lexicon::parse(STANCE_CUES).expect("bundled stance lexicon parses");
            Box::new(StanceCues::from_lexicon(&lexicon).expect("bundled stance lexicon is complete"))
        })
    }

    fn is_negator<S: AsRef<str>>(&self, tokens: &[S], at: usize) -> bool {
        let t = tokens[at].as_ref();
        if self.negators.contains(t) {
            return true;
        }
        // The tokenizer splits "isn't" into "isn" + "t".
        t == "t" && at > 0 && self.negators.contains("n't") && tokens[at - 1].as_ref().ends_with('n')
    }

    /// Signed cue count; a cue preceded by a negator within three tokens
    /// counts with the opposite sign.
    pub fn polarity<S: AsRef<str>>(&self, tokens: &[S]) -> i64 {
        let mut p = 0i64;
        for (i, t) in tokens.iter().enumerate() {
            let t = t.as_ref();
            let sign = if self.affirmative.contains(t) {
                1
            } else if self.negative.contains(t) {
                -1
            } else {
                continue;
            };
            let negated = (i.saturating_sub(NEGATION_WINDOW)..i).any(|j| self.is_negator(tokens, j));
            p += if negated { -sign } else { sign };
        }
        p
    }
}

const NEGATION_WINDOW: usize = 3;

/// Jaccard overlap of the two content-token sets.
pub fn content_overlap<S: AsRef<str>, T: AsRef<str>>(a: &[S], b: &[T]) -> f64 {
    let a: BTreeSet<&str> = a.iter().map(AsRef::as_ref).filter(|t| !crate::index::is_stopword(t)).collect();
    let b: BTreeSet<&str> = b.iter().map(AsRef::as_ref).filter(|t| !crate::index::is_stopword(t)).collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// Lexicon-and-negation stance baseline.
#[derive(Debug, Clone)]
pub struct BaselineStance<'a> {
    cues: &'a StanceCues,
    overlap_gate: f64,
}

impl Default for BaselineStance<'static> {
    fn default() -> Self {
        BaselineStance::new(Self::DEFAULT_OVERLAP_GATE)
    }
}

impl BaselineStance<'static> {
    pub const DEFAULT_OVERLAP_GATE: f64 = 0.1;

    pub fn new(overlap_gate: f64) -> Self {
        BaselineStance {
            cues: StanceCues::builtin(),
            overlap_gate,
        }
    }
}

impl<'a> BaselineStance<'a> {
    pub fn with_cues(cues: &'a StanceCues, overlap_gate: f64) -> Self {
        BaselineStance { cues, overlap_gate }
    }

    pub fn overlap_gate(&self) -> f64 {
        self.overlap_gate
    }

    /// Labels `statement` against `query`.
    ///
    /// Below the overlap gate the result is Neutral with confidence
    /// `1 - overlap / gate`. Otherwise the polarity sign decides, with
    /// confidence `min(1, |p| / 3) * overlap`, or `overlap` itself when the
    /// polarity is zero. Statements or queries without content tokens yield
    /// `(Neutral, 0)`.
    pub fn classify_tokens<S: AsRef<str>>(&self, statement: &[S], query: &Query) -> StanceResult {
        let has_content = statement.iter().any(|t| !crate::index::is_stopword(t.as_ref()));
        if !has_content || query.content_tokens.is_empty() {
            return StanceResult::DEGENERATE;
        }
        let overlap = content_overlap(statement, &query.content_tokens);
        if overlap < self.overlap_gate {
            let confidence = if self.overlap_gate > 0.0 { 1.0 - overlap / self.overlap_gate } else { 1.0 };
            return StanceResult {
                label: StanceLabel::Neutral,
                confidence: confidence.clamp(0.0, 1.0),
            };
        }
        let p = self.cues.polarity(statement);
        let (label, confidence) = match p.signum() {
            1 => (StanceLabel::Support, (p as f64 / 3.0).min(1.0) * overlap),
            -1 => (StanceLabel::Refute, (-p as f64 / 3.0).min(1.0) * overlap),
            _ => (StanceLabel::Neutral, overlap),
        };
        StanceResult {
            label,
            confidence: confidence.clamp(0.0, 1.0),
        }
    }
}

impl StanceClassifier for BaselineStance<'_> {
    fn classify(&self, statement: &str, query: &Query) -> Result<StanceResult, StanceError> {
        Ok(self.classify_tokens(&tokenize(statement), query))
    }
}

/// Baseline stance with the bundled cue lexicon and a 0.1 overlap gate.
pub fn classify_stance(statement: &str, query: &Query) -> StanceResult {
    BaselineStance::default().classify_tokens(&tokenize(statement), query)
}
