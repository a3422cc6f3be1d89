use alloc::collections::BTreeMap;

use crate::index::{is_stopword, Index};

/// tf·idf weights over content tokens.
#[derive(Debug, Default)]
pub(crate) struct TermVector<'a> {
    weights: BTreeMap<&'a str, f64>,
}

impl<'a> TermVector<'a> {
    /// Builds a vector from the non-stopword tokens of `tokens`, skipping any
    /// token for which `exclude` returns true.
    pub fn new<S, F>(tokens: &'a [S], index: &Index, exclude: F) -> Self
    where
        S: AsRef<str>,
        F: Fn(&str) -> bool,
    {
        let mut tf: BTreeMap<&'a str, u32> = BTreeMap::new();
        for t in tokens.iter().map(AsRef::as_ref) {
            if !is_stopword(t) && !exclude(t) {
                *tf.entry(t).or_default() += 1;
            }
        }
        let weights = tf.into_iter().map(|(t, c)| (t, c as f64 * index.idf(t))).collect();
        TermVector { weights }
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn norm_sq(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum()
    }

    /// Cosine similarity clamped to `[0, 1]`; 0 when either side is empty.
    /// Symmetric bit-for-bit: the dot product walks shared terms in
    /// lexicographic order.
    pub fn cosine(&self, other: &TermVector<'_>) -> f64 {
        if self.is_empty() || other.is_empty() {
            return 0.0;
        }
        let (small, large) = if self.weights.len() <= other.weights.len() {
            (self, other)
        } else {
            (other, self)
        };
        let dot: f64 = small
            .weights
            .iter()
            .filter_map(|(t, w)| large.weights.get(t).map(|v| w * v))
            .sum();
        if dot == 0.0 {
            return 0.0;
        }
        let denom = libm::sqrt(self.norm_sq() * other.norm_sq());
        (dot / denom).clamp(0.0, 1.0)
    }
}
