//! Cross-document comparison of perspectives: query-conditional similarity,
//! stance buckets and near-duplicate grouping.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::index::{tokenize, Index, Query};
use crate::responses::Perspective;
use crate::stance::StanceLabel;
use crate::vector::TermVector;

/// Similarity of two perspectives given the query.
///
/// Opposed stances score 0. Otherwise this is the idf-weighted cosine over
/// content tokens after dropping every query content token, so agreement
/// that comes only from restating the query does not count.
pub fn conditional_similarity(a: &Perspective, b: &Perspective, query: &Query, index: &Index) -> f64 {
    if a.stance.opposes(b.stance) {
        return 0.0;
    }
    let ta = tokenize(&a.text);
    let tb = tokenize(&b.text);
    let in_query = |t: &str| query.content_tokens.iter().any(|q| q == t);
    TermVector::new(&ta, index, in_query).cosine(&TermVector::new(&tb, index, in_query))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredPerspective {
    pub perspective: Perspective,
    /// BM25 score of the source document.
    pub retrieval_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub representative: Perspective,
    /// All members, representative first.
    pub members: Vec<Perspective>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PerspectiveClusters {
    pub support: Vec<Group>,
    pub refute: Vec<Group>,
    pub neutral: Vec<Group>,
}

impl PerspectiveClusters {
    pub fn bucket(&self, label: StanceLabel) -> &[Group] {
        match label {
            StanceLabel::Support => &self.support,
            StanceLabel::Refute => &self.refute,
            StanceLabel::Neutral => &self.neutral,
        }
    }

    fn bucket_mut(&mut self, label: StanceLabel) -> &mut Vec<Group> {
        match label {
            StanceLabel::Support => &mut self.support,
            StanceLabel::Refute => &mut self.refute,
            StanceLabel::Neutral => &mut self.neutral,
        }
    }

    pub fn member_count(&self) -> usize {
        StanceLabel::ALL
            .iter()
            .flat_map(|&l| self.bucket(l))
            .map(|g| g.members.len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.member_count() == 0
    }
}

/// Buckets perspectives by stance and greedily merges restatements.
///
/// Perspectives are visited by descending retrieval score (ties by document
/// id, then span). Each joins the first group in its bucket whose
/// representative is at least `theta` similar, or else founds a new group.
pub fn cluster_perspectives(perspectives: &[ScoredPerspective], query: &Query, theta: f64, index: &Index) -> PerspectiveClusters {
    let mut order: Vec<&ScoredPerspective> = perspectives.iter().collect();
    order.sort_by(|a, b| {
        b.retrieval_score
            .total_cmp(&a.retrieval_score)
            .then_with(|| a.perspective.doc_id.cmp(&b.perspective.doc_id))
            .then_with(|| a.perspective.span.cmp(&b.perspective.span))
            .then_with(|| a.perspective.text.cmp(&b.perspective.text))
    });

    let mut clusters = PerspectiveClusters::default();
    for sp in order {
        let p = &sp.perspective;
        let bucket = clusters.bucket_mut(p.stance);
        let home = bucket
            .iter_mut()
            .find(|g| conditional_similarity(p, &g.representative, query, index) >= theta);
        match home {
            Some(g) => g.members.push(p.clone()),
            None => bucket.push(Group {
                representative: p.clone(),
                members: alloc::vec![p.clone()],
            }),
        }
    }
    clusters
}
