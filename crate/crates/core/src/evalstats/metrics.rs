use alloc::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index::tokenize;
use crate::stance::StanceLabel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("length mismatch: {pred} predictions vs {gold} gold values")]
    LengthMismatch { pred: usize, gold: usize },
    #[error("no values to score")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn bigrams(text: &str) -> BTreeMap<(alloc::string::String, alloc::string::String), usize> {
    let toks = tokenize(text);
    let mut counts = BTreeMap::new();
    for w in toks.windows(2) {
        *counts.entry((w[0].clone(), w[1].clone())).or_insert(0) += 1;
    }
    counts
}

/// ROUGE-2 over clipped bigram counts of the tokenized texts. All scores
/// are 0 when either text has fewer than two tokens.
pub fn rouge2(candidate: &str, reference: &str) -> RougeScore {
    let cand = bigrams(candidate);
    let refs = bigrams(reference);
    let cand_total: usize = cand.values().sum();
    let ref_total: usize = refs.values().sum();
    let overlap: usize = cand
        .iter()
        .filter_map(|(g, &c)| refs.get(g).map(|&r| c.min(r)))
        .sum();
    if overlap == 0 {
        return RougeScore {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
        };
    }
    let precision = overlap as f64 / cand_total as f64;
    let recall = overlap as f64 / ref_total as f64;
    RougeScore {
        precision,
        recall,
        f1: 2.0 * precision * recall / (precision + recall),
    }
}

pub fn rouge2_f1(candidate: &str, reference: &str) -> f64 {
    rouge2(candidate, reference).f1
}

/// Mean squared error.
pub fn mse(pred: &[f64], gold: &[f64]) -> Result<f64, MetricError> {
    check_lengths(pred.len(), gold.len())?;
    let sum: f64 = pred.iter().zip(gold).map(|(p, g)| (p - g) * (p - g)).sum();
    Ok(sum / pred.len() as f64)
}

fn check_lengths(pred: usize, gold: usize) -> Result<(), MetricError> {
    if pred != gold {
        return Err(MetricError::LengthMismatch { pred, gold });
    }
    if pred == 0 {
        return Err(MetricError::Empty);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationScores {
    pub accuracy: f64,
    /// Unweighted mean of per-class F1 over all three stance labels; a class
    /// with undefined F1 contributes 0.
    pub macro_f1: f64,
}

pub fn classification_scores(preds: &[StanceLabel], golds: &[StanceLabel]) -> Result<ClassificationScores, MetricError> {
    check_lengths(preds.len(), golds.len())?;
    let correct = preds.iter().zip(golds).filter(|(p, g)| p == g).count();
    let mut f1_sum = 0.0;
    for class in StanceLabel::ALL {
        let tp = preds.iter().zip(golds).filter(|&(&p, &g)| p == class && g == class).count() as f64;
        let fp = preds.iter().zip(golds).filter(|&(&p, &g)| p == class && g != class).count() as f64;
        let fn_ = preds.iter().zip(golds).filter(|&(&p, &g)| p != class && g == class).count() as f64;
        if tp > 0.0 {
            let precision = tp / (tp + fp);
            let recall = tp / (tp + fn_);
            f1_sum += 2.0 * precision * recall / (precision + recall);
        }
    }
    Ok(ClassificationScores {
        accuracy: correct as f64 / preds.len() as f64,
        macro_f1: f1_sum / StanceLabel::ALL.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use StanceLabel::*;

    #[test]
    fn rouge_fixtures() {
        assert_eq!(rouge2_f1("masks work well", "masks work well"), 1.0);
        assert_eq!(rouge2_f1("a b c", "d e f"), 0.0);
        assert!((rouge2_f1("a b c d", "a b c e") - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(rouge2_f1("a", "a"), 0.0);
    }

    #[test]
    fn rouge_clips_repeated_bigrams() {
        // cand bigrams {a b: 2, b a: 1}, ref {a b: 1}
        let r = rouge2("a b a b", "a b");
        assert!((r.precision - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.recall, 1.0);
    }

    #[test]
    fn mse_fixtures() {
        assert_eq!(mse(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        assert_eq!(mse(&[0.0, 1.0], &[1.0, 1.0]).unwrap(), 0.5);
        assert!((mse(&[0.2], &[0.4]).unwrap() - 0.04).abs() < 1e-15);
        assert_eq!(mse(&[0.0], &[0.0, 1.0]), Err(MetricError::LengthMismatch { pred: 1, gold: 2 }));
        assert_eq!(mse(&[], &[]), Err(MetricError::Empty));
    }

    #[test]
    fn classification_fixtures() {
        let s = classification_scores(&[Support, Refute, Neutral], &[Support, Refute, Neutral]).unwrap();
        assert_eq!((s.accuracy, s.macro_f1), (1.0, 1.0));

        let s = classification_scores(&[Support, Support, Support], &[Support, Refute, Neutral]).unwrap();
        assert!((s.accuracy - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.macro_f1 - 1.0 / 6.0).abs() < 1e-15);

        let s = classification_scores(&[Support, Refute], &[Refute, Support]).unwrap();
        assert_eq!(s.accuracy, 0.0);
        assert!(classification_scores(&[Support], &[]).is_err());
    }
}
