use alloc::string::String;
use alloc::vec::Vec;

/// Fixed English stopword list. Stopwords are flagged, never removed from
/// the token stream.
pub const STOPWORDS: [&str; 120] = [
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any", "are", "as", "at",
    "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can", "could", "did", "do",
    "does", "doing", "down", "during", "each", "few", "for", "from", "had", "has", "have", "having", "he", "her",
    "here", "him", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "may", "me", "more",
    "most", "my", "myself", "no", "not", "now", "of", "off", "on", "once", "only", "or", "other", "our",
    "ourselves", "out", "over", "own", "s", "same", "she", "should", "so", "some", "such", "t", "than", "that",
    "the", "their", "them", "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too",
    "under", "until", "up", "us", "very", "was", "we", "were", "what", "when", "where", "which", "while", "who",
    "why", "will", "with", "would", "you", "your",
];

pub fn is_stopword(token: &str) -> bool {
    STOPWORDS.binary_search(&token).is_ok()
}

/// Lowercased maximal runs of Unicode letters or digits.
pub fn tokenize(text: &str) -> Vec<String> {
    tokenize_spans(text).into_iter().map(|(_, t)| t).collect()
}

/// Like [`tokenize`], also returning each token's starting byte offset.
pub fn tokenize_spans(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (pos, c) in text.char_indices() {
        if c.is_alphanumeric() {
            let (_, buf) = current.get_or_insert_with(|| (pos, String::new()));
            buf.extend(c.to_lowercase());
        } else if let Some(tok) = current.take() {
            out.push(tok);
        }
    }
    out.extend(current);
    out
}

/// Tokens that are not stopwords, in order.
pub fn content_tokens<S: AsRef<str>>(tokens: &[S]) -> Vec<String> {
    tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| !is_stopword(t))
        .map(String::from)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn stopword_list_is_sorted_and_unique() {
        assert_eq!(STOPWORDS.len(), 120);
        assert!(STOPWORDS.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn tokenizes_question() {
        assert_eq!(tokenize("Should we all wear masks?"), vec!["should", "we", "all", "wear", "masks"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("COVID-19"), vec!["covid", "19"]);
        assert_eq!(tokenize("Don't stop"), vec!["don", "t", "stop"]);
        assert_eq!(tokenize("Über café"), vec!["über", "café"]);
    }

    #[test]
    fn flags_stopwords() {
        let toks = tokenize("Should we all wear masks?");
        assert_eq!(content_tokens(&toks), vec!["wear", "masks"]);
    }
}
