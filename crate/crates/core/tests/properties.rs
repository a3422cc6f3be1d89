use proptest::prelude::*;

use perspectra_core::corpus::{segment_sentences, trust_lookup, Corpus, Document, Source, SourceKind, Span};
use perspectra_core::evalstats::{mse, normal_cdf, normal_sf, rouge2_f1};
use perspectra_core::evidence::mine_evidence;
use perspectra_core::graph::{cluster_perspectives, conditional_similarity, ScoredPerspective};
use perspectra_core::index::{tokenize, Index, Query};
use perspectra_core::responses::{extract_perspective, relevance, Perspective};
use perspectra_core::stance::{classify_stance, StanceLabel};

const WORDS: &[&str] = &[
    "Masks", "masks", "work", "Dr.", "U.S.", "they", "are", "safe", "not", "Vaccines", "help", "e.g.", "42", "cheap",
    "should", "never", "mandatory", "wearing", "harm", "indeed",
];

fn word() -> impl Strategy<Value = &'static str> {
    prop::sample::select(WORDS)
}

fn sep() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&[" ", " ", " ", ". ", "! ", "? ", "\n", "\n\n", ", ", ".\" "][..])
}

fn text() -> impl Strategy<Value = String> {
    prop::collection::vec((word(), sep()), 0..40).prop_map(|parts| parts.into_iter().map(|(w, s)| format!("{w}{s}")).collect())
}

fn label() -> impl Strategy<Value = StanceLabel> {
    prop::sample::select(&StanceLabel::ALL[..])
}

fn perspectives() -> impl Strategy<Value = Vec<ScoredPerspective>> {
    prop::collection::vec((prop::collection::vec(word(), 1..6), label(), 0u8..5), 0..12).prop_map(|items| {
        items
            .into_iter()
            .enumerate()
            .map(|(i, (words, stance, score))| {
                let text = words.join(" ");
                ScoredPerspective {
                    perspective: Perspective {
                        doc_id: format!("d{i:02}"),
                        span: Span::new(0, text.len()),
                        text,
                        relevance: 0.5,
                        argument: 0.0,
                        combined: 0.35,
                        stance,
                        stance_confidence: 0.5,
                    },
                    retrieval_score: score as f64,
                }
            })
            .collect()
    })
}

fn small_index() -> Index {
    Index::from_texts([("a", "masks work and are safe"), ("b", "vaccines help"), ("c", "masks harm")])
}

proptest! {
    #[test]
    fn sentence_spans_are_ordered_nonempty_and_cover_text(t in text()) {
        let spans = segment_sentences(&t);
        for w in spans.windows(2) {
            prop_assert!(w[0].end <= w[1].start);
        }
        let mut covered = vec![false; t.len()];
        for s in &spans {
            prop_assert!(s.start < s.end && s.end <= t.len());
            prop_assert!(!s.text(&t).trim().is_empty());
            covered[s.start..s.end].iter_mut().for_each(|c| *c = true);
        }
        for (i, c) in t.char_indices() {
            if !c.is_whitespace() {
                prop_assert!(covered[i], "uncovered char {c:?} at {i} in {t:?}");
            }
        }
    }

    #[test]
    fn resegmenting_a_sentence_is_identity(t in text()) {
        for s in segment_sentences(&t) {
            let sentence = s.text(&t);
            prop_assert_eq!(segment_sentences(sentence), vec![Span::new(0, sentence.len())]);
        }
    }

    #[test]
    fn tokenization_is_idempotent(t in text()) {
        let toks = tokenize(&t);
        prop_assert_eq!(tokenize(&toks.join(" ")), toks.clone());
        let q = Query::new(&t);
        prop_assert!(q.content_tokens.iter().all(|c| q.tokens.contains(c)));
    }

    #[test]
    fn trust_lookup_ignores_case(domain in "[a-zA-Z]{1,8}\\.(com|org|GOV)") {
        let c = Corpus::new(Vec::<Document>::new(), ["nytimes.com", "who.int", "abc.gov"]).unwrap();
        prop_assert_eq!(trust_lookup(&domain, &c), trust_lookup(&domain.to_lowercase(), &c));
    }

    #[test]
    fn relevance_is_symmetric_and_bounded(a in text(), b in text()) {
        let ix = small_index();
        let ab = relevance(&tokenize(&a), &Query::new(&b), &ix);
        let ba = relevance(&tokenize(&b), &Query::new(&a), &ix);
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
        prop_assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn conditional_similarity_is_symmetric(items in perspectives(), q in text()) {
        let ix = small_index();
        let q = Query::new(&q);
        for a in &items {
            for b in &items {
                let ab = conditional_similarity(&a.perspective, &b.perspective, &q, &ix);
                let ba = conditional_similarity(&b.perspective, &a.perspective, &q, &ix);
                prop_assert_eq!(ab.to_bits(), ba.to_bits());
            }
        }
    }

    #[test]
    fn clusters_partition_the_input(items in perspectives(), theta in 0.0f64..1.2) {
        let ix = small_index();
        let q = Query::new("Should wearing masks be mandatory?");
        let clusters = cluster_perspectives(&items, &q, theta, &ix);
        let mut seen: Vec<String> = Vec::new();
        for label in StanceLabel::ALL {
            for g in clusters.bucket(label) {
                prop_assert_eq!(&g.members[0], &g.representative);
                for m in &g.members {
                    prop_assert_eq!(m.stance, label);
                    prop_assert!(conditional_similarity(m, &g.representative, &q, &ix) >= theta || m == &g.representative);
                    seen.push(m.doc_id.clone());
                }
            }
        }
        seen.sort();
        let mut expected: Vec<String> = items.iter().map(|i| i.perspective.doc_id.clone()).collect();
        expected.sort();
        prop_assert_eq!(seen, expected);
    }

    #[test]
    fn clustering_ignores_input_order(items in perspectives(), rot in 0usize..12) {
        let ix = small_index();
        let q = Query::new("masks");
        let mut shuffled = items.clone();
        if !shuffled.is_empty() {
            let r = rot % shuffled.len();
            shuffled.rotate_left(r);
            shuffled.reverse();
        }
        prop_assert_eq!(cluster_perspectives(&items, &q, 0.6, &ix), cluster_perspectives(&shuffled, &q, 0.6, &ix));
    }

    #[test]
    fn evidence_is_bounded_and_provenant(t in text()) {
        let source = Source::new("x.org", "X", SourceKind::Other).unwrap();
        let d = Document::new("d", "", "", t, source, None).unwrap();
        prop_assume!(!d.sentences.is_empty());
        let ix = Index::from_texts([("d", d.body.as_str())]);
        let q = Query::new("Should wearing masks be mandatory?");
        let p = extract_perspective(&d, &q, &ix, 0.7).unwrap();
        prop_assert!(d.sentences.contains(&p.span));
        prop_assert_eq!(p.span.text(&d.body), p.text.as_str());
        let ev = mine_evidence(&d, &p, &q, &ix);
        prop_assert!(ev.len() <= 3);
        for e in &ev {
            prop_assert!(e.consistent);
            prop_assert!(d.sentences.contains(&e.span));
            prop_assert!(e.span != p.span);
            prop_assert_eq!(e.span.text(&d.body), e.text.as_str());
        }
    }

    #[test]
    fn stance_is_deterministic(t in text()) {
        let q = Query::new("Should wearing masks be mandatory?");
        let a = classify_stance(&t, &q);
        prop_assert_eq!(a, classify_stance(&t, &q));
        prop_assert!((0.0..=1.0).contains(&a.confidence));
    }

    #[test]
    fn rouge_is_symmetric_and_bounded(a in text(), b in text()) {
        let ab = rouge2_f1(&a, &b);
        prop_assert!((ab - rouge2_f1(&b, &a)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn mse_is_zero_iff_equal(pred in prop::collection::vec(-1.0f64..1.0, 1..20), bump in 0usize..20) {
        prop_assert_eq!(mse(&pred, &pred).unwrap(), 0.0);
        let mut other = pred.clone();
        let i = bump % other.len();
        other[i] += 0.5;
        prop_assert!(mse(&pred, &other).unwrap() > 0.0);
    }
}

#[test]
fn off_topic_padding_cannot_create_polarity_below_gate() {
    let q = Query::new("Should wearing masks be mandatory?");
    let mut statement = String::from("The harbor opened.");
    for _ in 0..6 {
        let r = classify_stance(&statement, &q);
        assert_eq!(r.label, StanceLabel::Neutral);
        statement.push_str(" Ships never harm the safe harbor.");
    }
    // Enough overlap restores a polar label once the gate is crossed.
    let r = classify_stance("Mandatory masks are safe.", &q);
    assert_eq!(r.label, StanceLabel::Support);
}

#[test]
fn negator_window_pairs() {
    let q = Query::new("Should wearing masks be mandatory?");
    // Same cue/negator adjacency, different surrounding order.
    let pairs = [
        ("Masks are not safe.", "Not safe are masks."),
        ("Wearing masks is effective.", "Effective is wearing masks."),
        ("Masks never harm.", "Never harm, masks."),
    ];
    for (a, b) in pairs {
        assert_eq!(classify_stance(a, &q).label, classify_stance(b, &q).label, "{a} / {b}");
    }
}

#[test]
fn group_count_shrinks_as_theta_drops() {
    let ix = Index::from_texts([
        ("a", "masks reduce transmission in schools"),
        ("b", "masks reduce transmission"),
        ("c", "masks restrict breathing"),
        ("d", "transmission in schools drops"),
    ]);
    let q = Query::new("Should wearing masks be mandatory?");
    let mk = |id: &str, text: &str, score: f64| ScoredPerspective {
        perspective: Perspective {
            doc_id: id.into(),
            span: Span::new(0, text.len()),
            text: text.into(),
            relevance: 0.5,
            argument: 0.0,
            combined: 0.35,
            stance: StanceLabel::Support,
            stance_confidence: 0.4,
        },
        retrieval_score: score,
    };
    let items = [
        mk("a", "Masks reduce transmission in schools.", 4.0),
        mk("b", "Masks reduce transmission.", 3.0),
        mk("c", "Masks restrict breathing.", 2.0),
        mk("d", "Transmission in schools drops.", 1.0),
    ];
    let counts: Vec<usize> = [1.01, 0.6, 0.2]
        .iter()
        .map(|&theta| cluster_perspectives(&items, &q, theta, &ix).support.len())
        .collect();
    assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
    assert_eq!(counts[0], 4);
}

#[test]
fn normal_cdf_matches_erfc_oracle() {
    let mut x = -8.0;
    while x <= 8.0 {
        let oracle = 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2);
        assert!((normal_cdf(x) - oracle).abs() < 1e-7, "x = {x}");
        assert!((normal_sf(x) - (1.0 - oracle)).abs() < 1e-7, "x = {x}");
        x += 0.001;
    }
}

#[test]
fn p_value_decreases_with_z() {
    let mut prev = normal_sf(-10.0);
    let mut z = -10.0;
    while z < 10.0 {
        z += 0.0005;
        let p = normal_sf(z);
        assert!(p <= prev, "z = {z}");
        prev = p;
    }
}
