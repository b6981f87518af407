use super::*;
use crate::avg::Terminal;
use crate::gen::{Focus, Sentence};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

/// `subject` + focus form; the variant swaps the form.
fn pair(cid: &str, idx: usize, subject: &str, good: &str, bad: &[&str]) -> MinimalSet {
    let sentence = |form: &str, label| Sentence {
        tokens: words(&format!("{subject} {form}")),
        label,
    };
    MinimalSet {
        construction_id: cid.into(),
        set_index: idx,
        grammatical: sentence(good, true),
        ungrammatical: bad.iter().map(|b| sentence(b, false)).collect(),
        focus: Focus {
            token_index: subject.split_whitespace().count(),
            grammatical_form: Terminal::parse(good).unwrap(),
            variant_forms: bad.iter().map(|b| Terminal::parse(b).unwrap()).collect(),
        },
    }
}

fn full_table(entries: &[(&str, f64)]) -> ScoreTable {
    let mut t = ScoreTable::new(ScoreMode::FullSentence);
    for (s, v) in entries {
        t.insert_full(s, *v).unwrap();
    }
    t
}

#[test]
fn full_oracle_and_constant() {
    let sets = vec![pair("c", 0, "the writer", "laughs", &["laugh"])];
    let oracle = make_reference_scorer(&sets, ScorerBehavior::Oracle, ScoreMode::FullSentence);
    let r = evaluate_full(&sets, &oracle, TiePolicy::Incorrect).unwrap();
    assert_eq!(r[0].accuracy(), Some(1.0));
    let constant = make_reference_scorer(&sets, ScorerBehavior::Constant, ScoreMode::FullSentence);
    let r = evaluate_full(&sets, &constant, TiePolicy::Incorrect).unwrap();
    assert_eq!(r[0].accuracy(), Some(0.0));
}

#[test]
fn full_three_of_four() {
    let sets = vec![
        pair("c", 0, "a", "x", &["y"]),
        pair("c", 1, "b", "x", &["y"]),
        pair("c", 2, "c", "x", &["y"]),
        pair("c", 3, "d", "x", &["y"]),
    ];
    let table = full_table(&[
        ("a x", -1.0),
        ("a y", -2.0),
        ("b x", -3.0),
        ("b y", -2.5),
        ("c x", -0.5),
        ("c y", -0.7),
        ("d x", -9.0),
        ("d y", -9.5),
    ]);
    let r = evaluate_full(&sets, &table, TiePolicy::Incorrect).unwrap();
    assert_eq!((r[0].evaluated, r[0].correct, r[0].skipped), (4, 3, 0));
    assert_eq!(r[0].accuracy(), Some(0.75));
}

#[test]
fn full_must_beat_every_variant() {
    let sets = vec![pair("c", 0, "je", "pense", &["penses", "pensons"])];
    let table = full_table(&[
        ("je pense", -1.0),
        ("je penses", -2.0),
        ("je pensons", -1.0),
    ]);
    let r = evaluate_full(&sets, &table, TiePolicy::Incorrect).unwrap();
    assert_eq!(r[0].correct, 0);
}

#[test]
fn full_missing_sentence_is_an_error() {
    let sets = vec![pair("c", 0, "the writer", "laughs", &["laugh"])];
    let table = full_table(&[("the writer laughs", -1.0)]);
    assert_eq!(
        evaluate_full(&sets, &table, TiePolicy::Incorrect).unwrap_err(),
        EvalError::MissingSentence("the writer laugh".into())
    );
}

#[test]
fn zero_variant_sets_leave_the_denominator() {
    let sets = vec![
        pair("c", 0, "je", "pense", &[]),
        pair("c", 1, "tu", "penses", &["pense"]),
    ];
    let table = full_table(&[("tu penses", 0.0), ("tu pense", -1.0)]);
    let r = evaluate_full(&sets, &table, TiePolicy::Incorrect).unwrap();
    assert_eq!((r[0].evaluated, r[0].correct, r[0].no_variants), (1, 1, 1));
}

#[test]
fn results_grouped_by_construction() {
    let sets = vec![
        pair("b", 0, "x", "g", &["u"]),
        pair("a", 0, "x", "g", &["u"]),
    ];
    let oracle = make_reference_scorer(&sets, ScorerBehavior::Oracle, ScoreMode::FullSentence);
    let r = evaluate_full(&sets, &oracle, TiePolicy::Incorrect).unwrap();
    let ids: Vec<_> = r.iter().map(|r| r.construction_id.as_str()).collect();
    assert_eq!(ids, ["a", "b"]);
}

#[test]
fn wrong_mode() {
    let sets = vec![pair("c", 0, "x", "g", &["u"])];
    let masked = ScoreTable::new(ScoreMode::MaskedFocus);
    assert!(matches!(
        evaluate_full(&sets, &masked, TiePolicy::Incorrect),
        Err(EvalError::WrongMode { .. })
    ));
    let full = ScoreTable::new(ScoreMode::FullSentence);
    assert!(matches!(
        evaluate_masked(&sets, &full, &Vocabulary::new()),
        Err(EvalError::WrongMode { .. })
    ));
}

#[test]
fn non_finite_scores_rejected() {
    let mut t = ScoreTable::new(ScoreMode::FullSentence);
    assert!(t.insert_full("a", f64::NAN).is_err());
    assert!(t.insert_full("a", f64::INFINITY).is_err());
    assert_eq!(t.insert_full("a", 1.0).unwrap(), None);
    assert_eq!(t.insert_full("a", 2.0).unwrap(), Some(1.0));
    assert_eq!(t.len(), 1);
}

/// Ten sets; sets 0..4 have an out-of-vocabulary form. Of the remaining six,
/// set 9 loses (a tie).
fn masked_fixture() -> (Vec<MinimalSet>, ScoreTable, Vocabulary) {
    let mut sets = Vec::new();
    let mut table = ScoreTable::new(ScoreMode::MaskedFocus);
    let mut vocab = Vocabulary::new();
    for i in 0..10 {
        let good = format!("v{i}s");
        let bad = format!("v{i}p");
        sets.push(pair("m", i, "the writer", &good, &[&bad]));
        match i {
            0 | 1 => {
                vocab.insert(&good);
            }
            2 => {
                vocab.insert(&bad);
            }
            3 => {}
            _ => {
                vocab.insert(&good);
                vocab.insert(&bad);
            }
        }
        let bad_score = if i == 9 { -1.0 } else { -2.0 };
        table
            .insert_masked(MaskedKey::new("m", i, &good), -1.0)
            .unwrap();
        table
            .insert_masked(MaskedKey::new("m", i, &bad), bad_score)
            .unwrap();
    }
    (sets, table, vocab)
}

#[test]
fn masked_skip_accounting() {
    let (sets, table, vocab) = masked_fixture();
    let r = evaluate_masked(&sets, &table, &vocab).unwrap();
    assert_eq!((r[0].evaluated, r[0].skipped, r[0].correct), (6, 4, 5));
    assert_eq!(r[0].accuracy(), Some(5.0 / 6.0));
}

#[test]
fn masked_empty_vocabulary_skips_everything() {
    let (sets, table, _) = masked_fixture();
    let r = evaluate_masked(&sets, &table, &Vocabulary::new()).unwrap();
    assert_eq!((r[0].evaluated, r[0].skipped), (0, 10));
    assert_eq!(r[0].accuracy(), None);
}

#[test]
fn masked_oracle_with_full_vocab() {
    let sets: Vec<_> = (0..5)
        .map(|i| pair("m", i, "the writer", "laughs", &["laugh"]))
        .collect();
    let vocab: Vocabulary = ["laughs", "laugh"].into_iter().collect();
    let oracle = make_reference_scorer(&sets, ScorerBehavior::Oracle, ScoreMode::MaskedFocus);
    let r = evaluate_masked(&sets, &oracle, &vocab).unwrap();
    assert_eq!(
        (r[0].evaluated, r[0].skipped, r[0].accuracy()),
        (5, 0, Some(1.0))
    );
}

#[test]
fn masked_rejects_multi_token_focus() {
    let sets = vec![pair("m", 0, "the writer", "likes to", &["like to"])];
    let vocab: Vocabulary = ["likes", "like", "to"].into_iter().collect();
    let table = ScoreTable::new(ScoreMode::MaskedFocus);
    assert!(matches!(
        evaluate_masked(&sets, &table, &vocab),
        Err(EvalError::MultiTokenFocus { .. })
    ));
}

#[test]
fn masked_missing_candidate() {
    let sets = vec![pair("m", 0, "the writer", "laughs", &["laugh"])];
    let vocab: Vocabulary = ["laughs", "laugh"].into_iter().collect();
    let mut table = ScoreTable::new(ScoreMode::MaskedFocus);
    table
        .insert_masked(MaskedKey::new("m", 0, "laughs"), 0.0)
        .unwrap();
    assert!(matches!(
        evaluate_masked(&sets, &table, &vocab),
        Err(EvalError::MissingCandidate { .. })
    ));
}

#[test]
fn adversary_scores_zero() {
    let sets: Vec<_> = (0..3)
        .map(|i| pair("c", i, &format!("n{i}"), "g", &["u"]))
        .collect();
    let adv = make_reference_scorer(&sets, ScorerBehavior::Adversary, ScoreMode::FullSentence);
    assert_eq!(
        evaluate_full(&sets, &adv, TiePolicy::Incorrect).unwrap()[0].accuracy(),
        Some(0.0)
    );
}

#[test]
fn seeded_random_is_reproducible() {
    let sets: Vec<_> = (0..50)
        .map(|i| pair("c", i, &format!("n{i}"), "g", &["u"]))
        .collect();
    let a = make_reference_scorer(
        &sets,
        ScorerBehavior::SeededRandom(7),
        ScoreMode::FullSentence,
    );
    let b = make_reference_scorer(
        &sets,
        ScorerBehavior::SeededRandom(7),
        ScoreMode::FullSentence,
    );
    let c = make_reference_scorer(
        &sets,
        ScorerBehavior::SeededRandom(8),
        ScoreMode::FullSentence,
    );
    assert_eq!(a, b);
    assert_ne!(a, c);
}

// Bigram oracle: one sentence "a b", k = 1. Outcomes {a, b, </s>, <unk>};
// every history occurs once, so P(x | h) = (c(h, x) + 1) / (1 + 4).
#[test]
fn bigram_hand_arithmetic() {
    let m = train_bigram(&[words("a b")], 1.0, 10).unwrap();
    assert_eq!(m.outcome_count(), 4);
    assert!((m.probability("a", "b") - 0.4).abs() < 1e-12);
    assert!((m.probability("a", "a") - 0.2).abs() < 1e-12);
    assert!((m.probability(UNK, "a") - 0.25).abs() < 1e-12);
    let expected = libm::log(0.4) + libm::log(0.2);
    assert!((m.score_sentence(&["a"]) - expected).abs() < 1e-12);
}

#[test]
fn bigram_normalizes_for_every_history() {
    let corpus = [
        words("the writer laughs"),
        words("the writers laugh"),
        words("writers laugh loudly"),
    ];
    for k in [0.01, 0.5, 1.0, 3.0] {
        let m = train_bigram(&corpus, k, 4).unwrap();
        for h in m.histories() {
            let total: f64 = m.outcomes().map(|w| m.probability(h, w)).sum();
            assert!((total - 1.0).abs() < 1e-9, "history {h}: {total}");
        }
    }
}

#[test]
fn bigram_vocabulary_truncation_ties_lexicographic() {
    let corpus = [words("b a c"), words("c a b d")];
    let m = train_bigram(&corpus, 1.0, 2).unwrap();
    // a: 2, b: 2, c: 2, d: 1 -> the two lexicographically smallest of the tied.
    let v: Vec<_> = m.vocabulary().iter().collect();
    assert_eq!(v, ["a", "b"]);
    assert_eq!(m.normalize("c"), UNK);
}

#[test]
fn bigram_errors() {
    let empty: [Vec<String>; 0] = [];
    assert_eq!(
        train_bigram(&empty, 1.0, 5).unwrap_err(),
        BigramError::EmptyCorpus
    );
    assert!(matches!(
        train_bigram(&[words("a")], 0.0, 5),
        Err(BigramError::BadSmoothing(_))
    ));
    assert!(matches!(
        train_bigram(&[words("a")], f64::NAN, 5),
        Err(BigramError::BadSmoothing(_))
    ));
    assert!(matches!(
        train_bigram(&[words("a")], 1.0, 0),
        Err(BigramError::EmptyVocabulary { limit: 0 })
    ));
    assert!(matches!(
        train_bigram(&[words("<s> <unk>")], 1.0, 5),
        Err(BigramError::EmptyVocabulary { .. })
    ));
}

#[test]
fn bigram_order_sensitivity() {
    let corpus = [words("a b"), words("a b c")];
    let m = train_bigram(&corpus, 1.0, 10).unwrap();
    assert!(m.score_sentence(&["a", "b"]) > m.score_sentence(&["b", "a"]));
}

#[test]
fn bigram_every_factor_below_one() {
    // Each conditional factor is < 1, so every term of a score is negative.
    let m = train_bigram(&[words("a a a a"), words("a")], 0.1, 10).unwrap();
    for h in m.histories() {
        for w in m.outcomes() {
            let p = m.probability(h, w);
            assert!(p > 0.0 && p < 1.0, "P({w}|{h}) = {p}");
        }
    }
    assert!(m.score_sentence::<&str>(&[]) < 0.0);
}
