//! Scoring minimal sets.
//!
//! Two protocols are supported. In *full-sentence* mode every sentence has a
//! score (e.g. a log-probability from a left-to-right model) and a set is
//! correct when the grammatical sentence beats every variant. In
//! *masked-focus* mode each candidate form at the focus position has a score
//! (e.g. from a bidirectional model); sets whose candidates fall outside the
//! model vocabulary are skipped.
//!
//! Comparisons are strict and exact: a tie is incorrect.

mod bigram;
mod reference;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::gen::MinimalSet;

pub use bigram::{train_bigram, BigramError, BigramModel, BOS, EOS, UNK};
pub use reference::{make_reference_scorer, ScorerBehavior};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoreMode {
    FullSentence,
    MaskedFocus,
}

/// Key of a masked-focus score: which set, which candidate form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MaskedKey {
    pub construction_id: String,
    pub set_index: usize,
    pub candidate: String,
}

impl MaskedKey {
    pub fn new(construction_id: &str, set_index: usize, candidate: &str) -> Self {
        MaskedKey {
            construction_id: construction_id.into(),
            set_index,
            candidate: candidate.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("score {0} is not finite")]
pub struct NonFiniteScore(pub f64);

/// Scores produced by one scorer. Higher means more probable. Only finite
/// values are admitted.
#[derive(Debug, Clone, PartialEq)]
pub enum ScoreTable {
    Full(BTreeMap<String, f64>),
    Masked(BTreeMap<MaskedKey, f64>),
}

impl ScoreTable {
    pub fn new(mode: ScoreMode) -> Self {
        match mode {
            ScoreMode::FullSentence => ScoreTable::Full(BTreeMap::new()),
            ScoreMode::MaskedFocus => ScoreTable::Masked(BTreeMap::new()),
        }
    }

    pub fn mode(&self) -> ScoreMode {
        match self {
            ScoreTable::Full(_) => ScoreMode::FullSentence,
            ScoreTable::Masked(_) => ScoreMode::MaskedFocus,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ScoreTable::Full(m) => m.len(),
            ScoreTable::Masked(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Inserts a sentence score, returning the previous value if any.
    ///
    /// # Panics
    /// On a masked-mode table.
    pub fn insert_full(
        &mut self,
        sentence: &str,
        score: f64,
    ) -> Result<Option<f64>, NonFiniteScore> {
        check_finite(score)?;
        match self {
            ScoreTable::Full(m) => Ok(m.insert(sentence.to_string(), score)),
            ScoreTable::Masked(_) => panic!("insert_full on a masked-focus table"),
        }
    }

    /// Inserts a candidate score, returning the previous value if any.
    ///
    /// # Panics
    /// On a full-sentence table.
    pub fn insert_masked(
        &mut self,
        key: MaskedKey,
        score: f64,
    ) -> Result<Option<f64>, NonFiniteScore> {
        check_finite(score)?;
        match self {
            ScoreTable::Masked(m) => Ok(m.insert(key, score)),
            ScoreTable::Full(_) => panic!("insert_masked on a full-sentence table"),
        }
    }

    pub fn sentence_score(&self, sentence: &str) -> Option<f64> {
        match self {
            ScoreTable::Full(m) => m.get(sentence).copied(),
            ScoreTable::Masked(_) => None,
        }
    }

    pub fn candidate_score(
        &self,
        construction_id: &str,
        set_index: usize,
        candidate: &str,
    ) -> Option<f64> {
        match self {
            ScoreTable::Masked(m) => m
                .get(&MaskedKey::new(construction_id, set_index, candidate))
                .copied(),
            ScoreTable::Full(_) => None,
        }
    }

    /// Applies `f` to every score. Used to check that evaluation only depends
    /// on score order.
    pub fn map_scores(&self, f: impl Fn(f64) -> f64) -> Self {
        match self {
            ScoreTable::Full(m) => {
                ScoreTable::Full(m.iter().map(|(k, v)| (k.clone(), f(*v))).collect())
            }
            ScoreTable::Masked(m) => {
                ScoreTable::Masked(m.iter().map(|(k, v)| (k.clone(), f(*v))).collect())
            }
        }
    }
}

fn check_finite(score: f64) -> Result<(), NonFiniteScore> {
    if score.is_finite() {
        Ok(())
    } else {
        Err(NonFiniteScore(score))
    }
}

/// A model vocabulary; membership is exact string match.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: BTreeSet<String>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, token: &str) -> bool {
        self.tokens.insert(token.to_string())
    }

    pub fn contains(&self, token: &str) -> bool {
        self.tokens.contains(token)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }
}

impl<S: AsRef<str>> FromIterator<S> for Vocabulary {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Vocabulary {
            tokens: iter.into_iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }
}

/// Per-construction outcome.
///
/// `no_variants` counts sets without any ungrammatical sentence; they are
/// left out of every denominator and are not "skipped".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub construction_id: String,
    pub evaluated: usize,
    pub correct: usize,
    pub skipped: usize,
    pub no_variants: usize,
}

impl EvalResult {
    fn empty(construction_id: &str) -> Self {
        EvalResult {
            construction_id: construction_id.to_string(),
            evaluated: 0,
            correct: 0,
            skipped: 0,
            no_variants: 0,
        }
    }

    /// `correct / evaluated`, undefined when nothing was evaluated.
    pub fn accuracy(&self) -> Option<f64> {
        (self.evaluated > 0).then(|| self.correct as f64 / self.evaluated as f64)
    }
}

/// How equal scores are judged. Only one policy exists: ties lose.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TiePolicy {
    #[default]
    Incorrect,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("score table is in {found:?} mode, expected {expected:?}")]
    WrongMode {
        expected: ScoreMode,
        found: ScoreMode,
    },
    #[error("no score for sentence `{0}`")]
    MissingSentence(String),
    #[error("no score for candidate `{candidate}` of {construction_id}#{set_index}")]
    MissingCandidate {
        construction_id: String,
        set_index: usize,
        candidate: String,
    },
    #[error("{construction_id}#{set_index}: focus form spans several tokens; masked scoring needs single-token forms")]
    MultiTokenFocus {
        construction_id: String,
        set_index: usize,
    },
}

/// Whole-sentence protocol. Results come back one per construction, ordered
/// by construction id.
pub fn evaluate_full(
    sets: &[MinimalSet],
    scores: &ScoreTable,
    tie_policy: TiePolicy,
) -> Result<Vec<EvalResult>, EvalError> {
    let ScoreTable::Full(table) = scores else {
        return Err(EvalError::WrongMode {
            expected: ScoreMode::FullSentence,
            found: scores.mode(),
        });
    };
    let lookup = |sentence: String| -> Result<f64, EvalError> {
        table
            .get(&sentence)
            .copied()
            .ok_or(EvalError::MissingSentence(sentence))
    };
    let mut results: BTreeMap<&str, EvalResult> = BTreeMap::new();
    for set in sets {
        let r = results
            .entry(&set.construction_id)
            .or_insert_with(|| EvalResult::empty(&set.construction_id));
        if set.ungrammatical.is_empty() {
            r.no_variants += 1;
            continue;
        }
        let good = lookup(set.grammatical.render())?;
        let mut wins = true;
        for u in &set.ungrammatical {
            let bad = lookup(u.render())?;
            wins &= beats(good, bad, tie_policy);
        }
        r.evaluated += 1;
        r.correct += usize::from(wins);
    }
    Ok(results.into_values().collect())
}

/// Masked-focus protocol. A set is skipped when its grammatical form or any
/// variant form is missing from `vocab`.
pub fn evaluate_masked(
    sets: &[MinimalSet],
    scores: &ScoreTable,
    vocab: &Vocabulary,
) -> Result<Vec<EvalResult>, EvalError> {
    if scores.mode() != ScoreMode::MaskedFocus {
        return Err(EvalError::WrongMode {
            expected: ScoreMode::MaskedFocus,
            found: scores.mode(),
        });
    }
    let mut results: BTreeMap<&str, EvalResult> = BTreeMap::new();
    for set in sets {
        let r = results
            .entry(&set.construction_id)
            .or_insert_with(|| EvalResult::empty(&set.construction_id));
        if set.ungrammatical.is_empty() {
            r.no_variants += 1;
            continue;
        }
        if !set.focus.is_single_token() {
            return Err(EvalError::MultiTokenFocus {
                construction_id: set.construction_id.clone(),
                set_index: set.set_index,
            });
        }
        let good_form = &set.focus.grammatical_form.tokens()[0];
        let variants = set.focus.variant_forms.iter().map(|v| &v.tokens()[0]);
        if !vocab.contains(good_form) || variants.clone().any(|v| !vocab.contains(v)) {
            r.skipped += 1;
            continue;
        }
        let lookup = |candidate: &str| {
            scores
                .candidate_score(&set.construction_id, set.set_index, candidate)
                .ok_or_else(|| EvalError::MissingCandidate {
                    construction_id: set.construction_id.clone(),
                    set_index: set.set_index,
                    candidate: candidate.to_string(),
                })
        };
        let good = lookup(good_form)?;
        let mut wins = true;
        for v in variants {
            wins &= beats(good, lookup(v)?, TiePolicy::Incorrect);
        }
        r.evaluated += 1;
        r.correct += usize::from(wins);
    }
    Ok(results.into_values().collect())
}

fn beats(good: f64, bad: f64, policy: TiePolicy) -> bool {
    match policy {
        TiePolicy::Incorrect => good > bad,
    }
}

#[cfg(test)]
mod tests;
