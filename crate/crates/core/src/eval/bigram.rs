use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::Vocabulary;

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BigramError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("smoothing constant must be a positive finite number, got {0}")]
    BadSmoothing(f64),
    #[error("vocabulary would be empty (limit {limit}); every token would be unknown")]
    EmptyVocabulary { limit: usize },
}

/// Add-k smoothed word bigram model with a closed vocabulary.
///
/// The outcome space for every history is the vocabulary words, the
/// end-of-sentence marker and the unknown class:
///
/// ```text
/// P(w | h) = (c(h, w) + k) / (c(h) + k * (V + 1))
/// ```
///
/// where `V` counts vocabulary words plus the end marker, and the extra `1`
/// is the unknown class. `c(h)` is the number of times `h` occurs as a
/// history, so the distribution sums to one for every `h`, seen or not.
#[derive(Debug, Clone)]
pub struct BigramModel {
    vocabulary: Vocabulary,
    k: f64,
    bigrams: BTreeMap<(String, String), u64>,
    histories: BTreeMap<String, u64>,
}

/// Trains on whitespace-tokenized sentences. The vocabulary keeps the
/// `vocab_size_limit` most frequent tokens (ties broken lexicographically);
/// everything else, including literal marker strings, becomes [`UNK`].
pub fn train_bigram<S: AsRef<str>>(
    corpus: &[Vec<S>],
    k: f64,
    vocab_size_limit: usize,
) -> Result<BigramModel, BigramError> {
    if corpus.is_empty() {
        return Err(BigramError::EmptyCorpus);
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(BigramError::BadSmoothing(k));
    }

    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for tok in corpus.iter().flatten().map(AsRef::as_ref) {
        if !is_marker(tok) {
            *freq.entry(tok).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, u64)> = freq.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked.truncate(vocab_size_limit);
    if ranked.is_empty() {
        return Err(BigramError::EmptyVocabulary {
            limit: vocab_size_limit,
        });
    }
    let vocabulary: Vocabulary = ranked.iter().map(|(t, _)| *t).collect();

    let mut model = BigramModel {
        vocabulary,
        k,
        bigrams: BTreeMap::new(),
        histories: BTreeMap::new(),
    };
    for sentence in corpus {
        let seq = model.wrap(sentence.iter().map(AsRef::as_ref));
        for pair in seq.windows(2) {
            *model
                .bigrams
                .entry((pair[0].to_string(), pair[1].to_string()))
                .or_default() += 1;
            *model.histories.entry(pair[0].to_string()).or_default() += 1;
        }
    }
    Ok(model)
}

fn is_marker(tok: &str) -> bool {
    tok == BOS || tok == EOS || tok == UNK
}

impl BigramModel {
    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn smoothing(&self) -> f64 {
        self.k
    }

    /// Size of the outcome space: words + end marker + unknown.
    pub fn outcome_count(&self) -> usize {
        self.vocabulary.len() + 2
    }

    /// Every token that can follow a history.
    pub fn outcomes(&self) -> impl Iterator<Item = &str> {
        self.vocabulary.iter().chain([EOS, UNK])
    }

    /// Every token that can act as a history.
    pub fn histories(&self) -> impl Iterator<Item = &str> {
        core::iter::once(BOS)
            .chain(self.vocabulary.iter())
            .chain([UNK])
    }

    /// Maps a surface token to its model token.
    pub fn normalize<'a>(&self, token: &'a str) -> &'a str {
        if self.vocabulary.contains(token) {
            token
        } else {
            UNK
        }
    }

    fn wrap<'a>(&self, tokens: impl Iterator<Item = &'a str>) -> Vec<&'a str> {
        let mut seq = Vec::new();
        seq.push(BOS);
        seq.extend(tokens.map(|t| self.normalize(t)));
        seq.push(EOS);
        seq
    }

    /// `P(next | history)` for already-normalized tokens.
    pub fn probability(&self, history: &str, next: &str) -> f64 {
        let pair = self
            .bigrams
            .get(&(history.to_string(), next.to_string()))
            .copied()
            .unwrap_or(0) as f64;
        let hist = self.histories.get(history).copied().unwrap_or(0) as f64;
        (pair + self.k) / (hist + self.k * self.outcome_count() as f64)
    }

    /// Sum of natural-log conditional probabilities over the sentence wrapped
    /// in boundary markers. Unknown tokens score as [`UNK`].
    pub fn score_sentence<S: AsRef<str>>(&self, tokens: &[S]) -> f64 {
        let seq = self.wrap(tokens.iter().map(AsRef::as_ref));
        seq.windows(2)
            .map(|w| libm::log(self.probability(w[0], w[1])))
            .sum()
    }
}
