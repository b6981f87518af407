//! Small plain-text inputs: vocabularies, training corpora, WALS features.

use std::collections::BTreeMap;
use std::io::BufRead;

use clams_core::eval::Vocabulary;
use clams_core::metrics::ComplexityProfile;

use crate::FormatError;

/// One token per line; surrounding whitespace is trimmed and blank lines are
/// ignored.
pub fn read_vocabulary<R: BufRead>(source: R) -> Result<Vocabulary, FormatError> {
    let mut vocab = Vocabulary::new();
    for line in source.lines() {
        let line = line?;
        let token = line.trim();
        if !token.is_empty() {
            vocab.insert(token);
        }
    }
    Ok(vocab)
}

/// One sentence per line, whitespace tokenized. Blank lines are dropped.
pub fn read_corpus<R: BufRead>(source: R) -> Result<Vec<Vec<String>>, FormatError> {
    let mut corpus = Vec::new();
    for line in source.lines() {
        let tokens: Vec<String> = line?.split_whitespace().map(String::from).collect();
        if !tokens.is_empty() {
            corpus.push(tokens);
        }
    }
    Ok(corpus)
}

/// `language<TAB>feature_id<TAB>value` lines, `#` comments allowed. Values
/// must lie in `[0, 1]`. Profiles come back ordered by language.
pub fn read_wals<R: BufRead>(source: R) -> Result<Vec<ComplexityProfile>, FormatError> {
    let mut by_language: BTreeMap<String, Vec<(String, f64)>> = BTreeMap::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        let [language, feature, value] = fields[..] else {
            return Err(FormatError::malformed(
                line_no,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        };
        let value: f64 = value.parse().map_err(|_| {
            FormatError::malformed(line_no, format!("value `{value}` is not a number"))
        })?;
        if !(0.0..=1.0).contains(&value) {
            return Err(FormatError::malformed(
                line_no,
                format!("value {value} outside [0, 1]"),
            ));
        }
        by_language
            .entry(language.to_string())
            .or_default()
            .push((feature.to_string(), value));
    }
    Ok(by_language
        .into_iter()
        .map(|(language, features)| ComplexityProfile { language, features })
        .collect())
}
