//! Structured minimal-set records: one JSON object per line.
//!
//! ```json
//! {"construction_id":"french","set_index":0,"grammatical":"je pense","ungrammatical":["je penses"],"token_index":1,"grammatical_form":"pense","variant_forms":["penses"]}
//! ```
//!
//! Sentences and forms are stored rendered (tokens joined by single spaces).
//! `token_index` is the position of the first focus token. Keys always appear
//! in the order shown.

use std::io::{self, BufRead, Write};

use clams_core::avg::Terminal;
use clams_core::gen::{Focus, MinimalSet, Sentence};
use serde::{Deserialize, Serialize};

use crate::FormatError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetRecord {
    pub construction_id: String,
    pub set_index: usize,
    pub grammatical: String,
    pub ungrammatical: Vec<String>,
    pub token_index: usize,
    pub grammatical_form: String,
    pub variant_forms: Vec<String>,
}

impl From<&MinimalSet> for SetRecord {
    fn from(s: &MinimalSet) -> Self {
        SetRecord {
            construction_id: s.construction_id.clone(),
            set_index: s.set_index,
            grammatical: s.grammatical.render(),
            ungrammatical: s.ungrammatical.iter().map(Sentence::render).collect(),
            token_index: s.focus.token_index,
            grammatical_form: s.focus.grammatical_form.to_string(),
            variant_forms: s
                .focus
                .variant_forms
                .iter()
                .map(ToString::to_string)
                .collect(),
        }
    }
}

impl SetRecord {
    fn into_set(self) -> Result<MinimalSet, String> {
        let sentence = |text: &str, label: bool| {
            let tokens: Vec<String> = text.split_whitespace().map(String::from).collect();
            if tokens.is_empty() {
                Err("empty sentence".to_string())
            } else {
                Ok(Sentence { tokens, label })
            }
        };
        let form = |text: &str| Terminal::parse(text).ok_or_else(|| "empty focus form".to_string());
        if self.ungrammatical.len() != self.variant_forms.len() {
            return Err(format!(
                "{} ungrammatical sentences but {} variant forms",
                self.ungrammatical.len(),
                self.variant_forms.len()
            ));
        }
        Ok(MinimalSet {
            grammatical: sentence(&self.grammatical, true)?,
            ungrammatical: self
                .ungrammatical
                .iter()
                .map(|u| sentence(u, false))
                .collect::<Result<_, _>>()?,
            focus: Focus {
                token_index: self.token_index,
                grammatical_form: form(&self.grammatical_form)?,
                variant_forms: self
                    .variant_forms
                    .iter()
                    .map(|v| form(v))
                    .collect::<Result<_, _>>()?,
            },
            construction_id: self.construction_id,
            set_index: self.set_index,
        })
    }
}

/// Writes one record per set. Returns the number of bytes written.
pub fn write_structured<W: Write>(sets: &[MinimalSet], mut sink: W) -> io::Result<usize> {
    let mut written = 0;
    for set in sets {
        let mut line = serde_json::to_string(&SetRecord::from(set)).map_err(io::Error::other)?;
        line.push('\n');
        sink.write_all(line.as_bytes())?;
        written += line.len();
    }
    sink.flush()?;
    Ok(written)
}

/// Reads records written by [`write_structured`]. Blank lines are ignored.
pub fn read_structured<R: BufRead>(source: R) -> Result<Vec<MinimalSet>, FormatError> {
    let mut sets = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: SetRecord = serde_json::from_str(&line)
            .map_err(|e| FormatError::malformed(i + 1, e.to_string()))?;
        sets.push(
            record
                .into_set()
                .map_err(|m| FormatError::malformed(i + 1, m))?,
        );
    }
    Ok(sets)
}
