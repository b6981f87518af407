//! Score files: one JSON object per line.
//!
//! Full-sentence mode:
//!
//! ```json
//! {"sentence":"je pense","score":-4.25}
//! ```
//!
//! Masked-focus mode:
//!
//! ```json
//! {"construction_id":"french","set_index":0,"candidate":"pense","score":-1.5}
//! ```
//!
//! `score` may also be given as a string (`"-4.25"`); non-finite values such
//! as `"NaN"` are rejected. Extra keys are ignored. A repeated key keeps the
//! last score and is counted in [`LoadedScores::duplicates`].

use std::io::{self, BufRead, Write};

use clams_core::eval::{MaskedKey, ScoreMode, ScoreTable};
use serde::{Deserialize, Serialize};

use crate::FormatError;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawScore {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
struct FullLine {
    sentence: String,
    score: RawScore,
}

#[derive(Debug, Deserialize)]
struct MaskedLine {
    construction_id: String,
    set_index: usize,
    candidate: String,
    score: RawScore,
}

#[derive(Serialize)]
struct FullOut<'a> {
    sentence: &'a str,
    score: f64,
}

#[derive(Serialize)]
struct MaskedOut<'a> {
    construction_id: &'a str,
    set_index: usize,
    candidate: &'a str,
    score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScores {
    pub table: ScoreTable,
    /// Lines whose key had already been seen.
    pub duplicates: usize,
}

pub fn load_scores<R: BufRead>(source: R, mode: ScoreMode) -> Result<LoadedScores, FormatError> {
    let mut table = ScoreTable::new(mode);
    let mut duplicates = 0;
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |e: serde_json::Error| FormatError::malformed(line_no, e.to_string());
        let previous = match mode {
            ScoreMode::FullSentence => {
                let rec: FullLine = serde_json::from_str(&line).map_err(bad)?;
                let score = finite(rec.score, line_no)?;
                table.insert_full(&rec.sentence, score)
            }
            ScoreMode::MaskedFocus => {
                let rec: MaskedLine = serde_json::from_str(&line).map_err(bad)?;
                let score = finite(rec.score, line_no)?;
                table.insert_masked(
                    MaskedKey::new(&rec.construction_id, rec.set_index, &rec.candidate),
                    score,
                )
            }
        }
        .map_err(|_| FormatError::NonFinite { line: line_no })?;
        if previous.is_some() {
            duplicates += 1;
        }
    }
    Ok(LoadedScores { table, duplicates })
}

fn finite(raw: RawScore, line: usize) -> Result<f64, FormatError> {
    let value = match raw {
        RawScore::Number(v) => v,
        RawScore::Text(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| FormatError::malformed(line, format!("score `{s}` is not a number")))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(FormatError::NonFinite { line })
    }
}

/// Writes a table in key order. Returns the number of bytes written.
pub fn write_scores<W: Write>(table: &ScoreTable, mut sink: W) -> io::Result<usize> {
    let mut written = 0;
    let mut emit = |json: serde_json::Result<String>| -> io::Result<()> {
        let mut line = json.map_err(io::Error::other)?;
        line.push('\n');
        sink.write_all(line.as_bytes())?;
        written += line.len();
        Ok(())
    };
    match table {
        ScoreTable::Full(map) => {
            for (sentence, &score) in map {
                emit(serde_json::to_string(&FullOut { sentence, score }))?;
            }
        }
        ScoreTable::Masked(map) => {
            for (key, &score) in map {
                emit(serde_json::to_string(&MaskedOut {
                    construction_id: &key.construction_id,
                    set_index: key.set_index,
                    candidate: &key.candidate,
                    score,
                }))?;
            }
        }
    }
    sink.flush()?;
    Ok(written)
}
