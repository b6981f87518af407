//! File formats and the command-line pipeline around `clams-core`.
//!
//! The pipeline runs `generate -> score -> evaluate -> report`. Each stage
//! reads and writes plain UTF-8 files so that external scorers (for example a
//! neural language model behind a Python script) can slot in between:
//!
//! | file | shape |
//! |------|-------|
//! | grammar (`*.avg`) | attribute-varying grammar, one statement per line |
//! | labeled lines | `True`/`False`, TAB, sentence |
//! | structured sets (`*.jsonl`) | one minimal set per line, see [`structured`] |
//! | scores (`*.jsonl`) | one score per line, see [`scores`] |
//! | vocabulary | one token per line |
//! | corpus | one whitespace-tokenized sentence per line |
//! | WALS features | `language<TAB>feature_id<TAB>value` |
//! | evaluation records (`*.jsonl`) | one per construction, see [`report`] |

pub mod cli;
pub mod files;
pub mod labeled;
pub mod report;
pub mod scores;
pub mod structured;

use std::io;

/// A problem reading one of the line-oriented input files.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: score is not finite")]
    NonFinite { line: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl FormatError {
    pub(crate) fn malformed(line: usize, message: impl Into<String>) -> Self {
        FormatError::Malformed {
            line,
            message: message.into(),
        }
    }
}
