//! The labeled-sentence listing: one sentence per line, grammatical first.
//!
//! ```text
//! True<TAB>je pense
//! False<TAB>je penses
//! ```

use std::io::{self, Write};

use clams_core::gen::MinimalSet;

/// Writes `<True|False>\t<sentence>\n` for the grammatical sentence and then
/// each ungrammatical one. Returns the number of bytes written.
pub fn write_labeled_lines<W: Write>(sets: &[MinimalSet], mut sink: W) -> io::Result<usize> {
    let mut written = 0;
    for set in sets {
        for sentence in set.sentences() {
            let label = if sentence.label { "True" } else { "False" };
            let line = format!("{label}\t{}\n", sentence.render());
            sink.write_all(line.as_bytes())?;
            written += line.len();
        }
    }
    sink.flush()?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clams_core::{generate, parse_grammar};

    #[test]
    fn empty_input_writes_nothing() {
        let mut buf = Vec::new();
        assert_eq!(write_labeled_lines(&[], &mut buf).unwrap(), 0);
        assert!(buf.is_empty());
    }

    #[test]
    fn zero_variant_set_is_one_line() {
        let g = parse_grammar(
            "vary: V[1,s]\nS[] -> je V[1,s]\nV[1,s] -> pense\nV[2,s] -> penses\n",
            "f",
        )
        .unwrap();
        let sets = generate(&g).unwrap().sets;
        let mut buf = Vec::new();
        let n = write_labeled_lines(&sets, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "True\tje pense\n");
        assert_eq!(n, 14);
    }
}
