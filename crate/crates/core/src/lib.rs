//! Attribute-varying grammars (AVGs) and the machinery around them.
//!
//! An AVG is a flat, non-recursive template grammar. Templates (`S[] -> ...`)
//! mix literal tokens with references to attributed preterminals, and a single
//! `vary:` statement picks out which preterminal definitions supply the
//! ungrammatical substitutions. Expanding a grammar yields *minimal sets*: one
//! grammatical sentence plus its ungrammatical variants, differing only at the
//! focus position.
//!
//! ```text
//! vary: V[]
//! S[] -> je V[1,s]
//! V[1,s] -> pense
//! V[2,s] -> penses
//! V[1,p] -> pensons
//! V[2,p] -> pensez
//! ```
//!
//! The crate is `no_std` (it needs `alloc`). File formats, score ingestion and
//! the command-line pipeline live in the `clams` crate.
//!
//! * [`avg`] parses, validates and serializes grammar files.
//! * [`gen`] expands grammars into [`gen::MinimalSet`]s.
//! * [`eval`] scores minimal sets under the whole-sentence and masked-focus
//!   protocols, and carries a small add-k bigram scorer.
//! * [`metrics`] aggregates accuracies across runs and computes the
//!   morphological complexity and rank correlation statistics.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod avg;
pub mod diag;
pub mod eval;
pub mod gen;
pub mod metrics;

pub use avg::{
    match_selector, parse_grammar, parse_grammar_with_warnings, serialize_grammar,
    validate_grammar, Attribute, AttributeSet, Grammar, ParseError, PreterminalDef, Template,
    TemplateItem, Terminal, VarySelector, VaryStatement,
};
pub use diag::{Diagnostic, ValidationReport};
pub use gen::{
    apply_capitalization, count_minimal_sets, generate, Focus, GenerateError, Generation,
    MinimalSet, Sentence,
};
