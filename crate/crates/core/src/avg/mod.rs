//! Grammar data model, parser, validator and canonical serializer.

mod parse;
mod serialize;
mod validate;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use parse::{parse_grammar, parse_grammar_with_warnings, ParseError, ParseErrorKind};
pub use serialize::serialize_grammar;
pub use validate::validate_grammar;

/// The template head keyword. It can never name a preterminal.
pub const TEMPLATE_HEAD: &str = "S";

/// One attribute label, e.g. `1`, `sg`, or `third person`.
///
/// Always trimmed and non-empty; never contains `,`, `;`, `[` or `]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attribute(String);

impl Attribute {
    /// Builds an attribute from raw bracket text. Returns `None` when the
    /// trimmed text is empty or contains a reserved character.
    pub fn new(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.is_empty() || text.contains([',', ';', '[', ']']) {
            return None;
        }
        Some(Attribute(text.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An unordered set of attributes, kept sorted so rendering is canonical.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttributeSet(BTreeSet<Attribute>);

impl AttributeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an attribute; returns `false` if it was already present.
    pub fn insert(&mut self, attr: Attribute) -> bool {
        self.0.insert(attr)
    }

    pub fn contains(&self, attr: &str) -> bool {
        self.0.iter().any(|a| a.as_str() == attr)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Attribute> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &AttributeSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<Attribute> for AttributeSet {
    fn from_iter<I: IntoIterator<Item = Attribute>>(iter: I) -> Self {
        AttributeSet(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a str> for AttributeSet {
    /// Convenience for tests and builders; silently drops invalid labels.
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        iter.into_iter().filter_map(Attribute::new).collect()
    }
}

impl fmt::Display for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, attr) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(attr.as_str())?;
        }
        f.write_str("]")
    }
}

/// A terminal: one or more whitespace-free tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Terminal {
    tokens: Vec<String>,
}

impl Terminal {
    /// Splits `text` on whitespace. Returns `None` for blank text.
    pub fn parse(text: &str) -> Option<Self> {
        let tokens: Vec<String> = text.split_whitespace().map(String::from).collect();
        if tokens.is_empty() {
            None
        } else {
            Some(Terminal { tokens })
        }
    }

    /// Builds a terminal from tokens. Returns `None` if the list is empty or a
    /// token is empty or contains whitespace.
    pub fn from_tokens<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Option<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let ok = !tokens.is_empty()
            && tokens
                .iter()
                .all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace));
        ok.then_some(Terminal { tokens })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn tokens_mut(&mut self) -> &mut Vec<String> {
        &mut self.tokens
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tok) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(tok)?;
        }
        Ok(())
    }
}

/// A preterminal definition: `Name[attrs] -> alt | alt | ...`.
///
/// Alternatives keep their source order; generation aligns paradigms by index.
/// `line` is where the definition first appeared and is ignored by equality.
#[derive(Debug, Clone)]
pub struct PreterminalDef {
    pub name: String,
    pub attributes: AttributeSet,
    pub alternatives: Vec<Terminal>,
    pub line: usize,
}

impl PartialEq for PreterminalDef {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.attributes == other.attributes
            && self.alternatives == other.alternatives
    }
}

impl Eq for PreterminalDef {}

/// One item on a template's right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateItem {
    Literal(Terminal),
    Reference {
        name: String,
        attributes: AttributeSet,
    },
}

/// A sentence template, written with the `S` head.
///
/// Head attributes are stored as written and play no part in generation.
#[derive(Debug, Clone)]
pub struct Template {
    pub attributes: AttributeSet,
    pub items: Vec<TemplateItem>,
    pub line: usize,
}

impl PartialEq for Template {
    fn eq(&self, other: &Self) -> bool {
        self.attributes == other.attributes && self.items == other.items
    }
}

impl Eq for Template {}

/// One `Name[attrs]` group of the vary statement. Attributes are conjunctive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarySelector {
    pub name: String,
    pub attributes: AttributeSet,
}

/// The `vary:` statement: semicolon-separated selectors, matched disjunctively.
#[derive(Debug, Clone)]
pub struct VaryStatement {
    pub selectors: Vec<VarySelector>,
    pub line: usize,
}

impl PartialEq for VaryStatement {
    fn eq(&self, other: &Self) -> bool {
        self.selectors == other.selectors
    }
}

impl Eq for VaryStatement {}

impl VaryStatement {
    /// True if any selector names this definition and its attributes are a
    /// subset of the definition's.
    pub fn matches(&self, def: &PreterminalDef) -> bool {
        self.selectors
            .iter()
            .any(|s| s.name == def.name && match_selector(&s.attributes, &def.attributes))
    }

    /// True if some selector names `name`, regardless of attributes.
    pub fn covers(&self, name: &str) -> bool {
        self.selectors.iter().any(|s| s.name == name)
    }

    /// Distinct preterminal names covered, in first-mention order.
    pub fn names(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for s in &self.selectors {
            if !out.contains(&s.name.as_str()) {
                out.push(&s.name);
            }
        }
        out
    }
}

/// A parsed attribute-varying grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub construction_id: String,
    pub vary: VaryStatement,
    pub templates: Vec<Template>,
    pub definitions: Vec<PreterminalDef>,
}

impl Grammar {
    /// Definitions a reference resolves to: same name, reference attributes a
    /// subset of the definition's. Definition order is preserved.
    pub fn resolve<'g>(
        &'g self,
        name: &'g str,
        attributes: &'g AttributeSet,
    ) -> impl Iterator<Item = &'g PreterminalDef> + 'g {
        self.definitions
            .iter()
            .filter(move |d| d.name == name && match_selector(attributes, &d.attributes))
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.definitions.iter().any(|d| d.name == name)
    }
}

/// Subset matching: `required ⊆ candidate`. An empty requirement matches
/// everything. Used both for vary selectors and template references.
pub fn match_selector(required: &AttributeSet, candidate: &AttributeSet) -> bool {
    required.is_subset(candidate)
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with('#')
        && !s.contains("->")
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '[' | ']' | ',' | ';' | '|'))
}
