use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{
    is_identifier, Attribute, AttributeSet, Grammar, PreterminalDef, Template, TemplateItem,
    Terminal, VarySelector, VaryStatement, TEMPLATE_HEAD,
};
use crate::diag::Diagnostic;

/// A fatal problem in grammar source text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based source line; `0` for whole-file problems.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("missing vary statement")]
    MissingVary,
    #[error("multiple vary statements (first on line {first})")]
    MultipleVary { first: usize },
    #[error("no template")]
    NoTemplate,
    #[error("empty vary statement")]
    EmptyVary,
    #[error("empty vary selector")]
    EmptySelector,
    #[error("malformed brackets: {0}")]
    MalformedBrackets(String),
    #[error("empty right-hand side")]
    EmptyRhs,
    #[error("empty alternative")]
    EmptyAlternative,
    #[error("reserved name `S` used as a preterminal")]
    ReservedName,
    #[error("invalid preterminal name `{0}`")]
    InvalidName(String),
    #[error("invalid attribute `{0}`")]
    InvalidAttribute(String),
    #[error("definition right-hand side contains a reference `{0}`")]
    NestedReference(String),
    #[error("alternatives (`|`) are not allowed in a template")]
    TemplateAlternatives,
    #[error("unrecognized line (expected `vary:`, `S[...] -> ...` or `Name[...] -> ...`)")]
    Unrecognized,
}

impl ParseError {
    fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

/// Parses grammar source, discarding parse-time warnings.
pub fn parse_grammar(source: &str, construction_id: &str) -> Result<Grammar, ParseError> {
    parse_grammar_with_warnings(source, construction_id).map(|(g, _)| g)
}

/// Parses grammar source. Warnings (duplicate attributes in one bracket) are
/// returned alongside the grammar.
///
/// Definitions sharing a name and attribute set are merged, in source order,
/// into one definition whose alternatives are concatenated.
pub fn parse_grammar_with_warnings(
    source: &str,
    construction_id: &str,
) -> Result<(Grammar, Vec<Diagnostic>), ParseError> {
    let source = source.strip_prefix('\u{feff}').unwrap_or(source);
    let mut warnings = Vec::new();
    let mut vary: Option<VaryStatement> = None;
    let mut templates = Vec::new();
    let mut definitions: Vec<PreterminalDef> = Vec::new();
    let mut def_index: BTreeMap<(String, AttributeSet), usize> = BTreeMap::new();

    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut ctx = LineCtx {
            line: line_no,
            warnings: &mut warnings,
        };

        if let Some(rest) = line.strip_prefix("vary:") {
            if let Some(first) = &vary {
                return Err(ParseError::new(
                    line_no,
                    ParseErrorKind::MultipleVary { first: first.line },
                ));
            }
            vary = Some(ctx.vary(rest)?);
            continue;
        }

        let (lhs, rhs) = split_arrow(line).ok_or_else(|| ctx.err(ParseErrorKind::Unrecognized))?;
        let (name, attributes) = ctx.head(lhs.trim())?;
        if name == TEMPLATE_HEAD {
            let items = ctx.template_rhs(rhs)?;
            templates.push(Template {
                attributes,
                items,
                line: line_no,
            });
        } else {
            let alternatives = ctx.definition_rhs(rhs)?;
            let key = (name, attributes);
            match def_index.get(&key) {
                Some(&i) => definitions[i].alternatives.extend(alternatives),
                None => {
                    def_index.insert(key.clone(), definitions.len());
                    definitions.push(PreterminalDef {
                        name: key.0,
                        attributes: key.1,
                        alternatives,
                        line: line_no,
                    });
                }
            }
        }
    }

    let vary = vary.ok_or(ParseError::new(0, ParseErrorKind::MissingVary))?;
    if templates.is_empty() {
        return Err(ParseError::new(0, ParseErrorKind::NoTemplate));
    }
    let grammar = Grammar {
        construction_id: construction_id.to_string(),
        vary,
        templates,
        definitions,
    };
    Ok((grammar, warnings))
}

struct LineCtx<'w> {
    line: usize,
    warnings: &'w mut Vec<Diagnostic>,
}

impl LineCtx<'_> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.line, kind)
    }

    fn vary(&mut self, rest: &str) -> Result<VaryStatement, ParseError> {
        if rest.trim().is_empty() {
            return Err(self.err(ParseErrorKind::EmptyVary));
        }
        let mut selectors = Vec::new();
        for group in rest.split(';') {
            let group = group.trim();
            if group.is_empty() {
                return Err(self.err(ParseErrorKind::EmptySelector));
            }
            let (name, attributes) = self.head(group)?;
            if name == TEMPLATE_HEAD {
                return Err(self.err(ParseErrorKind::ReservedName));
            }
            selectors.push(VarySelector { name, attributes });
        }
        Ok(VaryStatement {
            selectors,
            line: self.line,
        })
    }

    /// Parses `Name[a, b, ...]` (no space before the bracket).
    fn head(&mut self, text: &str) -> Result<(String, AttributeSet), ParseError> {
        let malformed = |what: &str| {
            self.err(ParseErrorKind::MalformedBrackets(format!(
                "{what} in `{text}`"
            )))
        };
        let open = text
            .find('[')
            .ok_or_else(|| malformed("expected `Name[...]`"))?;
        let inner = text[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| malformed("expected closing `]` at end"))?;
        if inner.contains(['[', ']']) {
            return Err(malformed("nested or repeated brackets"));
        }
        let name = &text[..open];
        if !is_identifier(name) {
            return Err(self.err(ParseErrorKind::InvalidName(name.to_string())));
        }
        let attributes = self.attributes(inner)?;
        Ok((name.to_string(), attributes))
    }

    fn attributes(&mut self, inner: &str) -> Result<AttributeSet, ParseError> {
        let mut set = AttributeSet::new();
        if inner.trim().is_empty() {
            return Ok(set);
        }
        for raw in inner.split(',') {
            let attr = Attribute::new(raw)
                .ok_or_else(|| self.err(ParseErrorKind::InvalidAttribute(raw.to_string())))?;
            let text = attr.as_str().to_string();
            if !set.insert(attr) {
                self.warnings.push(Diagnostic::new(
                    self.line,
                    "duplicate-attribute",
                    format!("attribute `{text}` listed twice in one bracket; collapsed"),
                ));
            }
        }
        Ok(set)
    }

    fn template_rhs(&mut self, rhs: &str) -> Result<Vec<TemplateItem>, ParseError> {
        let mut items = Vec::new();
        let mut pending: Vec<String> = Vec::new();
        for token in
            split_tokens(rhs).map_err(|m| self.err(ParseErrorKind::MalformedBrackets(m)))?
        {
            if token == "|" {
                return Err(self.err(ParseErrorKind::TemplateAlternatives));
            }
            if token.contains('[') {
                let (name, attributes) = self.head(token)?;
                if name == TEMPLATE_HEAD {
                    return Err(self.err(ParseErrorKind::ReservedName));
                }
                flush_literal(&mut pending, &mut items);
                items.push(TemplateItem::Reference { name, attributes });
            } else if token.contains(']') {
                return Err(self.err(ParseErrorKind::MalformedBrackets(format!(
                    "stray `]` in `{token}`"
                ))));
            } else {
                pending.push(token.to_string());
            }
        }
        flush_literal(&mut pending, &mut items);
        if items.is_empty() {
            return Err(self.err(ParseErrorKind::EmptyRhs));
        }
        Ok(items)
    }

    fn definition_rhs(&mut self, rhs: &str) -> Result<Vec<Terminal>, ParseError> {
        if rhs.trim().is_empty() {
            return Err(self.err(ParseErrorKind::EmptyRhs));
        }
        let mut alternatives = Vec::new();
        for alt in rhs.split('|') {
            for token in alt.split_whitespace() {
                if let Some(open) = token.find('[') {
                    if open > 0 && token.ends_with(']') && is_identifier(&token[..open]) {
                        return Err(self.err(ParseErrorKind::NestedReference(token.to_string())));
                    }
                }
                if token.contains(['[', ']']) {
                    return Err(self.err(ParseErrorKind::MalformedBrackets(format!(
                        "bracket in terminal `{token}`"
                    ))));
                }
            }
            let terminal =
                Terminal::parse(alt).ok_or_else(|| self.err(ParseErrorKind::EmptyAlternative))?;
            alternatives.push(terminal);
        }
        Ok(alternatives)
    }
}

fn flush_literal(pending: &mut Vec<String>, items: &mut Vec<TemplateItem>) {
    if let Some(t) = Terminal::from_tokens(pending.drain(..)) {
        items.push(TemplateItem::Literal(t));
    }
}

/// Splits at the first `->` that is outside brackets.
fn split_arrow(line: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b'-' if depth == 0 && bytes.get(i + 1) == Some(&b'>') => {
                return Some((&line[..i], &line[i + 2..]));
            }
            _ => {}
        }
    }
    None
}

/// Whitespace tokenization that keeps bracketed attribute lists (which may
/// contain spaces) attached to their reference.
fn split_tokens(text: &str) -> Result<Vec<&str>, String> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let mut depth = 0u32;
    for (i, c) in text.char_indices() {
        match c {
            '[' => {
                if depth > 0 {
                    return Err(format!("nested `[` in `{}`", text.trim()));
                }
                depth += 1;
                start.get_or_insert(i);
            }
            ']' => {
                if depth == 0 {
                    return Err(format!("unmatched `]` in `{}`", text.trim()));
                }
                depth -= 1;
            }
            c if c.is_whitespace() && depth == 0 => {
                if let Some(s) = start.take() {
                    tokens.push(&text[s..i]);
                }
            }
            _ => {
                start.get_or_insert(i);
            }
        }
    }
    if depth != 0 {
        return Err(format!("unclosed `[` in `{}`", text.trim()));
    }
    if let Some(s) = start {
        tokens.push(&text[s..]);
    }
    Ok(tokens)
}
