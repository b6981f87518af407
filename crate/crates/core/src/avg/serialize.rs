use alloc::string::String;
use core::fmt::Write;

use super::{Grammar, TemplateItem, TEMPLATE_HEAD};

/// Canonical text form: the vary line, then templates, then definitions, in
/// stored order. Attributes come out sorted; merged alternatives share one
/// line. Re-parsing the output with the same construction id gives back an
/// equal grammar.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = String::new();
    out.push_str("vary: ");
    for (i, sel) in g.vary.selectors.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        let _ = write!(out, "{}{}", sel.name, sel.attributes);
    }
    out.push('\n');

    for t in &g.templates {
        let _ = write!(out, "{TEMPLATE_HEAD}{} ->", t.attributes);
        for item in &t.items {
            match item {
                TemplateItem::Literal(term) => {
                    let _ = write!(out, " {term}");
                }
                TemplateItem::Reference { name, attributes } => {
                    let _ = write!(out, " {name}{attributes}");
                }
            }
        }
        out.push('\n');
    }

    for d in &g.definitions {
        let _ = write!(out, "{}{} ->", d.name, d.attributes);
        for (i, alt) in d.alternatives.iter().enumerate() {
            if i > 0 {
                out.push_str(" |");
            }
            let _ = write!(out, " {alt}");
        }
        out.push('\n');
    }
    out
}
