use alloc::format;
use alloc::vec::Vec;

use super::{Grammar, TemplateItem};
use crate::diag::{Diagnostic, ValidationReport};

/// Checks a parsed grammar for problems that would block or degrade
/// generation. Never fails: every finding lands in the report.
///
/// Errors: unresolvable template references, vary selectors naming undefined
/// preterminals, varied names never referenced, and templates without exactly
/// one varied occurrence. Warnings: vary covering several names, unreachable
/// definitions, vary selectors matching nothing, and paradigms whose
/// definitions disagree on alternative count.
pub fn validate_grammar(g: &Grammar) -> ValidationReport {
    let mut report = ValidationReport::default();
    let vary_line = g.vary.line;

    for sel in &g.vary.selectors {
        if !g.is_defined(&sel.name) {
            report.errors.push(Diagnostic::new(
                vary_line,
                "undefined-vary-target",
                format!("vary selector names undefined preterminal {}", sel.name),
            ));
        } else if !g
            .definitions
            .iter()
            .any(|d| d.name == sel.name && sel.attributes.is_subset(&d.attributes))
        {
            report.warnings.push(Diagnostic::new(
                vary_line,
                "empty-vary-selector",
                format!(
                    "vary selector {}{} matches no definition",
                    sel.name, sel.attributes
                ),
            ));
        }
    }

    let names = g.vary.names();
    if names.len() > 1 {
        report.warnings.push(Diagnostic::new(
            vary_line,
            "multiple-varied-names",
            format!(
                "vary statement covers {} preterminals ({})",
                names.len(),
                names.join(", ")
            ),
        ));
    }

    let mut reachable = alloc::vec![false; g.definitions.len()];
    for (i, d) in g.definitions.iter().enumerate() {
        if g.vary.matches(d) {
            reachable[i] = true;
        }
    }

    for t in &g.templates {
        let mut varied = 0usize;
        for item in &t.items {
            let TemplateItem::Reference { name, attributes } = item else {
                continue;
            };
            let mut any = false;
            for (i, d) in g.definitions.iter().enumerate() {
                if d.name == *name && attributes.is_subset(&d.attributes) {
                    reachable[i] = true;
                    any = true;
                }
            }
            if !any {
                report.errors.push(Diagnostic::new(
                    t.line,
                    "unresolvable-reference",
                    format!("unresolvable reference {name}{attributes}: no definition carries these attributes"),
                ));
            }
            if g.vary.covers(name) {
                varied += 1;
            }
        }
        match varied {
            1 => {}
            0 => report.errors.push(Diagnostic::new(
                t.line,
                "no-varied-occurrence",
                "template references no varied preterminal",
            )),
            n => report.errors.push(Diagnostic::new(
                t.line,
                "multiple-varied-occurrences",
                format!("template has {n} varied occurrences; one varied occurrence per template"),
            )),
        }
    }

    for name in &names {
        if !g.is_defined(name) {
            continue;
        }
        let referenced = g.templates.iter().any(|t| {
            t.items
                .iter()
                .any(|it| matches!(it, TemplateItem::Reference { name: n, .. } if n == name))
        });
        if !referenced {
            report.errors.push(Diagnostic::new(
                vary_line,
                "unused-vary-target",
                format!("varied preterminal {name} is never referenced by a template"),
            ));
        }
        let counts: Vec<(usize, usize)> = g
            .definitions
            .iter()
            .filter(|d| d.name == *name)
            .map(|d| (d.line, d.alternatives.len()))
            .collect();
        if counts.windows(2).any(|w| w[0].1 != w[1].1) {
            let listing: Vec<_> = counts
                .iter()
                .map(|(l, n)| format!("line {l}: {n}"))
                .collect();
            report.warnings.push(Diagnostic::new(
                vary_line,
                "unaligned-paradigm",
                format!(
                    "definitions of varied {name} have unequal alternative counts ({})",
                    listing.join(", ")
                ),
            ));
        }
    }

    for (d, seen) in g.definitions.iter().zip(&reachable) {
        if !seen {
            report.warnings.push(Diagnostic::new(
                d.line,
                "unreachable-definition",
                format!(
                    "definition {}{} is never used by a template or the vary statement",
                    d.name, d.attributes
                ),
            ));
        }
    }

    report
}
