//! Exhaustive expansion of a grammar into labeled minimal sets.
//!
//! For every template, the non-varied references are grounded in
//! lexicographic order of (item position, alternative index); for each
//! grounding, every alternative of the varied reference yields one minimal
//! set. Ungrammatical variants take the *same alternative index* from every
//! other vary-matched definition, so paradigms must be aligned: index `i`
//! across `V[sg]`, `V[pl]`, ... is one lexeme's inflections.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::avg::{Grammar, PreterminalDef, Template, TemplateItem, Terminal};
use crate::diag::Diagnostic;

/// A generated sentence. `label` is `true` for the grammatical member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sentence {
    pub tokens: Vec<String>,
    pub label: bool,
}

impl Sentence {
    /// Tokens joined by single spaces.
    pub fn render(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Where the varied preterminal landed and what it was replaced with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Focus {
    /// Index of the first focus token in the sentence (counted in tokens,
    /// not template items).
    pub token_index: usize,
    pub grammatical_form: Terminal,
    pub variant_forms: Vec<Terminal>,
}

impl Focus {
    /// True when every form (grammatical and variant) is a single token.
    pub fn is_single_token(&self) -> bool {
        self.grammatical_form.len() == 1 && self.variant_forms.iter().all(|t| t.len() == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalSet {
    pub construction_id: String,
    pub set_index: usize,
    pub grammatical: Sentence,
    pub ungrammatical: Vec<Sentence>,
    pub focus: Focus,
}

impl MinimalSet {
    /// Grammatical sentence first, then the variants in order.
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        core::iter::once(&self.grammatical).chain(&self.ungrammatical)
    }
}

/// Output of [`generate`]: the sets plus non-fatal findings (for example,
/// templates whose sets have no ungrammatical variants).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Generation {
    pub sets: Vec<MinimalSet>,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error(
        "line {line}: template has {count} varied occurrences; one varied occurrence per template"
    )]
    MultipleVariedOccurrences { line: usize, count: usize },
    #[error("line {line}: template references no varied preterminal")]
    NoVariedOccurrence { line: usize },
    #[error("line {line}: unresolvable reference {reference}")]
    UnresolvableReference { line: usize, reference: String },
    #[error("unaligned paradigm for {name}: definitions have alternative counts {counts:?}")]
    UnalignedParadigm { name: String, counts: Vec<usize> },
    #[error("line {line}: minimal-set count overflows")]
    TooLarge { line: usize },
}

/// Expands `g` into its minimal sets. Output order is fully determined by the
/// grammar: same grammar, same sets in the same order.
pub fn generate(g: &Grammar) -> Result<Generation, GenerateError> {
    let mut out = Generation::default();
    for template in &g.templates {
        let plan = TemplatePlan::new(g, template)?;
        let before = out.sets.len();
        plan.expand(&g.construction_id, &mut out.sets);
        let empty = out.sets[before..]
            .iter()
            .filter(|s| s.ungrammatical.is_empty())
            .count();
        if empty > 0 {
            out.warnings.push(Diagnostic::new(
                template.line,
                "no-ungrammatical-variants",
                format!("{empty} minimal set(s) have no ungrammatical variants"),
            ));
        }
    }
    Ok(out)
}

/// Number of minimal sets [`generate`] would produce, computed without
/// building any sentence.
pub fn count_minimal_sets(g: &Grammar) -> Result<usize, GenerateError> {
    let mut total = 0usize;
    for template in &g.templates {
        let plan = TemplatePlan::new(g, template)?;
        let n = plan
            .slots
            .iter()
            .try_fold(plan.cells.len(), |acc, s| acc.checked_mul(s.choices.len()))
            .and_then(|n| total.checked_add(n))
            .ok_or(GenerateError::TooLarge {
                line: template.line,
            })?;
        total = n;
    }
    Ok(total)
}

/// Uppercases the first character of every sentence's first token (simple,
/// one-to-one mapping only; caseless scripts pass through). When the focus
/// sits at token 0 its forms are capitalized the same way so the set stays
/// self-consistent.
pub fn apply_capitalization(s: &MinimalSet) -> MinimalSet {
    let mut out = s.clone();
    for sentence in core::iter::once(&mut out.grammatical).chain(out.ungrammatical.iter_mut()) {
        if let Some(first) = sentence.tokens.first_mut() {
            *first = capitalize_first(first);
        }
    }
    if out.focus.token_index == 0 {
        let focus = &mut out.focus;
        for form in
            core::iter::once(&mut focus.grammatical_form).chain(focus.variant_forms.iter_mut())
        {
            if let Some(first) = form.tokens_mut().first_mut() {
                *first = capitalize_first(first);
            }
        }
    }
    out
}

fn capitalize_first(token: &str) -> String {
    let mut chars = token.chars();
    let Some(c) = chars.next() else {
        return String::new();
    };
    let mut upper = c.to_uppercase();
    match (upper.next(), upper.next()) {
        (Some(u), None) => {
            let mut s = String::with_capacity(token.len() + 2);
            s.push(u);
            s.push_str(chars.as_str());
            s
        }
        // No single-character uppercase (e.g. `ß`): leave as is.
        _ => token.to_string(),
    }
}

/// A non-varied reference and the terminals it can ground to.
struct Slot<'g> {
    position: usize,
    choices: Vec<&'g Terminal>,
}

/// One grammatical alternative of the varied reference and its contrasts.
struct Cell<'g> {
    grammatical: &'g Terminal,
    variants: Vec<&'g Terminal>,
}

struct TemplatePlan<'g> {
    template: &'g Template,
    varied_position: usize,
    slots: Vec<Slot<'g>>,
    cells: Vec<Cell<'g>>,
}

impl<'g> TemplatePlan<'g> {
    fn new(g: &'g Grammar, template: &'g Template) -> Result<Self, GenerateError> {
        let line = template.line;
        let mut varied: Vec<usize> = Vec::new();
        let mut slots = Vec::new();
        for (position, item) in template.items.iter().enumerate() {
            let TemplateItem::Reference { name, attributes } = item else {
                continue;
            };
            if g.vary.covers(name) {
                varied.push(position);
                continue;
            }
            let choices: Vec<&Terminal> = g
                .resolve(name, attributes)
                .flat_map(|d| d.alternatives.iter())
                .collect();
            if choices.is_empty() {
                return Err(GenerateError::UnresolvableReference {
                    line,
                    reference: format!("{name}{attributes}"),
                });
            }
            slots.push(Slot { position, choices });
        }
        let varied_position = match varied.as_slice() {
            [p] => *p,
            [] => return Err(GenerateError::NoVariedOccurrence { line }),
            many => {
                return Err(GenerateError::MultipleVariedOccurrences {
                    line,
                    count: many.len(),
                })
            }
        };
        let TemplateItem::Reference { name, attributes } = &template.items[varied_position] else {
            unreachable!("varied position always holds a reference");
        };

        let licensed: Vec<&PreterminalDef> = g.resolve(name, attributes).collect();
        if licensed.is_empty() {
            return Err(GenerateError::UnresolvableReference {
                line,
                reference: format!("{name}{attributes}"),
            });
        }
        // Definitions the reference itself licenses are never contrasts.
        let contrasts: Vec<&PreterminalDef> = g
            .definitions
            .iter()
            .filter(|d| g.vary.matches(d) && !licensed.iter().any(|l| core::ptr::eq(*l, *d)))
            .collect();
        if !contrasts.is_empty() {
            let counts: Vec<usize> = g
                .definitions
                .iter()
                .filter(|d| {
                    licensed
                        .iter()
                        .chain(&contrasts)
                        .any(|x| core::ptr::eq(*x, *d))
                })
                .map(|d| d.alternatives.len())
                .collect();
            if counts.windows(2).any(|w| w[0] != w[1]) {
                return Err(GenerateError::UnalignedParadigm {
                    name: name.clone(),
                    counts,
                });
            }
        }

        let mut cells = Vec::new();
        for def in &licensed {
            for (j, grammatical) in def.alternatives.iter().enumerate() {
                let mut variants: Vec<&Terminal> = Vec::new();
                for c in &contrasts {
                    let v = &c.alternatives[j];
                    if v != grammatical && !variants.contains(&v) {
                        variants.push(v);
                    }
                }
                cells.push(Cell {
                    grammatical,
                    variants,
                });
            }
        }

        Ok(TemplatePlan {
            template,
            varied_position,
            slots,
            cells,
        })
    }

    fn expand(&self, construction_id: &str, out: &mut Vec<MinimalSet>) {
        // Odometer over slot choices; the last slot turns fastest.
        let mut odometer = alloc::vec![0usize; self.slots.len()];
        loop {
            let (prefix, suffix) = self.ground(&odometer);
            for cell in &self.cells {
                let build = |form: &Terminal, label: bool| {
                    let mut tokens = prefix.clone();
                    tokens.extend(form.tokens().iter().cloned());
                    tokens.extend(suffix.iter().cloned());
                    Sentence { tokens, label }
                };
                out.push(MinimalSet {
                    construction_id: construction_id.to_string(),
                    set_index: out.len(),
                    grammatical: build(cell.grammatical, true),
                    ungrammatical: cell.variants.iter().map(|v| build(v, false)).collect(),
                    focus: Focus {
                        token_index: prefix.len(),
                        grammatical_form: cell.grammatical.clone(),
                        variant_forms: cell.variants.iter().map(|v| (*v).clone()).collect(),
                    },
                });
            }
            if !advance(&mut odometer, &self.slots) {
                break;
            }
        }
    }

    /// Tokens before and after the varied item under one grounding.
    fn ground(&self, odometer: &[usize]) -> (Vec<String>, Vec<String>) {
        let mut prefix = Vec::new();
        let mut suffix = Vec::new();
        let mut slot = 0;
        for (position, item) in self.template.items.iter().enumerate() {
            if position == self.varied_position {
                continue;
            }
            let target = if position < self.varied_position {
                &mut prefix
            } else {
                &mut suffix
            };
            let terminal = match item {
                TemplateItem::Literal(t) => t,
                TemplateItem::Reference { .. } => {
                    let s = &self.slots[slot];
                    debug_assert_eq!(s.position, position);
                    slot += 1;
                    s.choices[odometer[slot - 1]]
                }
            };
            target.extend(terminal.tokens().iter().cloned());
        }
        (prefix, suffix)
    }
}

fn advance(odometer: &mut [usize], slots: &[Slot<'_>]) -> bool {
    for i in (0..odometer.len()).rev() {
        odometer[i] += 1;
        if odometer[i] < slots[i].choices.len() {
            return true;
        }
        odometer[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avg::parse_grammar;
    use alloc::vec;

    const FRENCH: &str = "vary: V[]\nS[] -> je V[1,s]\nV[1,s] -> pense\nV[2,s] -> penses\nV[1,p] -> pensons\nV[2,p] -> pensez\n";

    fn french(vary: &str) -> Grammar {
        parse_grammar(&FRENCH.replace("vary: V[]", vary), "french").unwrap()
    }

    fn rendered(set: &MinimalSet) -> (String, Vec<String>) {
        (
            set.grammatical.render(),
            set.ungrammatical.iter().map(Sentence::render).collect(),
        )
    }

    #[test]
    fn vary_all() {
        let out = generate(&french("vary: V[]")).unwrap();
        assert_eq!(out.sets.len(), 1);
        assert_eq!(
            rendered(&out.sets[0]),
            (
                "je pense".into(),
                vec!["je penses".into(), "je pensons".into(), "je pensez".into()]
            )
        );
        let focus = &out.sets[0].focus;
        assert_eq!(focus.token_index, 1);
        assert_eq!(focus.grammatical_form.to_string(), "pense");
        assert_eq!(focus.variant_forms.len(), 3);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn vary_first_person() {
        let out = generate(&french("vary: V[1]")).unwrap();
        assert_eq!(rendered(&out.sets[0]).1, ["je pensons"]);
    }

    #[test]
    fn vary_or() {
        let out = generate(&french("vary: V[1]; V[s]")).unwrap();
        assert_eq!(rendered(&out.sets[0]).1, ["je penses", "je pensons"]);
    }

    #[test]
    fn vary_exact_cell_gives_empty_set_with_warning() {
        let out = generate(&french("vary: V[1,s]")).unwrap();
        assert_eq!(out.sets.len(), 1);
        assert!(out.sets[0].ungrammatical.is_empty());
        assert_eq!(out.warnings.len(), 1);
        assert_eq!(out.warnings[0].code, "no-ungrammatical-variants");
    }

    #[test]
    fn cross_product_order_and_count() {
        let src = "vary: V[]\n\
                   S[] -> the N[s] V[s] the M[p]\n\
                   N[s] -> writer | baker | pilot\n\
                   M[p] -> parents | skaters\n\
                   V[s] -> likes | loves\n\
                   V[p] -> like | love\n";
        let g = parse_grammar(src, "x").unwrap();
        assert_eq!(count_minimal_sets(&g).unwrap(), 12);
        let sets = generate(&g).unwrap().sets;
        assert_eq!(sets.len(), 12);
        let first: Vec<_> = sets
            .iter()
            .take(5)
            .map(|s| s.grammatical.render())
            .collect();
        assert_eq!(
            first,
            [
                "the writer likes the parents",
                "the writer loves the parents",
                "the writer likes the skaters",
                "the writer loves the skaters",
                "the baker likes the parents",
            ]
        );
        assert_eq!(rendered(&sets[1]).1, ["the writer love the parents"]);
        assert!(sets.iter().enumerate().all(|(i, s)| s.set_index == i));
    }

    #[test]
    fn alignment_by_index_never_swaps_lexemes() {
        let src =
            "vary: V[]\nS[] -> the writer V[s]\nV[s] -> smiles | laughs\nV[p] -> smile | laugh\n";
        let sets = generate(&parse_grammar(src, "x").unwrap()).unwrap().sets;
        assert_eq!(
            rendered(&sets[0]),
            ("the writer smiles".into(), vec!["the writer smile".into()])
        );
        assert_eq!(
            rendered(&sets[1]),
            ("the writer laughs".into(), vec!["the writer laugh".into()])
        );
    }

    #[test]
    fn unaligned_paradigm_is_an_error() {
        let src = "vary: V[]\nS[] -> the writer V[s]\nV[s] -> smiles | laughs\nV[p] -> smile\n";
        let g = parse_grammar(src, "x").unwrap();
        assert!(matches!(
            generate(&g),
            Err(GenerateError::UnalignedParadigm { .. })
        ));
        assert!(matches!(
            count_minimal_sets(&g),
            Err(GenerateError::UnalignedParadigm { .. })
        ));
    }

    #[test]
    fn duplicate_variant_forms_are_dropped() {
        // English `smile` fills both first-person singular and plural cells.
        let src = "vary: V[]\nS[] -> he V[3,s]\nV[3,s] -> smiles\nV[1,s] -> smile\nV[3,p] -> smile\nV[x] -> smiles\n";
        let sets = generate(&parse_grammar(src, "x").unwrap()).unwrap().sets;
        assert_eq!(rendered(&sets[0]).1, ["he smile"]);
    }

    #[test]
    fn multiple_varied_occurrences() {
        let g = parse_grammar("vary: V[]\nS[] -> V[] V[]\nV[] -> x\n", "x").unwrap();
        assert_eq!(
            generate(&g).unwrap_err(),
            GenerateError::MultipleVariedOccurrences { line: 2, count: 2 }
        );
    }

    #[test]
    fn multi_token_literal_before_focus() {
        let src = "vary: V[]\nS[] -> the teacher writes every day and V[s] .\nV[s] -> likes\nV[p] -> like\n";
        let sets = generate(&parse_grammar(src, "x").unwrap()).unwrap().sets;
        assert_eq!(sets[0].focus.token_index, 6);
        assert_eq!(sets[0].grammatical.tokens[6], "likes");
        assert_eq!(
            sets[0].ungrammatical[0].render(),
            "the teacher writes every day and like ."
        );
    }

    #[test]
    fn templates_add_up() {
        let src = "vary: V[]\n\
                   S[] -> the N[s] V[s] M[]\n\
                   S[] -> the N[p] V[p]\n\
                   N[s] -> a | b | c\n\
                   N[p] -> as | bs\n\
                   M[] -> x | y\n\
                   V[s] -> v | w\n\
                   V[p] -> vs | ws\n";
        let g = parse_grammar(src, "x").unwrap();
        assert_eq!(count_minimal_sets(&g).unwrap(), 3 * 2 * 2 + 2 * 2);
        let sets = generate(&g).unwrap().sets;
        assert_eq!(sets.len(), 16);
        assert_eq!(sets[15].set_index, 15);
    }

    #[test]
    fn capitalization() {
        let src = "vary: V[]\nS[] -> the writer V[s]\nV[s] -> laughs\nV[p] -> laugh\n";
        let set = &generate(&parse_grammar(src, "x").unwrap()).unwrap().sets[0];
        let cap = apply_capitalization(set);
        assert_eq!(cap.grammatical.render(), "The writer laughs");
        assert_eq!(cap.ungrammatical[0].render(), "The writer laugh");
        assert_eq!(cap.focus, set.focus);
        assert_eq!(apply_capitalization(&cap), cap);
    }

    #[test]
    fn capitalization_of_caseless_and_special_tokens() {
        assert_eq!(capitalize_first("המלצר"), "המלצר");
        assert_eq!(capitalize_first("Der"), "Der");
        assert_eq!(capitalize_first("élève"), "Élève");
        assert_eq!(capitalize_first("ßa"), "ßa");
        assert_eq!(capitalize_first("врачи"), "Врачи");
    }

    #[test]
    fn capitalization_of_initial_focus() {
        let src = "vary: V[]\nS[] -> V[s] .\nV[s] -> runs\nV[p] -> run\n";
        let set = &generate(&parse_grammar(src, "x").unwrap()).unwrap().sets[0];
        let cap = apply_capitalization(set);
        assert_eq!(cap.grammatical.render(), "Runs .");
        assert_eq!(cap.focus.grammatical_form.to_string(), "Runs");
        assert_eq!(cap.focus.variant_forms[0].to_string(), "Run");
    }
}
