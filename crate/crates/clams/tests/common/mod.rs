//! Random small grammars and a brute-force reference enumerator that works
//! from the grammar description directly, never from the parsed `Grammar`.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use proptest::collection::vec;
use proptest::prelude::*;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn pack_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("grammars/en")
}

/// Grammar files of the English pack, sorted by name.
pub fn pack_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(pack_dir())
        .expect("pack directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "avg"))
        .collect();
    files.sort();
    files
}

const CELL_ATTRS: [[&str; 2]; 3] = [["a", "x"], ["a", "y"], ["b", "x"]];
const SELECTOR_ATTRS: [&str; 5] = ["", "a", "b", "x", "y"];
const FORMS: [&str; 8] = ["f0", "f1", "f2", "f3", "f4 g", "f5", "f6 g h", "f7"];
const WORDS: [&str; 6] = ["w0", "w1", "w2", "w3", "w4 z", "w5"];

#[derive(Debug, Clone)]
pub enum Item {
    Lit(String),
    /// Non-varied preterminal `N<i>` with an optional attribute.
    Ref(usize, Option<&'static str>),
    /// The varied preterminal `V` with its required attributes.
    Varied(Vec<&'static str>),
}

#[derive(Debug, Clone)]
pub struct Filler {
    /// `(attribute, alternatives)` per definition.
    pub defs: Vec<(&'static str, Vec<&'static str>)>,
}

#[derive(Debug, Clone)]
pub struct Model {
    /// Paradigm cells of `V`: attributes and aligned alternatives.
    pub cells: Vec<(Vec<&'static str>, Vec<&'static str>)>,
    /// One optional attribute per selector, all naming `V`.
    pub selectors: Vec<&'static str>,
    pub fillers: Vec<Filler>,
    pub templates: Vec<Vec<Item>>,
}

fn filler() -> impl Strategy<Value = Filler> {
    (
        vec(0..WORDS.len(), 1..=4),
        prop::option::of(vec(0..WORDS.len(), 1..=4)),
    )
        .prop_map(|(p, q)| {
            let words = |ix: Vec<usize>| ix.into_iter().map(|i| WORDS[i]).collect();
            let mut defs = vec![("p", words(p))];
            if let Some(q) = q {
                defs.push(("q", words(q)));
            }
            Filler { defs }
        })
}

/// At most two templates, three non-varied references each, four
/// alternatives per definition and three paradigm cells.
pub fn model() -> impl Strategy<Value = Model> {
    (1usize..=3, 1usize..=4)
        .prop_flat_map(|(cells, alts)| {
            (
                vec(vec(0..FORMS.len(), alts), cells),
                vec(0..SELECTOR_ATTRS.len(), 1..=2),
                vec(filler(), 1..=3),
                vec(template_shape(cells), 1..=2),
            )
        })
        .prop_map(|(forms, selectors, fillers, shapes)| {
            let cells = forms
                .into_iter()
                .enumerate()
                .map(|(c, f)| {
                    (
                        CELL_ATTRS[c].to_vec(),
                        f.into_iter().map(|i| FORMS[i]).collect(),
                    )
                })
                .collect::<Vec<_>>();
            let templates = shapes
                .into_iter()
                .map(|shape| shape.build(&cells, &fillers))
                .collect();
            Model {
                cells,
                selectors: selectors.into_iter().map(|i| SELECTOR_ATTRS[i]).collect(),
                fillers,
                templates,
            }
        })
}

#[derive(Debug, Clone)]
pub struct Shape {
    lead: Vec<u8>,
    refs: Vec<(usize, u8)>,
    varied_slot: usize,
    varied_cell: usize,
    varied_mask: u8,
}

fn template_shape(cells: usize) -> impl Strategy<Value = Shape> {
    (
        vec(0u8..3, 0..=2),
        vec((0usize..3, 0u8..3), 0..=3),
        0usize..=3,
        0..cells,
        0u8..4,
    )
        .prop_map(
            |(lead, refs, varied_slot, varied_cell, varied_mask)| Shape {
                lead,
                varied_slot: varied_slot.min(refs.len()),
                refs,
                varied_cell,
                varied_mask,
            },
        )
}

impl Shape {
    fn build(
        self,
        cells: &[(Vec<&'static str>, Vec<&'static str>)],
        fillers: &[Filler],
    ) -> Vec<Item> {
        let mut items: Vec<Item> = self
            .lead
            .iter()
            .map(|l| Item::Lit(format!("lit{l}")))
            .collect();
        let mut refs: Vec<Item> = self
            .refs
            .iter()
            .map(|&(n, a)| {
                let n = n % fillers.len();
                let attr = match a {
                    0 => None,
                    1 => Some("p"),
                    _ => fillers[n].defs.get(1).map(|d| d.0),
                };
                Item::Ref(n, attr)
            })
            .collect();
        let cell = &cells[self.varied_cell].0;
        let required = cell
            .iter()
            .enumerate()
            .filter(|(i, _)| self.varied_mask & (1 << i) != 0)
            .map(|(_, a)| *a)
            .collect();
        refs.insert(self.varied_slot, Item::Varied(required));
        items.extend(refs);
        items.push(Item::Lit(".".into()));
        items
    }
}

impl Model {
    pub fn to_source(&self) -> String {
        let attrs = |a: &[&str]| format!("[{}]", a.join(","));
        let selectors: Vec<String> = self
            .selectors
            .iter()
            .map(|s| {
                if s.is_empty() {
                    "V[]".to_string()
                } else {
                    format!("V[{s}]")
                }
            })
            .collect();
        let mut out = format!("vary: {}\n", selectors.join("; "));
        for t in &self.templates {
            let items: Vec<String> = t
                .iter()
                .map(|it| match it {
                    Item::Lit(s) => s.clone(),
                    Item::Ref(n, a) => format!("N{n}[{}]", a.unwrap_or("")),
                    Item::Varied(req) => format!("V{}", attrs(req)),
                })
                .collect();
            out.push_str(&format!("S[] -> {}\n", items.join(" ")));
        }
        for (a, forms) in &self.cells {
            out.push_str(&format!("V{} -> {}\n", attrs(a), forms.join(" | ")));
        }
        for (n, f) in self.fillers.iter().enumerate() {
            for (a, words) in &f.defs {
                out.push_str(&format!("N{n}[{a}] -> {}\n", words.join(" | ")));
            }
        }
        out
    }

    /// Every minimal set as `(grammatical, variants)`, by exhaustive
    /// recursion over the template items.
    pub fn enumerate(&self) -> Vec<(String, BTreeSet<String>)> {
        let mut out = Vec::new();
        for t in &self.templates {
            let Some(Item::Varied(required)) = t.iter().find(|i| matches!(i, Item::Varied(_)))
            else {
                unreachable!()
            };
            let licensed: Vec<usize> = (0..self.cells.len())
                .filter(|&c| required.iter().all(|r| self.cells[c].0.contains(r)))
                .collect();
            let contrasts: Vec<usize> = (0..self.cells.len())
                .filter(|c| !licensed.contains(c))
                .filter(|&c| {
                    self.selectors
                        .iter()
                        .any(|s| s.is_empty() || self.cells[c].0.contains(s))
                })
                .collect();
            for &cell in &licensed {
                for j in 0..self.cells[cell].1.len() {
                    let good = self.cells[cell].1[j];
                    let bad: BTreeSet<&str> = contrasts
                        .iter()
                        .map(|&c| self.cells[c].1[j])
                        .filter(|f| *f != good)
                        .collect();
                    self.fill(t, 0, Vec::new(), Vec::new(), good, &bad, &mut out);
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        &self,
        items: &[Item],
        at: usize,
        good: Vec<String>,
        bad: Vec<Vec<String>>,
        form: &str,
        variants: &BTreeSet<&str>,
        out: &mut Vec<(String, BTreeSet<String>)>,
    ) {
        let bad = if at == 0 {
            vec![Vec::new(); variants.len()]
        } else {
            bad
        };
        let Some(item) = items.get(at) else {
            out.push((good.join(" "), bad.iter().map(|b| b.join(" ")).collect()));
            return;
        };
        let extend = |good: &Vec<String>, bad: &Vec<Vec<String>>, g: &str, b: Vec<&str>| {
            let mut good = good.clone();
            good.push(g.to_string());
            let bad = bad
                .iter()
                .zip(b)
                .map(|(prefix, w)| {
                    let mut p = prefix.clone();
                    p.push(w.to_string());
                    p
                })
                .collect::<Vec<_>>();
            (good, bad)
        };
        match item {
            Item::Lit(s) => {
                let (g, b) = extend(&good, &bad, s, vec![s.as_str(); variants.len()]);
                self.fill(items, at + 1, g, b, form, variants, out);
            }
            Item::Varied(_) => {
                let (g, b) = extend(&good, &bad, form, variants.iter().copied().collect());
                self.fill(items, at + 1, g, b, form, variants, out);
            }
            Item::Ref(n, attr) => {
                for (a, words) in &self.fillers[*n].defs {
                    if attr.is_some_and(|x| x != *a) {
                        continue;
                    }
                    for w in words {
                        let (g, b) = extend(&good, &bad, w, vec![*w; variants.len()]);
                        self.fill(items, at + 1, g, b, form, variants, out);
                    }
                }
            }
        }
    }
}
