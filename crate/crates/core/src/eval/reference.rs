use alloc::collections::btree_map::Entry;
use alloc::string::ToString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MaskedKey, ScoreMode, ScoreTable};
use crate::gen::MinimalSet;

/// Built-in scorers used to sanity-check the harness itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScorerBehavior {
    /// Grammatical 0.0, ungrammatical -1.0.
    Oracle,
    /// Grammatical -1.0, ungrammatical 0.0.
    Adversary,
    /// Every score 0.0.
    Constant,
    /// Uniform draws in `[0, 1)` from a ChaCha8 stream seeded with the value,
    /// assigned in first-encounter order.
    SeededRandom(u64),
}

/// Builds a score table covering every sentence (full mode) or every
/// candidate form (masked mode) of `sets`.
///
/// When a key is met more than once (a sentence shared by several sets), the
/// first score assigned is kept.
pub fn make_reference_scorer(
    sets: &[MinimalSet],
    behavior: ScorerBehavior,
    mode: ScoreMode,
) -> ScoreTable {
    let mut rng = match behavior {
        ScorerBehavior::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut score_for = |grammatical: bool| match behavior {
        ScorerBehavior::Oracle => {
            if grammatical {
                0.0
            } else {
                -1.0
            }
        }
        ScorerBehavior::Adversary => {
            if grammatical {
                -1.0
            } else {
                0.0
            }
        }
        ScorerBehavior::Constant => 0.0,
        ScorerBehavior::SeededRandom(_) => rng.as_mut().map_or(0.0, |r| r.gen::<f64>()),
    };

    let mut table = ScoreTable::new(mode);
    match &mut table {
        ScoreTable::Full(map) => {
            for set in sets {
                for sentence in set.sentences() {
                    if let Entry::Vacant(slot) = map.entry(sentence.render()) {
                        slot.insert(score_for(sentence.label));
                    }
                }
            }
        }
        ScoreTable::Masked(map) => {
            for set in sets {
                let forms = core::iter::once((&set.focus.grammatical_form, true))
                    .chain(set.focus.variant_forms.iter().map(|f| (f, false)));
                for (form, grammatical) in forms {
                    let key =
                        MaskedKey::new(&set.construction_id, set.set_index, &form.to_string());
                    if let Entry::Vacant(slot) = map.entry(key) {
                        slot.insert(score_for(grammatical));
                    }
                }
            }
        }
    }
    table
}
