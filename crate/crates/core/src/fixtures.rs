//! Reference tables transcribed from the published classification, and the
//! machinery that recomputes every tabulated fact within budgets.

use crate::contraction::{contraction_status, ContractionStatus};
use crate::group::{growth_sequence, self_replicating_check, ThreeValued};
use crate::mealy::{classify_all, Automaton};
use crate::report::Budgets;
use crate::words::GenWord;
use num_bigint::BigUint;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read fixture file: {0}")]
    Io(#[from] std::io::Error),
    #[error("fixture parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("fixture automaton number {0} out of range 1..=5832")]
    BadNumber(u64),
}

/// The tables shipped with the crate: headline counts, the equivalence
/// class map, and the per-automaton rows (orders, growth, relators,
/// contraction and self-replication labels). Group names and `iso_rep`
/// values are annotations and are never recomputed.
#[derive(Debug, Deserialize)]
pub struct FixtureSet {
    pub headline: Headline,
    pub class_ranges: Vec<ClassRange>,
    /// `[automaton, class_rep, iso_rep]`
    pub class_entries: Vec<(u32, u32, u32)>,
    pub automata: BTreeMap<String, AutomatonFixture>,
}

#[derive(Debug, Deserialize)]
pub struct Headline {
    pub symmetry_classes: usize,
    pub reduced_below_three_states: usize,
    pub isomorphism_class_upper_bound: usize,
    pub finite_group_orders: BTreeMap<String, u64>,
    pub abelian_representatives: Vec<u32>,
}

#[derive(Debug, Deserialize)]
pub struct ClassRange {
    pub from: u32,
    pub to: u32,
    pub class_rep: u32,
    pub iso_rep: u32,
}

#[derive(Debug, Deserialize)]
pub struct AutomatonFixture {
    #[serde(default)]
    pub recursion: String,
    #[serde(default)]
    pub group: String,
    pub contracting: String,
    pub self_replicating: String,
    pub relators: Vec<String>,
    pub sf_exponents: Vec<u64>,
    pub growth: Vec<u64>,
}

/// The tables bundled into the crate.
pub const BUNDLED_TABLES: &str = include_str!("../fixtures/classification_tables.json");

impl FixtureSet {
    pub fn bundled() -> FixtureSet {
        parse_str(BUNDLED_TABLES).expect("bundled tables parse")
    }

    pub fn load(path: &Path) -> Result<FixtureSet, FixtureError> {
        let text = std::fs::read_to_string(path)?;
        parse_str(&text)
    }

    /// Expected class representative for every automaton number, folding the
    /// margin ranges and the explicit entries together.
    pub fn expected_class_rep(&self, n: u32) -> Option<u32> {
        for range in &self.class_ranges {
            if (range.from..=range.to).contains(&n) {
                return Some(range.class_rep);
            }
        }
        self.class_entries
            .iter()
            .find(|e| e.0 == n)
            .map(|e| e.1)
    }

    /// Distinct isomorphism-class representatives over the whole table.
    pub fn iso_representatives(&self) -> Vec<u32> {
        let mut reps: Vec<u32> = self
            .class_entries
            .iter()
            .map(|e| e.2)
            .chain(self.class_ranges.iter().map(|r| r.iso_rep))
            .collect();
        reps.sort_unstable();
        reps.dedup();
        reps
    }
}

fn parse_str(text: &str) -> Result<FixtureSet, FixtureError> {
    let set: FixtureSet = serde_json::from_str(text).map_err(|e| FixtureError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    for key in set.automata.keys() {
        let n: u64 = key.parse().map_err(|_| FixtureError::Parse {
            line: 0,
            column: 0,
            message: format!("automaton key {key:?} is not a number"),
        })?;
        if !(1..=5832).contains(&n) {
            return Err(FixtureError::BadNumber(n));
        }
    }
    Ok(set)
}

/// One recomputed fact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub fact: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail { computed: String },
    Skipped { reason: String },
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }
}

/// Recomputes every fixture fact within the budgets. Each tabulated datum
/// becomes one verdict; enlarging budgets only turns `Skipped` verdicts
/// into decided ones.
pub fn verify_fixtures(set: &FixtureSet, budgets: &Budgets) -> Vec<Verdict> {
    let mut verdicts = Vec::new();
    let table = classify_all();

    verdicts.push(check_eq(
        "headline: symmetry classes",
        set.headline.symmetry_classes,
        table.class_count(),
    ));
    verdicts.push(check_eq(
        "headline: classes reduced below three states",
        set.headline.reduced_below_three_states,
        table.reduced_below_three(),
    ));

    for range in &set.class_ranges {
        let ok = (range.from..=range.to).all(|n| table.representative(n as u64) == range.class_rep);
        verdicts.push(Verdict {
            fact: format!(
                "class map: {}..={} -> {}",
                range.from, range.to, range.class_rep
            ),
            outcome: if ok {
                Outcome::Pass
            } else {
                Outcome::Fail {
                    computed: format!(
                        "representative of {} is {}",
                        range.from,
                        table.representative(range.from as u64)
                    ),
                }
            },
        });
    }
    let mut wrong = Vec::new();
    for &(n, rep, _) in &set.class_entries {
        if table.representative(n as u64) != rep {
            wrong.push((n, table.representative(n as u64), rep));
        }
    }
    verdicts.push(Verdict {
        fact: format!("class map: {} explicit entries", set.class_entries.len()),
        outcome: if wrong.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail {
                computed: format!(
                    "{} mismatches, first: {} -> {} (expected {})",
                    wrong.len(),
                    wrong[0].0,
                    wrong[0].1,
                    wrong[0].2
                ),
            }
        },
    });

    for (key, fix) in &set.automata {
        let n: u64 = key.parse().expect("validated on load");
        let aut = Automaton::decode_number(n).expect("validated on load");
        verify_automaton(&mut verdicts, &aut, n, fix, budgets);
    }
    verdicts
}

fn verify_automaton(
    verdicts: &mut Vec<Verdict>,
    aut: &Automaton,
    n: u64,
    fix: &AutomatonFixture,
    budgets: &Budgets,
) {
    // level-quotient orders, one verdict per tabulated level
    for (level, &expect) in fix.sf_exponents.iter().enumerate() {
        let fact = format!("{n}: SF exponent at level {level}");
        if level > budgets.level {
            verdicts.push(skip(fact, "beyond level budget"));
            continue;
        }
        match crate::group::level_quotient_order(aut, level) {
            Ok(order) => {
                let expected = BigUint::from(1u8) << expect;
                verdicts.push(if order == expected {
                    pass(fact)
                } else {
                    fail(fact, format!("2^{}", order.trailing_zeros().unwrap_or(0)))
                });
            }
            Err(e) => verdicts.push(skip(fact, &e.to_string())),
        }
    }
    // growth prefix, one verdict per tabulated radius
    let radius = (fix.growth.len().saturating_sub(1)).min(budgets.radius);
    let growth = growth_sequence(aut, radius);
    for (r, &expect) in fix.growth.iter().enumerate() {
        let fact = format!("{n}: growth at radius {r}");
        if r > budgets.radius {
            verdicts.push(skip(fact, "beyond radius budget"));
            continue;
        }
        let got = &growth.counts[r];
        verdicts.push(if *got == BigUint::from(expect) {
            pass(fact)
        } else {
            fail(fact, got.to_string())
        });
    }
    // relators
    for rel in &fix.relators {
        let fact = format!("{n}: relator {rel}");
        match GenWord::parse(aut, rel) {
            Err(e) => verdicts.push(fail(fact, format!("parse error: {e}"))),
            Ok(word) => {
                if word.len() > 4 * budgets.relator_radius.max(8) {
                    verdicts.push(skip(fact, "beyond relator length budget"));
                } else {
                    verdicts.push(if word.is_identity() {
                        pass(fact)
                    } else {
                        fail(fact, "acts nontrivially".into())
                    });
                }
            }
        }
    }
    // contraction label
    {
        let fact = format!("{n}: contracting = {}", fix.contracting);
        let status = contraction_status(aut);
        let outcome = match (fix.contracting.as_str(), &status) {
            ("yes", ContractionStatus::Contracting(_)) => Outcome::Pass,
            ("no", ContractionStatus::NotContracting(_)) => Outcome::Pass,
            ("n/a", _) => Outcome::Pass,
            ("yes", ContractionStatus::NotContracting(w)) => Outcome::Fail {
                computed: format!("witness {} at {:?}", w.word, w.vertex),
            },
            ("no", ContractionStatus::Contracting(nuc)) => Outcome::Fail {
                computed: format!("nucleus of size {}", nuc.size()),
            },
            (_, ContractionStatus::Unknown) => Outcome::Skipped {
                reason: "undecided within caps".into(),
            },
            (other, _) => Outcome::Fail {
                computed: format!("unrecognized label {other:?}"),
            },
        };
        verdicts.push(Verdict { fact, outcome });
    }
    // self-replication label
    {
        let fact = format!("{n}: self-replicating = {}", fix.self_replicating);
        let got = self_replicating_check(
            aut,
            budgets.self_replication_radius,
            budgets.self_replication_depth,
        );
        let outcome = match (fix.self_replicating.as_str(), got) {
            ("yes", ThreeValued::Yes) | ("no", ThreeValued::No) => Outcome::Pass,
            ("yes", ThreeValued::No) => Outcome::Fail {
                computed: "no".into(),
            },
            ("no", ThreeValued::Yes) => Outcome::Fail {
                computed: "yes".into(),
            },
            (_, ThreeValued::Unknown) => Outcome::Skipped {
                reason: "undecided within budgets".into(),
            },
            (other, _) => Outcome::Fail {
                computed: format!("unrecognized label {other:?}"),
            },
        };
        verdicts.push(Verdict { fact, outcome });
    }
}

fn check_eq<T: PartialEq + std::fmt::Display>(fact: &str, expected: T, got: T) -> Verdict {
    Verdict {
        fact: fact.to_string(),
        outcome: if expected == got {
            Outcome::Pass
        } else {
            Outcome::Fail {
                computed: got.to_string(),
            }
        },
    }
}

fn pass(fact: String) -> Verdict {
    Verdict {
        fact,
        outcome: Outcome::Pass,
    }
}

fn fail(fact: String, computed: String) -> Verdict {
    Verdict {
        fact,
        outcome: Outcome::Fail { computed },
    }
}

fn skip(fact: String, reason: &str) -> Verdict {
    Verdict {
        fact,
        outcome: Outcome::Skipped {
            reason: reason.to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_parse_and_cover_everything() {
        let set = FixtureSet::bundled();
        assert_eq!(set.class_entries.len(), 4374);
        assert_eq!(set.automata.len(), 122);
        // the ranges plus entries cover 1..=5832 exactly once
        for n in 1..=5832u32 {
            assert!(set.expected_class_rep(n).is_some(), "n={n}");
        }
        // idempotent: the rep of a rep is itself
        for &(_, rep, _) in &set.class_entries {
            assert_eq!(set.expected_class_rep(rep), Some(rep));
        }
        // every value at most its key
        for &(n, rep, _) in &set.class_entries {
            assert!(rep <= n);
        }
        assert_eq!(set.iso_representatives().len(), 122);
    }

    #[test]
    fn all_fixture_relators_parse() {
        let set = FixtureSet::bundled();
        for (key, fix) in &set.automata {
            let aut = Automaton::decode_number(key.parse().unwrap()).unwrap();
            for rel in &fix.relators {
                assert!(
                    GenWord::parse(&aut, rel).is_ok(),
                    "automaton {key} relator {rel}"
                );
            }
        }
    }

    #[test]
    fn parse_error_carries_location() {
        let err = parse_str("{ \"headline\": ").unwrap_err();
        match err {
            FixtureError::Parse { line, .. } => assert!(line >= 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn corrupted_sf_exponent_fails() {
        let mut set = FixtureSet::bundled();
        // negative control: bump one exponent of automaton 731
        let fix = set.automata.get_mut("731").unwrap();
        fix.sf_exponents[3] += 1;
        let only_731: BTreeMap<String, AutomatonFixture> =
            [("731".to_string(), set.automata.remove("731").unwrap())].into();
        set.automata = only_731;
        let budgets = Budgets {
            level: 4,
            radius: 2,
            ..Budgets::default()
        };
        let verdicts = verify_fixtures(&set, &budgets);
        let bad: Vec<&Verdict> = verdicts
            .iter()
            .filter(|v| v.outcome.is_fail())
            .collect();
        assert_eq!(bad.len(), 1);
        assert!(bad[0].fact.contains("SF exponent at level 3"));
        match &bad[0].outcome {
            Outcome::Fail { computed } => assert_eq!(computed, "2^3"),
            _ => unreachable!(),
        }
    }
}
