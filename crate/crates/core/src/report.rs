//! Per-automaton analysis reports and the full classification run.

use crate::contraction::activity_class;
use crate::group::{
    enumerate_if_finite, growth_sequence, group_level_transitive, level_quotient_order,
    relator_search, self_replicating_check, GroupSize, ThreeValued,
};
use crate::mealy::{classify_all, Automaton, ClassTable, MealyError};
use crate::spectra::{operator_matrix, symmetric_spectrum, DEFAULT_HISTOGRAM_BINS};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Resource budgets for a report run. Statuses that cannot be settled
/// within the budgets are reported unknown, never guessed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Budgets {
    /// deepest level for the level-quotient orders (row 0..=level)
    pub level: usize,
    /// growth radius (counts 0..=radius)
    pub radius: usize,
    pub enumeration_cap: u64,
    pub relator_radius: usize,
    /// level of the spectrum histogram attached to reports
    pub spectrum_level: usize,
    pub nucleus_size_cap: usize,
    pub nucleus_depth_cap: usize,
    pub witness_word_radius: usize,
    pub witness_vertex_depth: usize,
    pub self_replication_radius: usize,
    pub self_replication_depth: usize,
    pub transitivity_depth: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            level: 8,
            radius: 5,
            enumeration_cap: 10_000,
            relator_radius: 5,
            spectrum_level: 7,
            nucleus_size_cap: crate::contraction::DEFAULT_NUCLEUS_SIZE_CAP,
            nucleus_depth_cap: crate::contraction::DEFAULT_NUCLEUS_DEPTH_CAP,
            witness_word_radius: crate::contraction::DEFAULT_WITNESS_WORD_RADIUS,
            witness_vertex_depth: crate::contraction::DEFAULT_WITNESS_VERTEX_DEPTH,
            self_replication_radius: 5,
            self_replication_depth: 6,
            transitivity_depth: 8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nucleus_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_vertex: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSummary {
    pub level: usize,
    pub bins: usize,
    pub histogram: Vec<u32>,
}

/// The per-automaton record mirroring one table cell of the classification:
/// recursion, class data, level-quotient orders, growth, relators,
/// contraction and self-replication statuses, activity, structural flags
/// and a spectrum histogram.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub number: u64,
    pub recursion: String,
    pub class_representative: u32,
    pub minimized_state_count: usize,
    /// level-quotient orders as exponents of two, levels `0..=level`
    pub sf_exponents: Vec<u64>,
    /// ball sizes, radii `0..=radius`, decimal
    pub growth: Vec<String>,
    /// relators found within the radius; all verified
    pub relators: Vec<String>,
    pub contracting: ContractionReport,
    pub self_replicating: ThreeValued,
    pub level_transitive: ThreeValued,
    /// activity class per state
    pub activity: Vec<String>,
    pub flags: crate::mealy::StructuralFlags,
    pub spectrum: SpectrumSummary,
}

/// Builds the full report for automaton `n` within the given budgets.
pub fn report(n: u64, budgets: &Budgets) -> Result<AnalysisReport, MealyError> {
    let aut = Automaton::decode_number(n)?;
    let table = classify_all();
    let minimized = aut.minimize();
    let sf_exponents: Vec<u64> = (0..=budgets.level)
        .map(|k| {
            let ord = level_quotient_order(&aut, k)?;
            // binary alphabet: level quotients embed in an iterated wreath
            // product of order 2^(2^k - 1), so the order is a power of two
            Ok(ord.trailing_zeros().unwrap_or(0))
        })
        .collect::<Result<_, MealyError>>()?;
    let growth = growth_sequence(&aut, budgets.radius)
        .counts
        .iter()
        .map(|c| c.to_string())
        .collect();
    let relators = relator_search(&aut, budgets.relator_radius)
        .iter()
        .map(|w| w.to_string())
        .collect();
    let contracting = match crate::contraction::nucleus_search(
        &aut,
        budgets.nucleus_size_cap,
        budgets.nucleus_depth_cap,
    ) {
        crate::contraction::NucleusOutcome::Found(nucleus) => ContractionReport {
            status: "yes".into(),
            nucleus_size: Some(nucleus.size()),
            witness_word: None,
            witness_vertex: None,
        },
        crate::contraction::NucleusOutcome::Unknown => {
            match crate::contraction::noncontraction_witness(
                &aut,
                budgets.witness_word_radius,
                budgets.witness_vertex_depth,
            ) {
                Some(w) if w.certified => ContractionReport {
                    status: "no".into(),
                    nucleus_size: None,
                    witness_word: Some(w.word),
                    witness_vertex: Some(
                        w.vertex.iter().map(|x| char::from(b'0' + x)).collect(),
                    ),
                },
                _ => ContractionReport {
                    status: "unknown".into(),
                    nucleus_size: None,
                    witness_word: None,
                    witness_vertex: None,
                },
            }
        }
    };
    let spectrum = {
        let m = operator_matrix(&aut, budgets.spectrum_level, true)?;
        let result = symmetric_spectrum(
            &m.to_dense(),
            m.dim,
            crate::spectra::DEFAULT_SPECTRUM_TOL,
            DEFAULT_HISTOGRAM_BINS,
        )
        .expect("symmetrized operator is symmetric");
        SpectrumSummary {
            level: budgets.spectrum_level,
            bins: DEFAULT_HISTOGRAM_BINS,
            histogram: result.histogram.counts,
        }
    };
    Ok(AnalysisReport {
        number: n,
        recursion: aut.to_string(),
        class_representative: table.representative(n),
        minimized_state_count: minimized.state_count(),
        sf_exponents,
        growth,
        relators,
        contracting,
        self_replicating: self_replicating_check(
            &aut,
            budgets.self_replication_radius,
            budgets.self_replication_depth,
        ),
        level_transitive: group_level_transitive(&aut, budgets.transitivity_depth),
        activity: (0..aut.state_count())
            .map(|s| activity_class(&aut, s).kind.label())
            .collect(),
        flags: aut.structural_flags(),
        spectrum,
    })
}

/// Headline numbers of a full classification run.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationSummary {
    pub class_count: usize,
    pub reduced_below_three: usize,
    /// the one class holding all of 1..=729
    pub low_range_representative: u32,
    /// the one class holding all of 5104..=5832
    pub high_range_representative: u32,
    /// class representatives whose groups closed within the enumeration cap
    pub finite_class_orders: BTreeMap<u32, u64>,
}

/// Runs the symmetry classification and enumerates every class
/// representative up to a small cap.
pub fn run_classification(enumeration_cap: u64) -> (ClassTable, ClassificationSummary) {
    let table = classify_all();
    let low = table.representative(1);
    let high = table.representative(5104);
    debug_assert!((1..=729).all(|n| table.representative(n) == low));
    debug_assert!((5104..=5832).all(|n| table.representative(n) == high));
    let reps = table.representatives();
    let finite: BTreeMap<u32, u64> = reps
        .par_iter()
        .filter_map(|&rep| {
            let aut = Automaton::decode_number(rep as u64).expect("in range");
            match enumerate_if_finite(&aut, enumeration_cap) {
                GroupSize::Finite(order) => Some((rep, order)),
                GroupSize::Unknown => None,
            }
        })
        .collect();
    let summary = ClassificationSummary {
        class_count: table.class_count(),
        reduced_below_three: table.reduced_below_three(),
        low_range_representative: low,
        high_range_representative: high,
        finite_class_orders: finite,
    };
    (table, summary)
}

impl AnalysisReport {
    /// Deterministic JSON: fixed field order, no maps keyed by hash.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("Automaton {}\n", self.number));
        out.push_str(&format!("  {}\n", self.recursion));
        out.push_str(&format!(
            "  class representative: {} (minimized states: {})\n",
            self.class_representative, self.minimized_state_count
        ));
        let sf: Vec<String> = self.sf_exponents.iter().map(|e| e.to_string()).collect();
        out.push_str(&format!("  SF exponents: {}\n", sf.join(",")));
        out.push_str(&format!("  growth: {}\n", self.growth.join(",")));
        out.push_str(&format!(
            "  relators (radius-limited): {}\n",
            if self.relators.is_empty() {
                "none".to_string()
            } else {
                self.relators.join(", ")
            }
        ));
        match (&self.contracting.nucleus_size, &self.contracting.witness_word) {
            (Some(size), _) => out.push_str(&format!(
                "  contracting: yes (nucleus size {size})\n"
            )),
            (None, Some(word)) => out.push_str(&format!(
                "  contracting: no (witness {} at vertex {})\n",
                word,
                self.contracting.witness_vertex.as_deref().unwrap_or("?")
            )),
            _ => out.push_str("  contracting: unknown\n"),
        }
        out.push_str(&format!("  self-replicating: {:?}\n", self.self_replicating));
        out.push_str(&format!("  level transitive: {:?}\n", self.level_transitive));
        out.push_str(&format!("  activity: {}\n", self.activity.join(", ")));
        out.push_str(&format!(
            "  flags: trivial_state={} open_set={} strongly_connected={} dual_invertible={} fully_invertible={}\n",
            self.flags.has_trivial_state,
            self.flags.open_set_condition,
            self.flags.strongly_connected,
            self.flags.dual_invertible,
            self.flags.fully_invertible
        ));
        out.push_str(&format!(
            "  spectrum: level {} histogram over [-1,1], {} bins\n",
            self.spectrum.level, self.spectrum.bins
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_731() {
        let budgets = Budgets {
            level: 4,
            radius: 3,
            relator_radius: 3,
            spectrum_level: 3,
            ..Budgets::default()
        };
        let r = report(731, &budgets).unwrap();
        assert_eq!(r.sf_exponents, vec![0, 1, 2, 3, 4]);
        assert_eq!(r.growth, vec!["1", "5", "9", "13"]);
        assert_eq!(r.contracting.status, "yes");
        assert_eq!(r.self_replicating, ThreeValued::Yes);
        assert_eq!(r.class_representative, 731);
        assert!(r.relators.iter().any(|w| w == "aab"));
    }

    #[test]
    fn report_out_of_range() {
        assert!(report(0, &Budgets::default()).is_err());
        assert!(report(5833, &Budgets::default()).is_err());
    }

    #[test]
    fn report_json_is_deterministic() {
        let budgets = Budgets {
            level: 3,
            radius: 2,
            relator_radius: 2,
            spectrum_level: 2,
            ..Budgets::default()
        };
        let a = report(846, &budgets).unwrap().to_json();
        let b = report(846, &budgets).unwrap().to_json();
        assert_eq!(a, b);
    }
}
