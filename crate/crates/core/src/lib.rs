//! Computations with groups generated by finite invertible Mealy automata
//! acting on regular rooted trees.
//!
//! The crate covers the binary-alphabet, three-state classification space
//! (automata numbered 1 through 5832) end to end: numbering, minimization
//! and symmetry reduction, the exact word problem for tree automorphisms,
//! level-quotient orders, growth, relator search, transitivity series over
//! GF(2), nucleus/contraction analysis, Sidki activity classes, Schreier
//! graphs and the spectra of their averaging operators, plus fixture
//! verification against the reference tables shipped in `fixtures/`.

pub mod contraction;
pub mod dot;
pub mod fixtures;
pub mod group;
pub mod mealy;
pub mod report;
pub mod series;
pub mod spectra;
pub mod words;

pub use contraction::{
    activity_class, contraction_status, nucleus_search, ActivityClass, ActivityKind,
    ContractionStatus, Nucleus, NucleusOutcome,
};
pub use group::{
    enumerate_if_finite, growth_sequence, group_level_transitive, level_quotient_order,
    relator_search, self_replicating_check, verify_relator, GroupSize, GrowthRecord, LevelGroup,
    ThreeValued,
};
pub use mealy::{classify_all, Automaton, ClassTable, MealyError, StructuralFlags, SymmetryOp};
pub use report::{report, run_classification, AnalysisReport, Budgets};
pub use series::{transitivity_series, RationalSeries};
pub use words::{is_level_transitive, GenWord, Order, WordParseError};
