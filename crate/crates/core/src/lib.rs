//! Boolean algebras of conditionals over finite event algebras, their
//! probabilities, the logic they induce and the measure-free interval view.

pub mod conditional_algebra;
pub mod error;
pub mod event_algebra;
pub mod io;
pub mod logic;
pub mod measure_free;
pub mod probability;
pub mod rational;
pub mod trees;

pub use conditional_algebra::{
    atom_rank, atom_unrank, count_basic, factorial, CAtom, CElement, CondTerm, ConditionalAlgebra, EqualityClause,
    OrderClause,
};
pub use error::{Error, Result};
pub use event_algebra::{truth_set, Event, EventAlgebra, Limits, DEFAULT_MAX_ATOMS, HARD_MAX_ATOMS, MAX_ATOMS_ENV};
pub use logic::{CLInterpretation, CondFormula, Engine, KnowledgeBase, PropFormula};
pub use measure_free::IntervalConditional;
pub use probability::{canonical_extension, CMeasure, EventMeasure};
pub use rational::{format_rational, parse_rational, Rational};
