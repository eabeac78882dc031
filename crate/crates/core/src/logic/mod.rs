//! The logic of Boolean conditionals: formulas, parser, semantics and
//! the KLM rule harness.

mod formula;
pub mod klm;
pub mod parser;
mod semantics;

pub use formula::{CondFormula, PropFormula};
pub use klm::{klm_harness, HarnessMode, KlmRule, Oracle, RuleReport};
pub use parser::{parse, parse_cond_syntax, parse_nm_query, parse_prop, parse_prop_in};
pub use semantics::{
    basic_events, entails, entails_brute, eval_interp, nm_consequence, satisfiable, to_element, to_term,
    CLInterpretation, Engine, Entailment, KnowledgeBase, BRUTE_MAX_ATOMS,
};
