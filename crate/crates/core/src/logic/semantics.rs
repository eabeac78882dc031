//! CL-interpretations, entailment and nonmonotonic consequence.

use std::fmt;

use crate::conditional_algebra::{atom_rank, next_permutation, CElement, CondTerm, ConditionalAlgebra};
use crate::error::{Error, Result};
use crate::event_algebra::{truth_set, valuation_bit, Event, EventAlgebra};
use crate::logic::formula::{CondFormula, PropFormula};

/// Largest algebra the brute-force engine will enumerate.
pub const BRUTE_MAX_ATOMS: usize = 4;

/// A strict order on all worlds (atoms) of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CLInterpretation {
    order: Vec<usize>,
}

impl CLInterpretation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        atom_rank(&order)?;
        Ok(CLInterpretation { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn rank(&self) -> u64 {
        atom_rank(&self.order).expect("validated at construction")
    }

    pub fn from_rank(calg: &ConditionalAlgebra, rank: u64) -> Result<Self> {
        Ok(CLInterpretation { order: calg.atom(rank)?.perm().to_vec() })
    }

    /// `⟨label, label, …⟩`.
    pub fn render(&self, alg: &EventAlgebra) -> String {
        let parts: Vec<&str> = self.order.iter().map(|&i| alg.label(i)).collect();
        format!("<{}>", parts.join(", "))
    }
}

impl fmt::Display for CLInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

/// Truth of `name` at world `i`, read directly off the valuation or label.
fn symbol_at(alg: &EventAlgebra, name: &str, i: usize) -> Result<bool> {
    if let Some(vars) = alg.variables() {
        if let Some(j) = vars.iter().position(|v| v == name) {
            return Ok(valuation_bit(i, j, vars.len()));
        }
    }
    match alg.label_index(name) {
        Some(k) => Ok(k == i),
        None => Err(Error::UnknownSymbol(name.to_string())),
    }
}

fn holds_at(alg: &EventAlgebra, f: &PropFormula, i: usize) -> Result<bool> {
    for s in f.symbols() {
        symbol_at(alg, &s, i)?;
    }
    Ok(f.eval_with(&mut |name| symbol_at(alg, name, i).unwrap_or(false)))
}

/// A basic conditional is true when the first world satisfying the
/// antecedent satisfies the consequent.
pub fn eval_interp(alg: &EventAlgebra, e: &CLInterpretation, f: &CondFormula) -> Result<bool> {
    if e.order.len() != alg.n() {
        return Err(Error::LanguageMismatch(format!(
            "interpretation orders {} worlds, language has {}",
            e.order.len(),
            alg.n()
        )));
    }
    let mut failure = None;
    let value = f.eval_with(&mut |phi, psi| {
        let mut first = None;
        for &w in &e.order {
            match holds_at(alg, psi, w) {
                Ok(true) => {
                    first = Some(w);
                    break;
                }
                Ok(false) => {}
                Err(err) => {
                    failure.get_or_insert(err);
                    return false;
                }
            }
        }
        match first {
            Some(w) => holds_at(alg, phi, w).unwrap_or_else(|err| {
                failure.get_or_insert(err);
                false
            }),
            None => {
                failure.get_or_insert(Error::UnsatisfiableAntecedent(psi.to_string()));
                false
            }
        }
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(value),
    }
}

/// Translates a formula into a term over basic conditionals via truth sets.
pub fn to_term(alg: &EventAlgebra, f: &CondFormula) -> Result<CondTerm> {
    Ok(match f {
        CondFormula::Basic(a, b) => {
            let b_ev = truth_set(b, alg)?;
            if b_ev.is_bottom() {
                return Err(Error::UnsatisfiableAntecedent(b.to_string()));
            }
            CondTerm::basic(truth_set(a, alg)?, b_ev)
        }
        CondFormula::Not(x) => CondTerm::not(to_term(alg, x)?),
        CondFormula::And(l, r) => CondTerm::meet(to_term(alg, l)?, to_term(alg, r)?),
        CondFormula::Or(l, r) => CondTerm::join(to_term(alg, l)?, to_term(alg, r)?),
        CondFormula::Implies(l, r) => CondTerm::join(CondTerm::not(to_term(alg, l)?), to_term(alg, r)?),
        CondFormula::Iff(l, r) => {
            let (x, y) = (to_term(alg, l)?, to_term(alg, r)?);
            CondTerm::meet(
                CondTerm::join(CondTerm::not(x.clone()), y.clone()),
                CondTerm::join(CondTerm::not(y), x),
            )
        }
    })
}

pub fn to_element(calg: &ConditionalAlgebra, f: &CondFormula) -> Result<CElement> {
    calg.eval_term(&to_term(calg.base(), f)?)
}

/// A finite set of conditional formulas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    formulas: Vec<CondFormula>,
}

impl KnowledgeBase {
    pub fn new(formulas: Vec<CondFormula>) -> Self {
        KnowledgeBase { formulas }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn formulas(&self) -> &[CondFormula] {
        &self.formulas
    }

    pub fn push(&mut self, f: CondFormula) {
        self.formulas.push(f);
    }

    pub fn with(&self, f: CondFormula) -> Self {
        let mut k = self.clone();
        k.push(f);
        k
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// All basic conditionals `(a|b)`, `a ≤ b`, true at `e`: a maximal
    /// consistent set whose only model is `e`.
    pub fn complete_for(alg: &EventAlgebra, e: &CLInterpretation) -> Self {
        let full = alg.full_mask();
        let mut formulas = Vec::new();
        for b in 1..=full {
            let first = *e.order.iter().find(|&&w| (b >> w) & 1 == 1).expect("b is not bottom");
            let mut a = b;
            loop {
                if (a >> first) & 1 == 1 {
                    let (a_ev, b_ev) = (alg.mask(a), alg.mask(b));
                    formulas.push(CondFormula::basic(
                        PropFormula::from_event_dnf(alg, &a_ev),
                        PropFormula::from_event_dnf(alg, &b_ev),
                    ));
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & b;
            }
        }
        KnowledgeBase { formulas }
    }

    /// Meet of the elements of every formula (top when empty).
    pub fn element(&self, calg: &ConditionalAlgebra) -> Result<CElement> {
        let mut acc = calg.top();
        for f in &self.formulas {
            acc = acc.meet(&to_element(calg, f)?)?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Subset test in the conditional algebra.
    #[default]
    Fast,
    /// Enumeration of interpretations with formula evaluation per world.
    Brute,
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Engine::Fast),
            "brute" => Ok(Engine::Brute),
            other => Err(Error::Parse { pos: 0, msg: format!("unknown engine `{other}`") }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entailment {
    pub entailed: bool,
    /// Lowest-ranked interpretation satisfying the premises but not the goal.
    pub witness: Option<CLInterpretation>,
}

pub fn entails(calg: &ConditionalAlgebra, kb: &KnowledgeBase, goal: &CondFormula, engine: Engine) -> Result<Entailment> {
    match engine {
        Engine::Fast => {
            let premises = kb.element(calg)?;
            let target = to_element(calg, goal)?;
            let failing = premises.meet(&target.complement())?;
            let witness = match failing.ranks().next() {
                Some(r) => Some(CLInterpretation::from_rank(calg, r)?),
                None => None,
            };
            Ok(Entailment { entailed: witness.is_none(), witness })
        }
        Engine::Brute => entails_brute(calg.base(), kb, goal),
    }
}

/// Enumerates interpretations in lexicographic order, so the first failure
/// is the lowest-ranked one.
pub fn entails_brute(alg: &EventAlgebra, kb: &KnowledgeBase, goal: &CondFormula) -> Result<Entailment> {
    if alg.n() > BRUTE_MAX_ATOMS {
        return Err(Error::CapExceeded(format!(
            "brute-force engine handles at most {BRUTE_MAX_ATOMS} worlds, language has {}",
            alg.n()
        )));
    }
    let mut order: Vec<usize> = (0..alg.n()).collect();
    loop {
        let e = CLInterpretation { order: order.clone() };
        let mut premises = true;
        for f in kb.formulas() {
            if !eval_interp(alg, &e, f)? {
                premises = false;
                break;
            }
        }
        if premises && !eval_interp(alg, &e, goal)? {
            return Ok(Entailment { entailed: false, witness: Some(e) });
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(Entailment { entailed: true, witness: None })
}

/// A model of `f`, or `None` when unsatisfiable. Basic formulas reduce to
/// classical satisfiability of `φ∧ψ`.
pub fn satisfiable(calg: &ConditionalAlgebra, f: &CondFormula) -> Result<Option<CLInterpretation>> {
    let alg = calg.base();
    if let CondFormula::Basic(a, b) = f {
        let both = truth_set(&PropFormula::and(a.clone(), b.clone()), alg)?;
        if truth_set(b, alg)?.is_bottom() {
            return Err(Error::UnsatisfiableAntecedent(b.to_string()));
        }
        return Ok(both.atoms_below().first().map(|&w| {
            let order = std::iter::once(w).chain((0..alg.n()).filter(|&x| x != w)).collect();
            CLInterpretation { order }
        }));
    }
    let e = to_element(calg, f)?;
    let first = e.ranks().next();
    first.map(|r| CLInterpretation::from_rank(calg, r)).transpose()
}

/// `φ |∼_K ψ` iff `K` entails `(ψ | φ)`.
pub fn nm_consequence(
    calg: &ConditionalAlgebra,
    kb: &KnowledgeBase,
    phi: &PropFormula,
    psi: &PropFormula,
    engine: Engine,
) -> Result<Entailment> {
    if truth_set(phi, calg.base())?.is_bottom() {
        return Err(Error::UnsatisfiableAntecedent(phi.to_string()));
    }
    entails(calg, kb, &CondFormula::basic(psi.clone(), phi.clone()), engine)
}

/// Event pair of a basic leaf.
pub fn basic_events(alg: &EventAlgebra, a: &PropFormula, b: &PropFormula) -> Result<(Event, Event)> {
    Ok((truth_set(a, alg)?, truth_set(b, alg)?))
}
