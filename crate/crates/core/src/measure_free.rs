//! Measure-free conditionals as intervals of events `[a∧b, b→a]`.

use crate::conditional_algebra::{CElement, ConditionalAlgebra};
use crate::error::{Error, Result};
use crate::event_algebra::{Event, EventAlgebra};

/// Largest knowledge base `dp_entails` searches exhaustively.
pub const DP_MAX_PREMISES: usize = 12;

/// The set of events between `lower` and `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalConditional {
    lower: Event,
    upper: Event,
}

impl IntervalConditional {
    pub fn new(lower: Event, upper: Event) -> Result<Self> {
        if !lower.leq(&upper)? {
            return Err(Error::NotBelow("interval lower bound must be below its upper bound".into()));
        }
        Ok(IntervalConditional { lower, upper })
    }

    pub fn lower(&self) -> Event {
        self.lower
    }

    pub fn upper(&self) -> Event {
        self.upper
    }

    /// `lower ∨ ¬upper`; `⊤` for singletons.
    pub fn antecedent(&self) -> Event {
        self.lower.join(&!self.upper).expect("same algebra")
    }

    /// Consequent in canonical form, below the antecedent.
    pub fn consequent(&self) -> Event {
        self.lower
    }

    pub fn negation(&self) -> Self {
        IntervalConditional { lower: !self.upper, upper: !self.lower }
    }

    pub fn contains(&self, x: &Event) -> Result<bool> {
        Ok(self.lower.leq(x)? && x.leq(&self.upper)?)
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.lower.algebra_id() != other.lower.algebra_id() {
            return Err(Error::MixedAlgebras);
        }
        Ok(())
    }

    pub fn render(&self, alg: &EventAlgebra) -> String {
        format!("[{}, {}]", alg.render(&self.lower), alg.render(&self.upper))
    }
}

pub fn to_interval(a: &Event, b: &Event) -> Result<IntervalConditional> {
    if b.is_bottom() {
        return Err(Error::BottomAntecedent);
    }
    IntervalConditional::new(a.meet(b)?, b.implies(a)?)
}

/// The conditional `(upper | antecedent)` rebuilt from its components.
fn from_parts(consequent_or_implication: Event, antecedent: Event) -> IntervalConditional {
    let lower = consequent_or_implication.meet(&antecedent).expect("same algebra");
    let upper = antecedent.implies(&consequent_or_implication).expect("same algebra");
    IntervalConditional { lower, upper }
}

/// `((b→a)∧(d→c) | b∨d)`.
pub fn quasi_conj(x: &IntervalConditional, y: &IntervalConditional) -> Result<IntervalConditional> {
    x.same_algebra(y)?;
    Ok(from_parts(x.upper.meet(&y.upper)?, x.antecedent().join(&y.antecedent())?))
}

pub fn quasi_disj(x: &IntervalConditional, y: &IntervalConditional) -> Result<IntervalConditional> {
    Ok(quasi_conj(&x.negation(), &y.negation())?.negation())
}

/// `(a∧c | (¬a∧b)∨(¬c∧d)∨(b∧d))`.
pub fn gn_conj(x: &IntervalConditional, y: &IntervalConditional) -> Result<IntervalConditional> {
    x.same_algebra(y)?;
    let (a, b, c, d) = (x.consequent(), x.antecedent(), y.consequent(), y.antecedent());
    let ante = (!a).meet(&b)?.join(&(!c).meet(&d)?)?.join(&b.meet(&d)?)?;
    Ok(from_parts(a.meet(&c)?, ante))
}

pub fn gn_disj(x: &IntervalConditional, y: &IntervalConditional) -> Result<IntervalConditional> {
    Ok(gn_conj(&x.negation(), &y.negation())?.negation())
}

/// Componentwise order of the bounds.
pub fn interval_leq(x: &IntervalConditional, y: &IntervalConditional) -> Result<bool> {
    x.same_algebra(y)?;
    Ok(x.lower.leq(&y.lower)? && x.upper.leq(&y.upper)?)
}

/// Quasi-conjunction of all of `xs` (`None` when empty).
pub fn quasi_conj_all(xs: &[IntervalConditional]) -> Result<Option<IntervalConditional>> {
    let mut it = xs.iter();
    let Some(first) = it.next() else {
        return Ok(None);
    };
    let mut acc = *first;
    for x in it {
        acc = quasi_conj(&acc, x)?;
    }
    Ok(Some(acc))
}

/// `target` is in `kb`, or some nonempty subset of `kb` has a
/// quasi-conjunction below it.
pub fn dp_entails(kb: &[IntervalConditional], target: &IntervalConditional) -> Result<bool> {
    if kb.len() > DP_MAX_PREMISES {
        return Err(Error::CapExceeded(format!(
            "exhaustive subset search handles at most {DP_MAX_PREMISES} premises, got {}",
            kb.len()
        )));
    }
    if kb.contains(target) {
        return Ok(true);
    }
    for subset in 1u32..(1 << kb.len()) {
        let chosen: Vec<IntervalConditional> =
            (0..kb.len()).filter(|i| (subset >> i) & 1 == 1).map(|i| kb[i]).collect();
        let c = quasi_conj_all(&chosen)?.expect("nonempty");
        if interval_leq(&c, target)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The basic conditional of the interval as an element of the conditional algebra.
pub fn to_element(calg: &ConditionalAlgebra, x: &IntervalConditional) -> Result<CElement> {
    let b = x.antecedent();
    if b.is_bottom() {
        return Err(Error::BottomAntecedent);
    }
    calg.atoms_below_basic(&x.consequent(), &b)
}

/// Every interval of the algebra, by `(lower, upper)` masks ascending.
pub fn all_intervals(alg: &EventAlgebra) -> Vec<IntervalConditional> {
    let full = alg.full_mask();
    let mut out = Vec::new();
    for l in 0..=full {
        let mut u = l;
        while u <= full {
            out.push(IntervalConditional { lower: alg.mask(l), upper: alg.mask(u) });
            u = (u + 1) | l;
        }
    }
    out
}

/// First triple `(x, y, z)` with `x ∧_Q (y ∨_Q z) ≠ (x ∧_Q y) ∨_Q (x ∧_Q z)`.
pub fn find_nondistributive_triple(
    alg: &EventAlgebra,
) -> Result<Option<(IntervalConditional, IntervalConditional, IntervalConditional)>> {
    let all = all_intervals(alg);
    for x in &all {
        for y in &all {
            for z in &all {
                let lhs = quasi_conj(x, &quasi_disj(y, z)?)?;
                let rhs = quasi_disj(&quasi_conj(x, y)?, &quasi_conj(x, z)?)?;
                if lhs != rhs {
                    return Ok(Some((*x, *y, *z)));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    Below,
    Above,
    Incomparable,
}

impl Relation {
    pub fn from_order(le: bool, ge: bool) -> Self {
        match (le, ge) {
            (true, true) => Relation::Equal,
            (true, false) => Relation::Below,
            (false, true) => Relation::Above,
            (false, false) => Relation::Incomparable,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::Below => "<=",
            Relation::Above => ">=",
            Relation::Incomparable => "incomparable",
        }
    }
}

pub fn interval_relation(x: &IntervalConditional, y: &IntervalConditional) -> Result<Relation> {
    Ok(Relation::from_order(interval_leq(x, y)?, interval_leq(y, x)?))
}
