//! Rule-by-rule check of a consequence relation `|∼_K` against the
//! preferential rules, rational monotonicity and conditional excluded middle.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conditional_algebra::ConditionalAlgebra;
use crate::error::{Error, Result};
use crate::event_algebra::{Event, EventAlgebra};
use crate::logic::formula::PropFormula;
use crate::logic::semantics::{nm_consequence, Engine, KnowledgeBase};

/// Largest algebra for exhaustive instance generation (two variables).
pub const EXHAUSTIVE_MAX_ATOMS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KlmRule {
    Reflexivity,
    LeftLogicalEquivalence,
    RightWeakening,
    Cut,
    Or,
    And,
    CautiousMonotony,
    RationalMonotonicity,
    ConditionalExcludedMiddle,
}

impl KlmRule {
    pub const ALL: [KlmRule; 9] = [
        KlmRule::Reflexivity,
        KlmRule::LeftLogicalEquivalence,
        KlmRule::RightWeakening,
        KlmRule::Cut,
        KlmRule::Or,
        KlmRule::And,
        KlmRule::CautiousMonotony,
        KlmRule::RationalMonotonicity,
        KlmRule::ConditionalExcludedMiddle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            KlmRule::Reflexivity => "Reflexivity",
            KlmRule::LeftLogicalEquivalence => "LLE",
            KlmRule::RightWeakening => "RW",
            KlmRule::Cut => "Cut",
            KlmRule::Or => "OR",
            KlmRule::And => "AND",
            KlmRule::CautiousMonotony => "CM",
            KlmRule::RationalMonotonicity => "RM",
            KlmRule::ConditionalExcludedMiddle => "CEM",
        }
    }

    /// The seven rules every `|∼_K` must satisfy.
    pub fn is_preferential(&self) -> bool {
        !matches!(self, KlmRule::RationalMonotonicity | KlmRule::ConditionalExcludedMiddle)
    }

    /// Number of event arguments of an instance.
    pub fn arity(&self) -> usize {
        match self {
            KlmRule::Reflexivity => 1,
            KlmRule::LeftLogicalEquivalence
            | KlmRule::RightWeakening
            | KlmRule::ConditionalExcludedMiddle => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleReport {
    pub rule: KlmRule,
    pub checked: usize,
    pub skipped: usize,
    pub failures: usize,
    /// Events of the first failing instance, in the rule's argument order.
    pub first_failure: Option<Vec<Event>>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarnessMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

/// Memoized `ante |∼_K cons` on events, asked through formulas.
pub struct Oracle<'a> {
    calg: &'a ConditionalAlgebra,
    kb: &'a KnowledgeBase,
    engine: Engine,
    cache: HashMap<(u64, u64), bool>,
}

impl<'a> Oracle<'a> {
    pub fn new(calg: &'a ConditionalAlgebra, kb: &'a KnowledgeBase, engine: Engine) -> Self {
        Oracle { calg, kb, engine, cache: HashMap::new() }
    }

    fn alg(&self) -> &EventAlgebra {
        self.calg.base()
    }

    pub fn nm(&mut self, ante: &Event, cons: &Event) -> Result<bool> {
        if let Some(&v) = self.cache.get(&(ante.bits(), cons.bits())) {
            return Ok(v);
        }
        let phi = PropFormula::from_event_dnf(self.alg(), ante);
        let psi = PropFormula::from_event_dnf(self.alg(), cons);
        let v = nm_consequence(self.calg, self.kb, &phi, &psi, self.engine)?.entailed;
        self.cache.insert((ante.bits(), cons.bits()), v);
        Ok(v)
    }

    fn nm_formulas(&self, ante: &PropFormula, cons: &PropFormula) -> Result<bool> {
        Ok(nm_consequence(self.calg, self.kb, ante, cons, self.engine)?.entailed)
    }

    /// `Some(true)` if the instance satisfies the rule, `Some(false)` if it is
    /// a counterexample, `None` if an antecedent it needs is unsatisfiable.
    pub fn check_instance(&mut self, rule: KlmRule, args: &[Event]) -> Result<Option<bool>> {
        if args.len() != rule.arity() {
            return Err(Error::Unsupported(format!("{} takes {} events", rule.name(), rule.arity())));
        }
        let alg = self.alg().clone();
        let m = |x: &Event, y: &Event| x.meet(y).expect("same algebra");
        let j = |x: &Event, y: &Event| x.join(y).expect("same algebra");
        Ok(match rule {
            KlmRule::Reflexivity => {
                let phi = args[0];
                if phi.is_bottom() {
                    return Ok(None);
                }
                Some(self.nm(&phi, &phi)?)
            }
            KlmRule::LeftLogicalEquivalence => {
                let (phi, chi) = (args[0], args[1]);
                if phi.is_bottom() {
                    return Ok(None);
                }
                let dnf = PropFormula::from_event_dnf(&alg, &phi);
                let cnf = PropFormula::from_event_cnf(&alg, &phi);
                let target = PropFormula::from_event_dnf(&alg, &chi);
                Some(self.nm_formulas(&dnf, &target)? == self.nm_formulas(&cnf, &target)?)
            }
            KlmRule::RightWeakening => {
                // χ |∼ φ, φ ≤ ψ  ⇒  χ |∼ ψ, with ψ ranging over all supersets
                let (chi, phi) = (args[0], args[1]);
                if chi.is_bottom() {
                    return Ok(None);
                }
                if !self.nm(&chi, &phi)? {
                    Some(true)
                } else {
                    let full = alg.full_mask();
                    let mut ok = true;
                    let mut psi = phi.bits();
                    while psi <= full {
                        ok &= self.nm(&chi, &alg.event(psi)?)?;
                        psi = (psi + 1) | phi.bits();
                    }
                    Some(ok)
                }
            }
            KlmRule::Cut => {
                let (psi, phi, chi) = (args[0], args[1], args[2]);
                let both = m(&phi, &psi);
                if psi.is_bottom() || both.is_bottom() {
                    return Ok(None);
                }
                Some(!(self.nm(&psi, &phi)? && self.nm(&both, &chi)?) || self.nm(&psi, &chi)?)
            }
            KlmRule::Or => {
                let (psi, chi, phi) = (args[0], args[1], args[2]);
                if psi.is_bottom() || chi.is_bottom() {
                    return Ok(None);
                }
                Some(!(self.nm(&psi, &phi)? && self.nm(&chi, &phi)?) || self.nm(&j(&psi, &chi), &phi)?)
            }
            KlmRule::And => {
                let (psi, phi, delta) = (args[0], args[1], args[2]);
                if psi.is_bottom() {
                    return Ok(None);
                }
                Some(!(self.nm(&psi, &phi)? && self.nm(&psi, &delta)?) || self.nm(&psi, &m(&phi, &delta))?)
            }
            KlmRule::CautiousMonotony => {
                let (psi, phi, chi) = (args[0], args[1], args[2]);
                let both = m(&phi, &psi);
                if psi.is_bottom() || both.is_bottom() {
                    return Ok(None);
                }
                Some(!(self.nm(&psi, &phi)? && self.nm(&psi, &chi)?) || self.nm(&both, &chi)?)
            }
            KlmRule::RationalMonotonicity => {
                let (psi, phi, chi) = (args[0], args[1], args[2]);
                let both = m(&psi, &chi);
                if psi.is_bottom() || both.is_bottom() {
                    return Ok(None);
                }
                Some(!(self.nm(&psi, &phi)? && !self.nm(&psi, &!chi)?) || self.nm(&both, &phi)?)
            }
            KlmRule::ConditionalExcludedMiddle => {
                let (psi, phi) = (args[0], args[1]);
                if psi.is_bottom() {
                    return Ok(None);
                }
                Some(self.nm(&psi, &phi)? || self.nm(&psi, &!phi)?)
            }
        })
    }
}

/// Runs every rule on generated instances: all event tuples in exhaustive
/// mode, seeded random tuples in sampled mode.
pub fn klm_harness(
    calg: &ConditionalAlgebra,
    kb: &KnowledgeBase,
    mode: HarnessMode,
    engine: Engine,
) -> Result<Vec<RuleReport>> {
    let alg = calg.base();
    if mode == HarnessMode::Exhaustive && alg.n() > EXHAUSTIVE_MAX_ATOMS {
        return Err(Error::CapExceeded(format!(
            "exhaustive instance generation handles at most {EXHAUSTIVE_MAX_ATOMS} worlds; use sampling"
        )));
    }
    let mut oracle = Oracle::new(calg, kb, engine);
    let size = alg.full_mask() + 1;
    let mut reports = Vec::new();
    for rule in KlmRule::ALL {
        let mut report = RuleReport { rule, checked: 0, skipped: 0, failures: 0, first_failure: None };
        let mut visit = |args: Vec<Event>, oracle: &mut Oracle| -> Result<()> {
            match oracle.check_instance(rule, &args)? {
                None => report.skipped += 1,
                Some(true) => report.checked += 1,
                Some(false) => {
                    report.checked += 1;
                    report.failures += 1;
                    report.first_failure.get_or_insert(args);
                }
            }
            Ok(())
        };
        match mode {
            HarnessMode::Exhaustive => {
                let k = rule.arity();
                let total = size.pow(k as u32);
                for code in 0..total {
                    let mut args = Vec::with_capacity(k);
                    let mut c = code;
                    for _ in 0..k {
                        args.push(alg.mask(c % size));
                        c /= size;
                    }
                    args.reverse();
                    visit(args, &mut oracle)?;
                }
            }
            HarnessMode::Sampled { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (rule as u64).wrapping_mul(0x9E37_79B9));
                for _ in 0..samples {
                    let args = (0..rule.arity()).map(|_| alg.mask(rng.gen_range(0..size))).collect();
                    visit(args, &mut oracle)?;
                }
            }
        }
        reports.push(report);
    }
    Ok(reports)
}
