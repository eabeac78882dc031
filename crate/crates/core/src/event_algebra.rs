//! Finite atomic Boolean algebras with named atoms.
//!
//! An [`Event`] is a set of atoms stored as a `u64` mask (bit `i` set means
//! atom `i` lies below the event). Every event carries the identity of the
//! algebra that created it, and binary operations on events of different
//! algebras fail with [`Error::MixedAlgebras`].

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::PropFormula;

/// Hard ceiling on the number of atoms: ranks of conditional atoms are `u64`.
pub const HARD_MAX_ATOMS: usize = 20;
pub const DEFAULT_MAX_ATOMS: usize = 8;
pub const MAX_ATOMS_ENV: &str = "CONDAL_MAX_ATOMS";

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_atoms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_atoms: DEFAULT_MAX_ATOMS }
    }
}

impl Limits {
    /// Reads `CONDAL_MAX_ATOMS`, clamped to [`HARD_MAX_ATOMS`].
    pub fn from_env() -> Self {
        let max_atoms = std::env::var(MAX_ATOMS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .unwrap_or(DEFAULT_MAX_ATOMS)
            .min(HARD_MAX_ATOMS);
        Limits { max_atoms }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        let cap = self.max_atoms.min(HARD_MAX_ATOMS);
        if n > cap {
            return Err(Error::TooManyAtoms { n, cap });
        }
        Ok(())
    }
}

#[derive(Debug)]
struct Inner {
    id: u64,
    labels: Vec<String>,
    variables: Option<Vec<String>>,
}

/// A finite Boolean algebra given by its atoms. Cheap to clone.
#[derive(Debug, Clone)]
pub struct EventAlgebra {
    inner: Arc<Inner>,
}

impl PartialEq for EventAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for EventAlgebra {}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_names(names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if name == "T" || name == "F" {
            return Err(Error::ReservedLabel(name.clone()));
        }
        if !is_identifier(name) {
            return Err(Error::InvalidLabel(name.clone()));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateLabel(name.clone()));
        }
    }
    Ok(())
}

impl EventAlgebra {
    /// Builds an algebra with `n` atoms, checking the cap from the environment.
    /// Default labels are `a1..an`.
    pub fn new(n: usize, labels: Option<Vec<String>>) -> Result<Self> {
        Self::with_limits(n, labels, &Limits::from_env())
    }

    pub fn with_limits(n: usize, labels: Option<Vec<String>>, limits: &Limits) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlgebra);
        }
        limits.check(n)?;
        let labels = match labels {
            Some(l) => {
                if l.len() != n {
                    return Err(Error::LabelCount { expected: n, got: l.len() });
                }
                check_names(&l)?;
                l
            }
            None => (1..=n).map(|i| format!("a{i}")).collect(),
        };
        Ok(Self::from_parts(labels, None))
    }

    fn from_parts(labels: Vec<String>, variables: Option<Vec<String>>) -> Self {
        let id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        EventAlgebra { inner: Arc::new(Inner { id, labels, variables }) }
    }

    /// Lindenbaum algebra of the language over `names`: one atom per valuation.
    ///
    /// Atom `i` makes variable `j` true iff bit `m-1-j` of `i` is 0, so atom 0
    /// is the all-true valuation and variable 0 is the most significant digit.
    pub fn lindenbaum(names: &[String]) -> Result<Self> {
        Self::lindenbaum_with_limits(names, &Limits::from_env())
    }

    pub fn lindenbaum_with_limits(names: &[String], limits: &Limits) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::EmptyAlgebra);
        }
        check_names(names)?;
        let n = 1usize.checked_shl(m as u32).filter(|_| m < 32).unwrap_or(usize::MAX);
        limits.check(n)?;
        let labels = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if valuation_bit(i, j, m) {
                            names[j].clone()
                        } else {
                            format!("~{}", names[j])
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("/\\")
            })
            .collect();
        Ok(Self::from_parts(labels, Some(names.to_vec())))
    }

    pub fn id(&self) -> u64 {
        self.inner.id
    }

    pub fn n(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.inner.labels[i]
    }

    pub fn variables(&self) -> Option<&[String]> {
        self.inner.variables.as_deref()
    }

    pub fn is_lindenbaum(&self) -> bool {
        self.inner.variables.is_some()
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.n())
    }

    /// Number of elements of the event lattice, `2^n`.
    pub fn lattice_size(&self) -> u128 {
        1u128 << self.n()
    }

    pub fn bottom(&self) -> Event {
        Event { alg: self.id(), n: self.n() as u8, bits: 0 }
    }

    pub fn top(&self) -> Event {
        Event { alg: self.id(), n: self.n() as u8, bits: self.full_mask() }
    }

    pub fn atom(&self, i: usize) -> Result<Event> {
        if i >= self.n() {
            return Err(Error::EventOutOfRange(1u64.checked_shl(i as u32).unwrap_or(u64::MAX)));
        }
        Ok(self.mask(1 << i))
    }

    pub fn event(&self, bits: u64) -> Result<Event> {
        if bits & !self.full_mask() != 0 {
            return Err(Error::EventOutOfRange(bits));
        }
        Ok(self.mask(bits))
    }

    /// Unchecked constructor for internal loops over valid masks.
    pub(crate) fn mask(&self, bits: u64) -> Event {
        debug_assert!(bits & !self.full_mask() == 0);
        Event { alg: self.id(), n: self.n() as u8, bits }
    }

    pub fn from_atom_set<I: IntoIterator<Item = usize>>(&self, atoms: I) -> Result<Event> {
        let mut bits = 0u64;
        for i in atoms {
            if i >= self.n() {
                return Err(Error::EventOutOfRange(1u64.checked_shl(i as u32).unwrap_or(u64::MAX)));
            }
            bits |= 1 << i;
        }
        Ok(self.mask(bits))
    }

    /// All `2^n` events in increasing mask order.
    pub fn events(&self) -> impl Iterator<Item = Event> + '_ {
        (0..=self.full_mask()).map(move |b| self.mask(b))
    }

    pub fn owns(&self, e: &Event) -> bool {
        e.alg == self.id()
    }

    pub fn check(&self, e: &Event) -> Result<()> {
        if self.owns(e) {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.inner.labels.iter().position(|l| l == name)
    }

    /// Event denoted by a formula symbol: a variable (Lindenbaum algebras)
    /// or an atom label.
    pub fn symbol_event(&self, name: &str) -> Result<Event> {
        if let Some(vars) = &self.inner.variables {
            if let Some(j) = vars.iter().position(|v| v == name) {
                let m = vars.len();
                let bits = (0..self.n())
                    .filter(|&i| valuation_bit(i, j, m))
                    .fold(0u64, |acc, i| acc | (1 << i));
                return Ok(self.mask(bits));
            }
        }
        match self.label_index(name) {
            Some(i) => Ok(self.mask(1 << i)),
            None => Err(Error::UnknownSymbol(name.to_string())),
        }
    }

    /// The valuation labelling atom `i` of a Lindenbaum algebra.
    pub fn valuation(&self, i: usize) -> Option<Vec<bool>> {
        let vars = self.inner.variables.as_ref()?;
        let m = vars.len();
        Some((0..m).map(|j| valuation_bit(i, j, m)).collect())
    }

    /// Event from a list of atom labels.
    pub fn event_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Event> {
        let mut bits = 0u64;
        for l in labels {
            let i = self
                .label_index(l.as_ref())
                .ok_or_else(|| Error::UnknownSymbol(l.as_ref().to_string()))?;
            bits |= 1 << i;
        }
        Ok(self.mask(bits))
    }

    /// Atom labels of an event, in atom order.
    pub fn event_labels(&self, e: &Event) -> Vec<String> {
        e.atoms_below().into_iter().map(|i| self.label(i).to_string()).collect()
    }

    /// Renders an event as a formula string: `T`, `F`, or a disjunction of atoms.
    pub fn render(&self, e: &Event) -> String {
        if e.bits == 0 {
            return "F".into();
        }
        if e.bits == self.full_mask() {
            return "T".into();
        }
        let parts: Vec<String> = e
            .atoms_below()
            .into_iter()
            .map(|i| {
                let l = self.label(i);
                if e.bits.count_ones() > 1 && l.contains("/\\") {
                    format!("({l})")
                } else {
                    l.to_string()
                }
            })
            .collect();
        parts.join(" \\/ ")
    }
}

/// Truth value of variable `j` (of `m`) at Lindenbaum atom `i`.
pub(crate) fn valuation_bit(i: usize, j: usize, m: usize) -> bool {
    (i >> (m - 1 - j)) & 1 == 0
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An element of a finite event algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    alg: u64,
    n: u8,
    bits: u64,
}

impl Event {
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn algebra_id(&self) -> u64 {
        self.alg
    }

    pub(crate) fn with_bits(&self, bits: u64) -> Event {
        Event { bits, ..*self }
    }

    fn same(&self, other: &Event) -> Result<()> {
        if self.alg != other.alg {
            Err(Error::MixedAlgebras)
        } else {
            Ok(())
        }
    }

    pub fn is_bottom(&self) -> bool {
        self.bits == 0
    }

    pub fn is_top(&self) -> bool {
        self.bits == full_mask(self.n())
    }

    pub fn meet(&self, other: &Event) -> Result<Event> {
        self.same(other)?;
        Ok(self.with_bits(self.bits & other.bits))
    }

    pub fn join(&self, other: &Event) -> Result<Event> {
        self.same(other)?;
        Ok(self.with_bits(self.bits | other.bits))
    }

    pub fn complement(&self) -> Event {
        self.with_bits(!self.bits & full_mask(self.n()))
    }

    /// Material implication `self → other`.
    pub fn implies(&self, other: &Event) -> Result<Event> {
        self.same(other)?;
        Ok(self.with_bits((!self.bits | other.bits) & full_mask(self.n())))
    }

    pub fn leq(&self, other: &Event) -> Result<bool> {
        self.same(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    pub fn is_atom(&self) -> bool {
        self.bits.count_ones() == 1
    }

    pub fn contains_atom(&self, i: usize) -> bool {
        i < 64 && (self.bits >> i) & 1 == 1
    }

    pub fn count(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Indices of the atoms below this event, ascending.
    pub fn atoms_below(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.contains_atom(i)).collect()
    }
}

impl std::ops::Not for Event {
    type Output = Event;
    fn not(self) -> Event {
        self.complement()
    }
}

/// Events satisfying `formula`, computed by truth table over the atoms.
pub fn truth_set(formula: &PropFormula, alg: &EventAlgebra) -> Result<Event> {
    let mut masks: Vec<(String, u64)> = Vec::new();
    for name in formula.symbols() {
        masks.push((name.clone(), alg.symbol_event(&name)?.bits()));
    }
    let mut bits = 0u64;
    for i in 0..alg.n() {
        let holds = formula.eval_with(&mut |name: &str| {
            let m = masks.iter().find(|(s, _)| s == name).map(|(_, m)| *m).unwrap_or(0);
            (m >> i) & 1 == 1
        });
        if holds {
            bits |= 1 << i;
        }
    }
    Ok(alg.mask(bits))
}
