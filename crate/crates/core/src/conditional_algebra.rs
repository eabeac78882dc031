//! The Boolean algebra of conditionals over a finite event algebra,
//! represented by its atoms.
//!
//! Atoms are the permutations of the base atoms, numbered by lexicographic
//! rank. An element is a set of atom ranks. The basic conditional `(a|b)`
//! contains exactly the permutations whose first atom lying in `b` also
//! lies in `a`.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::event_algebra::{Event, EventAlgebra};

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Lexicographic rank of a permutation of `0..n` via its Lehmer code.
pub fn atom_rank(perm: &[usize]) -> Result<u64> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!("{perm:?}")));
        }
        seen[p] = true;
    }
    let mut rank = 0u64;
    for i in 0..n {
        let smaller_after = perm[i + 1..].iter().filter(|&&q| q < perm[i]).count() as u64;
        rank += smaller_after * factorial(n - 1 - i);
    }
    Ok(rank)
}

/// Inverse of [`atom_rank`].
pub fn atom_unrank(n: usize, rank: u64) -> Result<Vec<usize>> {
    let count = factorial(n);
    if rank >= count {
        return Err(Error::RankOutOfRange { rank, count });
    }
    let mut pool: Vec<usize> = (0..n).collect();
    let mut rest = rank;
    let mut perm = Vec::with_capacity(n);
    for i in 0..n {
        let f = factorial(n - 1 - i);
        let d = (rest / f) as usize;
        rest %= f;
        perm.push(pool.remove(d));
    }
    Ok(perm)
}

/// Number of distinct basic conditionals: `2 + Σ_{r=2}^{n} C(n,r)(2^r − 2)`.
pub fn count_basic(n: usize) -> u64 {
    let n = n as u64;
    2 + (2..=n).map(|r| binomial(n, r) * ((1u64 << r) - 2)).sum::<u64>()
}

/// An atom of the conditional algebra: a full permutation of the base atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CAtom {
    perm: Vec<usize>,
}

impl CAtom {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        atom_rank(&perm)?;
        Ok(CAtom { perm })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn rank(&self) -> u64 {
        atom_rank(&self.perm).expect("validated at construction")
    }
}

/// An element of the conditional algebra: the set of atom ranks below it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CElement {
    alg: u64,
    bits: FixedBitSet,
}

impl CElement {
    pub fn algebra_id(&self) -> u64 {
        self.alg
    }

    /// Number of atoms of the ambient algebra.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    fn same(&self, other: &CElement) -> Result<()> {
        if self.alg != other.alg {
            Err(Error::MixedAlgebras)
        } else {
            Ok(())
        }
    }

    pub fn meet(&self, other: &CElement) -> Result<CElement> {
        self.same(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(CElement { alg: self.alg, bits })
    }

    pub fn join(&self, other: &CElement) -> Result<CElement> {
        self.same(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(CElement { alg: self.alg, bits })
    }

    pub fn complement(&self) -> CElement {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        CElement { alg: self.alg, bits }
    }

    pub fn leq(&self, other: &CElement) -> Result<bool> {
        self.same(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub fn contains(&self, rank: u64) -> bool {
        (rank as usize) < self.bits.len() && self.bits.contains(rank as usize)
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_bottom(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_top(&self) -> bool {
        self.count() == self.bits.len()
    }

    /// Atom ranks below this element, ascending.
    pub fn ranks(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.ones().map(|r| r as u64)
    }
}

impl std::ops::Not for &CElement {
    type Output = CElement;
    fn not(self) -> CElement {
        self.complement()
    }
}

/// A Boolean term over basic conditionals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CondTerm {
    Basic(Event, Event),
    Not(Box<CondTerm>),
    Meet(Box<CondTerm>, Box<CondTerm>),
    Join(Box<CondTerm>, Box<CondTerm>),
}

impl CondTerm {
    pub fn basic(a: Event, b: Event) -> Self {
        CondTerm::Basic(a, b)
    }

    pub fn not(t: CondTerm) -> Self {
        CondTerm::Not(Box::new(t))
    }

    pub fn meet(l: CondTerm, r: CondTerm) -> Self {
        CondTerm::Meet(Box::new(l), Box::new(r))
    }

    pub fn join(l: CondTerm, r: CondTerm) -> Self {
        CondTerm::Join(Box::new(l), Box::new(r))
    }

    pub fn as_basic(&self) -> Option<(Event, Event)> {
        match self {
            CondTerm::Basic(a, b) => Some((*a, *b)),
            _ => None,
        }
    }
}

/// Which clause of the equality test decided the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityClause {
    BothTop,
    BothBottom,
    SameConsequentAndAntecedent,
    Different,
}

impl EqualityClause {
    pub fn describe(&self) -> &'static str {
        match self {
            EqualityClause::BothTop => "both are the top element",
            EqualityClause::BothBottom => "both are the bottom element",
            EqualityClause::SameConsequentAndAntecedent => "a∧b = c∧d and b = d",
            EqualityClause::Different => "no clause applies",
        }
    }
}

/// Which clause of the guarded order test decided the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderClause {
    RightIsTop,
    LeftIsBottom,
    ConsequentBelowAntecedentAbove,
    GuardedFalse,
    Semantic,
}

impl OrderClause {
    pub fn describe(&self) -> &'static str {
        match self {
            OrderClause::RightIsTop => "(c|d) is the top element",
            OrderClause::LeftIsBottom => "(a|b) is the bottom element",
            OrderClause::ConsequentBelowAntecedentAbove => "a∧b ≤ c∧d and b ≥ d",
            OrderClause::GuardedFalse => "guard holds and no clause applies",
            OrderClause::Semantic => "guard c∧d ≤ b fails; semantic subset test",
        }
    }
}

/// The algebra of conditionals over `base`, with its `n!` atoms tabulated
/// in lexicographic order.
#[derive(Debug, Clone)]
pub struct ConditionalAlgebra {
    base: EventAlgebra,
    atom_count: usize,
    perms: Vec<u8>,
}

impl ConditionalAlgebra {
    pub fn new(base: &EventAlgebra) -> Self {
        let n = base.n();
        let atom_count = factorial(n) as usize;
        let mut perms = Vec::with_capacity(atom_count * n);
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            perms.extend_from_slice(&cur);
            if !next_permutation(&mut cur) {
                break;
            }
        }
        debug_assert_eq!(perms.len(), atom_count * n);
        ConditionalAlgebra { base: base.clone(), atom_count, perms }
    }

    pub fn base(&self) -> &EventAlgebra {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn id(&self) -> u64 {
        self.base.id()
    }

    /// Permutation of the atom with the given rank, as a slice of atom indices.
    pub fn perm(&self, rank: usize) -> &[u8] {
        let n = self.n();
        &self.perms[rank * n..(rank + 1) * n]
    }

    pub fn atom(&self, rank: u64) -> Result<CAtom> {
        if rank as usize >= self.atom_count {
            return Err(Error::RankOutOfRange { rank, count: self.atom_count as u64 });
        }
        Ok(CAtom { perm: self.perm(rank as usize).iter().map(|&x| x as usize).collect() })
    }

    pub fn bottom(&self) -> CElement {
        CElement { alg: self.id(), bits: FixedBitSet::with_capacity(self.atom_count) }
    }

    pub fn top(&self) -> CElement {
        let mut bits = FixedBitSet::with_capacity(self.atom_count);
        bits.insert_range(..);
        CElement { alg: self.id(), bits }
    }

    pub fn element_from_ranks<I: IntoIterator<Item = u64>>(&self, ranks: I) -> Result<CElement> {
        let mut e = self.bottom();
        for r in ranks {
            if r as usize >= self.atom_count {
                return Err(Error::RankOutOfRange { rank: r, count: self.atom_count as u64 });
            }
            e.bits.insert(r as usize);
        }
        Ok(e)
    }

    /// The element containing the single atom of rank `rank`.
    pub fn atom_element(&self, rank: u64) -> Result<CElement> {
        self.element_from_ranks([rank])
    }

    pub(crate) fn element_from_predicate(&self, mut keep: impl FnMut(&[u8]) -> bool) -> CElement {
        let mut e = self.bottom();
        for r in 0..self.atom_count {
            if keep(self.perm(r)) {
                e.bits.insert(r);
            }
        }
        e
    }

    pub fn owns(&self, t: &CElement) -> bool {
        t.alg == self.id()
    }

    fn check_event(&self, e: &Event) -> Result<()> {
        self.base.check(e)
    }

    /// The element `(a|b)`: atoms whose first base atom inside `b` is inside `a∧b`.
    pub fn atoms_below_basic(&self, a: &Event, b: &Event) -> Result<CElement> {
        self.check_event(a)?;
        self.check_event(b)?;
        if b.is_bottom() {
            return Err(Error::BottomAntecedent);
        }
        Ok(self.basic_masks(a.bits(), b.bits()))
    }

    /// Same as [`Self::atoms_below_basic`] on raw masks; `b` must be nonzero.
    pub(crate) fn basic_masks(&self, a: u64, b: u64) -> CElement {
        let a = a & b;
        self.element_from_predicate(|perm| {
            let first = perm.iter().find(|&&x| (b >> x) & 1 == 1).expect("b is not bottom");
            (a >> first) & 1 == 1
        })
    }

    pub fn eval_term(&self, t: &CondTerm) -> Result<CElement> {
        match t {
            CondTerm::Basic(a, b) => self.atoms_below_basic(a, b),
            CondTerm::Not(x) => Ok(self.eval_term(x)?.complement()),
            CondTerm::Meet(l, r) => self.eval_term(l)?.meet(&self.eval_term(r)?),
            CondTerm::Join(l, r) => self.eval_term(l)?.join(&self.eval_term(r)?),
        }
    }

    fn check_basic(&self, a: &Event, b: &Event) -> Result<()> {
        self.check_event(a)?;
        self.check_event(b)?;
        if b.is_bottom() {
            return Err(Error::BottomAntecedent);
        }
        Ok(())
    }

    /// Syntactic equality test for basic conditionals.
    pub fn equal_basic(&self, a: &Event, b: &Event, c: &Event, d: &Event) -> Result<bool> {
        Ok(self.equal_basic_explained(a, b, c, d)?.0)
    }

    pub fn equal_basic_explained(
        &self,
        a: &Event,
        b: &Event,
        c: &Event,
        d: &Event,
    ) -> Result<(bool, EqualityClause)> {
        self.check_basic(a, b)?;
        self.check_basic(c, d)?;
        let (ab, cd) = (a.bits() & b.bits(), c.bits() & d.bits());
        let top1 = ab == b.bits();
        let top2 = cd == d.bits();
        if top1 && top2 {
            return Ok((true, EqualityClause::BothTop));
        }
        if ab == 0 && cd == 0 {
            return Ok((true, EqualityClause::BothBottom));
        }
        if ab == cd && b.bits() == d.bits() {
            return Ok((true, EqualityClause::SameConsequentAndAntecedent));
        }
        Ok((false, EqualityClause::Different))
    }

    /// Syntactic order test, valid under the guard `c∧d ≤ b`.
    pub fn leq_basic_guarded(&self, a: &Event, b: &Event, c: &Event, d: &Event) -> Result<bool> {
        self.check_basic(a, b)?;
        self.check_basic(c, d)?;
        let (ab, cd) = (a.bits() & b.bits(), c.bits() & d.bits());
        if cd & !b.bits() != 0 {
            return Err(Error::GuardNotSatisfied);
        }
        Ok(cd == d.bits() || ab == 0 || (ab & !cd == 0 && d.bits() & !b.bits() == 0))
    }

    /// Order on basic conditionals: the guarded test when its guard holds,
    /// the semantic subset test otherwise.
    pub fn leq_basic(&self, a: &Event, b: &Event, c: &Event, d: &Event) -> Result<(bool, OrderClause)> {
        match self.leq_basic_guarded(a, b, c, d) {
            Ok(v) => {
                let (ab, cd) = (a.bits() & b.bits(), c.bits() & d.bits());
                let clause = if cd == d.bits() {
                    OrderClause::RightIsTop
                } else if ab == 0 {
                    OrderClause::LeftIsBottom
                } else if v {
                    OrderClause::ConsequentBelowAntecedentAbove
                } else {
                    OrderClause::GuardedFalse
                };
                Ok((v, clause))
            }
            Err(Error::GuardNotSatisfied) => {
                let l = self.atoms_below_basic(a, b)?;
                let r = self.atoms_below_basic(c, d)?;
                Ok((l.leq(&r)?, OrderClause::Semantic))
            }
            Err(e) => Err(e),
        }
    }

    /// Recovers the canonical `(a, b)` with `a ≤ b` if `t` is a basic conditional.
    pub fn recognize_basic(&self, t: &CElement) -> Option<(Event, Event)> {
        if !self.owns(t) {
            return None;
        }
        if t.is_top() {
            return Some((self.base.top(), self.base.top()));
        }
        if t.is_bottom() {
            return Some((self.base.bottom(), self.base.top()));
        }
        let n = self.n();
        let block = self.atom_count / n;
        let (mut all, mut none) = (0u64, 0u64);
        for alpha in 0..n {
            // permutations starting with `alpha` form one contiguous rank block
            let count = (alpha * block..(alpha + 1) * block).filter(|&r| t.bits.contains(r)).count();
            if count == block {
                all |= 1 << alpha;
            } else if count == 0 {
                none |= 1 << alpha;
            }
        }
        let b = all | none;
        if b == 0 {
            return None;
        }
        if self.basic_masks(all, b) == *t {
            Some((self.base.mask(all), self.base.mask(b)))
        } else {
            None
        }
    }

    /// `n!·|at(a)|/|at(b)|`, the number of atoms below `(a|b)` for `a ≤ b`.
    pub fn count_atoms_below(&self, a: &Event, b: &Event) -> Result<u64> {
        self.check_basic(a, b)?;
        if !a.leq(b)? {
            return Err(Error::NotBelow("count_atoms_below needs a ≤ b; normalize a := a∧b".into()));
        }
        Ok(self.atom_count as u64 * a.count() as u64 / b.count() as u64)
    }

    /// The partition of the atoms by their length-`i` prefixes, in lexicographic
    /// order of the prefixes.
    pub fn part(&self, i: usize) -> Result<Vec<CElement>> {
        let n = self.n();
        if n < 2 || i == 0 || i > n - 1 {
            return Err(Error::LevelOutOfRange { level: i, max: n.saturating_sub(1) });
        }
        let mut blocks: Vec<(Vec<u8>, CElement)> = Vec::new();
        for r in 0..self.atom_count {
            let prefix = &self.perm(r)[..i];
            match blocks.last_mut() {
                Some((p, e)) if p.as_slice() == prefix => {
                    e.bits.insert(r);
                }
                _ => {
                    let mut e = self.bottom();
                    e.bits.insert(r);
                    blocks.push((prefix.to_vec(), e));
                }
            }
        }
        Ok(blocks.into_iter().map(|(_, e)| e).collect())
    }

    /// All distinct basic conditionals, each once, with its canonical pair.
    pub fn basic_elements(&self) -> Vec<((Event, Event), CElement)> {
        let full = self.base.full_mask();
        let mut out: Vec<((Event, Event), CElement)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for b in 1..=full {
            let mut a = b;
            loop {
                // a ranges over the submasks of b
                let e = self.basic_masks(a, b);
                if seen.insert(e.clone()) {
                    out.push(((self.base.mask(a), self.base.mask(b)), e));
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & b;
            }
        }
        out
    }
}

pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
