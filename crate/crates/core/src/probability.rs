//! Exact probabilities on an event algebra and on its algebra of conditionals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::conditional_algebra::{CElement, ConditionalAlgebra};
use crate::error::{Error, Result};
use crate::event_algebra::{Event, EventAlgebra};
use crate::rational::{format_rational, Rational};

/// A positive probability on the atoms of an event algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct EventMeasure {
    alg: EventAlgebra,
    weights: Vec<Rational>,
}

impl EventMeasure {
    pub fn new(alg: &EventAlgebra, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != alg.n() {
            return Err(Error::WeightCount { expected: alg.n(), got: weights.len() });
        }
        for (i, w) in weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::NonPositive(alg.label(i).to_string()));
            }
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::NotNormalized(format_rational(&total)));
        }
        Ok(EventMeasure { alg: alg.clone(), weights })
    }

    pub fn uniform(alg: &EventAlgebra) -> Self {
        let w = Rational::new(BigInt::one(), BigInt::from(alg.n()));
        EventMeasure { alg: alg.clone(), weights: vec![w; alg.n()] }
    }

    /// Normalizes positive integer weights.
    pub fn from_integers(alg: &EventAlgebra, weights: &[u64]) -> Result<Self> {
        let total: u64 = weights.iter().sum();
        let ws = weights
            .iter()
            .map(|&w| Rational::new(BigInt::from(w), BigInt::from(total.max(1))))
            .collect();
        Self::new(alg, ws)
    }

    pub fn algebra(&self) -> &EventAlgebra {
        &self.alg
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn prob(&self, e: &Event) -> Result<Rational> {
        self.alg.check(e)?;
        Ok(self.prob_mask(e.bits()))
    }

    fn prob_mask(&self, bits: u64) -> Rational {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| (bits >> i) & 1 == 1)
            .map(|(_, w)| w)
            .sum()
    }
}

/// `P(a∧b)/P(b)`.
pub fn cond_prob(p: &EventMeasure, a: &Event, b: &Event) -> Result<Rational> {
    let ab = a.meet(b)?;
    p.alg.check(b)?;
    if b.is_bottom() {
        return Err(Error::BottomAntecedent);
    }
    Ok(p.prob(&ab)? / p.prob(b)?)
}

/// A probability on the atoms of a conditional algebra.
///
/// Weights are also kept as integer numerators over one common denominator
/// so that measuring an element is an integer sum.
#[derive(Debug, Clone)]
pub struct CMeasure {
    alg: u64,
    n: usize,
    weights: Vec<Rational>,
    denom: BigInt,
    numers: Vec<BigInt>,
}

impl PartialEq for CMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.weights == other.weights
    }
}

impl CMeasure {
    pub fn new(calg: &ConditionalAlgebra, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != calg.atom_count() {
            return Err(Error::WeightCount { expected: calg.atom_count(), got: weights.len() });
        }
        for (r, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(Error::NegativeWeight(format!("atom {r}")));
            }
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::NotNormalized(format_rational(&total)));
        }
        Ok(Self::build(calg.id(), calg.n(), weights))
    }

    fn build(alg: u64, n: usize, weights: Vec<Rational>) -> Self {
        let denom = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let numers = weights.iter().map(|w| w.numer() * (&denom / w.denom())).collect();
        CMeasure { alg, n, weights, denom, numers }
    }

    pub fn algebra_id(&self) -> u64 {
        self.alg
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, rank: u64) -> &Rational {
        &self.weights[rank as usize]
    }

    pub fn is_positive(&self) -> bool {
        self.weights.iter().all(|w| w.is_positive())
    }

    pub fn measure(&self, t: &CElement) -> Result<Rational> {
        if t.algebra_id() != self.alg {
            return Err(Error::MixedAlgebras);
        }
        let mut sum = BigInt::zero();
        for r in t.bits().ones() {
            sum += &self.numers[r];
        }
        Ok(Rational::new(sum, self.denom.clone()))
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &CMeasure, lambda: &Rational) -> Result<CMeasure> {
        if self.alg != other.alg {
            return Err(Error::MixedAlgebras);
        }
        let mu = Rational::one() - lambda;
        let ws = self.weights.iter().zip(&other.weights).map(|(x, y)| lambda * x + &mu * y).collect();
        Ok(Self::build(self.alg, self.n, ws))
    }

    /// The probability `α ↦ μ(α|⊤)` on the base algebra.
    pub fn restriction(&self, calg: &ConditionalAlgebra) -> Result<EventMeasure> {
        let base = calg.base();
        let top = base.top();
        let ws = (0..base.n())
            .map(|i| self.measure(&calg.atoms_below_basic(&base.atom(i)?, &top)?))
            .collect::<Result<Vec<_>>>()?;
        EventMeasure::new(base, ws)
    }

    /// Numerators `N[b][x]` over the common denominator with
    /// `μ(x|b) = N[b][x]/D` for every `x ⊆ b`, `b ≠ ⊥`.
    fn conditional_numerators(&self, calg: &ConditionalAlgebra) -> Vec<Vec<BigInt>> {
        let n = self.n;
        let size = 1usize << n;
        // first[b][α]: mass of permutations whose first atom inside b is α
        let mut first = vec![vec![BigInt::zero(); n]; size];
        for r in 0..calg.atom_count() {
            let w = &self.numers[r];
            if w.is_zero() {
                continue;
            }
            let perm = calg.perm(r);
            let mut seen = 0usize;
            for &alpha in perm {
                let alpha = alpha as usize;
                let free = (size - 1) & !seen & !(1 << alpha);
                let mut sub = free;
                loop {
                    first[sub | (1 << alpha)][alpha] += w;
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & free;
                }
                seen |= 1 << alpha;
            }
        }
        let mut table = vec![Vec::new(); size];
        for b in 1..size {
            let mut row = vec![BigInt::zero(); size];
            for x in 1..size {
                if x & !b != 0 {
                    continue;
                }
                let low = x.trailing_zeros() as usize;
                row[x] = &row[x & (x - 1)] + &first[b][low];
            }
            table[b] = row;
        }
        table
    }
}

/// `μ_P`: atom `⟨α1,…,αn⟩` gets `Π_k P(α_k) / (1 − Σ_{j<k} P(α_j))`.
pub fn canonical_extension(calg: &ConditionalAlgebra, p: &EventMeasure) -> Result<CMeasure> {
    if p.alg != *calg.base() {
        return Err(Error::MixedAlgebras);
    }
    let mut ws = Vec::with_capacity(calg.atom_count());
    for r in 0..calg.atom_count() {
        let mut w = Rational::one();
        let mut remaining = Rational::one();
        for &alpha in calg.perm(r) {
            let pa = &p.weights[alpha as usize];
            w *= pa / &remaining;
            remaining -= pa;
        }
        ws.push(w);
    }
    Ok(CMeasure::build(calg.id(), calg.n(), ws))
}

/// A chain-rule violation `μ(a|c) ≠ μ(a|b)·μ(b|c)` with `a ≤ b ≤ c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainViolation {
    pub a: Event,
    pub b: Event,
    pub c: Event,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// First chain-rule violation with triples ordered lexicographically by
/// their masks, or `None` when `μ` is separable.
pub fn separability_witness(calg: &ConditionalAlgebra, mu: &CMeasure) -> Result<Option<ChainViolation>> {
    if mu.alg != calg.id() {
        return Err(Error::MixedAlgebras);
    }
    let table = mu.conditional_numerators(calg);
    let full = calg.base().full_mask() as usize;
    let base = calg.base();
    for a in 1..=full {
        let mut b = a;
        while b <= full {
            if b != a {
                let mut c = (b + 1) | b;
                while c <= full {
                    let lhs = &table[c][a] * &mu.denom;
                    let rhs = &table[b][a] * &table[c][b];
                    if lhs != rhs {
                        let d2 = &mu.denom * &mu.denom;
                        return Ok(Some(ChainViolation {
                            a: base.mask(a as u64),
                            b: base.mask(b as u64),
                            c: base.mask(c as u64),
                            lhs: Rational::new(lhs, d2.clone()),
                            rhs: Rational::new(rhs, d2),
                        }));
                    }
                    c = (c + 1) | b;
                }
            }
            b = (b + 1) | a;
        }
    }
    Ok(None)
}

pub fn is_separable(calg: &ConditionalAlgebra, mu: &CMeasure) -> Result<bool> {
    Ok(separability_witness(calg, mu)?.is_none())
}

/// A map `(a, b) ↦ CP(a|b)` on `A × A'`.
#[derive(Debug, Clone)]
pub struct TwoPlaceAssignment {
    alg: EventAlgebra,
    values: Vec<Rational>,
}

impl TwoPlaceAssignment {
    pub fn from_fn(alg: &EventAlgebra, mut f: impl FnMut(&Event, &Event) -> Rational) -> Self {
        let size = 1usize << alg.n();
        let mut values = vec![Rational::zero(); size * size];
        for a in 0..size {
            for b in 1..size {
                values[a * size + b] = f(&alg.mask(a as u64), &alg.mask(b as u64));
            }
        }
        TwoPlaceAssignment { alg: alg.clone(), values }
    }

    pub fn from_event_measure(p: &EventMeasure) -> Self {
        Self::from_fn(&p.alg, |a, b| cond_prob(p, a, b).expect("b is not bottom"))
    }

    /// `(a, b) ↦ μ((a|b))` for a measure on the conditional algebra.
    pub fn from_cmeasure(calg: &ConditionalAlgebra, mu: &CMeasure) -> Result<Self> {
        if mu.alg != calg.id() {
            return Err(Error::MixedAlgebras);
        }
        Ok(Self::from_fn(calg.base(), |a, b| {
            mu.measure(&calg.atoms_below_basic(a, b).expect("b is not bottom")).expect("same algebra")
        }))
    }

    pub fn algebra(&self) -> &EventAlgebra {
        &self.alg
    }

    pub fn get(&self, a: &Event, b: &Event) -> Result<&Rational> {
        self.alg.check(a)?;
        self.alg.check(b)?;
        if b.is_bottom() {
            return Err(Error::BottomAntecedent);
        }
        Ok(self.at(a.bits() as usize, b.bits() as usize))
    }

    fn at(&self, a: usize, b: usize) -> &Rational {
        &self.values[a * (1usize << self.alg.n()) + b]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CpViolation {
    Cp1 { b: Event },
    Cp2 { a1: Event, a2: Event, b: Event },
    Cp3 { a: Event, b: Event },
    Cp4 { a: Event, b: Event, c: Event },
}

/// First violation of each axiom, `None` where the axiom holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpReport {
    pub cp1: Option<CpViolation>,
    pub cp2: Option<CpViolation>,
    pub cp3: Option<CpViolation>,
    pub cp4: Option<CpViolation>,
}

impl CpReport {
    pub fn all_pass(&self) -> bool {
        self.cp1.is_none() && self.cp2.is_none() && self.cp3.is_none() && self.cp4.is_none()
    }

    pub fn rows(&self) -> [(&'static str, &Option<CpViolation>); 4] {
        [("CP1", &self.cp1), ("CP2", &self.cp2), ("CP3", &self.cp3), ("CP4", &self.cp4)]
    }
}

pub fn check_cp_axioms(cp: &TwoPlaceAssignment) -> CpReport {
    let alg = &cp.alg;
    let size = 1usize << alg.n();
    let ev = |x: usize| alg.mask(x as u64);

    let cp1 = (1..size).find(|&b| !cp.at(b, b).is_one()).map(|b| CpViolation::Cp1 { b: ev(b) });

    let mut cp2 = None;
    'outer: for a1 in 0..size {
        for a2 in 0..size {
            if a1 & a2 != 0 {
                continue;
            }
            for b in 1..size {
                if *cp.at(a1 | a2, b) != cp.at(a1, b) + cp.at(a2, b) {
                    cp2 = Some(CpViolation::Cp2 { a1: ev(a1), a2: ev(a2), b: ev(b) });
                    break 'outer;
                }
            }
        }
    }

    let mut cp3 = None;
    'outer3: for a in 0..size {
        for b in 1..size {
            if cp.at(a, b) != cp.at(a & b, b) {
                cp3 = Some(CpViolation::Cp3 { a: ev(a), b: ev(b) });
                break 'outer3;
            }
        }
    }

    let mut cp4 = None;
    'outer4: for a in 0..size {
        let mut b = a;
        while b < size {
            if b != 0 {
                let mut c = b;
                while c < size {
                    if *cp.at(a, c) != cp.at(a, b) * cp.at(b, c) {
                        cp4 = Some(CpViolation::Cp4 { a: ev(a), b: ev(b), c: ev(c) });
                        break 'outer4;
                    }
                    c = (c + 1) | b;
                }
            }
            b = (b + 1) | a;
        }
    }

    CpReport { cp1, cp2, cp3, cp4 }
}

/// Moves `ε` of mass from atom `from` to atom `to`, both starting with the
/// same base atom.
pub fn perturb(calg: &ConditionalAlgebra, mu: &CMeasure, from: u64, to: u64, eps: &Rational) -> Result<CMeasure> {
    if mu.alg != calg.id() {
        return Err(Error::MixedAlgebras);
    }
    let count = calg.atom_count() as u64;
    for r in [from, to] {
        if r >= count {
            return Err(Error::RankOutOfRange { rank: r, count });
        }
    }
    if from == to || calg.perm(from as usize)[0] != calg.perm(to as usize)[0] {
        return Err(Error::Unsupported("perturbed atoms must be distinct and share their first atom".into()));
    }
    let (w1, w2) = (mu.weight(from), mu.weight(to));
    let bound = std::cmp::min(w1.clone(), Rational::one() - w2) / Rational::from_integer(BigInt::from(2));
    if !eps.is_positive() || *eps >= bound {
        return Err(Error::EpsilonOutOfRange(format_rational(eps)));
    }
    let mut ws = mu.weights.clone();
    ws[from as usize] -= eps;
    ws[to as usize] += eps;
    Ok(CMeasure::build(mu.alg, mu.n, ws))
}

/// `μ + ε·d` for a direction `d` with zero sum; fails unless every weight
/// stays positive.
pub fn perturb_along(calg: &ConditionalAlgebra, mu: &CMeasure, direction: &[Rational], eps: &Rational) -> Result<CMeasure> {
    if mu.alg != calg.id() {
        return Err(Error::MixedAlgebras);
    }
    if direction.len() != calg.atom_count() {
        return Err(Error::WeightCount { expected: calg.atom_count(), got: direction.len() });
    }
    if !direction.iter().sum::<Rational>().is_zero() {
        return Err(Error::Unsupported("direction must sum to zero".into()));
    }
    let ws: Vec<Rational> = mu.weights.iter().zip(direction).map(|(w, d)| w + eps * d).collect();
    if !eps.is_positive() || ws.iter().any(|w| !w.is_positive()) {
        return Err(Error::EpsilonOutOfRange(format_rational(eps)));
    }
    Ok(CMeasure::build(mu.alg, mu.n, ws))
}

/// Half of the largest step along `direction` that keeps every weight positive.
pub fn admissible_step(mu: &CMeasure, direction: &[Rational]) -> Option<Rational> {
    mu.weights
        .iter()
        .zip(direction)
        .filter(|(_, d)| d.is_negative())
        .map(|(w, d)| w / -d)
        .min()
        .map(|m| m / Rational::from_integer(BigInt::from(2)))
}

/// A nonzero integer vector on the atoms orthogonal to every basic
/// conditional, or `None` when basic conditionals determine every measure.
pub fn basic_preserving_direction(calg: &ConditionalAlgebra) -> Option<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> = calg
        .basic_elements()
        .into_iter()
        .map(|(_, e)| {
            (0..calg.atom_count())
                .map(|r| if e.contains(r as u64) { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let mut basis = rational_nullspace(rows, calg.atom_count());
    if basis.is_empty() {
        return None;
    }
    let v = basis.swap_remove(0);
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect())
}

/// Basis of `{x : M x = 0}` by exact Gauss–Jordan elimination.
pub fn rational_nullspace(mut m: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Closed-form measure of the block of atoms starting with `prefix`:
/// `P(α_{i1}) · Π_{k>1} P(α_{ik}) / P(¬α_{i1} ∧ … ∧ ¬α_{i(k−1)})`.
pub fn block_measure(p: &EventMeasure, prefix: &[usize]) -> Result<Rational> {
    let n = p.alg.n();
    let mut used = 0u64;
    let mut value = Rational::one();
    let mut remaining = Rational::one();
    for &i in prefix {
        if i >= n || (used >> i) & 1 == 1 {
            return Err(Error::InvalidPrefix(format!("{prefix:?}")));
        }
        used |= 1 << i;
        value *= &p.weights[i] / &remaining;
        remaining -= &p.weights[i];
    }
    Ok(value)
}

/// Two separable measures whose midpoint is not separable.
#[derive(Debug, Clone)]
pub struct NonconvexWitness {
    pub p1: EventMeasure,
    pub p2: EventMeasure,
    pub mu1: CMeasure,
    pub mu2: CMeasure,
    pub midpoint: CMeasure,
    pub violation: ChainViolation,
}

/// Searches pairs of canonical extensions for a non-separable midpoint.
pub fn find_nonconvex_witness(calg: &ConditionalAlgebra) -> Result<NonconvexWitness> {
    let n = calg.n();
    if n < 3 {
        return Err(Error::Unsupported("non-convexity needs at least 3 atoms".into()));
    }
    let base = calg.base();
    let mut candidates: Vec<Vec<u64>> = vec![vec![1; n]];
    for k in 0..n {
        let mut w = vec![1; n];
        w[k] = 2;
        candidates.push(w);
    }
    candidates.push((1..=n as u64).collect());
    candidates.push((1..=n as u64).rev().collect());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            let p1 = EventMeasure::from_integers(base, &candidates[i])?;
            let p2 = EventMeasure::from_integers(base, &candidates[j])?;
            let mu1 = canonical_extension(calg, &p1)?;
            let mu2 = canonical_extension(calg, &p2)?;
            let midpoint = mu1.mix(&mu2, &half)?;
            if let Some(violation) = separability_witness(calg, &midpoint)? {
                return Ok(NonconvexWitness { p1, p2, mu1, mu2, midpoint, violation });
            }
        }
    }
    Err(Error::Unsupported("no witness among the candidate measures".into()))
}
