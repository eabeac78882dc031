#![allow(dead_code)]

use condal_core::{CElement, ConditionalAlgebra, Event};

/// Names of the identities that fail for `a, c` (any events) and
/// `b, d` (nonzero antecedents).
pub fn identity_failures(calg: &ConditionalAlgebra, a: &Event, c: &Event, b: &Event, d: &Event) -> Vec<&'static str> {
    let alg = calg.base();
    let top = alg.top();
    let k = |x: &Event, y: &Event| calg.atoms_below_basic(x, y).unwrap();
    let meet = |x: &CElement, y: &CElement| x.meet(y).unwrap();
    let join = |x: &CElement, y: &CElement| x.join(y).unwrap();
    let le = |x: &CElement, y: &CElement| x.leq(y).unwrap();
    let ev_le = |x: &Event, y: &Event| x.leq(y).unwrap();
    let and = |x: &Event, y: &Event| x.meet(y).unwrap();
    let or = |x: &Event, y: &Event| x.join(y).unwrap();
    let imp = |x: &Event, y: &Event| x.implies(y).unwrap();

    let ab = k(a, b);
    let cb = k(c, b);
    let mut bad = Vec::new();
    let mut check = |ok: bool, name: &'static str| {
        if !ok {
            bad.push(name);
        }
    };

    check(k(b, b).is_top(), "C1");
    check(meet(&ab, &cb) == k(&and(a, c), b), "C2");
    check(ab.complement() == k(&!*a, b), "C3");
    check(k(&and(a, b), b) == ab, "C4");
    let chain = ev_le(a, b) && ev_le(b, d);
    check(!chain || meet(&ab, &k(b, d)) == k(a, d), "C5");

    check(k(&imp(b, a), b) == ab, "material antecedent");
    check(k(&and(a, b), &top) == meet(&ab, &k(b, &top)), "product with top");
    let bd = and(b, d);
    check(bd.is_bottom() || k(&and(a, b), d) == meet(&k(a, &bd), &k(b, d)), "product rule");

    check((k(a, &top) == k(c, &top)) == (a == c), "top antecedent injective");
    check(k(&!*b, b).is_bottom(), "negated antecedent");
    check(join(&ab, &cb) == k(&or(a, c), b), "common antecedent join");

    check(le(&k(b, b), &ab) == ev_le(b, a), "order (i)");
    check(!ev_le(a, c) || le(&ab, &cb), "order (ii)");
    check(ev_le(a, c) == le(&k(a, &top), &k(c, &top)), "order (ii) top");
    check(!(ev_le(a, b) && ev_le(b, d)) || le(&k(a, d), &ab), "order (iii)");
    check(ab == cb || and(a, b) != and(c, b), "order (iv)");
    check(le(&k(&and(a, b), &top), &ab) && le(&ab, &k(&imp(b, a), &top)), "order (v)");
    let disjoint = and(a, d).is_bottom() && !a.is_bottom() && ev_le(a, b);
    check(!disjoint || meet(&k(a, &top), &k(d, b)).is_bottom(), "order (vi)");
    check(le(&meet(&k(b, &top), &ab), &k(a, &top)), "order (vii)");

    let ad = k(a, d);
    let b_or_d = or(b, d);
    check(le(&meet(&ab, &ad), &k(a, &b_or_d)), "OR rule");
    check(!ev_le(a, &bd) || meet(&ab, &ad) == k(a, &b_or_d), "OR rule equality");
    check(le(&ab, &k(&imp(b, a), &b_or_d)), "material widening");
    let quasi = and(&imp(b, a), &imp(d, c));
    check(le(&meet(&ab, &k(c, d)), &k(&quasi, &b_or_d)), "quasi-conjunction");
    bad
}
