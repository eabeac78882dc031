use std::fmt;

use crate::event_algebra::{valuation_bit, Event, EventAlgebra};

/// Propositional formula over named symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropFormula {
    Top,
    Bottom,
    Var(String),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn var(name: &str) -> Self {
        PropFormula::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PropFormula) -> Self {
        PropFormula::Not(Box::new(f))
    }

    pub fn and(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::Iff(Box::new(l), Box::new(r))
    }

    /// Distinct symbols in order of first occurrence.
    pub fn symbols(&self) -> Vec<String> {
        fn walk(f: &PropFormula, out: &mut Vec<String>) {
            match f {
                PropFormula::Top | PropFormula::Bottom => {}
                PropFormula::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                PropFormula::Not(x) => walk(x, out),
                PropFormula::And(l, r)
                | PropFormula::Or(l, r)
                | PropFormula::Implies(l, r)
                | PropFormula::Iff(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn eval_with(&self, val: &mut dyn FnMut(&str) -> bool) -> bool {
        match self {
            PropFormula::Top => true,
            PropFormula::Bottom => false,
            PropFormula::Var(v) => val(v),
            PropFormula::Not(x) => !x.eval_with(val),
            PropFormula::And(l, r) => l.eval_with(val) & r.eval_with(val),
            PropFormula::Or(l, r) => l.eval_with(val) | r.eval_with(val),
            PropFormula::Implies(l, r) => !l.eval_with(val) | r.eval_with(val),
            PropFormula::Iff(l, r) => l.eval_with(val) == r.eval_with(val),
        }
    }

    /// Disjunction of the atoms of `e`, each written as a minterm or label.
    pub fn from_event_dnf(alg: &EventAlgebra, e: &Event) -> Self {
        e.atoms_below()
            .into_iter()
            .map(|i| atom_formula(alg, i))
            .reduce(PropFormula::or)
            .unwrap_or(PropFormula::Bottom)
    }

    /// Conjunction excluding each atom outside `e`.
    pub fn from_event_cnf(alg: &EventAlgebra, e: &Event) -> Self {
        (!*e)
            .atoms_below()
            .into_iter()
            .map(|i| match alg.variables() {
                Some(vars) => {
                    let m = vars.len();
                    (0..m)
                        .map(|j| {
                            let v = PropFormula::var(&vars[j]);
                            if valuation_bit(i, j, m) {
                                PropFormula::not(v)
                            } else {
                                v
                            }
                        })
                        .reduce(PropFormula::or)
                        .expect("at least one variable")
                }
                None => PropFormula::not(PropFormula::var(alg.label(i))),
            })
            .reduce(PropFormula::and)
            .unwrap_or(PropFormula::Top)
    }

    fn precedence(&self) -> u8 {
        match self {
            PropFormula::Iff(..) => 1,
            PropFormula::Implies(..) => 2,
            PropFormula::Or(..) => 3,
            PropFormula::And(..) => 4,
            PropFormula::Not(..) => 5,
            _ => 6,
        }
    }
}

fn atom_formula(alg: &EventAlgebra, i: usize) -> PropFormula {
    match alg.variables() {
        Some(vars) => {
            let m = vars.len();
            (0..m)
                .map(|j| {
                    let v = PropFormula::var(&vars[j]);
                    if valuation_bit(i, j, m) {
                        v
                    } else {
                        PropFormula::not(v)
                    }
                })
                .reduce(PropFormula::and)
                .expect("at least one variable")
        }
        None => PropFormula::var(alg.label(i)),
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &PropFormula, min: u8) -> fmt::Result {
    if child.precedence() < min {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            PropFormula::Top => write!(f, "T"),
            PropFormula::Bottom => write!(f, "F"),
            PropFormula::Var(v) => write!(f, "{v}"),
            PropFormula::Not(x) => {
                write!(f, "~")?;
                write_child(f, x, p)
            }
            PropFormula::And(l, r) => {
                write_child(f, l, p)?;
                write!(f, " /\\ ")?;
                write_child(f, r, p + 1)
            }
            PropFormula::Or(l, r) => {
                write_child(f, l, p)?;
                write!(f, " \\/ ")?;
                write_child(f, r, p + 1)
            }
            PropFormula::Implies(l, r) => {
                write_child(f, l, p + 1)?;
                write!(f, " -> ")?;
                write_child(f, r, p)
            }
            PropFormula::Iff(l, r) => {
                write_child(f, l, p)?;
                write!(f, " <-> ")?;
                write_child(f, r, p + 1)
            }
        }
    }
}

/// Boolean combination of basic conditionals `(φ | ψ)`; the bar never nests.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CondFormula {
    Basic(PropFormula, PropFormula),
    Not(Box<CondFormula>),
    And(Box<CondFormula>, Box<CondFormula>),
    Or(Box<CondFormula>, Box<CondFormula>),
    Implies(Box<CondFormula>, Box<CondFormula>),
    Iff(Box<CondFormula>, Box<CondFormula>),
}

impl CondFormula {
    pub fn basic(consequent: PropFormula, antecedent: PropFormula) -> Self {
        CondFormula::Basic(consequent, antecedent)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: CondFormula) -> Self {
        CondFormula::Not(Box::new(f))
    }

    pub fn and(l: CondFormula, r: CondFormula) -> Self {
        CondFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: CondFormula, r: CondFormula) -> Self {
        CondFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: CondFormula, r: CondFormula) -> Self {
        CondFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: CondFormula, r: CondFormula) -> Self {
        CondFormula::Iff(Box::new(l), Box::new(r))
    }

    /// Every basic leaf, left to right.
    pub fn leaves(&self) -> Vec<(&PropFormula, &PropFormula)> {
        fn walk<'a>(f: &'a CondFormula, out: &mut Vec<(&'a PropFormula, &'a PropFormula)>) {
            match f {
                CondFormula::Basic(a, b) => out.push((a, b)),
                CondFormula::Not(x) => walk(x, out),
                CondFormula::And(l, r)
                | CondFormula::Or(l, r)
                | CondFormula::Implies(l, r)
                | CondFormula::Iff(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Truth-functional evaluation given a value for each leaf.
    pub fn eval_with(&self, leaf: &mut dyn FnMut(&PropFormula, &PropFormula) -> bool) -> bool {
        match self {
            CondFormula::Basic(a, b) => leaf(a, b),
            CondFormula::Not(x) => !x.eval_with(leaf),
            CondFormula::And(l, r) => l.eval_with(leaf) & r.eval_with(leaf),
            CondFormula::Or(l, r) => l.eval_with(leaf) | r.eval_with(leaf),
            CondFormula::Implies(l, r) => !l.eval_with(leaf) | r.eval_with(leaf),
            CondFormula::Iff(l, r) => l.eval_with(leaf) == r.eval_with(leaf),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            CondFormula::Iff(..) => 1,
            CondFormula::Implies(..) => 2,
            CondFormula::Or(..) => 3,
            CondFormula::And(..) => 4,
            CondFormula::Not(..) => 5,
            CondFormula::Basic(..) => 6,
        }
    }
}

fn write_cond_child(f: &mut fmt::Formatter<'_>, child: &CondFormula, min: u8) -> fmt::Result {
    if child.precedence() < min {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for CondFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            CondFormula::Basic(a, b) => write!(f, "({a} | {b})"),
            CondFormula::Not(x) => {
                write!(f, "~")?;
                write_cond_child(f, x, p)
            }
            CondFormula::And(l, r) => {
                write_cond_child(f, l, p)?;
                write!(f, " /\\ ")?;
                write_cond_child(f, r, p + 1)
            }
            CondFormula::Or(l, r) => {
                write_cond_child(f, l, p)?;
                write!(f, " \\/ ")?;
                write_cond_child(f, r, p + 1)
            }
            CondFormula::Implies(l, r) => {
                write_cond_child(f, l, p + 1)?;
                write!(f, " -> ")?;
                write_cond_child(f, r, p)
            }
            CondFormula::Iff(l, r) => {
                write_cond_child(f, l, p)?;
                write!(f, " <-> ")?;
                write_cond_child(f, r, p + 1)
            }
        }
    }
}
