//! Reference implementations written separately from the library, used as
//! test oracles.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use workbench_core::logic::{parse_formula, Formula};

/// Propositional template: `A`..`C` metavariables, `~` not, `>` implies,
/// `&` and, `|` or. Fully parenthesised binary nodes.
#[derive(Debug)]
enum Pat {
    Meta(char),
    Not(Box<Pat>),
    Bin(char, Box<Pat>, Box<Pat>),
}

fn pat(s: &str) -> Pat {
    fn go(c: &[char], i: &mut usize) -> Pat {
        let ch = c[*i];
        *i += 1;
        match ch {
            '~' => Pat::Not(Box::new(go(c, i))),
            '(' => {
                let a = go(c, i);
                let op = c[*i];
                *i += 1;
                let b = go(c, i);
                assert_eq!(c[*i], ')');
                *i += 1;
                Pat::Bin(op, Box::new(a), Box::new(b))
            }
            m => Pat::Meta(m),
        }
    }
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let p = go(&chars, &mut i);
    assert_eq!(i, chars.len(), "template {s}");
    p
}

fn unify<'f>(p: &Pat, f: &'f Formula, env: &mut HashMap<char, &'f Formula>) -> bool {
    match (p, f) {
        (Pat::Meta(m), _) => match env.get(m) {
            Some(bound) => *bound == f,
            None => {
                env.insert(*m, f);
                true
            }
        },
        (Pat::Not(a), Formula::Not(g)) => unify(a, g, env),
        (Pat::Bin('>', a, b), Formula::Implies(x, y))
        | (Pat::Bin('&', a, b), Formula::And(x, y))
        | (Pat::Bin('|', a, b), Formula::Or(x, y)) => unify(a, x, env) && unify(b, y, env),
        _ => false,
    }
}

const TEMPLATES: [&str; 9] = [
    "(A>(B>A))",
    "((A>(B>C))>((A>B)>(A>C)))",
    "((~A>~B)>(B>A))",
    "((A&B)>A)",
    "((A&B)>B)",
    "(A>(B>(A&B)))",
    "(A>(A|B))",
    "(B>(A|B))",
    "((A>C)>((B>C)>((A|B)>C)))",
];

fn free(f: &Formula) -> BTreeSet<u32> {
    match f {
        Formula::Eq(a, b) | Formula::In(a, b) => [*a, *b].into(),
        Formula::KolGe(..) => BTreeSet::new(),
        Formula::Not(g) => free(g),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => &free(a) | &free(b),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let mut s = free(g);
            s.remove(v);
            s
        }
    }
}

/// `g` is `f` with free `v` replaced by `u`, and no replaced occurrence is captured.
fn instance(f: &Formula, v: u32, u: u32, g: &Formula, bound: &BTreeSet<u32>) -> bool {
    match (f, g) {
        (Formula::Eq(a, b), Formula::Eq(c, d)) | (Formula::In(a, b), Formula::In(c, d)) => {
            let ok = |x: u32, y: u32| {
                if x == v {
                    y == u && !bound.contains(&u)
                } else {
                    x == y
                }
            };
            ok(*a, *c) && ok(*b, *d)
        }
        (Formula::KolGe(..), _) => f == g,
        (Formula::Not(a), Formula::Not(b)) => instance(a, v, u, b, bound),
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Implies(a, b), Formula::Implies(c, d)) => instance(a, v, u, c, bound) && instance(b, v, u, d, bound),
        (Formula::Forall(w, a), Formula::Forall(w2, b)) | (Formula::Exists(w, a), Formula::Exists(w2, b)) if w == w2 => {
            if *w == v {
                a == b
            } else {
                let mut inner = bound.clone();
                inner.insert(*w);
                instance(a, v, u, b, &inner)
            }
        }
        _ => false,
    }
}

fn atom_vars(f: &Formula) -> Option<(bool, u32, u32)> {
    match f {
        Formula::Eq(a, b) => Some((true, *a, *b)),
        Formula::In(a, b) => Some((false, *a, *b)),
        _ => None,
    }
}

pub fn is_logical_axiom(f: &Formula) -> bool {
    if let Formula::Eq(a, b) = f {
        return a == b;
    }
    if TEMPLATES.iter().any(|t| unify(&pat(t), f, &mut HashMap::new())) {
        return true;
    }
    let Formula::Implies(lhs, rhs) = f else { return false };
    let (lhs, rhs) = (lhs.as_ref(), rhs.as_ref());
    if let Formula::Forall(v, body) = lhs {
        let mut candidates = free(rhs);
        candidates.insert(*v);
        for u in 0..=candidates.iter().max().copied().unwrap_or(0) + 1 {
            if instance(body, *v, u, rhs, &BTreeSet::new()) {
                return true;
            }
        }
        if let (Formula::Implies(a, b), Formula::Implies(a2, q)) = (body.as_ref(), rhs) {
            if let Formula::Forall(w, b2) = q.as_ref() {
                if a == a2 && b == b2 && w == v && !free(a).contains(v) {
                    return true;
                }
            }
        }
    }
    if let Formula::Forall(v, body) = rhs {
        if body.as_ref() == lhs && !free(lhs).contains(v) {
            return true;
        }
    }
    let dual = |e: &Formula, n: &Formula| match (e, n) {
        (Formula::Exists(v, a), Formula::Not(q)) => {
            matches!(q.as_ref(), Formula::Forall(w, na) if w == v && matches!(na.as_ref(), Formula::Not(a2) if a2 == a))
        }
        _ => false,
    };
    if dual(lhs, rhs) || dual(rhs, lhs) {
        return true;
    }
    if let (Formula::Eq(u, v), Formula::Implies(alpha, beta)) = (lhs, rhs) {
        if let (Some((k1, a1, a2)), Some((k2, b1, b2))) = (atom_vars(alpha), atom_vars(beta)) {
            let ok = |a: u32, b: u32| a == b || (a == *u && b == *v);
            return k1 == k2 && ok(a1, b1) && ok(a2, b2);
        }
    }
    false
}

/// Validity of a `;`-separated proof text, each line being a theory axiom,
/// a logical axiom, modus ponens or generalization from earlier lines.
/// Segments must parse and already be in printed form.
pub fn independently_valid(text: &str, theory_axiom: &dyn Fn(&Formula) -> bool) -> bool {
    let mut lines: Vec<Formula> = Vec::new();
    for seg in text.split(';') {
        let Ok(f) = parse_formula(seg) else { return false };
        if f.to_string() != seg {
            return false;
        }
        let ok = theory_axiom(&f)
            || is_logical_axiom(&f)
            || lines.iter().any(|g| matches!(g, Formula::Implies(a, b) if b.as_ref() == &f && lines.contains(a)))
            || matches!(&f, Formula::Forall(_, body) if lines.contains(body));
        if !ok {
            return false;
        }
        lines.push(f);
    }
    !lines.is_empty()
}

/// Bijective base-`B` value of `text` over `alphabet`, first symbol least
/// significant, computed directly.
pub fn code_of(text: &str, alphabet: &str) -> u128 {
    let digits: Vec<char> = alphabet.chars().collect();
    text.chars().rev().fold(0u128, |acc, c| {
        acc * digits.len() as u128 + 1 + digits.iter().position(|d| *d == c).expect("symbol in alphabet") as u128
    })
}

pub const PROOF_SYMBOLS: &str = "x=∈¬()→∧∨∀∃0123456789,K;";
