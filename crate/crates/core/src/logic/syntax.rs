use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::codec::Alphabet;

/// Variable index; `x` is variable 0, `x7` is variable 7.
pub type Var = u32;

/// First-order formulas over `{∈, =}` with variables as the only terms.
///
/// `KolGe(l, x)` is an opaque reserved atom standing for "`l <= Kol(x)`"; it
/// lets small theories state complexity lower bounds without arithmetising
/// `Kol` in the object language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    Eq(Var, Var),
    In(Var, Var),
    KolGe(u64, u64),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

pub fn eq(a: Var, b: Var) -> Formula {
    Formula::Eq(a, b)
}
pub fn mem(a: Var, b: Var) -> Formula {
    Formula::In(a, b)
}
pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}
pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}
pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}
pub fn imp(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}
/// `a ↔ b`, spelled `(a → b) ∧ (b → a)`.
pub fn iff(a: Formula, b: Formula) -> Formula {
    and(imp(a.clone(), b.clone()), imp(b, a))
}
pub fn all(v: Var, f: Formula) -> Formula {
    Formula::Forall(v, Box::new(f))
}
pub fn ex(v: Var, f: Formula) -> Formula {
    Formula::Exists(v, Box::new(f))
}

/// `∃!v φ`, spelled `∃v(φ ∧ ∀w(φ[w/v] → w = v))` with `w` the first variable
/// not occurring in `φ` or equal to `v`.
pub fn ex_unique(v: Var, f: Formula) -> Formula {
    let w = f.vars().into_iter().chain([v]).max().unwrap_or(0) + 1;
    let renamed = f.subst(v, w);
    ex(v, and(f, all(w, imp(renamed, eq(w, v)))))
}

impl Formula {
    /// Always-true sentence used where an empty conjunction is needed.
    pub fn top() -> Formula {
        imp(eq(0, 0), eq(0, 0))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::In(..) | Formula::KolGe(..))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(a, b) | Formula::In(a, b) => {
                for v in [a, b] {
                    if !bound.contains(v) {
                        out.insert(*v);
                    }
                }
            }
            Formula::KolGe(..) => {}
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, v: Var) -> bool {
        self.free_vars().contains(&v)
    }

    /// Every variable occurring anywhere, bound or free.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Eq(a, b) | Formula::In(a, b) => {
                out.insert(*a);
                out.insert(*b);
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(*v);
            }
            _ => {}
        });
        out
    }

    fn walk(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.walk(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            _ => {}
        }
    }

    /// Replace free occurrences of `from` by `to`. No capture check; see [`Formula::free_for`].
    pub fn subst(&self, from: Var, to: Var) -> Formula {
        let s = |v: Var| if v == from { to } else { v };
        match self {
            Formula::Eq(a, b) => Formula::Eq(s(*a), s(*b)),
            Formula::In(a, b) => Formula::In(s(*a), s(*b)),
            Formula::KolGe(..) => self.clone(),
            Formula::Not(f) => not(f.subst(from, to)),
            Formula::And(a, b) => and(a.subst(from, to), b.subst(from, to)),
            Formula::Or(a, b) => or(a.subst(from, to), b.subst(from, to)),
            Formula::Implies(a, b) => imp(a.subst(from, to), b.subst(from, to)),
            Formula::Forall(v, f) | Formula::Exists(v, f) if *v == from => self.clone(),
            Formula::Forall(v, f) => all(*v, f.subst(from, to)),
            Formula::Exists(v, f) => ex(*v, f.subst(from, to)),
        }
    }

    /// `to` is substitutable for `from`: no free occurrence of `from` sits
    /// under a quantifier binding `to`.
    pub fn free_for(&self, to: Var, from: Var) -> bool {
        match self {
            Formula::Eq(..) | Formula::In(..) | Formula::KolGe(..) => true,
            Formula::Not(f) => f.free_for(to, from),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_for(to, from) && b.free_for(to, from)
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                if *v == from {
                    true
                } else if *v == to && f.is_free(from) {
                    false
                } else {
                    f.free_for(to, from)
                }
            }
        }
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new())
    }

    /// Number of symbols in the printed form.
    pub fn size(&self) -> usize {
        self.to_string().chars().count()
    }
}

fn alpha(a: &Formula, b: &Formula, env: &mut Vec<(Var, Var)>) -> bool {
    let same = |x: Var, y: Var, env: &Vec<(Var, Var)>| {
        for &(l, r) in env.iter().rev() {
            if l == x || r == y {
                return l == x && r == y;
            }
        }
        x == y
    };
    match (a, b) {
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) | (Formula::In(a1, a2), Formula::In(b1, b2)) => {
            same(*a1, *b1, env) && same(*a2, *b2, env)
        }
        (Formula::KolGe(l1, x1), Formula::KolGe(l2, x2)) => l1 == l2 && x1 == x2,
        (Formula::Not(x), Formula::Not(y)) => alpha(x, y, env),
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => alpha(a1, b1, env) && alpha(a2, b2, env),
        (Formula::Forall(v, x), Formula::Forall(w, y)) | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
            env.push((*v, *w));
            let r = alpha(x, y, env);
            env.pop();
            r
        }
        _ => false,
    }
}

pub(crate) fn write_var(f: &mut impl fmt::Write, v: Var) -> fmt::Result {
    if v == 0 {
        f.write_char('x')
    } else {
        write!(f, "x{v}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) | Formula::In(a, b) => {
                write_var(f, *a)?;
                f.write_str(if matches!(self, Formula::Eq(..)) { "=" } else { "∈" })?;
                write_var(f, *b)
            }
            Formula::KolGe(l, x) => write!(f, "K{l},{x}"),
            Formula::Not(g) => write!(f, "¬{g}"),
            Formula::And(a, b) => write!(f, "({a}∧{b})"),
            Formula::Or(a, b) => write!(f, "({a}∨{b})"),
            Formula::Implies(a, b) => write!(f, "({a}→{b})"),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                f.write_str(if matches!(self, Formula::Forall(..)) { "∀" } else { "∃" })?;
                write_var(f, *v)?;
                write!(f, "{g}")
            }
        }
    }
}

/// Printed formulas use exactly these symbols, in this numbering order.
pub fn logic_alphabet() -> &'static Alphabet {
    static A: OnceLock<Alphabet> = OnceLock::new();
    A.get_or_init(|| Alphabet::new("logic", "x=∈¬()→∧∨∀∃0123456789,K".chars()).expect("static alphabet"))
}

/// Separator between the lines of a coded proof.
pub const LINE_SEPARATOR: char = ';';

/// [`logic_alphabet`] with [`LINE_SEPARATOR`] appended.
pub fn proof_alphabet() -> &'static Alphabet {
    static A: OnceLock<Alphabet> = OnceLock::new();
    A.get_or_init(|| logic_alphabet().extended("proof", LINE_SEPARATOR).expect("static alphabet"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing() {
        let f = all(0, all(1, imp(all(2, iff(mem(2, 0), mem(2, 1))), eq(0, 1))));
        assert_eq!(f.to_string(), "∀x∀x1(∀x2((x2∈x→x2∈x1)∧(x2∈x1→x2∈x))→x=x1)");
        assert_eq!(Formula::KolGe(10, 5).to_string(), "K10,5");
    }

    #[test]
    fn free_vars_and_subst() {
        let f = all(1, imp(mem(1, 0), eq(2, 1)));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), [0, 2]);
        assert_eq!(f.subst(1, 5), f);
        assert_eq!(f.subst(2, 3), all(1, imp(mem(1, 0), eq(3, 1))));
        assert!(f.free_for(3, 2));
        assert!(!f.free_for(1, 2));
    }

    #[test]
    fn alpha_equivalence() {
        let a = all(0, ex(1, mem(0, 1)));
        let b = all(5, ex(6, mem(5, 6)));
        let c = all(5, ex(6, mem(6, 5)));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
        // free variables must coincide
        assert!(!mem(0, 1).alpha_eq(&mem(0, 2)));
        // a bound name may not also capture a free one
        assert!(!all(1, mem(1, 2)).alpha_eq(&all(2, mem(2, 2))));
    }

    #[test]
    fn unique_existence() {
        let f = ex_unique(1, mem(1, 0));
        assert_eq!(f, ex(1, and(mem(1, 0), all(2, imp(mem(2, 0), eq(2, 1))))));
    }

    #[test]
    fn alphabets() {
        assert_eq!(logic_alphabet().base(), 23);
        assert_eq!(proof_alphabet().base(), 24);
        assert_eq!(proof_alphabet().number(';'), Some(24));
    }
}
