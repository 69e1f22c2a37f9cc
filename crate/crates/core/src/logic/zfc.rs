//! The axioms of ZFC in the `{∈, =}` language.
//!
//! Defined notions are expanded by hand: `∅ ∈ y` becomes
//! `∃e(∀z ¬z∈e ∧ e∈y)`, `S(w) ∈ y` becomes `∃s(∀t(t∈s ↔ t∈w ∨ t=w) ∧ s∈y)`,
//! and ordered pairs are Kuratowski pairs `{{a},{a,b}}`.

use std::collections::BTreeSet;

use super::syntax::{all, and, eq, ex, iff, imp, mem, not, or, Formula, Var};

pub fn extensionality() -> Formula {
    all(0, all(1, imp(all(2, iff(mem(2, 0), mem(2, 1))), eq(0, 1))))
}

pub fn regularity() -> Formula {
    all(0, imp(ex(1, mem(1, 0)), ex(2, and(mem(2, 0), not(ex(3, and(mem(3, 2), mem(3, 0))))))))
}

pub fn pairing() -> Formula {
    all(0, all(1, ex(2, and(mem(0, 2), mem(1, 2)))))
}

pub fn union() -> Formula {
    all(0, ex(1, all(2, all(3, imp(and(mem(3, 2), mem(2, 0)), mem(3, 1))))))
}

pub fn infinity() -> Formula {
    let empty_in_x0 = ex(1, and(all(2, not(mem(2, 1))), mem(1, 0)));
    let successor_of_x3_in_x0 = ex(4, and(all(5, iff(mem(5, 4), or(mem(5, 3), eq(5, 3)))), mem(4, 0)));
    ex(0, and(empty_in_x0, all(3, imp(mem(3, 0), successor_of_x3_in_x0))))
}

/// `∀x∃y∀z(z ⊆ x → z ∈ y)`.
pub fn power_set() -> Formula {
    all(0, ex(1, all(2, imp(all(3, imp(mem(3, 2), mem(3, 0))), mem(2, 1)))))
}

/// `p = (a, b)` as a Kuratowski pair, using `w` and `t` as scratch variables.
fn is_pair(p: Var, a: Var, b: Var, w: Var, t: Var) -> Formula {
    let singleton = all(t, iff(mem(t, w), eq(t, a)));
    let doubleton = all(t, iff(mem(t, w), or(eq(t, a), eq(t, b))));
    all(w, iff(mem(w, p), or(singleton, doubleton)))
}

/// Every family of non-empty sets has a choice function.
pub fn choice() -> Formula {
    let (x, e, z, f, a, b, p, w, t, c) = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9);
    let holds = |a, b| ex(p, and(mem(p, f), is_pair(p, a, b, w, t)));
    let no_empty = not(ex(e, and(all(z, not(mem(z, e))), mem(e, x))));
    let graph = all(p, imp(mem(p, f), ex(a, ex(b, and(and(mem(a, x), mem(b, a)), is_pair(p, a, b, w, t))))));
    let functional = all(a, all(b, all(c, imp(and(holds(a, b), holds(a, c)), eq(b, c)))));
    let total = all(a, imp(mem(a, x), ex(b, and(mem(b, a), holds(a, b)))));
    all(x, imp(no_empty, ex(f, and(and(graph, functional), total))))
}

/// The finitely many non-schema axioms.
pub fn fixed_axioms() -> Vec<(&'static str, Formula)> {
    vec![
        ("extensionality", extensionality()),
        ("regularity", regularity()),
        ("pairing", pairing()),
        ("union", union()),
        ("infinity", infinity()),
        ("power set", power_set()),
        ("choice", choice()),
    ]
}

fn strip_foralls(f: &Formula) -> (Vec<Var>, &Formula) {
    let mut prefix = Vec::new();
    let mut cur = f;
    while let Formula::Forall(v, body) = cur {
        prefix.push(*v);
        cur = body;
    }
    (prefix, cur)
}

fn subset_of(vars: &BTreeSet<Var>, allowed: &[Var]) -> bool {
    vars.iter().all(|v| allowed.contains(v))
}

/// `∀z∀w⃗∃y∀x(x∈y ↔ (x∈z ∧ φ))` with `y` not free in `φ`; returns `φ`.
pub fn match_specification(f: &Formula) -> Option<&Formula> {
    let (prefix, rest) = strip_foralls(f);
    let Formula::Exists(y, rest) = rest else { return None };
    let Formula::Forall(x, body) = rest.as_ref() else { return None };
    let Formula::And(fwd, back) = body.as_ref() else { return None };
    let Formula::Implies(l1, r1) = fwd.as_ref() else { return None };
    let Formula::Implies(l2, r2) = back.as_ref() else { return None };
    if l1.as_ref() != &mem(*x, *y) || r2.as_ref() != &mem(*x, *y) || r1 != l2 {
        return None;
    }
    let Formula::And(in_z, phi) = r1.as_ref() else { return None };
    let &Formula::In(x2, z) = in_z.as_ref() else { return None };
    let mut allowed = prefix.clone();
    allowed.push(*x);
    let ok = x2 == *x
        && x != y
        && z != *y
        && z != *x
        && prefix.contains(&z)
        && !phi.is_free(*y)
        && subset_of(&phi.free_vars(), &allowed);
    ok.then_some(phi.as_ref())
}

/// `∀A∀w⃗(∀x(x∈A → ∃!y φ) → ∃B∀x(x∈A → ∃y(y∈B ∧ φ)))` with `B` not free
/// in `φ`; returns `φ`.
pub fn match_replacement(f: &Formula) -> Option<&Formula> {
    let (prefix, rest) = strip_foralls(f);
    let Formula::Implies(hyp, concl) = rest else { return None };

    let Formula::Forall(x, hyp) = hyp.as_ref() else { return None };
    let Formula::Implies(x_in_a, unique) = hyp.as_ref() else { return None };
    let &Formula::In(x1, a) = x_in_a.as_ref() else { return None };
    let Formula::Exists(y, unique) = unique.as_ref() else { return None };
    let Formula::And(phi, at_most_one) = unique.as_ref() else { return None };
    let Formula::Forall(w, at_most_one) = at_most_one.as_ref() else { return None };
    let Formula::Implies(phi_w, w_eq_y) = at_most_one.as_ref() else { return None };

    let Formula::Exists(b, concl) = concl.as_ref() else { return None };
    let Formula::Forall(x2, concl) = concl.as_ref() else { return None };
    let Formula::Implies(x_in_a2, some_y) = concl.as_ref() else { return None };
    let Formula::Exists(y2, some_y) = some_y.as_ref() else { return None };
    let Formula::And(y_in_b, phi2) = some_y.as_ref() else { return None };

    let (x, y, w, b) = (*x, *y, *w, *b);
    let mut allowed = prefix.clone();
    allowed.extend([x, y]);
    let distinct = [x, y, a, b].iter().collect::<BTreeSet<_>>().len() == 4;
    let ok = distinct
        && x1 == x
        && prefix.contains(&a)
        && w != y
        && !phi.is_free(w)
        && phi.free_for(w, y)
        && phi_w.as_ref() == &phi.subst(y, w)
        && w_eq_y.as_ref() == &eq(w, y)
        && *x2 == x
        && x_in_a2.as_ref() == &mem(x, a)
        && *y2 == y
        && y_in_b.as_ref() == &mem(y, b)
        && phi2 == phi
        && !phi.is_free(b)
        && subset_of(&phi.free_vars(), &allowed);
    ok.then_some(phi.as_ref())
}

/// Which ZFC axiom (if any) `f` is.
pub fn classify(f: &Formula) -> Option<&'static str> {
    if let Some((name, _)) = fixed_axioms().into_iter().find(|(_, a)| a.alpha_eq(f)) {
        return Some(name);
    }
    if match_specification(f).is_some() {
        return Some("specification");
    }
    if match_replacement(f).is_some() {
        return Some("replacement");
    }
    None
}

pub fn is_zfc_axiom(f: &Formula) -> bool {
    classify(f).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse::parse_formula;

    #[test]
    fn fixed_axioms_are_recognised_up_to_renaming() {
        for (name, a) in fixed_axioms() {
            assert_eq!(classify(&a), Some(name));
        }
        let renamed = parse_formula("∀x7∀x8(∀x9(x9∈x7↔x9∈x8)→x7=x8)").unwrap();
        assert_eq!(classify(&renamed), Some("extensionality"));
        // power set with the subset relation the wrong way round is not an axiom
        let wrong = parse_formula("∀x∃x1∀x2(∀x3(x3∈x→x3∈x2)→x2∈x1)").unwrap();
        assert_eq!(classify(&wrong), None);
    }

    #[test]
    fn specification_instances() {
        let s = parse_formula("∀x0∃x1∀x2(x2∈x1↔(x2∈x0∧x2=x2))").unwrap();
        assert_eq!(match_specification(&s), Some(&eq(2, 2)));
        let with_param = parse_formula("∀x∀x5∃x1∀x2(x2∈x1↔(x2∈x∧x2∈x5))").unwrap();
        assert!(is_zfc_axiom(&with_param));
        // y free in φ
        let bad = parse_formula("∀x∃x1∀x2(x2∈x1↔(x2∈x∧x2∈x1))").unwrap();
        assert!(!is_zfc_axiom(&bad));
        // unbound parameter
        let open = parse_formula("∀x∃x1∀x2(x2∈x1↔(x2∈x∧x2∈x5))").unwrap();
        assert!(!is_zfc_axiom(&open));
    }

    #[test]
    fn replacement_instances() {
        let r = parse_formula("∀x(∀x1(x1∈x→∃!x2 x2=x1)→∃x3∀x1(x1∈x→∃x2(x2∈x3∧x2=x1)))").unwrap();
        assert_eq!(classify(&r), Some("replacement"));
        let bad = parse_formula("∀x(∀x1(x1∈x→∃!x2 x2=x1)→∃x3∀x1(x1∈x→∃x2(x2∈x3∧x2=x)))").unwrap();
        assert!(!is_zfc_axiom(&bad));
    }

    #[test]
    fn non_axioms() {
        for s in ["x=x", "∀x x∈x", "¬∃x x=x"] {
            assert!(!is_zfc_axiom(&parse_formula(s).unwrap()), "{s}");
        }
    }
}
