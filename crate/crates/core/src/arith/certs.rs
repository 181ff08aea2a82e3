//! Certificate construction over `A_PLUS` / `A_EXT(k)`.
//!
//! Everything here is deterministic structural recursion; no search.

use super::{weight, ArithError, EquationVerdict};
use crate::rulebase::{constant_rule_name, BaseKind, Derivation, Subst};
use crate::syntax::{Atom, Term};

fn subst(pairs: &[(&str, &Term)]) -> Subst {
    pairs.iter().map(|(k, t)| (k.to_string(), (*t).clone())).collect()
}

fn sides(d: &Derivation) -> (&Term, &Term) {
    d.atom.sides().expect("equation certificates only")
}

fn is_refl(d: &Derivation) -> bool {
    d.rule_name() == Some("eq1")
}

fn refl(t: &Term) -> Derivation {
    Derivation::rule(Atom::eq(t.clone(), t.clone()), "eq1", subst(&[("x", t)]), vec![])
}

/// `a = b` to `b = a`.
fn sym(d: Derivation) -> Derivation {
    if is_refl(&d) {
        return d;
    }
    let (a, b) = sides(&d);
    let (a, b) = (a.clone(), b.clone());
    Derivation::rule(Atom::eq(b.clone(), a.clone()), "eq2", subst(&[("x", &b), ("y", &a)]), vec![d])
}

/// `a = b`, `b = c` to `a = c`.
fn trans(d1: Derivation, d2: Derivation) -> Derivation {
    if is_refl(&d1) {
        return d2;
    }
    if is_refl(&d2) {
        return d1;
    }
    let (a, b) = sides(&d1);
    let (b2, c) = sides(&d2);
    debug_assert_eq!(b, b2, "transitivity chain must meet");
    let (a, b, c) = (a.clone(), b.clone(), c.clone());
    Derivation::rule(Atom::eq(a.clone(), c.clone()), "eq3", subst(&[("x", &a), ("y", &b), ("z", &c)]), vec![d1, d2])
}

fn chain(ds: impl IntoIterator<Item = Derivation>) -> Derivation {
    let mut it = ds.into_iter();
    let first = it.next().expect("non-empty chain");
    it.fold(first, trans)
}

#[derive(Clone, Copy)]
enum Ctx {
    Succ,
    AddLeft,
    AddRight,
    MulLeft,
    MulRight,
}

/// Congruence step: from `a = b` conclude the equation with both sides
/// wrapped in the same context. `other` is the fixed operand.
fn cong(ctx: Ctx, d: Derivation, other: &Term) -> Derivation {
    let (a, b) = sides(&d);
    let (a, b) = (a.clone(), b.clone());
    let (name, l, r) = match ctx {
        Ctx::Succ => ("cg1", Term::succ(a.clone()), Term::succ(b.clone())),
        Ctx::AddLeft => ("cg2", Term::add(a.clone(), other.clone()), Term::add(b.clone(), other.clone())),
        Ctx::AddRight => ("cg3", Term::add(other.clone(), a.clone()), Term::add(other.clone(), b.clone())),
        Ctx::MulLeft => ("cg4", Term::mul(a.clone(), other.clone()), Term::mul(b.clone(), other.clone())),
        Ctx::MulRight => ("cg5", Term::mul(other.clone(), a.clone()), Term::mul(other.clone(), b.clone())),
    };
    if is_refl(&d) {
        return refl(&l);
    }
    let s = match ctx {
        Ctx::Succ => subst(&[("x", &a), ("y", &b)]),
        _ => subst(&[("x", &a), ("y", &b), ("z", other)]),
    };
    Derivation::rule(Atom::eq(l, r), name, s, vec![d])
}

fn axiom(name: &str, lhs: Term, rhs: Term, s: Subst) -> Derivation {
    Derivation::rule(Atom::eq(lhs, rhs), name, s, vec![])
}

/// `N(a) + N(b) = N(a + b)`.
fn add_numerals(a: u64, b: u64) -> Derivation {
    let na = Term::numeral(a);
    if b == 0 {
        return axiom("pa3", Term::add(na.clone(), Term::Zero), na.clone(), subst(&[("x", &na)]));
    }
    let nb1 = Term::numeral(b - 1);
    let step = axiom(
        "pa4",
        Term::add(na.clone(), Term::succ(nb1.clone())),
        Term::succ(Term::add(na.clone(), nb1.clone())),
        subst(&[("x", &na), ("y", &nb1)]),
    );
    trans(step, cong(Ctx::Succ, add_numerals(a, b - 1), &Term::Zero))
}

/// `N(a) * N(b) = N(a * b)`.
fn mul_numerals(a: u64, b: u64) -> Derivation {
    let na = Term::numeral(a);
    if b == 0 {
        return axiom("pa5", Term::mul(na.clone(), Term::Zero), Term::Zero, subst(&[("x", &na)]));
    }
    let nb1 = Term::numeral(b - 1);
    let step = axiom(
        "pa6",
        Term::mul(na.clone(), Term::succ(nb1.clone())),
        Term::add(Term::mul(na.clone(), nb1.clone()), na.clone()),
        subst(&[("x", &na), ("y", &nb1)]),
    );
    chain([step, cong(Ctx::AddLeft, mul_numerals(a, b - 1), &na), add_numerals(a * (b - 1), a)])
}

fn normalize(t: &Term, kind: BaseKind) -> Result<(u64, Derivation), ArithError> {
    match t {
        Term::Zero => Ok((0, refl(t))),
        Term::Const(i) => {
            if !kind.signature().has_constant(*i) {
                return Err(ArithError::Signature { term: t.to_string(), base: kind });
            }
            let zc = axiom(&constant_rule_name(*i), Term::Zero, t.clone(), Subst::new());
            Ok((0, sym(zc)))
        }
        Term::Var(_) => Err(ArithError::OpenTerm(t.to_string())),
        Term::Succ(u) => {
            let (n, d) = normalize(u, kind)?;
            Ok((n + 1, cong(Ctx::Succ, d, &Term::Zero)))
        }
        Term::Add(l, r) | Term::Mul(l, r) => {
            let is_add = matches!(t, Term::Add(..));
            let (a, dl) = normalize(l, kind)?;
            let (b, dr) = normalize(r, kind)?;
            let na = Term::numeral(a);
            let (left, right, closing, value) = if is_add {
                let v = a.checked_add(b).ok_or_else(|| ArithError::Overflow(t.to_string()))?;
                (Ctx::AddLeft, Ctx::AddRight, add_numerals(a, b), v)
            } else {
                let v = a.checked_mul(b).ok_or_else(|| ArithError::Overflow(t.to_string()))?;
                (Ctx::MulLeft, Ctx::MulRight, mul_numerals(a, b), v)
            };
            let d = chain([cong(left, dl, r), cong(right, dr, &na), closing]);
            Ok((value, d))
        }
    }
}

fn require_normalizing(kind: BaseKind) -> Result<(), ArithError> {
    match kind {
        BaseKind::APlus | BaseKind::AExt(_) => Ok(()),
        BaseKind::A => Err(ArithError::FidelityGap),
        BaseKind::Eq => Err(ArithError::Unsupported(kind)),
    }
}

/// The numeral value of a closed term with a certificate deriving
/// `t = N(value)` in `kind`.
pub fn normalize_to_numeral(t: &Term, kind: BaseKind) -> Result<(crate::syntax::Numeral, Derivation), ArithError> {
    require_normalizing(kind)?;
    let (n, d) = normalize(t, kind)?;
    Ok((crate::syntax::Numeral(n), d))
}

/// Decide a closed equation: true iff both sides have equal weight.
pub fn decide_equation(t1: &Term, t2: &Term, kind: BaseKind) -> Result<EquationVerdict, ArithError> {
    require_normalizing(kind)?;
    let (w1, w2) = (weight(t1)?, weight(t2)?);
    if w1 != w2 {
        return Ok(EquationVerdict::False { lhs: w1, rhs: w2 });
    }
    let (_, d1) = normalize(t1, kind)?;
    let (_, d2) = normalize(t2, kind)?;
    Ok(EquationVerdict::True { certificate: trans(d1, sym(d2)) })
}

/// From the open premise `premise` (a weight-unbalanced equation) derive
/// `target`: normalize both sides, peel matching successors with `pa2`
/// down to `S(n) = 0`, then apply `pa1`.
pub fn explode(premise: &Atom, target: &Atom, kind: BaseKind) -> Result<Derivation, ArithError> {
    require_normalizing(kind)?;
    let (a, b) = premise.sides().ok_or_else(|| ArithError::Balanced(premise.to_string()))?;
    let (m, da) = normalize(a, kind)?;
    let (k, db) = normalize(b, kind)?;
    if m == k {
        return Err(ArithError::Balanced(premise.to_string()));
    }
    let mut d = chain([sym(da), Derivation::open(premise.clone()), db]);
    if m < k {
        d = sym(d);
    }
    let (mut big, mut small) = (m.max(k), m.min(k));
    while small > 0 {
        let (x, y) = (Term::numeral(big - 1), Term::numeral(small - 1));
        d = Derivation::rule(Atom::eq(x.clone(), y.clone()), "pa2", subst(&[("x", &x), ("y", &y)]), vec![d]);
        big -= 1;
        small -= 1;
    }
    let x = Term::numeral(big - 1);
    Ok(Derivation::rule(target.clone(), "pa1", subst(&[("x", &x)]), vec![d]))
}

/// `ctx[t] = ctx[u]` from `t = u`, by congruence through the positions of
/// `var` in `ctx`.
fn lift(ctx: &Term, var: &str, d: &Derivation) -> Derivation {
    let (t, u) = sides(d);
    if !ctx.contains_var(var) {
        return refl(ctx);
    }
    match ctx {
        Term::Var(_) => d.clone(),
        Term::Succ(inner) => cong(Ctx::Succ, lift(inner, var, d), &Term::Zero),
        Term::Add(l, r) | Term::Mul(l, r) => {
            let (left, right) = if matches!(ctx, Term::Add(..)) {
                (Ctx::AddLeft, Ctx::AddRight)
            } else {
                (Ctx::MulLeft, Ctx::MulRight)
            };
            let r_at_t = r.subst_var(var, t);
            let l_at_u = l.subst_var(var, u);
            trans(cong(left, lift(l, var, d), &r_at_t), cong(right, lift(r, var, d), &l_at_u))
        }
        Term::Zero | Term::Const(_) => unreachable!("no variable occurrence"),
    }
}

/// Substitution of equals for an equation schema `lhs = rhs` in `var`:
/// from `t = u` and a derivation of `lhs[u] = rhs[u]`, derive
/// `lhs[t] = rhs[t]`.
pub fn substitute_equals(schema: &Atom, var: &str, equal: &Derivation, instance: &Derivation) -> Derivation {
    let (lhs, rhs) = schema.sides().expect("equation schema");
    chain([lift(lhs, var, equal), instance.clone(), sym(lift(rhs, var, equal))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulebase::{builtin_base, check_derivation};
    use crate::syntax::{closed_terms_upto, parse_atom, parse_term, Signature};
    use std::collections::HashSet;

    fn t(s: &str) -> Term {
        parse_term(s, &Signature::extended(9)).unwrap()
    }

    fn closed_check(kind: BaseKind, d: &Derivation) {
        check_derivation(&builtin_base(kind), d, &HashSet::new()).unwrap_or_else(|e| panic!("{e}\n{d}"));
    }

    #[test]
    fn normalizes_zero_to_reflexivity() {
        let (n, d) = normalize_to_numeral(&Term::Zero, BaseKind::APlus).unwrap();
        assert_eq!(n.value(), 0);
        assert_eq!(d.rule_name(), Some("eq1"));
        closed_check(BaseKind::APlus, &d);
    }

    #[test]
    fn normalizes_one_plus_one() {
        let (n, d) = normalize_to_numeral(&t("S(0)+S(0)"), BaseKind::APlus).unwrap();
        assert_eq!(n.value(), 2);
        assert_eq!(d.atom, Atom::eq(t("S(0)+S(0)"), Term::numeral(2)));
        closed_check(BaseKind::APlus, &d);
    }

    #[test]
    fn constants_normalize_through_their_zero_rule() {
        let kind = BaseKind::AExt(2);
        let (n, d) = normalize_to_numeral(&t("c2 + S(0)"), kind).unwrap();
        assert_eq!(n.value(), 1);
        assert!(d.uses_rule("zero_c2"));
        closed_check(kind, &d);
        assert!(matches!(normalize_to_numeral(&t("c3"), kind), Err(ArithError::Signature { .. })));
    }

    #[test]
    fn base_a_is_rejected() {
        assert_eq!(normalize_to_numeral(&Term::Zero, BaseKind::A), Err(ArithError::FidelityGap));
        assert_eq!(decide_equation(&Term::Zero, &Term::Zero, BaseKind::A), Err(ArithError::FidelityGap));
    }

    #[test]
    fn every_small_term_normalizes_with_a_valid_certificate() {
        for term in closed_terms_upto(&Signature::arithmetic(), 6) {
            let (n, d) = normalize_to_numeral(&term, BaseKind::APlus).unwrap();
            assert_eq!(n.value(), super::super::eval_value(&term).unwrap());
            assert_eq!(d.atom, Atom::eq(term.clone(), n.to_term()));
            closed_check(BaseKind::APlus, &d);
        }
    }

    #[test]
    fn decide_examples() {
        match decide_equation(&t("S(0)+S(S(0))"), &t("S(S(S(0)))"), BaseKind::APlus).unwrap() {
            EquationVerdict::True { certificate } => closed_check(BaseKind::APlus, &certificate),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            decide_equation(&t("S(0)"), &t("0"), BaseKind::APlus).unwrap(),
            EquationVerdict::False { lhs: super::super::Weight(1), rhs: super::super::Weight(0) }
        );
        let kind = BaseKind::AExt(4);
        match decide_equation(&t("c4"), &t("0"), kind).unwrap() {
            EquationVerdict::True { certificate } => closed_check(kind, &certificate),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explosion_reaches_any_target() {
        let kind = BaseKind::APlus;
        let premise = parse_atom("S(0) + S(0) = S(0)", &Signature::arithmetic()).unwrap();
        let target = parse_atom("0 = S(S(0))", &Signature::arithmetic()).unwrap();
        let d = explode(&premise, &target, kind).unwrap();
        assert_eq!(d.rule_name(), Some("pa1"));
        check_derivation(&builtin_base(kind), &d, &[premise.clone()].into()).unwrap();
        let reversed = parse_atom("0 = S(0)", &Signature::arithmetic()).unwrap();
        let d = explode(&reversed, &target, kind).unwrap();
        check_derivation(&builtin_base(kind), &d, &[reversed].into()).unwrap();
        let balanced = parse_atom("0 + 0 = 0", &Signature::arithmetic()).unwrap();
        assert!(matches!(explode(&balanced, &target, kind), Err(ArithError::Balanced(_))));
    }

    #[test]
    fn substitution_of_equals() {
        let kind = BaseKind::APlus;
        let sig = Signature::arithmetic();
        let schema = parse_atom("x * S(0) + x = x + x", &sig).unwrap();
        let term = t("S(0) + 0");
        let (n, eq) = normalize_to_numeral(&term, kind).unwrap();
        let inst = schema.subst_var("x", &n.to_term());
        let (l, r) = inst.sides().unwrap();
        let EquationVerdict::True { certificate } = decide_equation(l, r, kind).unwrap() else {
            panic!("instance should hold")
        };
        let d = substitute_equals(&schema, "x", &eq, &certificate);
        assert_eq!(d.atom, schema.subst_var("x", &term));
        closed_check(kind, &d);
    }
}
