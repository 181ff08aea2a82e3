//! Bounded support over the arithmetic bases.
//!
//! The recursion carries a context of closed equations assumed as open
//! premises; `support_under(ctx, f)` stands for "every extension in which
//! all of `ctx` is derivable supports `f`". Atomic antecedents move into
//! the context, which is sound because derivability from premises
//! composes with derivations of those premises in any extension.
//!
//! A refutation always fails at the queried base itself: it is reported
//! only when every context equation is derivable there, so the base is
//! one of the extensions the clause ranges over.

use serde::Serialize;

use super::{Clause, Counterexample, Evidence, SupportError, SupportVerdict};
use crate::arith::{base_preserves_weight, decide_equation, explode, weight, EquationVerdict};
use crate::rulebase::{builtin_base, derive, Base, BaseKind, Budget, DeriveVerdict};
use crate::syntax::{closed_terms_upto, Atom, Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArithBounds {
    /// Universal clauses range over closed terms with at most this many
    /// nodes...
    pub term_size: usize,
    /// ...and over the numerals `0..=numeral_range`.
    pub numeral_range: u64,
    /// Search budget for bases without congruence schemas.
    pub budget: Budget,
}

impl Default for ArithBounds {
    fn default() -> Self {
        ArithBounds { term_size: 4, numeral_range: 3, budget: Budget::default() }
    }
}

enum Outcome {
    Verified { instances: u64, bounded: bool },
    Refuted(Counterexample),
    Unknown(String),
}

/// Whether a closed equation is derivable in the base with no premises.
enum Holds {
    Yes,
    No([u64; 2]),
    Unknown,
}

struct Ctx {
    kind: BaseKind,
    base: Base,
    bounds: ArithBounds,
    instances: Vec<Term>,
}

fn weights(a: &Atom) -> Option<[u64; 2]> {
    let (l, r) = a.sides()?;
    Some([weight(l).ok()?.0, weight(r).ok()?.0])
}

fn unbalanced(a: &Atom) -> bool {
    weights(a).is_some_and(|[l, r]| l != r)
}

fn refutation(clause: Clause, base: &Base, detail: String, weights: Option<[u64; 2]>) -> Counterexample {
    Counterexample {
        clause,
        base_mask: None,
        base_rules: vec![base.name().to_string()],
        detail,
        weights,
        instance: None,
    }
}

impl Ctx {
    fn normalizing(&self) -> bool {
        self.kind.has_congruence()
    }

    fn holds(&self, a: &Atom) -> Holds {
        if self.normalizing() {
            return match a.sides().map(|(l, r)| decide_equation(l, r, self.kind)) {
                Some(Ok(EquationVerdict::True { .. })) => Holds::Yes,
                Some(Ok(EquationVerdict::False { lhs, rhs })) => Holds::No([lhs.0, rhs.0]),
                _ => Holds::Unknown,
            };
        }
        match derive(&self.base, &[], a, self.bounds.budget) {
            Ok(DeriveVerdict::Derivable(_)) => Holds::Yes,
            Ok(DeriveVerdict::NotDerivable(_)) => weights(a).map_or(Holds::Unknown, Holds::No),
            _ => Holds::Unknown,
        }
    }

    fn all_hold(&self, ctx: &[Atom]) -> bool {
        ctx.iter().all(|a| matches!(self.holds(a), Holds::Yes))
    }

    /// Every atom is derivable from `ctx`, through the explosion schema.
    fn explodes(&self, ctx: &[Atom]) -> bool {
        let witness = Atom::eq(Term::numeral(1), Term::Zero);
        if self.normalizing() {
            return ctx.iter().any(|c| unbalanced(c) && explode(c, &witness, self.kind).is_ok());
        }
        matches!(derive(&self.base, ctx, &witness, self.bounds.budget), Ok(DeriveVerdict::Derivable(_)))
    }

    fn clause_for(ctx: &[Atom], bare: Clause) -> Clause {
        if ctx.is_empty() {
            bare
        } else {
            Clause::Impl
        }
    }

    fn atom(&self, ctx: &[Atom], a: &Atom) -> Outcome {
        let verified = Outcome::Verified { instances: 1, bounded: false };
        if self.explodes(ctx) {
            return verified;
        }
        if self.normalizing() {
            return match self.holds(a) {
                Holds::Yes => verified,
                Holds::No(w) if self.all_hold(ctx) => Outcome::Refuted(refutation(
                    Self::clause_for(ctx, Clause::At),
                    &self.base,
                    format!("{a} is not derivable in {}", self.base.name()),
                    Some(w),
                )),
                _ => Outcome::Unknown(format!("could not settle {a}")),
            };
        }
        match derive(&self.base, ctx, a, self.bounds.budget) {
            Ok(DeriveVerdict::Derivable(_)) => verified,
            _ => match self.holds(a) {
                Holds::No(w) if self.all_hold(ctx) => Outcome::Refuted(refutation(
                    Self::clause_for(ctx, Clause::At),
                    &self.base,
                    format!("{a} is not derivable in {}", self.base.name()),
                    Some(w),
                )),
                _ => Outcome::Unknown(format!("search did not settle {a} under the search budget")),
            },
        }
    }

    fn bot(&self, ctx: &[Atom]) -> Outcome {
        if self.explodes(ctx) {
            return Outcome::Verified { instances: 1, bounded: false };
        }
        if base_preserves_weight(&self.base) && self.all_hold(ctx) {
            return Outcome::Refuted(refutation(
                Self::clause_for(ctx, Clause::Bot),
                &self.base,
                format!("S(0) = 0 is not derivable in {}", self.base.name()),
                Some([1, 0]),
            ));
        }
        Outcome::Unknown("could not settle bot".into())
    }

    fn support_under(&self, ctx: &mut Vec<Atom>, f: &Formula) -> Outcome {
        match f {
            Formula::Atom(a) => self.atom(ctx, a),
            Formula::Bot => self.bot(ctx),
            Formula::Impl(h, g) => match h.as_ref() {
                Formula::Atom(a) => {
                    ctx.push(a.clone());
                    let out = self.support_under(ctx, g);
                    ctx.pop();
                    out
                }
                // An extension supporting bot derives every atom and so
                // supports every formula.
                Formula::Bot => Outcome::Verified { instances: 0, bounded: false },
                _ => match self.support_under(ctx, g) {
                    v @ Outcome::Verified { .. } => v,
                    _ => Outcome::Unknown(format!("antecedent {h} is not atomic")),
                },
            },
            Formula::Forall(x, body) => {
                let mut total = 0;
                let mut unknown = None;
                for t in &self.instances {
                    match self.support_under(ctx, &body.substitute(x, t)) {
                        Outcome::Verified { instances, .. } => total += instances,
                        Outcome::Refuted(mut cx) => {
                            cx.clause = Clause::Forall;
                            cx.instance.get_or_insert_with(|| t.to_string());
                            return Outcome::Refuted(cx);
                        }
                        Outcome::Unknown(reason) => {
                            unknown.get_or_insert(format!("instance {x} := {t}: {reason}"));
                        }
                    }
                }
                match unknown {
                    Some(reason) => Outcome::Unknown(reason),
                    None => Outcome::Verified { instances: total, bounded: true },
                }
            }
        }
    }
}

fn check_arithmetic(f: &Formula, kind: BaseKind) -> Result<(), SupportError> {
    if !f.is_closed() {
        return Err(SupportError::OpenFormula(f.to_string()));
    }
    fn go(f: &Formula, sig: &crate::syntax::Signature) -> bool {
        match f {
            Formula::Bot => true,
            Formula::Atom(a @ Atom::Eq(..)) => sig.admits_atom(a),
            Formula::Atom(Atom::Prop(_)) => false,
            Formula::Impl(a, b) => go(a, sig) && go(b, sig),
            Formula::Forall(_, body) => go(body, sig),
        }
    }
    if !go(f, &kind.signature()) {
        return Err(SupportError::NotArithmetic(f.to_string()));
    }
    Ok(())
}

/// Bounded, three-valued `⊩ f` over a builtin arithmetic base.
pub fn arith_support(kind: BaseKind, f: &Formula, bounds: &ArithBounds) -> Result<SupportVerdict, SupportError> {
    check_arithmetic(f, kind)?;
    let sig = kind.signature();
    let mut instances = closed_terms_upto(&sig, bounds.term_size);
    for n in 0..=bounds.numeral_range {
        let t = Term::numeral(n);
        if !instances.contains(&t) {
            instances.push(t);
        }
    }
    let ctx = Ctx { kind, base: builtin_base(kind), bounds: *bounds, instances };
    Ok(match ctx.support_under(&mut Vec::new(), f) {
        Outcome::Verified { instances, bounded } => SupportVerdict::Verified(Evidence {
            method: if kind.has_congruence() {
                "closed-equation certificates".into()
            } else {
                "bounded derivability search".into()
            },
            extensions_checked: None,
            bound: bounded.then_some(*bounds),
            instances,
        }),
        Outcome::Refuted(cx) => SupportVerdict::Refuted(cx),
        Outcome::Unknown(reason) => SupportVerdict::Unknown { reason },
    })
}

/// A finite list of closed formulas standing in for a theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryPresentation {
    pub name: String,
    pub formulas: Vec<(String, Formula)>,
}

fn one_free_var(phi: &Formula) -> Result<String, SupportError> {
    let vars = phi.free_vars();
    match (vars.len(), vars.into_iter().next()) {
        (1, Some(v)) => Ok(v),
        _ => Err(SupportError::NotEquationSchema(phi.to_string())),
    }
}

impl TheoryPresentation {
    pub fn new(name: impl Into<String>, formulas: Vec<(String, Formula)>) -> Result<Self, SupportError> {
        if let Some((_, f)) = formulas.iter().find(|(_, f)| !f.is_closed()) {
            return Err(SupportError::OpenFormula(f.to_string()));
        }
        Ok(TheoryPresentation { name: name.into(), formulas })
    }

    /// The equality axioms and PA1-PA6, with the substitution and
    /// induction schemas instantiated for each formula of `schemas` (each
    /// with exactly one free variable). Induction is curried:
    /// `phi(0) -> (forall x (phi(x) -> phi(S x)) -> forall x phi(x))`.
    pub fn peano(schemas: &[Formula]) -> Result<Self, SupportError> {
        let sig = crate::syntax::Signature::arithmetic();
        let axiom = |name: &str, text: &str| {
            (name.to_string(), crate::syntax::parse_sentence(text, &sig).expect("well-formed axiom"))
        };
        let mut formulas = vec![
            axiom("eq1", "forall x. x = x"),
            axiom("eq2", "forall x. forall y. x = y -> y = x"),
            axiom("eq3", "forall x. forall y. forall z. x = y -> y = z -> x = z"),
            axiom("PA1", "forall x. ~(S(x) = 0)"),
            axiom("PA2", "forall x. forall y. S(x) = S(y) -> x = y"),
            axiom("PA3", "forall x. x + 0 = x"),
            axiom("PA4", "forall x. forall y. x + S(y) = S(x + y)"),
            axiom("PA5", "forall x. x * 0 = 0"),
            axiom("PA6", "forall x. forall y. x * S(y) = x * y + x"),
        ];
        for phi in schemas {
            let v = one_free_var(phi)?;
            let (a, b) = (fresh_name(phi, "a"), fresh_name(phi, "b"));
            let at = |t: Term| phi.substitute(&v, &t);
            let eq4 = Formula::forall_many(
                &[a.as_str(), b.as_str()],
                Formula::implies(
                    Formula::eq(Term::var(&a), Term::var(&b)),
                    Formula::implies(at(Term::var(&a)), at(Term::var(&b))),
                ),
            );
            formulas.push((format!("eq4({phi})"), eq4));
            let step = Formula::forall(&v, Formula::implies(phi.clone(), at(Term::succ(Term::var(&v)))));
            let pa7 = Formula::implies(at(Term::Zero), Formula::implies(step, Formula::forall(&v, phi.clone())));
            formulas.push((format!("PA7({phi})"), pa7));
        }
        TheoryPresentation::new("PA", formulas)
    }

    /// Support of every member, in order.
    pub fn support(&self, kind: BaseKind, bounds: &ArithBounds) -> Result<Vec<(String, SupportVerdict)>, SupportError> {
        self.formulas.iter().map(|(name, f)| Ok((name.clone(), arith_support(kind, f, bounds)?))).collect()
    }
}

fn fresh_name(phi: &Formula, stem: &str) -> String {
    let taken = phi.free_vars();
    (0..).map(|i| format!("{stem}{i}")).find(|n| !taken.contains(n)).expect("unbounded supply")
}
