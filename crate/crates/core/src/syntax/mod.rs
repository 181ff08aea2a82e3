//! Terms and formulas of arithmetic over `0, S, +, *` and `=`, optionally
//! extended with constants `c1, c2, ...`, plus 0-ary atoms used by the
//! finite toy universes.
//!
//! Negation is surface sugar: `~P` parses to `P -> bot`.

mod enumerate;
mod parse;
mod render;

use std::collections::BTreeSet;
use std::fmt;

pub use enumerate::{closed_terms_of_size, closed_terms_upto, random_closed_term};
pub use parse::{parse_atom, parse_formula, parse_sentence, parse_term, ParseError};
pub use render::PatternDisplay;

/// The function and constant symbols available to terms.
///
/// `0`, `S`, `+`, `*` and `=` are always present. An extended signature
/// adds the constants `c1..=ck`; `c0` is the zero numeral itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    extra_constants: u32,
}

impl Signature {
    /// `<0, S, +, *>`.
    pub const fn arithmetic() -> Self {
        Signature { extra_constants: 0 }
    }

    /// `<0, c1..ck, S, +, *>`.
    pub const fn extended(k: u32) -> Self {
        Signature { extra_constants: k }
    }

    pub fn extra_constants(&self) -> u32 {
        self.extra_constants
    }

    pub fn constant_names(&self) -> Vec<String> {
        std::iter::once("0".to_string())
            .chain((1..=self.extra_constants).map(|i| format!("c{i}")))
            .collect()
    }

    pub fn has_constant(&self, index: u32) -> bool {
        index >= 1 && index <= self.extra_constants
    }

    /// True when every constant in `t` belongs to this signature.
    pub fn admits_term(&self, t: &Term) -> bool {
        t.max_constant().is_none_or(|c| self.has_constant(c))
    }

    pub fn admits_atom(&self, a: &Atom) -> bool {
        match a {
            Atom::Eq(l, r) => self.admits_term(l) && self.admits_term(r),
            Atom::Prop(_) => true,
        }
    }

    /// The smallest signature containing both.
    pub fn join(self, other: Signature) -> Signature {
        Signature::extended(self.extra_constants.max(other.extra_constants))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    /// `c_i` for `i >= 1`.
    Const(u32),
    Succ(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Var(String),
}

impl Term {
    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(l: Term, r: Term) -> Term {
        Term::Add(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(l: Term, r: Term) -> Term {
        Term::Mul(Box::new(l), Box::new(r))
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    /// The numeral `S^n(0)`.
    pub fn numeral(n: u64) -> Term {
        Numeral(n).to_term()
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Zero | Term::Const(_) => true,
            Term::Var(_) => false,
            Term::Succ(t) => t.is_closed(),
            Term::Add(l, r) | Term::Mul(l, r) => l.is_closed() && r.is_closed(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::Const(_) | Term::Var(_) => 1,
            Term::Succ(t) => 1 + t.size(),
            Term::Add(l, r) | Term::Mul(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// `Some(n)` when the term is literally `S^n(0)`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut cur = self;
        loop {
            match cur {
                Term::Zero => return Some(n),
                Term::Succ(t) => {
                    n += 1;
                    cur = t;
                }
                _ => return None,
            }
        }
    }

    pub fn max_constant(&self) -> Option<u32> {
        match self {
            Term::Const(i) => Some(*i),
            Term::Zero | Term::Var(_) => None,
            Term::Succ(t) => t.max_constant(),
            Term::Add(l, r) | Term::Mul(l, r) => l.max_constant().max(r.max_constant()),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::Const(_) => {}
            Term::Succ(t) => t.collect_vars(out),
            Term::Add(l, r) | Term::Mul(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Zero | Term::Const(_) => false,
            Term::Succ(t) => t.contains_var(var),
            Term::Add(l, r) | Term::Mul(l, r) => l.contains_var(var) || r.contains_var(var),
        }
    }

    /// Replace every occurrence of `var` by `t`.
    pub fn subst_var(&self, var: &str, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => t.clone(),
            Term::Var(_) | Term::Zero | Term::Const(_) => self.clone(),
            Term::Succ(u) => Term::succ(u.subst_var(var, t)),
            Term::Add(l, r) => Term::add(l.subst_var(var, t), r.subst_var(var, t)),
            Term::Mul(l, r) => Term::mul(l.subst_var(var, t), r.subst_var(var, t)),
        }
    }

    /// All subterms, the term itself included, in pre-order.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            match t {
                Term::Succ(u) => stack.push(u),
                Term::Add(l, r) | Term::Mul(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
                _ => {}
            }
        }
        out
    }
}

/// A natural number, denoting the term `S^n(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Numeral(pub u64);

impl Numeral {
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn to_term(self) -> Term {
        let mut t = Term::Zero;
        for _ in 0..self.0 {
            t = Term::succ(t);
        }
        t
    }

    pub fn from_term(t: &Term) -> Option<Numeral> {
        t.as_numeral().map(Numeral)
    }
}

impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// Atomic formulas: equations, or 0-ary atoms of a toy universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Eq(Term, Term),
    Prop(String),
}

impl Atom {
    pub fn eq(l: Term, r: Term) -> Atom {
        Atom::Eq(l, r)
    }

    pub fn prop(name: impl Into<String>) -> Atom {
        Atom::Prop(name.into())
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Atom::Eq(l, r) => l.is_closed() && r.is_closed(),
            Atom::Prop(_) => true,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Atom::Eq(l, r) = self {
            l.collect_vars(out);
            r.collect_vars(out);
        }
    }

    pub fn subst_var(&self, var: &str, t: &Term) -> Atom {
        match self {
            Atom::Eq(l, r) => Atom::Eq(l.subst_var(var, t), r.subst_var(var, t)),
            Atom::Prop(_) => self.clone(),
        }
    }

    pub fn sides(&self) -> Option<(&Term, &Term)> {
        match self {
            Atom::Eq(l, r) => Some((l, r)),
            Atom::Prop(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Impl(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Bot,
}

impl Formula {
    pub fn eq(l: Term, r: Term) -> Formula {
        Formula::Atom(Atom::Eq(l, r))
    }

    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Atom(Atom::prop(name))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    /// `~a`, i.e. `a -> bot`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bot)
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    /// Nested binders, outermost first.
    pub fn forall_many(vars: &[&str], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(*v, acc))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                let mut vs = BTreeSet::new();
                a.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Impl(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::Bot => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_free(&self, var: &str) -> bool {
        match self {
            Formula::Atom(Atom::Eq(l, r)) => l.contains_var(var) || r.contains_var(var),
            Formula::Atom(Atom::Prop(_)) | Formula::Bot => false,
            Formula::Impl(a, b) => a.has_free(var) || b.has_free(var),
            Formula::Forall(v, body) => v != var && body.has_free(var),
        }
    }

    /// `self[var := t]` on free occurrences.
    ///
    /// Capture cannot happen for closed `t`. For open `t` use
    /// [`Formula::is_free_for`] first.
    pub fn substitute(&self, var: &str, t: &Term) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.subst_var(var, t)),
            Formula::Impl(a, b) => Formula::implies(a.substitute(var, t), b.substitute(var, t)),
            Formula::Forall(v, _) if v == var => self.clone(),
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.substitute(var, t)),
            Formula::Bot => Formula::Bot,
        }
    }

    /// True when substituting `t` for `var` captures no variable of `t`.
    pub fn is_free_for(&self, var: &str, t: &Term) -> bool {
        let tv = t.vars();
        self.free_for_under(var, &tv, &mut Vec::new())
    }

    fn free_for_under(&self, var: &str, tv: &BTreeSet<String>, bound: &mut Vec<String>) -> bool {
        match self {
            Formula::Atom(_) => {
                !self.has_free(var) || bound.iter().all(|b| !tv.contains(b))
            }
            Formula::Bot => true,
            Formula::Impl(a, b) => {
                a.free_for_under(var, tv, bound) && b.free_for_under(var, tv, bound)
            }
            Formula::Forall(v, _) if v == var => true,
            Formula::Forall(v, body) => {
                bound.push(v.clone());
                let ok = body.free_for_under(var, tv, bound);
                bound.pop();
                ok
            }
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn go(a: &Formula, b: &Formula, env_a: &mut Vec<String>, env_b: &mut Vec<String>) -> bool {
            match (a, b) {
                (Formula::Bot, Formula::Bot) => true,
                (Formula::Atom(Atom::Prop(p)), Formula::Atom(Atom::Prop(q))) => p == q,
                (Formula::Atom(Atom::Eq(l1, r1)), Formula::Atom(Atom::Eq(l2, r2))) => {
                    term_eq(l1, l2, env_a, env_b) && term_eq(r1, r2, env_a, env_b)
                }
                (Formula::Impl(a1, b1), Formula::Impl(a2, b2)) => {
                    go(a1, a2, env_a, env_b) && go(b1, b2, env_a, env_b)
                }
                (Formula::Forall(x, p), Formula::Forall(y, q)) => {
                    env_a.push(x.clone());
                    env_b.push(y.clone());
                    let ok = go(p, q, env_a, env_b);
                    env_a.pop();
                    env_b.pop();
                    ok
                }
                _ => false,
            }
        }
        fn term_eq(s: &Term, t: &Term, env_a: &[String], env_b: &[String]) -> bool {
            match (s, t) {
                (Term::Var(x), Term::Var(y)) => {
                    let ix = env_a.iter().rposition(|v| v == x);
                    let iy = env_b.iter().rposition(|v| v == y);
                    match (ix, iy) {
                        (Some(i), Some(j)) => env_a.len() - i == env_b.len() - j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Term::Zero, Term::Zero) => true,
                (Term::Const(i), Term::Const(j)) => i == j,
                (Term::Succ(a), Term::Succ(b)) => term_eq(a, b, env_a, env_b),
                (Term::Add(a1, b1), Term::Add(a2, b2)) | (Term::Mul(a1, b1), Term::Mul(a2, b2)) => {
                    term_eq(a1, a2, env_a, env_b) && term_eq(b1, b2, env_a, env_b)
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Nesting depth of `->`; atoms and `bot` have depth 0.
    pub fn impl_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::Impl(a, b) => 1 + a.impl_depth().max(b.impl_depth()),
            Formula::Forall(_, body) => body.impl_depth(),
        }
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(Atom::Prop(p)) => {
                out.insert(p.clone());
            }
            Formula::Atom(Atom::Eq(..)) | Formula::Bot => {}
            Formula::Impl(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
            Formula::Forall(_, body) => body.collect_props(out),
        }
    }
}
