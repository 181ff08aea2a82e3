use std::fmt;

use super::{Atom, Formula, Term};

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Level {
    Sum,
    Product,
    Factor,
}

fn write_term(t: &Term, level: Level, meta: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Zero => f.write_str("0"),
        Term::Const(i) => write!(f, "c{i}"),
        Term::Var(v) if meta => write!(f, "?{v}"),
        Term::Var(v) => f.write_str(v),
        Term::Succ(u) => {
            f.write_str("S(")?;
            write_term(u, Level::Sum, meta, f)?;
            f.write_str(")")
        }
        Term::Add(l, r) => {
            let parens = level > Level::Sum;
            if parens {
                f.write_str("(")?;
            }
            write_term(l, Level::Sum, meta, f)?;
            f.write_str(" + ")?;
            write_term(r, Level::Product, meta, f)?;
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        Term::Mul(l, r) => {
            let parens = level > Level::Product;
            if parens {
                f.write_str("(")?;
            }
            write_term(l, Level::Product, meta, f)?;
            f.write_str(" * ")?;
            write_term(r, Level::Factor, meta, f)?;
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

fn write_atom(a: &Atom, meta: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match a {
        Atom::Eq(l, r) => {
            write_term(l, Level::Sum, meta, f)?;
            f.write_str(" = ")?;
            write_term(r, Level::Sum, meta, f)
        }
        Atom::Prop(p) => f.write_str(p),
    }
}

fn write_formula(phi: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match phi {
        Formula::Bot => f.write_str("bot"),
        Formula::Atom(a) => write_atom(a, false, f),
        Formula::Forall(v, body) => {
            write!(f, "forall {v}. ")?;
            write_formula(body, f)
        }
        Formula::Impl(a, b) if **b == Formula::Bot => {
            f.write_str("~")?;
            write_unary_operand(a, f)
        }
        Formula::Impl(a, b) => {
            write_unary_operand(a, f)?;
            f.write_str(" -> ")?;
            write_formula(b, f)
        }
    }
}

/// Operands of `~` and left operands of `->` need parentheses when they
/// are implications or quantified.
fn write_unary_operand(phi: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parens = match phi {
        Formula::Forall(..) => true,
        Formula::Impl(_, b) => **b != Formula::Bot,
        _ => false,
    };
    if parens {
        f.write_str("(")?;
        write_formula(phi, f)?;
        f.write_str(")")
    } else {
        write_formula(phi, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, Level::Sum, false, f)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(self, false, f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

/// Renders schema patterns with metavariables written `?x`.
pub struct PatternDisplay<'a>(pub &'a Atom);

impl fmt::Display for PatternDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(self.0, true, f)
    }
}
