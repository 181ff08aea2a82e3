use std::fmt;
use std::str::FromStr;

use super::{Base, Conclusion, RuleSchema};
use crate::syntax::{Atom, Signature, Term};

/// The built-in bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseKind {
    /// Reflexivity, symmetry and transitivity of `=`.
    Eq,
    /// The arithmetic base: `EQ` plus `pa1`..`pa6`.
    A,
    /// `A` plus the congruence schemas `cg1`..`cg5`.
    APlus,
    /// `A_PLUS` over `c1..ck`, plus `|- 0 = ci` for each constant.
    AExt(u32),
}

impl BaseKind {
    pub fn signature(self) -> Signature {
        match self {
            BaseKind::AExt(k) => Signature::extended(k),
            _ => Signature::arithmetic(),
        }
    }

    pub fn has_congruence(self) -> bool {
        matches!(self, BaseKind::APlus | BaseKind::AExt(_))
    }
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseKind::Eq => f.write_str("EQ"),
            BaseKind::A => f.write_str("A"),
            BaseKind::APlus => f.write_str("A_PLUS"),
            BaseKind::AExt(k) => write!(f, "A_EXT({k})"),
        }
    }
}

impl FromStr for BaseKind {
    type Err = String;

    /// Accepts `EQ`, `A`, `A_PLUS`, and `A_EXT` followed by the constant
    /// count as `A_EXT(9)`, `A_EXT:9`, `A_EXT 9` or `A_EXT9`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.to_ascii_uppercase().as_str() {
            "EQ" => return Ok(BaseKind::Eq),
            "A" => return Ok(BaseKind::A),
            "A_PLUS" | "A+" => return Ok(BaseKind::APlus),
            _ => {}
        }
        let upper = s.to_ascii_uppercase();
        if let Some(rest) = upper.strip_prefix("A_EXT") {
            let digits = rest.trim().trim_start_matches([':', '(']).trim_end_matches(')').trim();
            return digits
                .parse::<u32>()
                .map(BaseKind::AExt)
                .map_err(|_| format!("bad constant count in `{s}`"));
        }
        Err(format!("unknown base `{s}` (expected EQ, A, A_PLUS or A_EXT(k))"))
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn eq(l: Term, r: Term) -> Atom {
    Atom::eq(l, r)
}

fn rule(name: &str, premises: Vec<Atom>, conclusion: Atom) -> RuleSchema {
    RuleSchema::new(name, premises, Conclusion::Atom(conclusion))
}

fn equality_schemas() -> Vec<RuleSchema> {
    vec![
        RuleSchema::axiom("eq1", eq(v("x"), v("x"))),
        // From y = x infer x = y.
        rule("eq2", vec![eq(v("y"), v("x"))], eq(v("x"), v("y"))),
        rule("eq3", vec![eq(v("x"), v("y")), eq(v("y"), v("z"))], eq(v("x"), v("z"))),
    ]
}

fn arithmetic_schemas() -> Vec<RuleSchema> {
    let (x, y) = (v("x"), v("y"));
    vec![
        RuleSchema::new("pa1", vec![eq(Term::succ(x.clone()), Term::Zero)], Conclusion::Any),
        rule("pa2", vec![eq(Term::succ(x.clone()), Term::succ(y.clone()))], eq(x.clone(), y.clone())),
        RuleSchema::axiom("pa3", eq(Term::add(x.clone(), Term::Zero), x.clone())),
        RuleSchema::axiom(
            "pa4",
            eq(Term::add(x.clone(), Term::succ(y.clone())), Term::succ(Term::add(x.clone(), y.clone()))),
        ),
        RuleSchema::axiom("pa5", eq(Term::mul(x.clone(), Term::Zero), Term::Zero)),
        RuleSchema::axiom(
            "pa6",
            eq(Term::mul(x.clone(), Term::succ(y.clone())), Term::add(Term::mul(x.clone(), y), x)),
        ),
    ]
}

fn congruence_schemas() -> Vec<RuleSchema> {
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let xy = || eq(v("x"), v("y"));
    vec![
        rule("cg1", vec![xy()], eq(Term::succ(x.clone()), Term::succ(y.clone()))),
        rule("cg2", vec![xy()], eq(Term::add(x.clone(), z.clone()), Term::add(y.clone(), z.clone()))),
        rule("cg3", vec![xy()], eq(Term::add(z.clone(), x.clone()), Term::add(z.clone(), y.clone()))),
        rule("cg4", vec![xy()], eq(Term::mul(x.clone(), z.clone()), Term::mul(y.clone(), z.clone()))),
        rule("cg5", vec![xy()], eq(Term::mul(z.clone(), x), Term::mul(z, y))),
    ]
}

/// Name of the schema `|- 0 = ci`.
pub(crate) fn constant_rule_name(i: u32) -> String {
    format!("zero_c{i}")
}

pub fn builtin_base(which: BaseKind) -> Base {
    let mut schemas = equality_schemas();
    if which != BaseKind::Eq {
        schemas.extend(arithmetic_schemas());
    }
    if which.has_congruence() {
        schemas.extend(congruence_schemas());
    }
    if let BaseKind::AExt(k) = which {
        schemas.extend((1..=k).map(|i| RuleSchema::axiom(constant_rule_name(i), eq(Term::Zero, Term::Const(i)))));
    }
    Base::new(which.to_string(), which.signature(), schemas).expect("built-in schema names are unique")
}
