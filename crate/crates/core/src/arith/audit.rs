//! Per-schema weight audit.
//!
//! A schema preserves weight equality when every closed instance whose
//! premises are weight-balanced has a weight-balanced conclusion. The
//! audit works symbolically: the weight of a pattern is a polynomial in
//! its metavariables with integer coefficients, and a schema passes when
//! the conclusion's weight difference lies in the ideal generated by the
//! premises' differences in a form the audit can exhibit.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::weight;
use crate::rulebase::{Base, Conclusion, Derivation, RuleSchema};
use crate::syntax::{Atom, Term};

type Monomial = Vec<(String, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Poly(BTreeMap<Monomial, i64>);

impl Poly {
    fn constant(c: i64) -> Poly {
        let mut p = Poly::default();
        p.add_term(Vec::new(), c);
        p
    }

    fn var(name: &str) -> Poly {
        let mut p = Poly::default();
        p.add_term(vec![(name.to_string(), 1)], 1);
        p
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        let entry = self.0.entry(m).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.0.retain(|_, v| *v != 0);
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn plus(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), *c);
        }
        out
    }

    fn scaled(&self, k: i64) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.0 {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    fn minus(&self, other: &Poly) -> Poly {
        self.plus(&other.scaled(-1))
    }

    fn times(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        out
    }

    /// Leading term under graded lexicographic order.
    fn leading(&self) -> Option<(&Monomial, i64)> {
        self.0.iter().max_by(|(a, _), (b, _)| degree(a).cmp(&degree(b)).then_with(|| b.cmp(a))).map(|(m, c)| (m, *c))
    }

    /// Exact quotient by `divisor`, if the division algorithm finishes
    /// with no remainder.
    fn divides_into(divisor: &Poly, dividend: &Poly) -> bool {
        let Some((lm, lc)) = divisor.leading() else { return false };
        let mut rem = dividend.clone();
        for _ in 0..256 {
            let Some((rm, rc)) = rem.leading() else { return true };
            let Some(qm) = mono_div(rm, lm) else { return false };
            if rc % lc != 0 {
                return false;
            }
            let mut q = Poly::default();
            q.add_term(qm, rc / lc);
            rem = rem.minus(&q.times(divisor));
        }
        false
    }

    /// Never zero over the naturals: nonzero constant term and every
    /// coefficient of the same sign.
    fn never_zero(&self) -> bool {
        let constant = self.0.get(&Vec::new()).copied().unwrap_or(0);
        constant != 0 && self.0.values().all(|c| c.signum() == constant.signum())
    }
}

fn degree(m: &Monomial) -> u32 {
    m.iter().map(|(_, e)| e).sum()
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut map: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (v, e) in b {
        *map.entry(v.clone()).or_insert(0) += e;
    }
    map.into_iter().collect()
}

fn mono_div(a: &Monomial, b: &Monomial) -> Option<Monomial> {
    let mut map: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (v, e) in b {
        let slot = map.get_mut(v)?;
        if *slot < *e {
            return None;
        }
        *slot -= e;
    }
    Some(map.into_iter().filter(|(_, e)| *e > 0).collect())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let abs = c.abs();
            let vars: Vec<String> =
                m.iter().map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") }).collect();
            match (abs, vars.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{abs}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

fn term_poly(t: &Term) -> Poly {
    match t {
        Term::Zero | Term::Const(_) => Poly::default(),
        Term::Var(v) => Poly::var(v),
        Term::Succ(u) => term_poly(u).plus(&Poly::constant(1)),
        Term::Add(l, r) => term_poly(l).plus(&term_poly(r)),
        Term::Mul(l, r) => term_poly(l).times(&term_poly(r)),
    }
}

fn atom_diff(a: &Atom) -> Option<Poly> {
    a.sides().map(|(l, r)| term_poly(l).minus(&term_poly(r)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SchemaAudit {
    /// Balanced premises force a balanced conclusion.
    Preserves { method: String },
    /// Some premise can never be balanced, so no balanced instance fires.
    Vacuous { premise: String },
    /// The audit could not show preservation.
    Fails { difference: String },
    /// The schema mentions non-equational atoms; weights do not apply.
    NotApplicable,
}

impl SchemaAudit {
    pub fn is_ok(&self) -> bool {
        matches!(self, SchemaAudit::Preserves { .. } | SchemaAudit::Vacuous { .. })
    }
}

pub fn audit_schema(schema: &RuleSchema) -> SchemaAudit {
    let mut diffs = Vec::new();
    for p in schema.premises() {
        match atom_diff(p) {
            Some(d) => diffs.push(d),
            None => return SchemaAudit::NotApplicable,
        }
    }
    if let Some(i) = diffs.iter().position(Poly::never_zero) {
        return SchemaAudit::Vacuous { premise: schema.premises()[i].to_string() };
    }
    let conclusion = match schema.conclusion() {
        Conclusion::Atom(a) => match atom_diff(a) {
            Some(d) => d,
            None => return SchemaAudit::NotApplicable,
        },
        Conclusion::Any => return SchemaAudit::Fails { difference: "unconstrained conclusion".into() },
    };
    if conclusion.is_zero() {
        return SchemaAudit::Preserves { method: "conclusion balanced identically".into() };
    }
    // Try every remainder conclusion - sum(c_i * p_i) with c_i in {-1, 0, 1}.
    let k = diffs.len().min(6);
    let mut coeffs = vec![-1i64; k];
    let total = 3usize.pow(k as u32);
    for _ in 0..total {
        let mut rem = conclusion.clone();
        for (c, d) in coeffs.iter().zip(&diffs) {
            rem = rem.minus(&d.scaled(*c));
        }
        if rem.is_zero() {
            return SchemaAudit::Preserves { method: "signed sum of premise differences".into() };
        }
        if diffs.iter().any(|d| Poly::divides_into(d, &rem)) {
            return SchemaAudit::Preserves { method: "multiple of a premise difference".into() };
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c <= 1 {
                break;
            }
            *c = -1;
        }
    }
    SchemaAudit::Fails { difference: conclusion.to_string() }
}

pub fn audit_base(base: &Base) -> Vec<(String, SchemaAudit)> {
    base.schemas().iter().map(|s| (s.name().to_string(), audit_schema(s))).collect()
}

/// True when every schema of `base` passes the weight audit.
pub fn base_preserves_weight(base: &Base) -> bool {
    base.schemas().iter().all(|s| audit_schema(s).is_ok())
}

/// Weight witness that `goal` is not derivable from `premises`: the base
/// preserves weight equality, every premise is balanced and the goal is
/// not. Returns the goal's two side weights.
pub(crate) fn weight_refutes(base: &Base, premises: &[Atom], goal: &Atom) -> Option<(u64, u64)> {
    let (l, r) = goal.sides()?;
    let (wl, wr) = (weight(l).ok()?, weight(r).ok()?);
    if wl == wr {
        return None;
    }
    for p in premises {
        let (pl, pr) = p.sides()?;
        if weight(pl).ok()? != weight(pr).ok()? {
            return None;
        }
    }
    base_preserves_weight(base).then_some((wl.0, wr.0))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("weight invariant broken at `{atom}`: {reason}")]
pub struct InvariantViolation {
    pub atom: String,
    pub reason: String,
}

/// Every node of a closed derivation is a weight-balanced equation.
pub fn check_weight_invariant(d: &Derivation) -> Result<(), InvariantViolation> {
    for node in d.nodes() {
        let fail = |reason: String| InvariantViolation { atom: node.atom.to_string(), reason };
        if node.rule_name().is_none() {
            return Err(fail("open leaf".into()));
        }
        let (l, r) = node.atom.sides().ok_or_else(|| fail("not an equation".into()))?;
        let wl = weight(l).map_err(|e| fail(e.to_string()))?;
        let wr = weight(r).map_err(|e| fail(e.to_string()))?;
        if wl != wr {
            return Err(fail(format!("weights {wl} and {wr}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulebase::{builtin_base, parse_rule_file, BaseKind};

    #[test]
    fn builtin_bases_pass_the_audit() {
        for kind in [BaseKind::Eq, BaseKind::A, BaseKind::APlus, BaseKind::AExt(3)] {
            for (name, audit) in audit_base(&builtin_base(kind)) {
                assert!(audit.is_ok(), "{kind} {name}: {audit:?}");
            }
        }
    }

    #[test]
    fn explosion_schema_is_vacuous() {
        let base = builtin_base(BaseKind::A);
        assert!(matches!(audit_schema(base.schema("pa1").unwrap()), SchemaAudit::Vacuous { .. }));
    }

    #[test]
    fn unsound_schemas_fail() {
        let base = parse_rule_file("bad: |- S(?x) = ?x\nbad2: ?x = ?y |- ?x + ?x = ?y\nany: ?x = ?y |- ANY\n", "bad")
            .unwrap();
        for (_, audit) in audit_base(&base) {
            assert!(matches!(audit, SchemaAudit::Fails { .. }), "{audit:?}");
        }
        assert!(!base_preserves_weight(&base));
    }

    #[test]
    fn prop_schemas_are_not_applicable() {
        let base = parse_rule_file("r: p |- q\n", "toy").unwrap();
        assert_eq!(audit_schema(&base.schemas()[0]), SchemaAudit::NotApplicable);
        assert!(!base_preserves_weight(&base));
    }

    #[test]
    fn polynomial_division() {
        let x = Poly::var("x");
        let y = Poly::var("y");
        let z = Poly::var("z");
        let d = x.minus(&y);
        assert!(Poly::divides_into(&d, &d.times(&z)));
        assert!(Poly::divides_into(&d, &d.times(&d)));
        assert!(!Poly::divides_into(&d, &x.times(&z)));
        assert_eq!(d.times(&z).to_string(), "x*z - y*z");
    }
}
