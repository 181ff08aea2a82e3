use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::RuleError;
use crate::syntax::{Atom, PatternDisplay, Signature, Term};

/// Metavariable bindings.
pub type Subst = BTreeMap<String, Term>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Conclusion {
    Atom(Atom),
    /// Every closed atom.
    Any,
}

/// An inference figure over atom patterns. Term variables in the patterns
/// are metavariables ranging over closed terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleSchema {
    name: String,
    premises: Vec<Atom>,
    conclusion: Conclusion,
}

impl RuleSchema {
    pub fn new(name: impl Into<String>, premises: Vec<Atom>, conclusion: Conclusion) -> Self {
        RuleSchema { name: name.into(), premises, conclusion }
    }

    pub fn axiom(name: impl Into<String>, conclusion: Atom) -> Self {
        Self::new(name, Vec::new(), Conclusion::Atom(conclusion))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn premises(&self) -> &[Atom] {
        &self.premises
    }

    pub fn conclusion(&self) -> &Conclusion {
        &self.conclusion
    }

    pub fn concludes_any(&self) -> bool {
        self.conclusion == Conclusion::Any
    }

    pub fn metavars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for p in &self.premises {
            p.collect_vars(&mut out);
        }
        if let Conclusion::Atom(c) = &self.conclusion {
            c.collect_vars(&mut out);
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.metavars().is_empty()
    }

    /// The closed rule instance under `subst`.
    ///
    /// `choice` supplies the conclusion of an ANY schema and must be absent
    /// otherwise.
    pub fn instantiate(&self, subst: &Subst, choice: Option<&Atom>) -> Result<(Vec<Atom>, Atom), RuleError> {
        for var in self.metavars() {
            match subst.get(&var) {
                None => return Err(RuleError::MissingBinding { schema: self.name.clone(), var }),
                Some(t) if !t.is_closed() => {
                    return Err(RuleError::OpenBinding { schema: self.name.clone(), var });
                }
                Some(_) => {}
            }
        }
        let premises = self.premises.iter().map(|p| apply(p, subst)).collect();
        let conclusion = match (&self.conclusion, choice) {
            (Conclusion::Atom(c), None) => apply(c, subst),
            (Conclusion::Atom(_), Some(_)) => return Err(RuleError::UnexpectedChoice(self.name.clone())),
            (Conclusion::Any, Some(a)) => a.clone(),
            (Conclusion::Any, None) => return Err(RuleError::MissingChoice(self.name.clone())),
        };
        Ok((premises, conclusion))
    }
}

pub(crate) fn apply_term(t: &Term, subst: &Subst) -> Term {
    match t {
        Term::Var(v) => subst.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Zero | Term::Const(_) => t.clone(),
        Term::Succ(u) => Term::succ(apply_term(u, subst)),
        Term::Add(l, r) => Term::add(apply_term(l, subst), apply_term(r, subst)),
        Term::Mul(l, r) => Term::mul(apply_term(l, subst), apply_term(r, subst)),
    }
}

pub(crate) fn apply(a: &Atom, subst: &Subst) -> Atom {
    match a {
        Atom::Eq(l, r) => Atom::Eq(apply_term(l, subst), apply_term(r, subst)),
        Atom::Prop(_) => a.clone(),
    }
}

/// One-way matching of a pattern against a closed term, extending `subst`.
/// On failure `subst` may hold partial bindings.
pub fn match_term(pattern: &Term, t: &Term, subst: &mut Subst) -> bool {
    match (pattern, t) {
        (Term::Var(v), _) => match subst.get(v) {
            Some(bound) => bound == t,
            None => {
                subst.insert(v.clone(), t.clone());
                true
            }
        },
        (Term::Zero, Term::Zero) => true,
        (Term::Const(i), Term::Const(j)) => i == j,
        (Term::Succ(p), Term::Succ(u)) => match_term(p, u, subst),
        (Term::Add(p1, p2), Term::Add(u1, u2)) | (Term::Mul(p1, p2), Term::Mul(u1, u2)) => {
            match_term(p1, u1, subst) && match_term(p2, u2, subst)
        }
        _ => false,
    }
}

pub fn match_atom(pattern: &Atom, a: &Atom, subst: &mut Subst) -> bool {
    match (pattern, a) {
        (Atom::Eq(pl, pr), Atom::Eq(l, r)) => match_term(pl, l, subst) && match_term(pr, r, subst),
        (Atom::Prop(p), Atom::Prop(q)) => p == q,
        _ => false,
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.name)?;
        for (i, p) in self.premises.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{}", PatternDisplay(p))?;
        }
        f.write_str(" |- ")?;
        match &self.conclusion {
            Conclusion::Atom(c) => write!(f, "{}", PatternDisplay(c)),
            Conclusion::Any => f.write_str("ANY"),
        }
    }
}

/// A named finite set of schemas over a signature.
#[derive(Clone, Debug)]
pub struct Base {
    name: String,
    signature: Signature,
    schemas: Vec<RuleSchema>,
    index: HashMap<String, usize>,
}

impl PartialEq for Base {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.signature == other.signature && self.schemas == other.schemas
    }
}

impl Base {
    pub fn new(name: impl Into<String>, signature: Signature, schemas: Vec<RuleSchema>) -> Result<Self, RuleError> {
        let mut index = HashMap::with_capacity(schemas.len());
        for (i, s) in schemas.iter().enumerate() {
            if index.insert(s.name.clone(), i).is_some() {
                return Err(RuleError::DuplicateSchema(s.name.clone()));
            }
        }
        Ok(Base { name: name.into(), signature, schemas, index })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn schemas(&self) -> &[RuleSchema] {
        &self.schemas
    }

    pub fn schema(&self, name: &str) -> Option<&RuleSchema> {
        self.index.get(name).map(|&i| &self.schemas[i])
    }

    pub fn len(&self) -> usize {
        self.schemas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemas.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.schemas.iter().all(RuleSchema::is_ground)
    }

    /// A new base with `extra` schemas appended.
    pub fn extended(&self, name: impl Into<String>, signature: Signature, extra: Vec<RuleSchema>) -> Result<Base, RuleError> {
        let mut schemas = self.schemas.clone();
        schemas.extend(extra);
        Base::new(name, self.signature.join(signature), schemas)
    }

    /// Every schema of `other` is present here under the same name.
    pub fn includes(&self, other: &Base) -> bool {
        other.schemas.iter().all(|s| self.schema(&s.name) == Some(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }

    #[test]
    fn instantiate_requires_bindings() {
        let s = RuleSchema::axiom("refl", Atom::eq(x(), x()));
        assert!(matches!(s.instantiate(&Subst::new(), None), Err(RuleError::MissingBinding { .. })));
        let mut sub = Subst::new();
        sub.insert("x".into(), Term::var("y"));
        assert!(matches!(s.instantiate(&sub, None), Err(RuleError::OpenBinding { .. })));
        sub.insert("x".into(), Term::Zero);
        assert!(matches!(s.instantiate(&sub, Some(&Atom::prop("p"))), Err(RuleError::UnexpectedChoice(_))));
        let (ps, c) = s.instantiate(&sub, None).unwrap();
        assert!(ps.is_empty());
        assert_eq!(c, Atom::eq(Term::Zero, Term::Zero));
    }

    #[test]
    fn any_requires_choice() {
        let s = RuleSchema::new("boom", vec![Atom::eq(Term::succ(x()), Term::Zero)], Conclusion::Any);
        let mut sub = Subst::new();
        sub.insert("x".into(), Term::Zero);
        assert!(matches!(s.instantiate(&sub, None), Err(RuleError::MissingChoice(_))));
    }

    #[test]
    fn matching_is_consistent() {
        let pat = Term::add(x(), x());
        let mut sub = Subst::new();
        assert!(match_term(&pat, &Term::add(Term::Zero, Term::Zero), &mut sub));
        let mut sub = Subst::new();
        assert!(!match_term(&pat, &Term::add(Term::Zero, Term::numeral(1)), &mut sub));
    }

    #[test]
    fn base_rejects_duplicate_names() {
        let s = RuleSchema::axiom("r", Atom::prop("p"));
        assert_eq!(
            Base::new("b", Signature::arithmetic(), vec![s.clone(), s]).unwrap_err(),
            RuleError::DuplicateSchema("r".into())
        );
    }

    #[test]
    fn display_uses_rule_file_syntax() {
        let s = RuleSchema::new(
            "eq3",
            vec![Atom::eq(x(), Term::var("y")), Atom::eq(Term::var("y"), Term::var("z"))],
            Conclusion::Atom(Atom::eq(x(), Term::var("z"))),
        );
        assert_eq!(s.to_string(), "eq3: ?x = ?y, ?y = ?z |- ?x = ?z");
    }
}
