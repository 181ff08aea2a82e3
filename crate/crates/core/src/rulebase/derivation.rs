use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Base, RuleError, Subst};
use crate::syntax::{parse_atom, parse_term, Atom, ParseError, Signature};

/// A finite tree of closed atoms. Interior nodes name the schema and the
/// substitution that produce the node from its children; leaves are
/// either zero-premise instances or open premises.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub atom: Atom,
    pub step: Step,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Open,
    Rule { rule: String, subst: Subst, children: Vec<Derivation> },
}

impl Derivation {
    pub fn open(atom: Atom) -> Self {
        Derivation { atom, step: Step::Open }
    }

    pub fn rule(atom: Atom, rule: impl Into<String>, subst: Subst, children: Vec<Derivation>) -> Self {
        Derivation { atom, step: Step::Rule { rule: rule.into(), subst, children } }
    }

    pub fn children(&self) -> &[Derivation] {
        match &self.step {
            Step::Open => &[],
            Step::Rule { children, .. } => children,
        }
    }

    pub fn rule_name(&self) -> Option<&str> {
        match &self.step {
            Step::Open => None,
            Step::Rule { rule, .. } => Some(rule),
        }
    }

    /// All nodes, pre-order.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.children().iter().rev());
        }
        out
    }

    pub fn size(&self) -> usize {
        self.nodes().len()
    }

    pub fn height(&self) -> usize {
        1 + self.children().iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn open_leaves(&self) -> Vec<&Atom> {
        self.nodes()
            .into_iter()
            .filter(|d| d.step == Step::Open)
            .map(|d| &d.atom)
            .collect()
    }

    pub fn uses_rule(&self, name: &str) -> bool {
        self.nodes().iter().any(|d| d.rule_name() == Some(name))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DerivationJson::from(self)).expect("derivation serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&DerivationJson::from(self)).expect("derivation serializes")
    }

    pub fn from_json_value(value: serde_json::Value, sig: &Signature) -> Result<Self, CertificateError> {
        let raw: DerivationJson = serde_json::from_value(value).map_err(|e| CertificateError::Json(e.to_string()))?;
        raw.into_derivation(sig)
    }

    pub fn from_json_str(text: &str, sig: &Signature) -> Result<Self, CertificateError> {
        let raw: DerivationJson = serde_json::from_str(text).map_err(|e| CertificateError::Json(e.to_string()))?;
        raw.into_derivation(sig)
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("malformed certificate JSON: {0}")]
    Json(String),
    #[error("certificate contains an unparsable atom or term: {0}")]
    Parse(#[from] ParseError),
}

/// Wire format: `{atom, rule, subst, children}`; `rule` is null on open
/// leaves.
#[derive(Serialize, Deserialize)]
struct DerivationJson {
    atom: String,
    rule: Option<String>,
    #[serde(default)]
    subst: BTreeMap<String, String>,
    #[serde(default)]
    children: Vec<DerivationJson>,
}

impl From<&Derivation> for DerivationJson {
    fn from(d: &Derivation) -> Self {
        match &d.step {
            Step::Open => DerivationJson {
                atom: d.atom.to_string(),
                rule: None,
                subst: BTreeMap::new(),
                children: Vec::new(),
            },
            Step::Rule { rule, subst, children } => DerivationJson {
                atom: d.atom.to_string(),
                rule: Some(rule.clone()),
                subst: subst.iter().map(|(k, t)| (k.clone(), t.to_string())).collect(),
                children: children.iter().map(DerivationJson::from).collect(),
            },
        }
    }
}

impl DerivationJson {
    fn into_derivation(self, sig: &Signature) -> Result<Derivation, CertificateError> {
        let atom = parse_atom(&self.atom, sig)?;
        match self.rule {
            None => Ok(Derivation::open(atom)),
            Some(rule) => {
                let subst = self
                    .subst
                    .into_iter()
                    .map(|(k, t)| parse_term(&t, sig).map(|t| (k, t)))
                    .collect::<Result<Subst, _>>()?;
                let children = self
                    .children
                    .into_iter()
                    .map(|c| c.into_derivation(sig))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Derivation::rule(atom, rule, subst, children))
            }
        }
    }
}

/// The first node that fails to check, located by child indices from the
/// root.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at node {path:?} ({}): {reason}", .schema.as_deref().unwrap_or("open leaf"))]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub schema: Option<String>,
    pub reason: String,
}

/// Re-verify every node of `d` against `base`. Open leaves must lie in
/// `open_allowed`.
pub fn check_derivation(base: &Base, d: &Derivation, open_allowed: &HashSet<Atom>) -> Result<(), CheckFailure> {
    let mut path = Vec::new();
    check_node(base, d, open_allowed, &mut path)
}

fn check_node(base: &Base, d: &Derivation, open_allowed: &HashSet<Atom>, path: &mut Vec<usize>) -> Result<(), CheckFailure> {
    let fail = |schema: Option<&str>, reason: String, path: &[usize]| CheckFailure {
        path: path.to_vec(),
        schema: schema.map(str::to_string),
        reason,
    };
    if !d.atom.is_closed() || !base.signature().admits_atom(&d.atom) {
        return Err(fail(d.rule_name(), format!("`{}` is not a closed atom over the base signature", d.atom), path));
    }
    let (rule, subst, children) = match &d.step {
        Step::Open => {
            return if open_allowed.contains(&d.atom) {
                Ok(())
            } else {
                Err(fail(None, format!("open premise `{}` is not allowed", d.atom), path))
            };
        }
        Step::Rule { rule, subst, children } => (rule, subst, children),
    };
    let schema = base
        .schema(rule)
        .ok_or_else(|| fail(Some(rule), format!("no schema `{rule}` in base {}", base.name()), path))?;
    let metavars = schema.metavars();
    if let Some(extra) = subst.keys().find(|k| !metavars.contains(*k)) {
        return Err(fail(Some(rule), format!("binding for `{extra}`, which the schema does not use"), path));
    }
    if let Some((k, t)) = subst.iter().find(|(_, t)| !base.signature().admits_term(t)) {
        return Err(fail(Some(rule), format!("binding {k} := {t} is outside the signature"), path));
    }
    let choice = schema.concludes_any().then_some(&d.atom);
    let (premises, conclusion) = schema
        .instantiate(subst, choice)
        .map_err(|e: RuleError| fail(Some(rule), e.to_string(), path))?;
    if conclusion != d.atom {
        return Err(fail(Some(rule), format!("instance concludes `{conclusion}`, node says `{}`", d.atom), path));
    }
    if premises.len() != children.len() {
        return Err(fail(
            Some(rule),
            format!("instance has {} premises, node has {} children", premises.len(), children.len()),
            path,
        ));
    }
    for (i, (p, c)) in premises.iter().zip(children).enumerate() {
        if *p != c.atom {
            return Err(fail(Some(rule), format!("premise {i} should be `{p}`, child is `{}`", c.atom), path));
        }
    }
    for (i, c) in children.iter().enumerate() {
        path.push(i);
        check_node(base, c, open_allowed, path)?;
        path.pop();
    }
    Ok(())
}

impl fmt::Display for Derivation {
    /// Indented tree, one node per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(d: &Derivation, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let indent = "  ".repeat(depth);
            match &d.step {
                Step::Open => writeln!(f, "{indent}{}  [open]", d.atom),
                Step::Rule { rule, subst, children } => {
                    let binds: Vec<String> = subst.iter().map(|(k, t)| format!("{k} := {t}")).collect();
                    if binds.is_empty() {
                        writeln!(f, "{indent}{}  [{rule}]", d.atom)?;
                    } else {
                        writeln!(f, "{indent}{}  [{rule}; {}]", d.atom, binds.join(", "))?;
                    }
                    children.iter().try_for_each(|c| go(c, depth + 1, f))
                }
            }
        }
        go(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulebase::{builtin_base, BaseKind};
    use crate::syntax::Term;

    fn zz() -> Atom {
        Atom::eq(Term::add(Term::Zero, Term::Zero), Term::Zero)
    }

    fn pa3_zero() -> Derivation {
        let subst: Subst = [("x".to_string(), Term::Zero)].into();
        Derivation::rule(zz(), "pa3", subst, vec![])
    }

    #[test]
    fn single_node_certificate() {
        let a = builtin_base(BaseKind::A);
        assert!(check_derivation(&a, &pa3_zero(), &HashSet::new()).is_ok());
    }

    #[test]
    fn rule_membership_failure() {
        let eqb = builtin_base(BaseKind::Eq);
        let err = check_derivation(&eqb, &pa3_zero(), &HashSet::new()).unwrap_err();
        assert_eq!(err.path, Vec::<usize>::new());
        assert_eq!(err.schema.as_deref(), Some("pa3"));
    }

    #[test]
    fn symmetry_over_open_leaf() {
        let eqb = builtin_base(BaseKind::Eq);
        let one = Term::numeral(1);
        let leaf = Atom::eq(Term::Zero, one.clone());
        let subst: Subst = [("x".to_string(), one.clone()), ("y".to_string(), Term::Zero)].into();
        let d = Derivation::rule(Atom::eq(one, Term::Zero), "eq2", subst, vec![Derivation::open(leaf.clone())]);
        assert!(check_derivation(&eqb, &d, &[leaf].into()).is_ok());
        let err = check_derivation(&eqb, &d, &HashSet::new()).unwrap_err();
        assert_eq!(err.path, vec![0]);
    }

    #[test]
    fn wrong_conclusion_is_reported() {
        let a = builtin_base(BaseKind::A);
        let mut d = pa3_zero();
        d.atom = Atom::eq(Term::Zero, Term::Zero);
        assert!(check_derivation(&a, &d, &HashSet::new()).is_err());
    }

    #[test]
    fn stray_binding_is_rejected() {
        let a = builtin_base(BaseKind::A);
        let mut d = pa3_zero();
        if let Step::Rule { subst, .. } = &mut d.step {
            subst.insert("q".into(), Term::Zero);
        }
        assert!(check_derivation(&a, &d, &HashSet::new()).is_err());
    }

    #[test]
    fn json_wire_format() {
        let d = pa3_zero();
        let v = d.to_json();
        assert_eq!(v["atom"], "0 + 0 = 0");
        assert_eq!(v["rule"], "pa3");
        assert_eq!(v["subst"]["x"], "0");
        assert_eq!(v["children"], serde_json::json!([]));
        let back = Derivation::from_json_value(v, &Signature::arithmetic()).unwrap();
        assert_eq!(back, d);
        let open = Derivation::open(zz()).to_json();
        assert!(open["rule"].is_null());
    }
}
