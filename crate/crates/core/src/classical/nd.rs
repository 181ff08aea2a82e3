//! Natural deduction for `->`, `forall` and `bot`, classical by reductio.
//!
//! Proof trees are JSON objects:
//!
//! ```json
//! {"rule": "impl_intro", "formula": "p -> p", "label": "u",
//!  "children": [{"rule": "assume", "formula": "p", "label": "u"}]}
//! ```
//!
//! | rule          | children            | extra field                       |
//! |---------------|---------------------|-----------------------------------|
//! | `assume`      | none                | `label` (optional)                |
//! | `impl_intro`  | proof of consequent | `label` of discharged assumptions |
//! | `impl_elim`   | major `a -> b`, minor `a` |                             |
//! | `forall_intro`| proof of `phi[x := a]` | `term`: the eigenvariable `a`  |
//! | `forall_elim` | proof of `forall x phi` | `term`: the instance `t`      |
//! | `bot_elim`    | proof of `bot`      |                                   |
//! | `raa`         | proof of `bot`      | `label` of discharged `~phi`      |

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse_formula, parse_term, Formula, Signature, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NdRule {
    Assume,
    ImplIntro,
    ImplElim,
    ForallIntro,
    ForallElim,
    BotElim,
    Raa,
}

impl NdRule {
    fn arity(self) -> usize {
        match self {
            NdRule::Assume => 0,
            NdRule::ImplElim => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for NdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            NdRule::Assume => "assume",
            NdRule::ImplIntro => "impl_intro",
            NdRule::ImplElim => "impl_elim",
            NdRule::ForallIntro => "forall_intro",
            NdRule::ForallElim => "forall_elim",
            NdRule::BotElim => "bot_elim",
            NdRule::Raa => "raa",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdProof {
    pub rule: NdRule,
    pub formula: Formula,
    pub children: Vec<NdProof>,
    pub label: Option<String>,
    pub term: Option<Term>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProof {
    rule: NdRule,
    formula: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<RawProof>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    term: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NdFormatError {
    #[error("malformed proof JSON: {0}")]
    Json(String),
    #[error("bad formula `{text}`: {msg}")]
    Formula { text: String, msg: String },
    #[error("bad term `{text}`: {msg}")]
    Term { text: String, msg: String },
}

fn sig() -> Signature {
    Signature::extended(u32::MAX)
}

impl RawProof {
    fn cook(self) -> Result<NdProof, NdFormatError> {
        let formula = parse_formula(&self.formula, &sig())
            .map_err(|e| NdFormatError::Formula { text: self.formula.clone(), msg: e.to_string() })?;
        let term = match self.term {
            Some(text) => Some(
                parse_term(&text, &sig()).map_err(|e| NdFormatError::Term { text: text.clone(), msg: e.to_string() })?,
            ),
            None => None,
        };
        let children = self.children.into_iter().map(RawProof::cook).collect::<Result<_, _>>()?;
        Ok(NdProof { rule: self.rule, formula, children, label: self.label, term })
    }

    fn raw(p: &NdProof) -> RawProof {
        RawProof {
            rule: p.rule,
            formula: p.formula.to_string(),
            children: p.children.iter().map(RawProof::raw).collect(),
            label: p.label.clone(),
            term: p.term.as_ref().map(Term::to_string),
        }
    }
}

impl NdProof {
    pub fn from_json_value(value: serde_json::Value) -> Result<NdProof, NdFormatError> {
        let raw: RawProof = serde_json::from_value(value).map_err(|e| NdFormatError::Json(e.to_string()))?;
        raw.cook()
    }

    pub fn from_json_str(text: &str) -> Result<NdProof, NdFormatError> {
        let raw: RawProof = serde_json::from_str(text).map_err(|e| NdFormatError::Json(e.to_string()))?;
        raw.cook()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RawProof::raw(self)).expect("proof trees serialize")
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(NdProof::size).sum::<usize>()
    }

    /// Every node in pre-order, with its path of child indices.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &NdProof)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((path, node)) = stack.pop() {
            for (i, c) in node.children.iter().enumerate().rev() {
                let mut p = path.clone();
                p.push(i);
                stack.push((p, c));
            }
            out.push((path, node));
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{rule} at {path:?}: {msg}")]
pub struct NdError {
    pub path: Vec<usize>,
    pub rule: NdRule,
    pub msg: String,
}

/// An open assumption of a checked proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenAssumption {
    pub formula: Formula,
    pub label: Option<String>,
}

fn negation_of(f: &Formula) -> Formula {
    Formula::implies(f.clone(), Formula::Bot)
}

/// Check a proof tree. Returns the open (undischarged) assumptions.
pub fn check_nd(proof: &NdProof) -> Result<Vec<OpenAssumption>, NdError> {
    check_at(proof, &mut Vec::new())
}

fn check_at(p: &NdProof, path: &mut Vec<usize>) -> Result<Vec<OpenAssumption>, NdError> {
    let fail = |path: &Vec<usize>, msg: String| NdError { path: path.clone(), rule: p.rule, msg };
    if p.children.len() != p.rule.arity() {
        return Err(fail(path, format!("expected {} premise(s), found {}", p.rule.arity(), p.children.len())));
    }
    let needs_label = matches!(p.rule, NdRule::ImplIntro | NdRule::Raa);
    if needs_label && p.label.is_none() {
        return Err(fail(path, "missing discharge label".into()));
    }
    let needs_term = matches!(p.rule, NdRule::ForallIntro | NdRule::ForallElim);
    if needs_term != p.term.is_some() {
        return Err(fail(path, if needs_term { "missing term".into() } else { "unexpected term".into() }));
    }
    let mut open = Vec::new();
    for (i, c) in p.children.iter().enumerate() {
        path.push(i);
        open.push(check_at(c, path)?);
        path.pop();
    }
    let child = |i: usize| &p.children[i].formula;
    match p.rule {
        NdRule::Assume => {
            return Ok(vec![OpenAssumption { formula: p.formula.clone(), label: p.label.clone() }]);
        }
        NdRule::ImplIntro => {
            let Formula::Impl(a, b) = &p.formula else {
                return Err(fail(path, format!("{} is not an implication", p.formula)));
            };
            if !child(0).alpha_eq(b) {
                return Err(fail(path, format!("premise proves {}, expected {b}", child(0))));
            }
            return Ok(discharge(open.remove(0), p.label.as_deref(), a));
        }
        NdRule::ImplElim => match child(0) {
            Formula::Impl(a, b) if a.alpha_eq(child(1)) && b.alpha_eq(&p.formula) => {}
            other => {
                return Err(fail(path, format!("cannot apply {other} to {} to get {}", child(1), p.formula)));
            }
        },
        NdRule::ForallIntro => {
            let Formula::Forall(x, body) = &p.formula else {
                return Err(fail(path, format!("{} is not universal", p.formula)));
            };
            let Some(Term::Var(a)) = &p.term else {
                return Err(fail(path, "eigenvariable must be a variable".into()));
            };
            let eigen = Term::var(a);
            if !body.is_free_for(x, &eigen) || !body.substitute(x, &eigen).alpha_eq(child(0)) {
                return Err(fail(path, format!("premise {} is not the {a}-instance of {}", child(0), p.formula)));
            }
            if p.formula.has_free(a) {
                return Err(fail(path, format!("eigenvariable {a} occurs free in the conclusion")));
            }
            if let Some(bad) = open[0].iter().find(|o| o.formula.has_free(a)) {
                return Err(fail(path, format!("eigenvariable {a} occurs free in open assumption {}", bad.formula)));
            }
        }
        NdRule::ForallElim => {
            let Formula::Forall(x, body) = child(0) else {
                return Err(fail(path, format!("premise {} is not universal", child(0))));
            };
            let t = p.term.as_ref().expect("checked above");
            if !body.is_free_for(x, t) {
                return Err(fail(path, format!("{t} is not free for {x}")));
            }
            if !body.substitute(x, t).alpha_eq(&p.formula) {
                return Err(fail(path, format!("{} is not the {t}-instance of {}", p.formula, child(0))));
            }
        }
        NdRule::BotElim => {
            if *child(0) != Formula::Bot {
                return Err(fail(path, format!("premise {} is not bot", child(0))));
            }
        }
        NdRule::Raa => {
            if *child(0) != Formula::Bot {
                return Err(fail(path, format!("premise {} is not bot", child(0))));
            }
            let neg = negation_of(&p.formula);
            return Ok(discharge(open.remove(0), p.label.as_deref(), &neg));
        }
    }
    Ok(open.into_iter().flatten().collect())
}

fn discharge(open: Vec<OpenAssumption>, label: Option<&str>, formula: &Formula) -> Vec<OpenAssumption> {
    open.into_iter().filter(|o| !(o.label.as_deref() == label && o.formula.alpha_eq(formula))).collect()
}

/// A sequent with its proof, as stored in the corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub assumptions: Vec<Formula>,
    pub conclusion: Formula,
    pub proof: NdProof,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    #[serde(default)]
    assumptions: Vec<String>,
    conclusion: String,
    proof: serde_json::Value,
}

impl CorpusEntry {
    pub fn from_json_str(text: &str) -> Result<CorpusEntry, NdFormatError> {
        let raw: RawEntry = serde_json::from_str(text).map_err(|e| NdFormatError::Json(e.to_string()))?;
        let formula = |text: &String| {
            parse_formula(text, &sig()).map_err(|e| NdFormatError::Formula { text: text.clone(), msg: e.to_string() })
        };
        Ok(CorpusEntry {
            name: raw.name,
            assumptions: raw.assumptions.iter().map(formula).collect::<Result<_, _>>()?,
            conclusion: formula(&raw.conclusion)?,
            proof: NdProof::from_json_value(raw.proof)?,
        })
    }

    /// The proof checks, proves the conclusion, and uses only the listed
    /// assumptions.
    pub fn check(&self) -> Result<(), NdError> {
        let open = check_nd(&self.proof)?;
        let root = |msg: String| NdError { path: Vec::new(), rule: self.proof.rule, msg };
        if !self.proof.formula.alpha_eq(&self.conclusion) {
            return Err(root(format!("proof ends in {}, not {}", self.proof.formula, self.conclusion)));
        }
        if let Some(o) = open.iter().find(|o| !self.assumptions.iter().any(|a| a.alpha_eq(&o.formula))) {
            return Err(root(format!("open assumption {} is not listed", o.formula)));
        }
        Ok(())
    }

    /// Propositional over 0-ary atoms: no equations and no quantifiers.
    pub fn is_propositional(&self) -> bool {
        fn prop(f: &Formula) -> bool {
            match f {
                Formula::Bot | Formula::Atom(crate::syntax::Atom::Prop(_)) => true,
                Formula::Atom(_) | Formula::Forall(..) => false,
                Formula::Impl(a, b) => prop(a) && prop(b),
            }
        }
        self.assumptions.iter().all(prop) && prop(&self.conclusion)
    }
}
