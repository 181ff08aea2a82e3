//! Line-oriented rule files:
//!
//! ```text
//! # comment
//! eq2: ?y = ?x |- ?x = ?y
//! pa1: S(?x) = 0 |- ANY
//! pa3: |- ?x + 0 = ?x
//! r1: p, q |- r
//! ```

use super::{Base, Conclusion, RuleError, RuleSchema};
use crate::syntax::{parse_atom, Signature};

pub fn parse_rule_file(text: &str, name: &str) -> Result<Base, RuleError> {
    let open_sig = Signature::extended(u32::MAX);
    let mut schemas = Vec::new();
    let mut sig = Signature::arithmetic();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| RuleError::File { line: line_no, msg };
        let (rule_name, body) = line.split_once(':').ok_or_else(|| err("expected `name: premises |- conclusion`".into()))?;
        let rule_name = rule_name.trim();
        if rule_name.is_empty() || rule_name.contains(char::is_whitespace) {
            return Err(err(format!("bad rule name `{rule_name}`")));
        }
        let (lhs, rhs) = body.split_once("|-").ok_or_else(|| err("missing `|-`".into()))?;
        let mut premises = Vec::new();
        if !lhs.trim().is_empty() {
            for p in lhs.split(',') {
                let atom = parse_atom(p.trim(), &open_sig).map_err(|e| err(e.to_string()))?;
                premises.push(atom);
            }
        }
        let rhs = rhs.trim();
        let conclusion = if rhs == "ANY" {
            Conclusion::Any
        } else {
            Conclusion::Atom(parse_atom(rhs, &open_sig).map_err(|e| err(e.to_string()))?)
        };
        let schema = RuleSchema::new(rule_name, premises, conclusion);
        for a in schema.premises().iter().chain(match schema.conclusion() {
            Conclusion::Atom(c) => Some(c),
            Conclusion::Any => None,
        }) {
            if let Some((l, r)) = a.sides() {
                if let Some(k) = l.max_constant().max(r.max_constant()) {
                    sig = sig.join(Signature::extended(k));
                }
            }
        }
        schemas.push(schema);
    }
    Base::new(name, sig, schemas)
}

pub fn render_rule_file(base: &Base) -> String {
    let mut out = String::new();
    for s in base.schemas() {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}
