//! The weight function and everything built on it: numeral normalization
//! with certificates, the closed-equation oracle, the per-schema weight
//! audit, and the consistency report.

mod audit;
mod certs;
mod consistency;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rulebase::{BaseKind, Derivation};
use crate::syntax::Term;

pub use audit::{audit_base, audit_schema, base_preserves_weight, check_weight_invariant, InvariantViolation, SchemaAudit};
pub(crate) use audit::weight_refutes;
pub use certs::{decide_equation, explode, normalize_to_numeral, substitute_equals};
pub use consistency::{refute_bot, refute_bot_in, ConsistencyReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("term `{0}` is not closed")]
    OpenTerm(String),
    #[error("weight of `{0}` overflows")]
    Overflow(String),
    #[error(
        "base A has no congruence schemas, so normalization certificates cannot be built over it; \
         use A_PLUS or A_EXT (see `probe-fidelity`)"
    )]
    FidelityGap,
    #[error("base {0} does not contain the arithmetic schemas")]
    Unsupported(BaseKind),
    #[error("term `{term}` is outside the signature of {base}")]
    Signature { term: String, base: BaseKind },
    #[error("equation `{0}` is weight-balanced; nothing explodes from it")]
    Balanced(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Weight(pub u64);

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `w(0) = 0`, `w(ci) = 0`, `w(S t) = w(t) + 1`, additive over `+` and
/// multiplicative over `*`.
pub fn weight(t: &Term) -> Result<Weight, ArithError> {
    fn go(t: &Term, whole: &Term) -> Result<u64, ArithError> {
        let overflow = || ArithError::Overflow(whole.to_string());
        match t {
            Term::Zero | Term::Const(_) => Ok(0),
            Term::Var(_) => Err(ArithError::OpenTerm(whole.to_string())),
            Term::Succ(u) => go(u, whole)?.checked_add(1).ok_or_else(overflow),
            Term::Add(l, r) => go(l, whole)?.checked_add(go(r, whole)?).ok_or_else(overflow),
            Term::Mul(l, r) => go(l, whole)?.checked_mul(go(r, whole)?).ok_or_else(overflow),
        }
    }
    go(t, t).map(Weight)
}

/// Standard evaluation in the natural numbers, constants denoting zero.
///
/// Runs on an explicit operand stack rather than by recursion so that it
/// stays an independent check on [`weight`].
pub fn eval_value(t: &Term) -> Result<u64, ArithError> {
    enum Op<'a> {
        Visit(&'a Term),
        Succ,
        Add,
        Mul,
    }
    let overflow = || ArithError::Overflow(t.to_string());
    let mut work = vec![Op::Visit(t)];
    let mut values: Vec<u64> = Vec::new();
    while let Some(op) = work.pop() {
        match op {
            Op::Visit(Term::Zero) | Op::Visit(Term::Const(_)) => values.push(0),
            Op::Visit(Term::Var(_)) => return Err(ArithError::OpenTerm(t.to_string())),
            Op::Visit(Term::Succ(u)) => {
                work.push(Op::Succ);
                work.push(Op::Visit(u));
            }
            Op::Visit(Term::Add(l, r)) => {
                work.push(Op::Add);
                work.push(Op::Visit(r));
                work.push(Op::Visit(l));
            }
            Op::Visit(Term::Mul(l, r)) => {
                work.push(Op::Mul);
                work.push(Op::Visit(r));
                work.push(Op::Visit(l));
            }
            Op::Succ => {
                let v = values.pop().expect("operand");
                values.push(v.checked_add(1).ok_or_else(overflow)?);
            }
            Op::Add | Op::Mul => {
                let r = values.pop().expect("operand");
                let l = values.pop().expect("operand");
                let v = if matches!(op, Op::Add) { l.checked_add(r) } else { l.checked_mul(r) };
                values.push(v.ok_or_else(overflow)?);
            }
        }
    }
    Ok(values.pop().expect("result"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquationVerdict {
    /// The equation holds; the certificate derives it with no open leaves.
    True { certificate: Derivation },
    /// The two sides have different weights.
    False { lhs: Weight, rhs: Weight },
}

impl EquationVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, EquationVerdict::True { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, Signature};

    fn t(s: &str) -> Term {
        parse_term(s, &Signature::extended(9)).unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight(&Term::Zero).unwrap(), Weight(0));
        assert_eq!(weight(&t("S(S(0)) + S(0)")).unwrap(), Weight(3));
        assert_eq!(weight(&t("c7")).unwrap(), Weight(0));
        assert_eq!(weight(&t("S(S(0))*S(S(0))")).unwrap(), Weight(4));
        assert!(matches!(weight(&Term::var("x")), Err(ArithError::OpenTerm(_))));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_value(&t("S(0)*S(S(0))")).unwrap(), 2);
        assert_eq!(eval_value(&Term::Zero).unwrap(), 0);
        assert_eq!(eval_value(&t("c3 + S(0)")).unwrap(), 1);
        assert!(eval_value(&t("x + 0")).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        // 2^(2^6) = 2^64 overflows
        let mut big = Term::numeral(2);
        for _ in 0..6 {
            big = Term::mul(big.clone(), big);
        }
        assert!(matches!(weight(&big), Err(ArithError::Overflow(_))));
        assert!(matches!(eval_value(&big), Err(ArithError::Overflow(_))));
    }
}
