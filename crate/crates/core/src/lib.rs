//! Base-extension semantics over atomic-rule bases, applied to arithmetic.
//!
//! * [`syntax`]: terms, formulas, parsing and enumeration.
//! * [`rulebase`]: rule schemas, the arithmetic bases, derivation
//!   certificates and derivability search.
//! * [`arith`]: the weight function, numeral normalization with
//!   certificates, the closed-equation oracle and the consistency report.
//! * [`support`]: the support judgment, exact on finite toy universes and
//!   bounded on the arithmetic bases, plus the numerical-definiteness,
//!   omega-completeness and induction checkers.
//! * [`classical`]: a natural-deduction checker and the toy-scale
//!   soundness harness.

pub mod arith;
pub mod classical;
pub mod rulebase;
pub mod support;
pub mod syntax;

pub use arith::{decide_equation, eval_value, normalize_to_numeral, weight, EquationVerdict, Weight};
pub use rulebase::{builtin_base, derive, Base, BaseKind, Budget, DeriveVerdict, Derivation, RuleSchema};
pub use syntax::{Atom, Formula, Numeral, Signature, Term};
