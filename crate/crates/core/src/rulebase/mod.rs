//! Atomic rule schemas and bases.
//!
//! A base is presented by finitely many schemas; each schema stands for the
//! infinite set of its closed instances. Derivations are explicit trees
//! that [`check_derivation`] re-verifies against a base.

mod builtin;
mod derivation;
mod file;
mod random;
mod schema;
mod search;

use thiserror::Error;

use crate::syntax::ParseError;

pub use builtin::{builtin_base, BaseKind};
pub(crate) use builtin::constant_rule_name;
pub use derivation::{check_derivation, CertificateError, CheckFailure, Derivation, Step};
pub use file::{parse_rule_file, render_rule_file};
pub use random::random_forward_derivations;
pub use schema::{match_atom, match_term, Base, Conclusion, RuleSchema, Subst};
pub use search::{derive, one_step_reducts, Budget, DeriveVerdict, NotDerivableEvidence, SearchStats, UnknownReason};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("duplicate schema name `{0}`")]
    DuplicateSchema(String),
    #[error("schema `{schema}`: no binding for metavariable `{var}`")]
    MissingBinding { schema: String, var: String },
    #[error("schema `{schema}`: binding for `{var}` is not a closed term")]
    OpenBinding { schema: String, var: String },
    #[error("schema `{0}` has a fixed conclusion; no conclusion choice may be supplied")]
    UnexpectedChoice(String),
    #[error("schema `{0}` concludes ANY; a conclusion atom must be supplied")]
    MissingChoice(String),
    #[error("line {line}: {msg}")]
    File { line: usize, msg: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeriveError {
    #[error("search budget must be positive")]
    ZeroBudget,
    #[error("goal `{0}` is not a closed atom over the base signature")]
    BadGoal(String),
    #[error("premise `{0}` is not a closed atom over the base signature")]
    BadPremise(String),
}
