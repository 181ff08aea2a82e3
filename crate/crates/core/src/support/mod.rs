//! The support judgment.
//!
//! Over finite toy universes of 0-ary atoms it is decided exactly, with
//! the extension quantifier ranging over every base of the universe's
//! rule universe. Over the arithmetic bases it is three-valued and
//! bounded: universal quantifiers are checked up to a closed-term bound
//! and implications through a sufficient condition.

mod arith;
mod checks;
mod toy;

use serde::Serialize;
use thiserror::Error;

use crate::arith::ArithError;
use crate::rulebase::DeriveError;

pub use arith::{arith_support, ArithBounds, TheoryPresentation};
pub use checks::{
    induction_check, numerically_definite_upto, omega_check, CertificateEntry, CheckFailureReport, CheckReport,
    DefinitenessReport, InstanceRecord, Stage,
};
pub use toy::{
    fresh_atom_sweep, toy_entails, toy_fresh_atom_robustness, toy_support, FreshAtomDiscrepancy, SupportSet,
    ToyRule, ToySemantics, ToyUniverse, MAX_TOY_RULES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SupportError {
    #[error("`{0}` is outside the toy fragment (0-ary atoms, `->` and `bot` only)")]
    NotToyFormula(String),
    #[error("atom `{0}` is not in the universe")]
    UnknownAtom(String),
    #[error("`{0}` is not a valid toy atom name")]
    BadAtomName(String),
    #[error("atom `{0}` is listed twice")]
    DuplicateAtom(String),
    #[error("universe with {atoms} atoms has {rules} rules; at most 24 rules (3 atoms) can be enumerated")]
    UniverseTooLarge { atoms: usize, rules: u64 },
    #[error("rule `{0}` is outside the universe's rule universe")]
    BaseOutsideUniverse(String),
    #[error("the assumption set must be non-empty")]
    EmptyDelta,
    #[error("formula `{0}` is not closed")]
    OpenFormula(String),
    #[error("`{0}` is not an arithmetic formula over the base's signature")]
    NotArithmetic(String),
    #[error("`{0}` must be an equation with exactly one free variable")]
    NotEquationSchema(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Derive(#[from] DeriveError),
}

/// The clause of the support definition a counterexample falsifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// An atom is not derivable.
    At,
    /// Some atom is not derivable, so `bot` is not supported.
    Bot,
    /// An extension supports the antecedent but not the consequent.
    Impl,
    /// An extension supports every assumption but not the conclusion.
    Inf,
    /// A closed instance of a universal formula fails.
    Forall,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub method: String,
    /// Toy mode: how many extensions of the base were covered.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extensions_checked: Option<u64>,
    /// Arithmetic mode: set when a universal clause was checked only up to
    /// these bounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<ArithBounds>,
    /// Arithmetic mode: closed atomic instances settled by certificate.
    pub instances: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub clause: Clause,
    /// Toy mode: the extension at which the clause fails. Arithmetic
    /// counterexamples fail at the queried base itself and leave this empty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_mask: Option<u64>,
    pub base_rules: Vec<String>,
    pub detail: String,
    /// Side weights of the non-derivable witness equation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<[u64; 2]>,
    /// The closed term at which a universal clause fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SupportVerdict {
    Verified(Evidence),
    Refuted(Counterexample),
    Unknown { reason: String },
}

impl SupportVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, SupportVerdict::Verified(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, SupportVerdict::Refuted(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            SupportVerdict::Verified(_) => "Verified",
            SupportVerdict::Refuted(_) => "Refuted",
            SupportVerdict::Unknown { .. } => "Unknown",
        }
    }
}
