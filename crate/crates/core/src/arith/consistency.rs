//! Refuting support for `⊥` over the arithmetic bases.
//!
//! `⊥` is supported in a base exactly when every closed atom is derivable
//! there, so one non-derivable closed atom refutes it. The witness is
//! `S(0) = 0`; it is not derivable because it is weight-unbalanced and
//! every schema of the base passes the weight audit.

use serde::Serialize;

use super::{audit_base, SchemaAudit};
use crate::rulebase::{
    builtin_base, derive, Base, BaseKind, Budget, DeriveError, DeriveVerdict, NotDerivableEvidence, SearchStats,
    UnknownReason,
};
use crate::syntax::{Atom, Term};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub schema: String,
    #[serde(flatten)]
    pub audit: SchemaAudit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub base: String,
    pub witness: String,
    pub witness_weights: [u64; 2],
    /// `refuted` when the witness is certified non-derivable, else `unknown`.
    pub bot_clause_status: String,
    /// Label of the bounded search on the witness.
    pub search_verdict: String,
    /// How far that search got.
    pub search_stats: Option<SearchStats>,
    pub budget: Budget,
    pub audit: Vec<AuditEntry>,
}

impl ConsistencyReport {
    pub fn refuted(&self) -> bool {
        self.bot_clause_status == "refuted"
    }
}

pub fn refute_bot(kind: BaseKind, budget: Budget) -> Result<ConsistencyReport, DeriveError> {
    refute_bot_in(&builtin_base(kind), budget)
}

pub fn refute_bot_in(base: &Base, budget: Budget) -> Result<ConsistencyReport, DeriveError> {
    let witness = Atom::eq(Term::numeral(1), Term::Zero);
    let verdict = derive(base, &[], &witness, budget)?;
    let refuted = matches!(verdict, DeriveVerdict::NotDerivable(_));
    let search_stats = match &verdict {
        DeriveVerdict::Derivable(_) => None,
        DeriveVerdict::NotDerivable(NotDerivableEvidence::Exhausted(s))
        | DeriveVerdict::NotDerivable(NotDerivableEvidence::WeightRefuted { stats: s, .. })
        | DeriveVerdict::Unknown(UnknownReason::DepthLimit(s))
        | DeriveVerdict::Unknown(UnknownReason::NodeLimit(s))
        | DeriveVerdict::Unknown(UnknownReason::Restricted(s)) => Some(*s),
    };
    Ok(ConsistencyReport {
        base: base.name().to_string(),
        witness: witness.to_string(),
        witness_weights: [1, 0],
        bot_clause_status: if refuted { "refuted" } else { "unknown" }.to_string(),
        search_verdict: verdict.label().to_string(),
        search_stats,
        budget,
        audit: audit_base(base).into_iter().map(|(schema, audit)| AuditEntry { schema, audit }).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulebase::parse_rule_file;

    #[test]
    fn arithmetic_bases_refute_bot() {
        for kind in [BaseKind::A, BaseKind::APlus, BaseKind::AExt(2)] {
            let report = refute_bot(kind, Budget::default()).unwrap();
            assert!(report.refuted(), "{kind}: {report:?}");
            assert_eq!(report.witness, "S(0) = 0");
        }
    }

    #[test]
    fn collapsing_base_is_not_refuted() {
        let base = parse_rule_file("bad: |- S(0) = 0\n", "bad").unwrap();
        let report = refute_bot_in(&base, Budget::default()).unwrap();
        assert!(!report.refuted());
        assert_eq!(report.search_verdict, "Derivable");
    }
}
