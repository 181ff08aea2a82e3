//! Checks that provable sequents are supported.
//!
//! Propositional entries are evaluated exactly over every base of every
//! toy universe whose atoms are drawn from a fixed pool and include the
//! entry's atoms. First-order entries go through the bounded arithmetic
//! support instead, with the assumptions curried into the conclusion.

use std::collections::BTreeMap;

use serde::Serialize;

use super::nd::CorpusEntry;
use crate::rulebase::BaseKind;
use crate::support::{arith_support, ArithBounds, SupportError, SupportSet, SupportVerdict, ToySemantics, ToyUniverse};
use crate::syntax::Formula;

/// Atom pool the harness universes are drawn from.
pub const HARNESS_ATOMS: [&str; 3] = ["p", "q", "r"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniverseResult {
    pub universe: Vec<String>,
    pub bases_checked: u64,
    pub refuted: u64,
    /// A refuting base, rendered as its rules.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EntrySemantics {
    /// Exhaustive over every base of each listed universe.
    Exhaustive { universes: Vec<UniverseResult> },
    /// Bounded arithmetic support over `A_PLUS`.
    Bounded { base: String, verdict: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub proof_checked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof_error: Option<String>,
    pub semantics: EntrySemantics,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub entries: Vec<EntryResult>,
    /// Entries with a checked proof that the semantics refutes somewhere.
    pub violations: Vec<String>,
}

impl HarnessReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every subset of `pool`, smallest first, that contains `needed`.
fn universes_for(needed: &[String], pool: &[&str]) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << pool.len()) {
        let atoms: Vec<String> =
            (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].to_string()).collect();
        if needed.iter().all(|a| atoms.contains(a)) {
            out.push(atoms);
        }
    }
    out.sort_by_key(Vec::len);
    out
}

fn curried(entry: &CorpusEntry) -> Formula {
    entry.assumptions.iter().rev().fold(entry.conclusion.clone(), |acc, a| Formula::implies(a.clone(), acc))
}

/// Run the corpus through the checker and the semantics.
///
/// `pool` lists the atoms universes are built from (at most three, so
/// every universe is enumerated exhaustively).
pub fn soundness_harness(corpus: &[CorpusEntry], pool: &[&str], bounds: &ArithBounds) -> Result<HarnessReport, SupportError> {
    let mut semantics: BTreeMap<Vec<String>, ToySemantics> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    for entry in corpus {
        let checked = entry.check();
        let proof_checked = checked.is_ok();
        let result = if entry.is_propositional() {
            let mut needed: Vec<String> = entry.conclusion.props().into_iter().collect();
            for a in &entry.assumptions {
                needed.extend(a.props());
            }
            needed.sort();
            needed.dedup();
            let mut universes = Vec::new();
            for atoms in universes_for(&needed, pool) {
                if !semantics.contains_key(&atoms) {
                    let u = ToyUniverse::new(&atoms)?;
                    semantics.insert(atoms.clone(), ToySemantics::new(&u)?);
                }
                let sem = &semantics[&atoms];
                let set: SupportSet = if entry.assumptions.is_empty() {
                    sem.support_set(&entry.conclusion)?.as_ref().clone()
                } else {
                    sem.entails_set(&entry.assumptions, &entry.conclusion)?
                };
                let total = 1u64 << sem.universe().rule_count();
                let refuted = total - set.count();
                let example = (refuted > 0).then(|| {
                    let mask = (0..total).find(|&m| !set.contains(m)).expect("some base refutes");
                    sem.universe().render_mask(mask)
                });
                universes.push(UniverseResult { universe: atoms, bases_checked: total, refuted, example });
            }
            if proof_checked && universes.iter().any(|u| u.refuted > 0) {
                violations.push(entry.name.clone());
            }
            EntrySemantics::Exhaustive { universes }
        } else {
            let verdict = arith_support(BaseKind::APlus, &curried(entry), bounds)?;
            if proof_checked && matches!(verdict, SupportVerdict::Refuted(_)) {
                violations.push(entry.name.clone());
            }
            EntrySemantics::Bounded { base: BaseKind::APlus.to_string(), verdict: verdict.label().to_string() }
        };
        entries.push(EntryResult {
            name: entry.name.clone(),
            proof_checked,
            proof_error: checked.err().map(|e| e.to_string()),
            semantics: result,
        });
    }
    Ok(HarnessReport { entries, violations })
}
