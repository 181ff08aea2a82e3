//! Classical natural deduction and the toy-scale soundness harness.

mod harness;
mod nd;

use std::path::Path;

pub use harness::{soundness_harness, EntryResult, EntrySemantics, HarnessReport, UniverseResult, HARNESS_ATOMS};
pub use nd::{check_nd, CorpusEntry, NdError, NdFormatError, NdProof, NdRule, OpenAssumption};

const BUILTIN: [(&str, &str); 13] = [
    ("identity", include_str!("../../corpus/nd/identity.json")),
    ("weakening", include_str!("../../corpus/nd/weakening.json")),
    ("modus_ponens", include_str!("../../corpus/nd/modus_ponens.json")),
    ("ex_falso", include_str!("../../corpus/nd/ex_falso.json")),
    ("peirce", include_str!("../../corpus/nd/peirce.json")),
    ("double_negation_elimination", include_str!("../../corpus/nd/double_negation_elimination.json")),
    ("distribution", include_str!("../../corpus/nd/distribution.json")),
    ("contraposition", include_str!("../../corpus/nd/contraposition.json")),
    ("hypothetical_syllogism", include_str!("../../corpus/nd/hypothetical_syllogism.json")),
    ("consequentia_mirabilis", include_str!("../../corpus/nd/consequentia_mirabilis.json")),
    ("universal_instance", include_str!("../../corpus/nd/universal_instance.json")),
    ("universal_identity", include_str!("../../corpus/nd/universal_identity.json")),
    ("quantifier_swap", include_str!("../../corpus/nd/quantifier_swap.json")),
];

/// The golden corpus shipped with the crate.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    BUILTIN
        .iter()
        .map(|(name, text)| CorpusEntry::from_json_str(text).unwrap_or_else(|e| panic!("corpus entry {name}: {e}")))
        .collect()
}

/// Every `*.json` corpus entry in `dir`, sorted by file name.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusEntry>, String> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            CorpusEntry::from_json_str(&text).map_err(|e| format!("{}: {e}", p.display()))
        })
        .collect()
}
