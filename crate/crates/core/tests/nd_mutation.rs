use basesem::classical::{builtin_corpus, CorpusEntry, NdProof};
use basesem::syntax::Formula;

fn node_mut<'a>(proof: &'a mut NdProof, path: &[usize]) -> &'a mut NdProof {
    path.iter().fold(proof, |p, &i| &mut p.children[i])
}

fn mutations(f: &Formula) -> Vec<Formula> {
    let mut out = vec![Formula::not(f.clone()), Formula::implies(Formula::prop("s"), f.clone())];
    if let Formula::Impl(a, b) = f {
        out.push(Formula::implies((**b).clone(), (**a).clone()));
    }
    out.retain(|g| g != f);
    out
}

#[test]
fn corpus_checks() {
    let corpus = builtin_corpus();
    assert!(corpus.len() >= 8);
    for e in &corpus {
        e.check().unwrap_or_else(|err| panic!("{}: {err}", e.name));
    }
}

#[test]
fn changing_any_formula_is_rejected() {
    let mut tried = 0;
    for entry in builtin_corpus() {
        let paths: Vec<Vec<usize>> = entry.proof.nodes().into_iter().map(|(p, _)| p).collect();
        for path in paths {
            let original = node_mut(&mut entry.proof.clone(), &path).formula.clone();
            for replacement in mutations(&original) {
                let mut broken: CorpusEntry = entry.clone();
                node_mut(&mut broken.proof, &path).formula = replacement.clone();
                tried += 1;
                assert!(
                    broken.check().is_err(),
                    "{}: node {path:?} changed to {replacement} still checks",
                    entry.name
                );
            }
        }
    }
    assert!(tried > 100, "only {tried} mutations");
}

#[test]
fn dropping_a_child_is_rejected() {
    for entry in builtin_corpus() {
        let paths: Vec<Vec<usize>> =
            entry.proof.nodes().into_iter().filter(|(_, n)| !n.children.is_empty()).map(|(p, _)| p).collect();
        for path in paths {
            let mut broken = entry.clone();
            node_mut(&mut broken.proof, &path).children.pop();
            assert!(broken.check().is_err(), "{}: node {path:?} without its last child still checks", entry.name);
        }
    }
}
