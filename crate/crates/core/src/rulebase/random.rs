use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::schema::apply;
use super::{match_atom, Base, Conclusion, Derivation, Subst};
use crate::syntax::{closed_terms_upto, Atom, Term};

const POOL_TERM_SIZE: usize = 4;
const ATTEMPTS_PER_STEP: usize = 24;

/// Generate `count` closed derivations by forward chaining `steps` rule
/// applications each, starting from nothing. The returned derivation is
/// the last one built in each run. Deterministic in `seed`.
pub fn random_forward_derivations(base: &Base, count: usize, steps: usize, seed: u64) -> Vec<Derivation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = closed_terms_upto(base.signature(), POOL_TERM_SIZE);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut facts: Vec<Derivation> = Vec::new();
        let mut seen: BTreeSet<Atom> = BTreeSet::new();
        let mut last = None;
        for _ in 0..steps.max(1) {
            for _ in 0..ATTEMPTS_PER_STEP {
                if let Some(d) = try_step(base, &facts, &pool, &mut rng) {
                    if seen.insert(d.atom.clone()) {
                        facts.push(d.clone());
                    }
                    last = Some(d);
                    break;
                }
            }
        }
        if let Some(d) = last {
            out.push(d);
        }
    }
    out
}

fn try_step<R: Rng>(base: &Base, facts: &[Derivation], pool: &[Term], rng: &mut R) -> Option<Derivation> {
    let schema = base.schemas().choose(rng)?;
    let mut subst = Subst::new();
    let mut children = Vec::with_capacity(schema.premises().len());
    for pattern in schema.premises() {
        let pat = apply(pattern, &subst);
        let matching: Vec<(&Derivation, Subst)> = facts
            .iter()
            .filter_map(|f| {
                let mut s = subst.clone();
                match_atom(&pat, &f.atom, &mut s).then_some((f, s))
            })
            .collect();
        let (fact, s) = matching.choose(rng)?;
        subst = s.clone();
        children.push((*fact).clone());
    }
    for var in schema.metavars() {
        if let std::collections::btree_map::Entry::Vacant(slot) = subst.entry(var) {
            slot.insert(pool.choose(rng)?.clone());
        }
    }
    let choice = match schema.conclusion() {
        Conclusion::Any => Some(Atom::eq(pool.choose(rng)?.clone(), pool.choose(rng)?.clone())),
        Conclusion::Atom(_) => None,
    };
    let (_, conclusion) = schema.instantiate(&subst, choice.as_ref()).ok()?;
    Some(Derivation::rule(conclusion, schema.name(), subst, children))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulebase::{builtin_base, check_derivation, BaseKind};
    use std::collections::HashSet;

    #[test]
    fn first_step_is_a_zero_premise_instance() {
        let a = builtin_base(BaseKind::A);
        let ds = random_forward_derivations(&a, 1, 1, 1);
        assert_eq!(ds.len(), 1);
        let d = &ds[0];
        assert!(d.children().is_empty());
        assert!(["eq1", "pa3", "pa4", "pa5", "pa6"].contains(&d.rule_name().unwrap()));
    }

    #[test]
    fn outputs_check_and_are_deterministic() {
        let ap = builtin_base(BaseKind::APlus);
        let ds = random_forward_derivations(&ap, 50, 8, 42);
        assert_eq!(ds.len(), 50);
        for d in &ds {
            check_derivation(&ap, d, &HashSet::new()).unwrap();
            assert!(d.open_leaves().is_empty());
        }
        assert_eq!(ds, random_forward_derivations(&ap, 50, 8, 42));
        assert_ne!(ds, random_forward_derivations(&ap, 50, 8, 43));
        assert!(ds.iter().any(|d| d.height() > 2));
    }
}
