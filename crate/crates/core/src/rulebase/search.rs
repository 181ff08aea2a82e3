//! Goal-directed derivability search.
//!
//! The search unfolds the goal backwards, breadth first and one depth
//! level at a time, into a graph of closed rule instances. Every atom is
//! unfolded at most once, at the shallowest depth it is reached, so
//! revisiting a goal along any branch (the `eq2`/`eq3` cycles) costs
//! nothing. After each level a Horn-style propagation marks every atom
//! whose instance has all premises established; a certificate is then
//! read off the recorded justifications.
//!
//! Metavariables that do not occur in a schema's conclusion (the middle
//! term of `eq3`, the `x` of `pa1`) are instantiated from a finite
//! candidate pool: subterms of the goal, premises and current atom,
//! numerals up to a bound, and one-step reducts of the current atom's
//! sides under the base's zero-premise equations.

use std::collections::HashSet;

use indexmap::IndexSet;
use serde::Serialize;

use super::schema::{apply_term, match_atom, match_term};
use super::{Base, Conclusion, DeriveError, Derivation, Subst};
use crate::syntax::{Atom, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Number of backward unfolding levels.
    pub max_depth: usize,
    /// Maximum number of rule instances generated.
    pub max_nodes: usize,
    /// Numerals `0..=numeral_bound` join the instantiation pool.
    pub numeral_bound: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_depth: 12, max_nodes: 200_000, numeral_bound: 2 }
    }
}

impl Budget {
    pub fn new(max_depth: usize, max_nodes: usize) -> Self {
        Budget { max_depth, max_nodes, ..Budget::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub depth: usize,
    pub atoms: usize,
    pub instances: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NotDerivableEvidence {
    /// The unfolding closed before the depth bound and used no pooled
    /// instantiation, so every possible derivation was considered.
    Exhausted(SearchStats),
    /// Nothing was found within the depth bound, and the goal's sides have
    /// different weights while the base preserves weight equality and all
    /// premises are weight-balanced.
    WeightRefuted { stats: SearchStats, lhs: u64, rhs: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnknownReason {
    DepthLimit(SearchStats),
    NodeLimit(SearchStats),
    /// The unfolding closed, but only over the restricted candidate pool.
    Restricted(SearchStats),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeriveVerdict {
    Derivable(Derivation),
    NotDerivable(NotDerivableEvidence),
    Unknown(UnknownReason),
}

impl DeriveVerdict {
    pub fn is_derivable(&self) -> bool {
        matches!(self, DeriveVerdict::Derivable(_))
    }

    pub fn certificate(&self) -> Option<&Derivation> {
        match self {
            DeriveVerdict::Derivable(d) => Some(d),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            DeriveVerdict::Derivable(_) => "Derivable",
            DeriveVerdict::NotDerivable(_) => "NotDerivable",
            DeriveVerdict::Unknown(_) => "Unknown",
        }
    }
}

#[derive(Clone, Copy)]
enum Just {
    Open,
    Inst(usize),
}

struct Instance {
    schema: usize,
    subst: Subst,
    premises: Vec<usize>,
    conclusion: usize,
    missing: usize,
}

struct Engine<'b> {
    base: &'b Base,
    budget: Budget,
    rewrites: Vec<(Term, Term)>,
    root_pool: IndexSet<Term>,
    atoms: IndexSet<Atom>,
    just: Vec<Option<Just>>,
    waiting: Vec<Vec<usize>>,
    instances: Vec<Instance>,
    restricted: bool,
}

/// Search for a derivation of `goal` in `base` from `premises`.
///
/// `Derivable` certificates always pass [`super::check_derivation`] with
/// `premises` as the allowed open leaves.
pub fn derive(base: &Base, premises: &[Atom], goal: &Atom, budget: Budget) -> Result<DeriveVerdict, DeriveError> {
    if budget.max_depth == 0 || budget.max_nodes == 0 {
        return Err(DeriveError::ZeroBudget);
    }
    let sig = base.signature();
    if !goal.is_closed() || !sig.admits_atom(goal) {
        return Err(DeriveError::BadGoal(goal.to_string()));
    }
    if let Some(p) = premises.iter().find(|p| !p.is_closed() || !sig.admits_atom(p)) {
        return Err(DeriveError::BadPremise(p.to_string()));
    }
    if premises.contains(goal) {
        return Ok(DeriveVerdict::Derivable(Derivation::open(goal.clone())));
    }

    let mut engine = Engine::new(base, budget, premises, goal);
    for p in premises {
        let (id, _) = engine.intern(p.clone());
        engine.establish(id, Just::Open);
    }
    let (goal_id, _) = engine.intern(goal.clone());

    let mut frontier = vec![goal_id];
    let mut depth = 0;
    while depth < budget.max_depth && !frontier.is_empty() {
        let mut next = Vec::new();
        for id in frontier {
            if engine.just[id].is_some() {
                continue;
            }
            engine.expand(id, &mut next);
            if engine.just[goal_id].is_some() {
                return Ok(DeriveVerdict::Derivable(engine.build(goal_id)));
            }
            if engine.instances.len() > budget.max_nodes {
                return Ok(DeriveVerdict::Unknown(UnknownReason::NodeLimit(engine.stats(depth + 1))));
            }
        }
        frontier = next.into_iter().filter(|&id| engine.just[id].is_none()).collect();
        depth += 1;
    }

    let stats = engine.stats(depth);
    let closed = frontier.is_empty();
    if closed && !engine.restricted {
        return Ok(DeriveVerdict::NotDerivable(NotDerivableEvidence::Exhausted(stats)));
    }
    if let Some((lhs, rhs)) = crate::arith::weight_refutes(base, premises, goal) {
        return Ok(DeriveVerdict::NotDerivable(NotDerivableEvidence::WeightRefuted { stats, lhs, rhs }));
    }
    Ok(DeriveVerdict::Unknown(if closed {
        UnknownReason::Restricted(stats)
    } else {
        UnknownReason::DepthLimit(stats)
    }))
}

impl<'b> Engine<'b> {
    fn new(base: &'b Base, budget: Budget, premises: &[Atom], goal: &Atom) -> Self {
        let mut root_pool = IndexSet::new();
        for a in premises.iter().chain(std::iter::once(goal)) {
            if let Some((l, r)) = a.sides() {
                root_pool.extend(l.subterms().into_iter().cloned());
                root_pool.extend(r.subterms().into_iter().cloned());
            }
        }
        root_pool.extend((0..=budget.numeral_bound).map(Term::numeral));
        Engine {
            base,
            budget,
            rewrites: rewrite_rules(base),
            root_pool,
            atoms: IndexSet::new(),
            just: Vec::new(),
            waiting: Vec::new(),
            instances: Vec::new(),
            restricted: false,
        }
    }

    fn stats(&self, depth: usize) -> SearchStats {
        SearchStats { depth, atoms: self.atoms.len(), instances: self.instances.len() }
    }

    fn intern(&mut self, atom: Atom) -> (usize, bool) {
        let (id, fresh) = self.atoms.insert_full(atom);
        if fresh {
            self.just.push(None);
            self.waiting.push(Vec::new());
        }
        (id, fresh)
    }

    fn establish(&mut self, id: usize, how: Just) {
        if self.just[id].is_some() {
            return;
        }
        self.just[id] = Some(how);
        let mut queue = vec![id];
        while let Some(a) = queue.pop() {
            for inst in std::mem::take(&mut self.waiting[a]) {
                let i = &mut self.instances[inst];
                i.missing -= 1;
                if i.missing == 0 && self.just[i.conclusion].is_none() {
                    self.just[i.conclusion] = Some(Just::Inst(inst));
                    queue.push(i.conclusion);
                }
            }
        }
    }

    fn pool_for(&self, atom: &Atom) -> IndexSet<Term> {
        let mut pool = self.root_pool.clone();
        if let Some((l, r)) = atom.sides() {
            pool.extend(l.subterms().into_iter().cloned());
            pool.extend(r.subterms().into_iter().cloned());
            pool.extend(reducts_with(l, &self.rewrites));
            pool.extend(reducts_with(r, &self.rewrites));
        }
        pool
    }

    fn expand(&mut self, id: usize, next: &mut Vec<usize>) {
        let atom = self.atoms[id].clone();
        let mut pool: Option<IndexSet<Term>> = None;
        let base = self.base;
        for (si, schema) in base.schemas().iter().enumerate() {
            let mut subst = Subst::new();
            if let Conclusion::Atom(pat) = schema.conclusion() {
                if !match_atom(pat, &atom, &mut subst) {
                    continue;
                }
            }
            let unbound: Vec<String> = schema.metavars().into_iter().filter(|v| !subst.contains_key(v)).collect();
            if unbound.is_empty() {
                self.add_instance(si, subst, id, next);
                continue;
            }
            self.restricted = true;
            let pool: Vec<Term> = pool.get_or_insert_with(|| self.pool_for(&atom)).iter().cloned().collect();
            let mut choice = vec![0usize; unbound.len()];
            'assign: loop {
                let mut s = subst.clone();
                for (var, &c) in unbound.iter().zip(&choice) {
                    s.insert(var.clone(), pool[c].clone());
                }
                self.add_instance(si, s, id, next);
                if self.instances.len() > self.budget.max_nodes {
                    return;
                }
                for slot in choice.iter_mut() {
                    *slot += 1;
                    if *slot < pool.len() {
                        continue 'assign;
                    }
                    *slot = 0;
                }
                break;
            }
        }
    }

    fn add_instance(&mut self, schema: usize, subst: Subst, conclusion: usize, next: &mut Vec<usize>) {
        let s = &self.base.schemas()[schema];
        let choice = s.concludes_any().then(|| self.atoms[conclusion].clone());
        let (premises, concl) = s.instantiate(&subst, choice.as_ref()).expect("all metavariables bound");
        debug_assert_eq!(concl, self.atoms[conclusion]);
        if premises.contains(&concl) {
            return;
        }
        let mut ids = Vec::with_capacity(premises.len());
        for p in premises {
            let (pid, fresh) = self.intern(p);
            if fresh {
                next.push(pid);
            }
            ids.push(pid);
        }
        let inst = self.instances.len();
        let distinct: HashSet<usize> = ids.iter().copied().filter(|&p| self.just[p].is_none()).collect();
        for &p in &distinct {
            self.waiting[p].push(inst);
        }
        self.instances.push(Instance { schema, subst, premises: ids, conclusion, missing: distinct.len() });
        if distinct.is_empty() {
            self.establish(conclusion, Just::Inst(inst));
        }
    }

    fn build(&self, id: usize) -> Derivation {
        let atom = self.atoms[id].clone();
        match self.just[id].expect("only established atoms are rebuilt") {
            Just::Open => Derivation::open(atom),
            Just::Inst(i) => {
                let inst = &self.instances[i];
                let children = inst.premises.iter().map(|&p| self.build(p)).collect();
                let name = self.base.schemas()[inst.schema].name();
                Derivation::rule(atom, name, inst.subst.clone(), children)
            }
        }
    }
}

/// Zero-premise equations of the base, oriented as rewrite rules in each
/// direction whose right side introduces no new variables and whose left
/// side is not a bare variable.
fn rewrite_rules(base: &Base) -> Vec<(Term, Term)> {
    let mut out = Vec::new();
    for s in base.schemas().iter().filter(|s| s.premises().is_empty()) {
        let Conclusion::Atom(Atom::Eq(l, r)) = s.conclusion() else { continue };
        if l == r {
            continue;
        }
        for (from, to) in [(l, r), (r, l)] {
            // `0 -> ci` would multiply every term by the constant count.
            let expands_zero = matches!(from, Term::Zero);
            if !matches!(from, Term::Var(_)) && !expands_zero && to.vars().is_subset(&from.vars()) {
                out.push((from.clone(), to.clone()));
            }
        }
    }
    out
}

fn reducts_with(t: &Term, rules: &[(Term, Term)]) -> Vec<Term> {
    let mut out = Vec::new();
    for (from, to) in rules {
        let mut s = Subst::new();
        if match_term(from, t, &mut s) {
            let r = apply_term(to, &s);
            if r != *t {
                out.push(r);
            }
        }
    }
    match t {
        Term::Succ(u) => out.extend(reducts_with(u, rules).into_iter().map(Term::succ)),
        Term::Add(l, r) => {
            out.extend(reducts_with(l, rules).into_iter().map(|x| Term::add(x, (**r).clone())));
            out.extend(reducts_with(r, rules).into_iter().map(|x| Term::add((**l).clone(), x)));
        }
        Term::Mul(l, r) => {
            out.extend(reducts_with(l, rules).into_iter().map(|x| Term::mul(x, (**r).clone())));
            out.extend(reducts_with(r, rules).into_iter().map(|x| Term::mul((**l).clone(), x)));
        }
        _ => {}
    }
    out
}

/// Terms reachable from `t` by rewriting one position with a zero-premise
/// equation of `base`.
pub fn one_step_reducts(t: &Term, base: &Base) -> Vec<Term> {
    let mut seen = IndexSet::new();
    seen.extend(reducts_with(t, &rewrite_rules(base)));
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulebase::{builtin_base, check_derivation, BaseKind, Conclusion, RuleSchema};
    use crate::syntax::{parse_atom, Signature};

    fn atom(s: &str) -> Atom {
        parse_atom(s, &Signature::extended(9)).unwrap()
    }

    fn assert_certified(base: &Base, premises: &[Atom], v: &DeriveVerdict) {
        let d = v.certificate().expect("derivable");
        let allowed = premises.iter().cloned().collect();
        check_derivation(base, d, &allowed).unwrap();
    }

    #[test]
    fn pa3_goal_is_immediate() {
        let a = builtin_base(BaseKind::A);
        let v = derive(&a, &[], &atom("0 + 0 = 0"), Budget::default()).unwrap();
        assert_certified(&a, &[], &v);
        assert_eq!(v.certificate().unwrap().rule_name(), Some("pa3"));
    }

    #[test]
    fn one_plus_one_in_a_plus() {
        let ap = builtin_base(BaseKind::APlus);
        let v = derive(&ap, &[], &atom("S(0) + S(0) = S(S(0))"), Budget::default()).unwrap();
        assert_certified(&ap, &[], &v);
    }

    #[test]
    fn successor_of_zero_is_not_zero() {
        let ap = builtin_base(BaseKind::APlus);
        let v = derive(&ap, &[], &atom("S(0) = 0"), Budget::new(12, 200_000)).unwrap();
        match v {
            DeriveVerdict::NotDerivable(NotDerivableEvidence::WeightRefuted { lhs, rhs, stats }) => {
                assert_eq!((lhs, rhs), (1, 0));
                assert_eq!(stats.depth, 12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn premises_are_usable_and_reusable() {
        let eqb = builtin_base(BaseKind::Eq);
        let prem = vec![atom("0 = S(0)")];
        let v = derive(&eqb, &prem, &atom("S(0) = 0"), Budget::default()).unwrap();
        assert_certified(&eqb, &prem, &v);
        let v = derive(&eqb, &prem, &atom("0 = S(0)"), Budget::default()).unwrap();
        assert_eq!(v.certificate().unwrap(), &Derivation::open(atom("0 = S(0)")));
    }

    #[test]
    fn ground_base_is_decided_exactly() {
        let b = Base::new(
            "toy",
            Signature::arithmetic(),
            vec![
                RuleSchema::new("r1", vec![Atom::prop("p")], Conclusion::Atom(Atom::prop("q"))),
                RuleSchema::new("r2", vec![Atom::prop("q")], Conclusion::Atom(Atom::prop("p"))),
            ],
        )
        .unwrap();
        let v = derive(&b, &[], &Atom::prop("q"), Budget::default()).unwrap();
        assert!(matches!(v, DeriveVerdict::NotDerivable(NotDerivableEvidence::Exhausted(_))));
        let v = derive(&b, &[Atom::prop("p")], &Atom::prop("q"), Budget::default()).unwrap();
        assert_certified(&b, &[Atom::prop("p")], &v);
    }

    #[test]
    fn balanced_but_underivable_goal_is_unknown() {
        // No congruence in A: S(0 + 0) = S(0) cannot be reached this way.
        let a = builtin_base(BaseKind::A);
        let v = derive(&a, &[], &atom("S(0 + 0) = S(0)"), Budget::new(4, 50_000)).unwrap();
        assert!(matches!(v, DeriveVerdict::Unknown(_)), "{v:?}");
    }

    #[test]
    fn node_budget_is_enforced() {
        let ap = builtin_base(BaseKind::APlus);
        let v = derive(&ap, &[], &atom("S(0) * S(S(0)) = S(0) + S(0)"), Budget::new(12, 10)).unwrap();
        assert!(matches!(v, DeriveVerdict::Unknown(UnknownReason::NodeLimit(_))), "{v:?}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = builtin_base(BaseKind::A);
        assert_eq!(derive(&a, &[], &atom("0 = 0"), Budget::new(0, 10)), Err(DeriveError::ZeroBudget));
        let open = Atom::eq(Term::var("x"), Term::Zero);
        assert!(matches!(derive(&a, &[], &open, Budget::default()), Err(DeriveError::BadGoal(_))));
        assert!(matches!(derive(&a, &[], &atom("c1 = 0"), Budget::default()), Err(DeriveError::BadGoal(_))));
    }

    #[test]
    fn reducts_cover_inner_positions() {
        let ap = builtin_base(BaseKind::APlus);
        let t = parse_atom("S(0 + 0) = 0", &Signature::arithmetic()).unwrap();
        let (l, _) = t.sides().unwrap();
        assert!(one_step_reducts(l, &ap).contains(&Term::numeral(1)));
        let ext = builtin_base(BaseKind::AExt(2));
        let r = one_step_reducts(&Term::Const(2), &ext);
        assert_eq!(r, vec![Term::Zero]);
    }
}
