//! Exact support over finite universes of 0-ary atoms.
//!
//! A toy universe with `n` atoms has `n * 2^n` canonical rules (a premise
//! set and a conclusion), so a base is a bitmask over rule ids and the
//! extensions of a base are its supermasks. Rather than recursing with a
//! nested enumeration per `->`, the engine computes, for each formula, the
//! set of *all* bases that support it, as a bitset indexed by base mask:
//!
//! * atoms and `bot` are read off a precomputed closure table;
//! * `S(a -> c)` is the complement of the down-closure of `S(a) \ S(c)`:
//!   a base fails the implication exactly when some extension supports
//!   `a` without `c`.
//!
//! Down-closure is a superset-OR transform, one pass per rule bit.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use serde::Serialize;

use super::{Clause, Counterexample, Evidence, SupportError, SupportVerdict};
use crate::rulebase::{Base, Conclusion, RuleSchema};
use crate::syntax::{Atom, Formula, Signature};

/// Largest rule universe the engine will materialize: `2^24` bases.
pub const MAX_TOY_RULES: u32 = 24;

const MAX_TOY_ATOMS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ToyUniverse {
    atoms: Vec<String>,
}

/// One canonical rule: premise set (bitmask over atoms) and conclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyRule {
    pub premises: u32,
    pub conclusion: u32,
}

impl ToyUniverse {
    pub fn new<S: AsRef<str>>(atoms: &[S]) -> Result<Self, SupportError> {
        let atoms: Vec<String> = atoms.iter().map(|a| a.as_ref().to_string()).collect();
        if atoms.len() > MAX_TOY_ATOMS {
            return Err(SupportError::UniverseTooLarge { atoms: atoms.len(), rules: u64::MAX });
        }
        for (i, a) in atoms.iter().enumerate() {
            let valid = a.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && a != "bot"
                && a != "forall"
                && a != "S";
            if !valid {
                return Err(SupportError::BadAtomName(a.clone()));
            }
            if atoms[..i].contains(a) {
                return Err(SupportError::DuplicateAtom(a.clone()));
            }
        }
        Ok(ToyUniverse { atoms })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom_index(&self, name: &str) -> Option<u32> {
        self.atoms.iter().position(|a| a == name).map(|i| i as u32)
    }

    /// `n * 2^n`.
    pub fn rule_count(&self) -> u32 {
        let n = self.atoms.len() as u32;
        n << n
    }

    /// Rule ids run `premises * n + conclusion`.
    pub fn rule(&self, id: u32) -> ToyRule {
        let n = self.atoms.len() as u32;
        ToyRule { premises: id / n, conclusion: id % n }
    }

    pub fn rule_id(&self, rule: ToyRule) -> u32 {
        rule.premises * self.atoms.len() as u32 + rule.conclusion
    }

    pub fn rule_universe(&self) -> Vec<ToyRule> {
        (0..self.rule_count()).map(|id| self.rule(id)).collect()
    }

    /// Mask with every rule of the universe.
    pub fn full_mask(&self) -> u64 {
        match self.rule_count() {
            64 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }

    pub fn render_rule(&self, id: u32) -> String {
        let rule = self.rule(id);
        let premises: Vec<&str> = (0..self.atoms.len())
            .filter(|i| rule.premises >> i & 1 == 1)
            .map(|i| self.atoms[i].as_str())
            .collect();
        let conclusion = &self.atoms[rule.conclusion as usize];
        if premises.is_empty() {
            format!("|- {conclusion}")
        } else {
            format!("{} |- {conclusion}", premises.join(", "))
        }
    }

    pub fn render_mask(&self, mask: u64) -> Vec<String> {
        (0..self.rule_count()).filter(|i| mask >> i & 1 == 1).map(|i| self.render_rule(i)).collect()
    }

    /// The rule mask of a base whose schemas all lie in this universe.
    /// Premise lists are read as sets.
    pub fn base_mask(&self, base: &Base) -> Result<u64, SupportError> {
        let mut mask = 0u64;
        for schema in base.schemas() {
            let outside = || SupportError::BaseOutsideUniverse(schema.to_string());
            let index = |a: &Atom| match a {
                Atom::Prop(p) => self.atom_index(p).ok_or_else(outside),
                Atom::Eq(..) => Err(outside()),
            };
            let mut premises = 0u32;
            for p in schema.premises() {
                premises |= 1 << index(p)?;
            }
            let conclusion = match schema.conclusion() {
                Conclusion::Atom(c) => index(c)?,
                Conclusion::Any => return Err(outside()),
            };
            mask |= 1u64 << self.rule_id(ToyRule { premises, conclusion });
        }
        Ok(mask)
    }

    /// A rule base holding exactly the rules of `mask`, named `r<id>`.
    pub fn base_from_mask(&self, mask: u64) -> Base {
        let schemas = (0..self.rule_count())
            .filter(|i| mask >> i & 1 == 1)
            .map(|id| {
                let rule = self.rule(id);
                let premises = (0..self.atoms.len())
                    .filter(|i| rule.premises >> i & 1 == 1)
                    .map(|i| Atom::prop(&self.atoms[i]))
                    .collect();
                let conclusion = Conclusion::Atom(Atom::prop(&self.atoms[rule.conclusion as usize]));
                RuleSchema::new(format!("r{id}"), premises, conclusion)
            })
            .collect();
        Base::new("toy", Signature::arithmetic(), schemas).expect("rule ids are distinct")
    }

    /// This universe plus one atom named after the first unused letter.
    pub fn with_fresh_atom(&self) -> Result<ToyUniverse, SupportError> {
        let fresh = ('a'..='z')
            .map(|c| c.to_string())
            .chain((0..).map(|i| format!("a{i}")))
            .find(|c| !self.atoms.contains(c) && c != "S")
            .expect("unbounded supply");
        let mut atoms = self.atoms.clone();
        atoms.push(fresh);
        ToyUniverse::new(&atoms)
    }

    /// Re-index a base mask of this universe into `larger`, whose atom list
    /// starts with this universe's atoms.
    pub fn embed_mask(&self, mask: u64, larger: &ToyUniverse) -> u64 {
        debug_assert!(larger.atoms.starts_with(&self.atoms));
        (0..self.rule_count())
            .filter(|i| mask >> i & 1 == 1)
            .fold(0u64, |acc, id| acc | 1u64 << larger.rule_id(self.rule(id)))
    }

    /// Check that `f` uses only `->`, `bot` and this universe's atoms.
    pub fn check_formula(&self, f: &Formula) -> Result<(), SupportError> {
        match f {
            Formula::Bot => Ok(()),
            Formula::Atom(Atom::Prop(p)) => {
                self.atom_index(p).map(|_| ()).ok_or_else(|| SupportError::UnknownAtom(p.clone()))
            }
            Formula::Atom(Atom::Eq(..)) | Formula::Forall(..) => Err(SupportError::NotToyFormula(f.to_string())),
            Formula::Impl(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
        }
    }

    /// All formulas over the atoms and `bot` of implication depth at most
    /// `max_depth`, shallower formulas first.
    pub fn formulas_upto(&self, max_depth: usize) -> Vec<Formula> {
        let leaves: Vec<Formula> = self.atoms.iter().map(Formula::prop).chain([Formula::Bot]).collect();
        let mut layer = leaves.clone();
        for _ in 0..max_depth {
            let mut next = leaves.clone();
            for a in &layer {
                for b in &layer {
                    next.push(Formula::implies(a.clone(), b.clone()));
                }
            }
            next.sort_by_key(Formula::impl_depth);
            layer = next;
        }
        layer
    }
}

impl fmt::Display for ToyUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.atoms.join(", "))
    }
}

/// A set of bases of one universe, as a bitset indexed by base mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    bits: u32,
    words: Vec<u64>,
}

const LOW_HALVES: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

impl SupportSet {
    fn empty(bits: u32) -> Self {
        let len = if bits <= 6 { 1 } else { 1usize << (bits - 6) };
        SupportSet { bits, words: vec![0; len] }
    }

    fn tail_mask(&self) -> u64 {
        if self.bits >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << self.bits)) - 1
        }
    }

    fn insert(&mut self, base: u64) {
        self.words[(base >> 6) as usize] |= 1 << (base & 63);
    }

    pub fn contains(&self, base: u64) -> bool {
        self.words[(base >> 6) as usize] >> (base & 63) & 1 == 1
    }

    /// Number of bases in the set.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Every base of the universe is in the set.
    pub fn is_full(&self) -> bool {
        let tail = self.tail_mask();
        self.words.iter().all(|&w| w & tail == tail)
    }

    fn and(&self, other: &SupportSet) -> SupportSet {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        SupportSet { bits: self.bits, words }
    }

    fn and_not(&self, other: &SupportSet) -> SupportSet {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        SupportSet { bits: self.bits, words }
    }

    fn complement(&self) -> SupportSet {
        let tail = self.tail_mask();
        let words = self.words.iter().map(|w| !w & tail).collect();
        SupportSet { bits: self.bits, words }
    }

    /// Bases with some superset in the set.
    fn down_closure(mut self) -> SupportSet {
        for i in 0..self.bits {
            if i < 6 {
                let shift = 1u32 << i;
                let low = LOW_HALVES[i as usize];
                for w in &mut self.words {
                    *w |= (*w >> shift) & low;
                }
            } else {
                let stride = 1usize << (i - 6);
                for w in 0..self.words.len() {
                    if w & stride == 0 {
                        self.words[w] |= self.words[w | stride];
                    }
                }
            }
        }
        self
    }

    /// Bases with some subset in the set.
    fn up_closure(mut self) -> SupportSet {
        for i in 0..self.bits {
            if i < 6 {
                let shift = 1u32 << i;
                let low = LOW_HALVES[i as usize];
                for w in &mut self.words {
                    *w |= (*w & low) << shift;
                }
            } else {
                let stride = 1usize << (i - 6);
                for w in 0..self.words.len() {
                    if w & stride != 0 {
                        self.words[w] |= self.words[w ^ stride];
                    }
                }
            }
        }
        self
    }

    /// Closed under supersets.
    pub fn is_up_set(&self) -> bool {
        self.clone().up_closure() == *self
    }

    /// Least base mask `c` with `base ⊆ c` in the set, scanning the
    /// supersets of `base` in increasing order.
    fn first_superset(&self, base: u64, full: u64) -> Option<u64> {
        let free = full & !base;
        let mut sub = 0u64;
        loop {
            let c = base | sub;
            if self.contains(c) {
                return Some(c);
            }
            if sub == free {
                return None;
            }
            sub = ((sub | !free).wrapping_add(1)) & free;
        }
    }
}

/// The support sets of one universe, with the closure table shared by all
/// queries.
pub struct ToySemantics {
    universe: ToyUniverse,
    rules: u32,
    atom_sets: Vec<SupportSet>,
    bot_set: SupportSet,
    cache: RefCell<HashMap<Formula, Rc<SupportSet>>>,
}

/// Atoms derivable from the rules in `base`, by forward chaining grouped
/// on premise sets.
fn closure_of(base: u64, n: u32) -> u32 {
    let atoms = (1u32 << n) - 1;
    let mut derived = 0u32;
    loop {
        let mut next = derived;
        // every premise set contained in `derived`, including the empty one
        let mut p = derived;
        loop {
            next |= (base >> (p * n)) as u32 & atoms;
            if p == 0 {
                break;
            }
            p = (p - 1) & derived;
        }
        if next == derived {
            return derived;
        }
        derived = next;
    }
}

impl ToySemantics {
    pub fn new(universe: &ToyUniverse) -> Result<Self, SupportError> {
        let rules = universe.rule_count();
        if rules > MAX_TOY_RULES {
            return Err(SupportError::UniverseTooLarge { atoms: universe.len(), rules: rules as u64 });
        }
        let n = universe.len() as u32;
        let mut atom_sets = vec![SupportSet::empty(rules); universe.len()];
        let mut bot_set = SupportSet::empty(rules);
        let all = (1u32 << n) - 1;
        for base in 0..(1u64 << rules) {
            let closed = if n == 0 { 0 } else { closure_of(base, n) };
            for (i, set) in atom_sets.iter_mut().enumerate() {
                if closed >> i & 1 == 1 {
                    set.insert(base);
                }
            }
            if closed == all {
                bot_set.insert(base);
            }
        }
        Ok(ToySemantics { universe: universe.clone(), rules, atom_sets, bot_set, cache: RefCell::new(HashMap::new()) })
    }

    pub fn universe(&self) -> &ToyUniverse {
        &self.universe
    }

    /// Atoms derivable from `base`, as a mask over the universe's atoms.
    pub fn closure(&self, base: u64) -> u32 {
        (0..self.universe.len()).filter(|&i| self.atom_sets[i].contains(base)).fold(0, |acc, i| acc | 1 << i)
    }

    /// Every base supporting `f`.
    pub fn support_set(&self, f: &Formula) -> Result<Rc<SupportSet>, SupportError> {
        self.universe.check_formula(f)?;
        Ok(self.set_of(f))
    }

    fn set_of(&self, f: &Formula) -> Rc<SupportSet> {
        match f {
            Formula::Atom(Atom::Prop(p)) => {
                let i = self.universe.atom_index(p).expect("checked formula");
                Rc::new(self.atom_sets[i as usize].clone())
            }
            Formula::Bot => Rc::new(self.bot_set.clone()),
            Formula::Impl(a, c) => {
                if let Some(hit) = self.cache.borrow().get(f) {
                    return Rc::clone(hit);
                }
                let bad = self.set_of(a).and_not(&self.set_of(c));
                let set = Rc::new(bad.down_closure().complement());
                // Large universes keep only shallow formulas, which recur.
                if self.rules <= 8 || f.impl_depth() <= 1 {
                    self.cache.borrow_mut().insert(f.clone(), Rc::clone(&set));
                }
                set
            }
            Formula::Atom(Atom::Eq(..)) | Formula::Forall(..) => unreachable!("checked formula"),
        }
    }

    /// Every base `b` with `delta ⊩_b f`.
    pub fn entails_set(&self, delta: &[Formula], f: &Formula) -> Result<SupportSet, SupportError> {
        if delta.is_empty() {
            return Err(SupportError::EmptyDelta);
        }
        let target = self.support_set(f)?;
        let mut all = self.support_set(&delta[0])?.as_ref().clone();
        for d in &delta[1..] {
            all = all.and(self.support_set(d)?.as_ref());
        }
        Ok(all.and_not(&target).down_closure().complement())
    }

    fn check_mask(&self, base: u64) -> Result<(), SupportError> {
        if base & !self.universe.full_mask() != 0 {
            return Err(SupportError::BaseOutsideUniverse(format!("rule mask {base:#x}")));
        }
        Ok(())
    }

    fn verified(&self, base: u64) -> SupportVerdict {
        let free = self.rules - base.count_ones();
        SupportVerdict::Verified(Evidence {
            method: "exhaustive extension enumeration".into(),
            extensions_checked: Some(1u64 << free),
            ..Evidence::default()
        })
    }

    fn counterexample(&self, clause: Clause, at: u64, detail: String) -> Counterexample {
        Counterexample {
            clause,
            base_mask: Some(at),
            base_rules: self.universe.render_mask(at),
            detail,
            weights: None,
            instance: None,
        }
    }

    pub fn support(&self, base: u64, f: &Formula) -> Result<SupportVerdict, SupportError> {
        self.check_mask(base)?;
        if self.support_set(f)?.contains(base) {
            return Ok(self.verified(base));
        }
        let cx = match f {
            Formula::Atom(a) => self.counterexample(Clause::At, base, format!("{a} is not derivable")),
            Formula::Bot => {
                let missing = self.missing_atom(base).expect("bot fails");
                self.counterexample(Clause::Bot, base, format!("{missing} is not derivable"))
            }
            Formula::Impl(a, c) => {
                let bad = self.set_of(a).and_not(&self.set_of(c));
                let at = bad.first_superset(base, self.universe.full_mask()).expect("a failing extension exists");
                self.counterexample(Clause::Impl, at, format!("extension supports {a} but not {c}"))
            }
            Formula::Forall(..) => unreachable!("checked formula"),
        };
        Ok(SupportVerdict::Refuted(cx))
    }

    pub fn entails(&self, base: u64, delta: &[Formula], f: &Formula) -> Result<SupportVerdict, SupportError> {
        self.check_mask(base)?;
        if self.entails_set(delta, f)?.contains(base) {
            return Ok(self.verified(base));
        }
        let mut all = self.set_of(&delta[0]).as_ref().clone();
        for d in &delta[1..] {
            all = all.and(&self.set_of(d));
        }
        let bad = all.and_not(&self.set_of(f));
        let at = bad.first_superset(base, self.universe.full_mask()).expect("a failing extension exists");
        Ok(SupportVerdict::Refuted(self.counterexample(
            Clause::Inf,
            at,
            format!("extension supports every assumption but not {f}"),
        )))
    }

    fn missing_atom(&self, base: u64) -> Option<&str> {
        let closed = self.closure(base);
        (0..self.universe.len()).find(|i| closed >> i & 1 == 0).map(|i| self.universe.atoms[i].as_str())
    }

    /// Re-run the clause a counterexample claims to falsify. Atomic
    /// derivability is recomputed by naive forward chaining over the
    /// rendered rule list.
    pub fn recheck(&self, base: u64, delta: &[Formula], f: &Formula, cx: &Counterexample) -> bool {
        let Some(at) = cx.base_mask else { return false };
        if at & base != base || self.check_mask(at).is_err() {
            return false;
        }
        let derivable = naive_closure(&self.universe, at);
        let holds = |g: &Formula| self.support_set(g).map(|s| s.contains(at)).unwrap_or(false);
        match (cx.clause, f) {
            (Clause::At, Formula::Atom(Atom::Prop(p))) => at == base && !derivable.contains(p),
            (Clause::Bot, Formula::Bot) => at == base && self.universe.atoms.iter().any(|a| !derivable.contains(a)),
            (Clause::Impl, Formula::Impl(a, c)) => holds(a) && !holds(c),
            (Clause::Inf, _) => !delta.is_empty() && delta.iter().all(holds) && !holds(f),
            _ => false,
        }
    }
}

fn naive_closure(u: &ToyUniverse, base: u64) -> std::collections::BTreeSet<String> {
    let rules: Vec<ToyRule> = (0..u.rule_count()).filter(|i| base >> i & 1 == 1).map(|i| u.rule(i)).collect();
    let mut derived = std::collections::BTreeSet::new();
    let mut changed = true;
    while changed {
        changed = false;
        for r in &rules {
            let fires = (0..u.len()).all(|i| r.premises >> i & 1 == 0 || derived.contains(&u.atoms[i]));
            if fires && derived.insert(u.atoms[r.conclusion as usize].clone()) {
                changed = true;
            }
        }
    }
    derived
}

fn prepare(u: &ToyUniverse, b: &Base) -> Result<(ToySemantics, u64), SupportError> {
    let mask = u.base_mask(b)?;
    Ok((ToySemantics::new(u)?, mask))
}

/// Exact `⊩_b f` over the universe.
pub fn toy_support(u: &ToyUniverse, b: &Base, f: &Formula) -> Result<SupportVerdict, SupportError> {
    let (sem, mask) = prepare(u, b)?;
    sem.support(mask, f)
}

/// Exact `delta ⊩_b f` over the universe.
pub fn toy_entails(u: &ToyUniverse, b: &Base, delta: &[Formula], f: &Formula) -> Result<SupportVerdict, SupportError> {
    let (sem, mask) = prepare(u, b)?;
    sem.entails(mask, delta, f)
}

/// Whether the verdict on `f` at `b` survives adding one fresh atom (and
/// every rule mentioning it) to the universe.
pub fn toy_fresh_atom_robustness(u: &ToyUniverse, b: &Base, f: &Formula) -> Result<bool, SupportError> {
    let larger = u.with_fresh_atom()?;
    let (small, mask) = prepare(u, b)?;
    let big = ToySemantics::new(&larger)?;
    let here = small.support_set(f)?.contains(mask);
    let there = big.support_set(f)?.contains(u.embed_mask(mask, &larger));
    Ok(here == there)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreshAtomDiscrepancy {
    pub base: Vec<String>,
    pub formula: String,
    pub verdict_here: bool,
    pub verdict_extended: bool,
}

/// [`toy_fresh_atom_robustness`] for every base of `u` and every formula
/// of implication depth at most `max_depth`.
pub fn fresh_atom_sweep(u: &ToyUniverse, max_depth: usize) -> Result<(usize, Vec<FreshAtomDiscrepancy>), SupportError> {
    let larger = u.with_fresh_atom()?;
    let small = ToySemantics::new(u)?;
    let big = ToySemantics::new(&larger)?;
    let formulas = u.formulas_upto(max_depth);
    let mut out = Vec::new();
    let mut checked = 0;
    for f in &formulas {
        let s = small.support_set(f)?;
        let l = big.support_set(f)?;
        for mask in 0..=u.full_mask() {
            checked += 1;
            let (here, there) = (s.contains(mask), l.contains(u.embed_mask(mask, &larger)));
            if here != there {
                out.push(FreshAtomDiscrepancy {
                    base: u.render_mask(mask),
                    formula: f.to_string(),
                    verdict_here: here,
                    verdict_extended: there,
                });
            }
        }
    }
    Ok((checked, out))
}
