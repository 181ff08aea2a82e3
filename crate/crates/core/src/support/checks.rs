//! Numerical definiteness, omega-completeness and induction, replayed
//! instance by instance with certificates.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::SupportError;
use crate::arith::{decide_equation, explode, normalize_to_numeral, substitute_equals, EquationVerdict};
use crate::rulebase::{builtin_base, check_derivation, BaseKind, CheckFailure, Derivation, Step};
use crate::syntax::{closed_terms_upto, Atom, Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// `t = N` for a closed term.
    Normalization,
    /// `phi(n)` for a numeral.
    Numeral,
    /// `phi(t)` for a closed term, by substitution of equals.
    ClosedTerm,
    /// `phi(0)`.
    Base,
    /// `phi(n) -> phi(S n)`.
    Step,
    /// `phi(n)` by chaining the steps from the base case.
    Chain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub stage: Stage,
    pub instance: String,
    pub verdict: &'static str,
    pub certificate_ref: Option<String>,
    /// The bound this stage runs up to: `n_max` for numeral stages, the
    /// term-size bound for closed-term stages.
    pub bound: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[u64; 2]>,
}

/// A stored certificate together with the open premises it may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub derivation: Derivation,
    pub premises: Vec<Atom>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct CertificateStore(BTreeMap<String, CertificateEntry>);

impl CertificateStore {
    fn add(&mut self, derivation: Derivation, premises: Vec<Atom>) -> String {
        let digest = Sha256::digest(derivation.to_json_string().as_bytes());
        let key = hex::encode(&digest[..8]);
        self.0.entry(key.clone()).or_insert(CertificateEntry { derivation, premises });
        key
    }

    fn verify(&self, kind: BaseKind) -> Result<usize, (String, CheckFailure)> {
        let base = builtin_base(kind);
        for (key, entry) in &self.0 {
            let open: HashSet<Atom> = entry.premises.iter().cloned().collect();
            check_derivation(&base, &entry.derivation, &open).map_err(|e| (key.clone(), e))?;
        }
        Ok(self.0.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailureReport {
    pub stage: Stage,
    pub instance: String,
    /// The numeral index `n` of the failing instance, when there is one.
    pub n: Option<u64>,
    pub witness: [u64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: &'static str,
    pub base: String,
    pub schema: String,
    pub variable: String,
    pub n_max: u64,
    pub term_size: usize,
    pub passed: bool,
    pub failure: Option<CheckFailureReport>,
    pub instances: Vec<InstanceRecord>,
    #[serde(skip)]
    certificates: CertificateStore,
    #[serde(skip)]
    kind: BaseKind,
}

impl CheckReport {
    pub fn certificate(&self, reference: &str) -> Option<&CertificateEntry> {
        self.certificates.0.get(reference)
    }

    pub fn certificates(&self) -> impl Iterator<Item = (&str, &CertificateEntry)> {
        self.certificates.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Run every stored certificate through the derivation checker.
    /// Returns how many were checked.
    pub fn verify_certificates(&self) -> Result<usize, (String, CheckFailure)> {
        self.certificates.verify(self.kind)
    }

    fn record(&mut self, stage: Stage, instance: &Atom, bound: u64, cert: Option<(Derivation, Vec<Atom>)>) {
        let certificate_ref = cert.map(|(d, p)| self.certificates.add(d, p));
        self.instances.push(InstanceRecord {
            stage,
            instance: instance.to_string(),
            verdict: "verified",
            certificate_ref,
            bound,
            witness: None,
        });
    }

    fn fail(&mut self, stage: Stage, instance: &Atom, n: Option<u64>, bound: u64, witness: [u64; 2]) {
        self.instances.push(InstanceRecord {
            stage,
            instance: instance.to_string(),
            verdict: "refuted",
            certificate_ref: None,
            bound,
            witness: Some(witness),
        });
        self.passed = false;
        self.failure = Some(CheckFailureReport { stage, instance: instance.to_string(), n, witness });
    }
}

fn equation_schema(phi: &Formula) -> Result<(Atom, String), SupportError> {
    let bad = || SupportError::NotEquationSchema(phi.to_string());
    let Formula::Atom(atom @ Atom::Eq(..)) = phi else { return Err(bad()) };
    let vars = phi.free_vars();
    if vars.len() != 1 {
        return Err(bad());
    }
    let var = vars.into_iter().next().expect("one variable");
    Ok((atom.clone(), var))
}

fn decide(atom: &Atom, kind: BaseKind) -> Result<EquationVerdict, SupportError> {
    let (l, r) = atom.sides().expect("equation");
    Ok(decide_equation(l, r, kind)?)
}

/// Replace open leaves labelled `premise` by `proof`.
fn graft(d: &Derivation, premise: &Atom, proof: &Derivation) -> Derivation {
    match &d.step {
        Step::Open if d.atom == *premise => proof.clone(),
        Step::Open => d.clone(),
        Step::Rule { rule, subst, children } => Derivation::rule(
            d.atom.clone(),
            rule.clone(),
            subst.clone(),
            children.iter().map(|c| graft(c, premise, proof)).collect(),
        ),
    }
}

fn new_report(check: &'static str, kind: BaseKind, atom: &Atom, var: &str, n_max: u64, term_size: usize) -> CheckReport {
    CheckReport {
        check,
        base: kind.to_string(),
        schema: atom.to_string(),
        variable: var.to_string(),
        n_max,
        term_size,
        passed: true,
        failure: None,
        instances: Vec::new(),
        certificates: CertificateStore::default(),
        kind,
    }
}

/// `phi(t)` for every closed term up to `term_size` nodes, from a
/// certificate of `phi(n)` at the term's value and substitution of equals.
fn closed_term_stage(
    report: &mut CheckReport,
    atom: &Atom,
    var: &str,
    kind: BaseKind,
    known: &mut BTreeMap<u64, Derivation>,
) -> Result<(), SupportError> {
    let bound = report.term_size as u64;
    for t in closed_terms_upto(&kind.signature(), report.term_size) {
        let (n, to_numeral) = normalize_to_numeral(&t, kind)?;
        let instance = atom.subst_var(var, &t);
        let at_numeral = match known.get(&n.value()) {
            Some(d) => d.clone(),
            None => match decide(&atom.subst_var(var, &n.to_term()), kind)? {
                EquationVerdict::True { certificate } => {
                    known.insert(n.value(), certificate.clone());
                    certificate
                }
                EquationVerdict::False { lhs, rhs } => {
                    report.fail(Stage::ClosedTerm, &instance, None, bound, [lhs.0, rhs.0]);
                    return Ok(());
                }
            },
        };
        let d = substitute_equals(atom, var, &to_numeral, &at_numeral);
        debug_assert_eq!(d.atom, instance);
        report.record(Stage::ClosedTerm, &instance, bound, Some((d, Vec::new())));
    }
    Ok(())
}

/// Certify `phi(n)` for `n <= n_max`, then `phi(t)` for every closed term
/// of at most `term_size` nodes by normalizing `t` and substituting equals.
pub fn omega_check(kind: BaseKind, phi: &Formula, n_max: u64, term_size: usize) -> Result<CheckReport, SupportError> {
    let (atom, var) = equation_schema(phi)?;
    let mut report = new_report("omega", kind, &atom, &var, n_max, term_size);
    let mut known = BTreeMap::new();
    for n in 0..=n_max {
        let instance = atom.subst_var(&var, &Term::numeral(n));
        match decide(&instance, kind)? {
            EquationVerdict::True { certificate } => {
                known.insert(n, certificate.clone());
                report.record(Stage::Numeral, &instance, n_max, Some((certificate, Vec::new())));
            }
            EquationVerdict::False { lhs, rhs } => {
                report.fail(Stage::Numeral, &instance, Some(n), n_max, [lhs.0, rhs.0]);
                return Ok(report);
            }
        }
    }
    closed_term_stage(&mut report, &atom, &var, kind, &mut known)?;
    Ok(report)
}

/// Certify `phi(0)` and each step `phi(n) -> phi(S n)` for `n < n_max`,
/// chain them to `phi(n)` for `n <= n_max`, then extend to closed terms.
///
/// A step is certified by deriving `phi(S n)` from the open premise
/// `phi(n)`: directly when `phi(S n)` holds, by explosion when `phi(n)`
/// is false. It fails only when `phi(n)` holds and `phi(S n)` does not.
pub fn induction_check(kind: BaseKind, phi: &Formula, n_max: u64, term_size: usize) -> Result<CheckReport, SupportError> {
    let (atom, var) = equation_schema(phi)?;
    let mut report = new_report("induction", kind, &atom, &var, n_max, term_size);
    let at = |n: u64| atom.subst_var(&var, &Term::numeral(n));

    let base_case = at(0);
    let base_cert = match decide(&base_case, kind)? {
        EquationVerdict::True { certificate } => certificate,
        EquationVerdict::False { lhs, rhs } => {
            report.fail(Stage::Base, &base_case, Some(0), n_max, [lhs.0, rhs.0]);
            return Ok(report);
        }
    };
    report.record(Stage::Base, &base_case, n_max, Some((base_cert.clone(), Vec::new())));

    let mut steps = Vec::new();
    for n in 0..n_max {
        let (here, next) = (at(n), at(n + 1));
        let step = Formula::implies(Formula::Atom(here.clone()), Formula::Atom(next.clone()));
        let cert = match (decide(&next, kind)?, decide(&here, kind)?) {
            (EquationVerdict::True { certificate }, _) => certificate,
            (_, EquationVerdict::False { .. }) => explode(&here, &next, kind)?,
            (EquationVerdict::False { lhs, rhs }, EquationVerdict::True { .. }) => {
                report.instances.push(InstanceRecord {
                    stage: Stage::Step,
                    instance: step.to_string(),
                    verdict: "refuted",
                    certificate_ref: None,
                    bound: n_max,
                    witness: Some([lhs.0, rhs.0]),
                });
                report.passed = false;
                report.failure =
                    Some(CheckFailureReport { stage: Stage::Step, instance: step.to_string(), n: Some(n), witness: [lhs.0, rhs.0] });
                return Ok(report);
            }
        };
        let reference = report.certificates.add(cert.clone(), vec![here.clone()]);
        report.instances.push(InstanceRecord {
            stage: Stage::Step,
            instance: step.to_string(),
            verdict: "verified",
            certificate_ref: Some(reference),
            bound: n_max,
            witness: None,
        });
        steps.push(cert);
    }

    // Modus ponens along the chain.
    let mut known = BTreeMap::new();
    let mut current = base_cert;
    known.insert(0, current.clone());
    for (n, step) in steps.iter().enumerate() {
        let n = n as u64;
        current = graft(step, &at(n), &current);
        known.insert(n + 1, current.clone());
    }
    for (n, d) in &known {
        report.record(Stage::Chain, &at(*n), n_max, Some((d.clone(), Vec::new())));
    }
    closed_term_stage(&mut report, &atom, &var, kind, &mut known)?;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinitenessFailure {
    pub term: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinitenessReport {
    pub base: String,
    pub term_size: usize,
    pub terms: usize,
    pub certified: usize,
    pub failures: Vec<DefinitenessFailure>,
    pub instances: Vec<InstanceRecord>,
    #[serde(skip)]
    certificates: CertificateStore,
}

impl DefinitenessReport {
    pub fn certificate(&self, reference: &str) -> Option<&Derivation> {
        self.certificates.0.get(reference).map(|e| &e.derivation)
    }
}

/// A checked certificate of `t = N` for every closed term of at most
/// `term_size` nodes.
pub fn numerically_definite_upto(kind: BaseKind, term_size: usize) -> Result<DefinitenessReport, SupportError> {
    if !kind.has_congruence() {
        return Err(crate::arith::ArithError::FidelityGap.into());
    }
    let base = builtin_base(kind);
    let terms = closed_terms_upto(&kind.signature(), term_size);
    let mut report = DefinitenessReport {
        base: kind.to_string(),
        term_size,
        terms: terms.len(),
        certified: 0,
        failures: Vec::new(),
        instances: Vec::new(),
        certificates: CertificateStore::default(),
    };
    for t in terms {
        let outcome = normalize_to_numeral(&t, kind).map_err(|e| e.to_string()).and_then(|(n, d)| {
            check_derivation(&base, &d, &HashSet::new()).map_err(|e| e.to_string())?;
            Ok((n, d))
        });
        match outcome {
            Ok((n, d)) => {
                let instance = Atom::eq(t.clone(), n.to_term());
                let reference = report.certificates.add(d, Vec::new());
                report.certified += 1;
                report.instances.push(InstanceRecord {
                    stage: Stage::Normalization,
                    instance: instance.to_string(),
                    verdict: "verified",
                    certificate_ref: Some(reference),
                    bound: term_size as u64,
                    witness: None,
                });
            }
            Err(error) => report.failures.push(DefinitenessFailure { term: t.to_string(), error }),
        }
    }
    Ok(report)
}
