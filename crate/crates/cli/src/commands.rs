use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use basesem::arith::{decide_equation, eval_value, normalize_to_numeral, refute_bot_in, weight, EquationVerdict};
use basesem::classical::{builtin_corpus, check_nd, load_corpus_dir, soundness_harness, CorpusEntry, NdProof};
use basesem::rulebase::{
    builtin_base, check_derivation, derive, parse_rule_file, Base, BaseKind, Budget, Derivation, DeriveVerdict,
};
use basesem::support::{
    arith_support, induction_check, omega_check, toy_entails, toy_support, ArithBounds, CheckReport, SupportVerdict,
    ToySemantics, ToyUniverse,
};
use basesem::syntax::{
    closed_terms_upto, parse_atom, parse_formula, parse_sentence, parse_term, random_closed_term, Atom, Formula,
    Signature, Term,
};
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{BaseArgs, Cli, Command, Format, SearchArgs};

pub const DEFAULT_SEED: u64 = 0x5EED;

const OMEGA_N_MAX: u64 = 25;
const OMEGA_TERM_SIZE: u64 = 7;
const PROBE_TERM_SIZE: u64 = 5;

pub struct CliError {
    pub code: u8,
    pub msg: String,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: 64, msg: msg.into() }
}

fn data(msg: impl Into<String>) -> CliError {
    CliError { code: 65, msg: msg.into() }
}

fn unreadable(path: &Path, e: std::io::Error) -> CliError {
    CliError { code: 66, msg: format!("{}: {e}", path.display()) }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| unreadable(path, e))
}

enum Selected {
    Kind(BaseKind),
    File(Base),
}

impl Selected {
    fn base(&self) -> Base {
        match self {
            Selected::Kind(k) => builtin_base(*k),
            Selected::File(b) => b.clone(),
        }
    }

    fn signature(&self) -> Signature {
        match self {
            Selected::Kind(k) => k.signature(),
            Selected::File(b) => *b.signature(),
        }
    }

    fn kind(&self) -> Result<BaseKind, CliError> {
        match self {
            Selected::Kind(k) => Ok(*k),
            Selected::File(_) => Err(usage("this command needs a builtin base (--base), not a rule file")),
        }
    }
}

impl BaseArgs {
    fn select(&self, default: BaseKind) -> Result<Selected, CliError> {
        if let Some(path) = &self.rules {
            let text = read(path)?;
            let name = path.file_stem().map_or("rules".into(), |s| s.to_string_lossy().into_owned());
            return parse_rule_file(&text, &name).map(Selected::File).map_err(|e| data(format!("{}: {e}", path.display())));
        }
        if self.base.is_empty() {
            return Ok(Selected::Kind(default));
        }
        self.base.join(" ").parse::<BaseKind>().map(Selected::Kind).map_err(usage)
    }
}

impl SearchArgs {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(d) = self.depth {
            b.max_depth = d as usize;
        }
        if let Some(n) = self.nodes {
            b.max_nodes = n as usize;
        }
        b
    }
}

fn any_sig() -> Signature {
    Signature::extended(u32::MAX)
}

fn closed_term(text: &str, sig: &Signature) -> Result<Term, CliError> {
    let t = parse_term(text, sig).map_err(|e| data(format!("`{text}`: {e}")))?;
    if !t.is_closed() {
        return Err(data(format!("`{text}` is not a closed term")));
    }
    Ok(t)
}

fn atom(text: &str, sig: &Signature) -> Result<Atom, CliError> {
    parse_atom(text, sig).map_err(|e| data(format!("`{text}`: {e}")))
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    let out = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Format::Text => text(),
    };
    // A closed pipe (`| head`) is not worth a panic.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn support_code(v: &SupportVerdict) -> u8 {
    match v {
        SupportVerdict::Verified(_) => 0,
        SupportVerdict::Refuted(_) => 1,
        SupportVerdict::Unknown { .. } => 2,
    }
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Parse { input } => parse_cmd(format, input),
        Command::Weight { term } => {
            let t = closed_term(term, &any_sig())?;
            let w = weight(&t).map_err(|e| data(e.to_string()))?;
            emit(format, &json!({ "term": t.to_string(), "weight": w.0 }), || format!("{w}\n"));
            Ok(0)
        }
        Command::Eval { term } => {
            let t = closed_term(term, &any_sig())?;
            let v = eval_value(&t).map_err(|e| data(e.to_string()))?;
            emit(format, &json!({ "term": t.to_string(), "value": v }), || format!("{v}\n"));
            Ok(0)
        }
        Command::Derive { goal, premises, base, search, cert } => derive_cmd(format, goal, premises, base, search, cert.as_deref()),
        Command::CheckDerivation { cert, premises, base } => check_cmd(format, cert, premises, base),
        Command::DecideEq { lhs, rhs, base } => decide_cmd(format, lhs, rhs, base),
        Command::Normalize { term, base } => {
            let kind = base.select(BaseKind::APlus)?.kind()?;
            let t = closed_term(term, &kind.signature())?;
            let (n, d) = normalize_to_numeral(&t, kind).map_err(|e| usage(e.to_string()))?;
            let out = json!({
                "base": kind.to_string(),
                "term": t.to_string(),
                "numeral": n.to_term().to_string(),
                "value": n.value(),
                "certificate": d.to_json(),
            });
            emit(format, &out, || format!("{t} = {}\n{d}", n.to_term()));
            Ok(0)
        }
        Command::Support { formula, base, term_size, n_max, search } => {
            let kind = base.select(BaseKind::APlus)?.kind()?;
            let f = parse_sentence(formula, &kind.signature()).map_err(|e| data(format!("`{formula}`: {e}")))?;
            let defaults = ArithBounds::default();
            let bounds = ArithBounds {
                term_size: term_size.map_or(defaults.term_size, |t| t as usize),
                numeral_range: n_max.unwrap_or(defaults.numeral_range),
                budget: search.budget(),
            };
            let verdict = arith_support(kind, &f, &bounds).map_err(|e| data(e.to_string()))?;
            let out = json!({ "base": kind.to_string(), "formula": f.to_string(), "result": verdict });
            emit(format, &out, || support_text(&verdict));
            Ok(support_code(&verdict))
        }
        Command::OmegaCheck { phi, base, n_max, term_size } => replay_cmd(format, phi, base, *n_max, *term_size, false),
        Command::InductionCheck { phi, base, n_max, term_size } => replay_cmd(format, phi, base, *n_max, *term_size, true),
        Command::NdCheck { path } => nd_cmd(format, path),
        Command::Consistency { base, search } => {
            let selected = base.select(BaseKind::APlus)?;
            let report = refute_bot_in(&selected.base(), search.budget()).map_err(|e| usage(e.to_string()))?;
            emit(format, &report, || {
                let mut s = format!(
                    "base {}: bot {} (witness {} with weights ({}, {}); search verdict {} at depth {})\n",
                    report.base,
                    report.bot_clause_status,
                    report.witness,
                    report.witness_weights[0],
                    report.witness_weights[1],
                    report.search_verdict,
                    report.search_stats.map_or(0, |s| s.depth),
                );
                for entry in &report.audit {
                    let _ = writeln!(s, "  {}: {}", entry.schema, audit_label(&entry.audit));
                }
                s
            });
            Ok(if report.refuted() {
                0
            } else if report.search_verdict == "Derivable" {
                1
            } else {
                2
            })
        }
        Command::ToySupport { formula, atoms, rules, assumptions } => toy_cmd(format, formula, atoms, rules.as_deref(), assumptions),
        Command::SoundnessDemo { corpus, atoms } => {
            let entries = match corpus {
                Some(dir) => load_corpus_dir(dir).map_err(data)?,
                None => builtin_corpus(),
            };
            if atoms.len() > 3 {
                return Err(usage("at most 3 atoms in the pool"));
            }
            let pool: Vec<&str> = atoms.iter().map(String::as_str).collect();
            let report =
                soundness_harness(&entries, &pool, &ArithBounds::default()).map_err(|e| usage(e.to_string()))?;
            emit(format, &report, || {
                let mut s = String::new();
                for e in &report.entries {
                    let _ = writeln!(s, "{}: proof {}, {}", e.name, if e.proof_checked { "ok" } else { "INVALID" }, semantics_text(&e.semantics));
                }
                let _ = writeln!(s, "violations: {}", report.violations.len());
                s
            });
            Ok(if report.is_sound() { 0 } else { 1 })
        }
        Command::ProbeFidelity { base, term_size, search, samples, seed } => {
            probe_cmd(format, base, term_size.unwrap_or(PROBE_TERM_SIZE) as usize, search, *samples, *seed)
        }
    }
}

fn audit_label(a: &basesem::arith::SchemaAudit) -> String {
    use basesem::arith::SchemaAudit;
    match a {
        SchemaAudit::Preserves { method } => format!("preserves weight ({method})"),
        SchemaAudit::Vacuous { premise } => format!("vacuous (premise {premise} is never balanced)"),
        SchemaAudit::Fails { difference } => format!("FAILS (difference {difference})"),
        SchemaAudit::NotApplicable => "not applicable".into(),
    }
}

fn semantics_text(s: &basesem::classical::EntrySemantics) -> String {
    use basesem::classical::EntrySemantics;
    match s {
        EntrySemantics::Exhaustive { universes } => {
            let parts: Vec<String> = universes
                .iter()
                .map(|u| format!("{{{}}}: {}/{} refuted", u.universe.join(","), u.refuted, u.bases_checked))
                .collect();
            parts.join("; ")
        }
        EntrySemantics::Bounded { base, verdict } => format!("bounded over {base}: {verdict}"),
    }
}

fn support_text(v: &SupportVerdict) -> String {
    match v {
        SupportVerdict::Verified(ev) => {
            let mut s = format!("Verified ({})", ev.method);
            if let Some(b) = &ev.bound {
                let _ = write!(s, " up to term size {} and numeral {}", b.term_size, b.numeral_range);
            }
            if let Some(n) = ev.extensions_checked {
                let _ = write!(s, ", {n} extensions checked");
            }
            s + "\n"
        }
        SupportVerdict::Refuted(cx) => {
            let mut s = format!("Refuted: {:?} clause fails: {}", cx.clause, cx.detail);
            if let Some(t) = &cx.instance {
                let _ = write!(s, " (instance {t})");
            }
            if let Some([l, r]) = cx.weights {
                let _ = write!(s, " (weights {l}, {r})");
            }
            if cx.base_mask.is_some() {
                let _ = write!(s, "\n  at extension {{{}}}", cx.base_rules.join("; "));
            }
            s + "\n"
        }
        SupportVerdict::Unknown { reason } => format!("Unknown: {reason}\n"),
    }
}

fn parse_cmd(format: Format, input: &str) -> Result<u8, CliError> {
    let sig = any_sig();
    let (kind, rendered, free, closed) = match parse_formula(input, &sig) {
        Ok(f) => ("formula", f.to_string(), f.free_vars(), f.is_closed()),
        Err(formula_err) => match parse_term(input, &sig) {
            Ok(t) => ("term", t.to_string(), t.vars(), t.is_closed()),
            Err(_) => return Err(data(format!("`{input}`: {formula_err}"))),
        },
    };
    let out = json!({
        "input": input,
        "kind": kind,
        "rendered": rendered,
        "closed": closed,
        "free_variables": free,
    });
    emit(format, &out, || format!("{kind}: {rendered}\n"));
    Ok(0)
}

fn derive_json(base: &Base, goal: &Atom, premises: &[Atom], budget: Budget, verdict: &DeriveVerdict) -> Value {
    let mut out = json!({
        "base": base.name(),
        "goal": goal.to_string(),
        "premises": premises.iter().map(Atom::to_string).collect::<Vec<_>>(),
        "budget": budget,
        "verdict": verdict.label(),
    });
    match verdict {
        DeriveVerdict::Derivable(d) => out["certificate"] = d.to_json(),
        DeriveVerdict::NotDerivable(ev) => out["evidence"] = serde_json::to_value(ev).expect("serializes"),
        DeriveVerdict::Unknown(reason) => out["reason"] = serde_json::to_value(reason).expect("serializes"),
    }
    out
}

fn derive_cmd(
    format: Format,
    goal: &str,
    premises: &[String],
    base: &BaseArgs,
    search: &SearchArgs,
    cert: Option<&Path>,
) -> Result<u8, CliError> {
    let selected = base.select(BaseKind::APlus)?;
    let sig = selected.signature();
    let goal = atom(goal, &sig)?;
    let premises = premises.iter().map(|p| atom(p, &sig)).collect::<Result<Vec<_>, _>>()?;
    let base = selected.base();
    let budget = search.budget();
    let verdict = derive(&base, &premises, &goal, budget).map_err(|e| data(e.to_string()))?;
    if let (Some(path), DeriveVerdict::Derivable(d)) = (cert, &verdict) {
        std::fs::write(path, d.to_json_string() + "\n").map_err(|e| unreadable(path, e))?;
    }
    let out = derive_json(&base, &goal, &premises, budget, &verdict);
    emit(format, &out, || match &verdict {
        DeriveVerdict::Derivable(d) => format!("Derivable ({} nodes, height {})\n{d}", d.size(), d.height()),
        DeriveVerdict::NotDerivable(ev) => format!("NotDerivable: {}\n", serde_json::to_string(ev).expect("serializes")),
        DeriveVerdict::Unknown(r) => format!("Unknown: {}\n", serde_json::to_string(r).expect("serializes")),
    });
    Ok(match verdict {
        DeriveVerdict::Derivable(_) => 0,
        DeriveVerdict::NotDerivable(_) => 1,
        DeriveVerdict::Unknown(_) => 2,
    })
}

fn check_cmd(format: Format, cert: &Path, premises: &[String], base: &BaseArgs) -> Result<u8, CliError> {
    let selected = base.select(BaseKind::APlus)?;
    let sig = selected.signature();
    let text = read(cert)?;
    let d = Derivation::from_json_str(&text, &any_sig()).map_err(|e| data(format!("{}: {e}", cert.display())))?;
    let open: HashSet<Atom> = premises.iter().map(|p| atom(p, &sig)).collect::<Result<_, _>>()?;
    let base = selected.base();
    let result = check_derivation(&base, &d, &open);
    let mut out = json!({
        "base": base.name(),
        "conclusion": d.atom.to_string(),
        "valid": result.is_ok(),
        "nodes": d.size(),
        "height": d.height(),
        "open_leaves": d.open_leaves().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
    });
    if let Err(e) = &result {
        out["error"] = json!({ "path": e.path, "schema": e.schema, "reason": e.reason });
    }
    emit(format, &out, || match &result {
        Ok(()) => format!("valid: {} ({} nodes)\n", d.atom, d.size()),
        Err(e) => format!("invalid: {e}\n"),
    });
    Ok(if result.is_ok() { 0 } else { 1 })
}

fn decide_cmd(format: Format, lhs: &str, rhs: &str, base: &BaseArgs) -> Result<u8, CliError> {
    let kind = base.select(BaseKind::APlus)?.kind()?;
    let sig = kind.signature();
    let (l, r) = (closed_term(lhs, &sig)?, closed_term(rhs, &sig)?);
    let verdict = decide_equation(&l, &r, kind).map_err(|e| usage(e.to_string()))?;
    let weights = [weight(&l).map_err(|e| data(e.to_string()))?.0, weight(&r).map_err(|e| data(e.to_string()))?.0];
    let mut out = json!({
        "base": kind.to_string(),
        "lhs": l.to_string(),
        "rhs": r.to_string(),
        "holds": verdict.holds(),
        "weights": weights,
    });
    if let EquationVerdict::True { certificate } = &verdict {
        out["certificate"] = certificate.to_json();
    }
    emit(format, &out, || match &verdict {
        EquationVerdict::True { certificate } => format!("True ({} nodes)\n", certificate.size()),
        EquationVerdict::False { lhs, rhs } => format!("False (weights {lhs}, {rhs})\n"),
    });
    Ok(if verdict.holds() { 0 } else { 1 })
}

fn replay_cmd(
    format: Format,
    phi: &str,
    base: &BaseArgs,
    n_max: Option<u64>,
    term_size: Option<u64>,
    induction: bool,
) -> Result<u8, CliError> {
    let kind = base.select(BaseKind::APlus)?.kind()?;
    let f = parse_formula(phi, &kind.signature()).map_err(|e| data(format!("`{phi}`: {e}")))?;
    let n_max = n_max.unwrap_or(OMEGA_N_MAX);
    let term_size = term_size.unwrap_or(OMEGA_TERM_SIZE) as usize;
    let report = if induction {
        induction_check(kind, &f, n_max, term_size)
    } else {
        omega_check(kind, &f, n_max, term_size)
    }
    .map_err(|e| usage(e.to_string()))?;
    emit(format, &report, || replay_text(&report));
    Ok(if report.passed { 0 } else { 1 })
}

fn replay_text(r: &CheckReport) -> String {
    let mut s = format!(
        "{} check of {} over {} (n_max {}, term size {}): {} instances\n",
        r.check,
        r.schema,
        r.base,
        r.n_max,
        r.term_size,
        r.instances.len()
    );
    match &r.failure {
        None => s.push_str("passed\n"),
        Some(f) => {
            let at = f.n.map_or(String::new(), |n| format!(" at n = {n}"));
            let _ = writeln!(
                s,
                "FAILED in {:?} stage{at}: {} (weights {}, {})",
                f.stage, f.instance, f.witness[0], f.witness[1]
            );
        }
    }
    s
}

fn nd_cmd(format: Format, path: &Path) -> Result<u8, CliError> {
    let entries: Vec<Value> = if path.is_dir() {
        load_corpus_dir(path).map_err(data)?.iter().map(entry_json).collect()
    } else {
        let text = read(path)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| data(format!("{}: {e}", path.display())))?;
        if value.get("proof").is_some() {
            let entry = CorpusEntry::from_json_str(&text).map_err(|e| data(format!("{}: {e}", path.display())))?;
            vec![entry_json(&entry)]
        } else {
            let proof = NdProof::from_json_value(value).map_err(|e| data(format!("{}: {e}", path.display())))?;
            let name = path.file_stem().map_or(String::new(), |s| s.to_string_lossy().into_owned());
            vec![proof_json(&name, &proof)]
        }
    };
    let all_valid = entries.iter().all(|e| e["valid"] == Value::Bool(true));
    let out = json!({ "entries": entries });
    emit(format, &out, || {
        let mut s = String::new();
        for e in out["entries"].as_array().expect("array") {
            let name = e["name"].as_str().unwrap_or_default();
            match e["error"].as_str() {
                None => {
                    let _ = writeln!(s, "{name}: valid, proves {}", e["conclusion"].as_str().unwrap_or_default());
                }
                Some(err) => {
                    let _ = writeln!(s, "{name}: INVALID: {err}");
                }
            }
        }
        s
    });
    Ok(if all_valid { 0 } else { 1 })
}

fn entry_json(entry: &CorpusEntry) -> Value {
    let result = entry.check();
    let open: Vec<String> = check_nd(&entry.proof)
        .map(|open| open.iter().map(|o| o.formula.to_string()).collect())
        .unwrap_or_default();
    json!({
        "name": entry.name,
        "valid": result.is_ok(),
        "conclusion": entry.conclusion.to_string(),
        "open_assumptions": open,
        "error": result.err().map(|e| e.to_string()),
    })
}

fn proof_json(name: &str, proof: &NdProof) -> Value {
    let result = check_nd(proof);
    json!({
        "name": name,
        "valid": result.is_ok(),
        "conclusion": proof.formula.to_string(),
        "open_assumptions": result.as_ref().map(|o| o.iter().map(|a| a.formula.to_string()).collect::<Vec<_>>()).unwrap_or_default(),
        "error": result.err().map(|e| e.to_string()),
    })
}

fn toy_cmd(
    format: Format,
    formula: &str,
    atoms: &[String],
    rules: Option<&Path>,
    assumptions: &[String],
) -> Result<u8, CliError> {
    let sig = Signature::arithmetic();
    let parse = |text: &str| parse_formula(text, &sig).map_err(|e| data(format!("`{text}`: {e}")));
    let f = parse(formula)?;
    let delta = assumptions.iter().map(|a| parse(a)).collect::<Result<Vec<_>, _>>()?;
    let base = match rules {
        Some(path) => parse_rule_file(&read(path)?, "toy").map_err(|e| data(format!("{}: {e}", path.display())))?,
        None => parse_rule_file("", "empty").expect("empty file parses"),
    };
    let atoms: Vec<String> = if atoms.is_empty() {
        let mut found = f.props();
        for d in &delta {
            found.extend(d.props());
        }
        for s in base.schemas() {
            for a in s.premises().iter().chain(match s.conclusion() {
                basesem::rulebase::Conclusion::Atom(c) => Some(c),
                basesem::rulebase::Conclusion::Any => None,
            }) {
                if let Atom::Prop(p) = a {
                    found.insert(p.clone());
                }
            }
        }
        found.into_iter().collect()
    } else {
        atoms.to_vec()
    };
    let u = ToyUniverse::new(&atoms).map_err(|e| usage(e.to_string()))?;
    let verdict = if delta.is_empty() {
        toy_support(&u, &base, &f)
    } else {
        toy_entails(&u, &base, &delta, &f)
    }
    .map_err(|e| usage(e.to_string()))?;
    let recheck = match &verdict {
        SupportVerdict::Refuted(cx) => {
            let sem = ToySemantics::new(&u).map_err(|e| usage(e.to_string()))?;
            let mask = u.base_mask(&base).map_err(|e| usage(e.to_string()))?;
            Some(sem.recheck(mask, &delta, &f, cx))
        }
        _ => None,
    };
    let out = json!({
        "universe": u.atoms(),
        "base": u.render_mask(u.base_mask(&base).map_err(|e| usage(e.to_string()))?),
        "formula": f.to_string(),
        "assumptions": delta.iter().map(Formula::to_string).collect::<Vec<_>>(),
        "result": verdict,
        "recheck": recheck,
    });
    emit(format, &out, || support_text(&verdict));
    Ok(support_code(&verdict))
}

#[derive(Serialize)]
struct ProbeFailure {
    term: String,
    goal: String,
    verdict: &'static str,
    reason: Value,
}

#[derive(Serialize)]
struct ProbeReport {
    base: String,
    term_size: usize,
    samples: u64,
    seed: u64,
    budget: Budget,
    terms: usize,
    derivable: usize,
    gap: bool,
    failures: Vec<ProbeFailure>,
}

fn probe_cmd(format: Format, base: &BaseArgs, term_size: usize, search: &SearchArgs, samples: u64, seed: u64) -> Result<u8, CliError> {
    let selected = base.select(BaseKind::A)?;
    let base = selected.base();
    let sig = selected.signature();
    let budget = search.budget();
    let mut terms = closed_terms_upto(&sig, term_size);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        terms.push(random_closed_term(&mut rng, &sig, 2 * term_size));
    }
    let mut derivable = 0;
    let mut failures = Vec::new();
    for t in &terms {
        let value = eval_value(t).map_err(|e| data(e.to_string()))?;
        let goal = Atom::eq(t.clone(), Term::numeral(value));
        let verdict = derive(&base, &[], &goal, budget).map_err(|e| data(e.to_string()))?;
        match verdict {
            DeriveVerdict::Derivable(_) => derivable += 1,
            DeriveVerdict::NotDerivable(ev) => failures.push(ProbeFailure {
                term: t.to_string(),
                goal: goal.to_string(),
                verdict: "NotDerivable",
                reason: serde_json::to_value(ev).expect("serializes"),
            }),
            DeriveVerdict::Unknown(r) => failures.push(ProbeFailure {
                term: t.to_string(),
                goal: goal.to_string(),
                verdict: "Unknown",
                reason: serde_json::to_value(r).expect("serializes"),
            }),
        }
    }
    let report = ProbeReport {
        base: base.name().to_string(),
        term_size,
        samples,
        seed,
        budget,
        terms: terms.len(),
        derivable,
        gap: !failures.is_empty(),
        failures,
    };
    emit(format, &report, || {
        let mut s = format!(
            "{} of {} normalization goals derivable over {} (term size <= {})\n",
            report.derivable, report.terms, report.base, report.term_size
        );
        for f in &report.failures {
            let _ = writeln!(s, "  {}: {}", f.verdict, f.goal);
        }
        s
    });
    Ok(0)
}
