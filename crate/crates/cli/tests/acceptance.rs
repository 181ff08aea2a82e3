//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use basesem::arith::{audit_base, check_weight_invariant, SchemaAudit};
use basesem::classical::{builtin_corpus, soundness_harness, EntrySemantics, HARNESS_ATOMS};
use basesem::rulebase::{check_derivation, random_forward_derivations};
use basesem::support::{
    fresh_atom_sweep, induction_check, numerically_definite_upto, omega_check, ArithBounds, CheckReport, Stage,
    ToySemantics, ToyUniverse,
};
use basesem::syntax::{closed_terms_upto, parse_formula, random_closed_term, Atom, Formula, Term};
use basesem::{builtin_base, decide_equation, eval_value, weight, BaseKind, Derivation, EquationVerdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 0xACCE97;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn run_json(args: &[&str]) -> Result<(i32, Value, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_basesem"))
        .arg("--format")
        .arg("json")
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let code = out.status.code().ok_or("killed by signal")?;
    let v = serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: bad json: {e}"))?;
    Ok((code, v, elapsed))
}

fn consistency(base: &[&str]) -> Outcome {
    let mut args = vec!["consistency", "--base"];
    args.extend_from_slice(base);
    let (code, v, elapsed) = run_json(&args)?;
    let name = base.join(" ");
    ensure!(code == 0, "{name}: exit {code}");
    ensure!(v["witness"] == "S(0) = 0", "{name}: witness {}", v["witness"]);
    ensure!(v["witness_weights"] == serde_json::json!([1, 0]), "{name}: weights {}", v["witness_weights"]);
    ensure!(v["bot_clause_status"] == "refuted", "{name}: bot {}", v["bot_clause_status"]);
    ensure!(v["search_verdict"] == "NotDerivable", "{name}: search {}", v["search_verdict"]);
    ensure!(v["search_stats"]["depth"] == 12, "{name}: depth {}", v["search_stats"]["depth"]);
    ensure!(elapsed < Duration::from_secs(5), "{name}: took {elapsed:?}");
    Ok(format!("{name} in {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_1() -> Outcome {
    let a = consistency(&["A_PLUS"])?;
    let b = consistency(&["A_EXT", "9"])?;
    Ok(format!("{a}; {b}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for kind in [BaseKind::APlus, BaseKind::AExt(5)] {
        let base = builtin_base(kind);
        let derivations = random_forward_derivations(&base, 10_000, 6, SEED);
        ensure!(derivations.len() == 10_000, "{kind}: only {} derivations", derivations.len());
        for d in &derivations {
            check_derivation(&base, d, &HashSet::new()).map_err(|e| format!("{kind}: generator produced {e}"))?;
            check_weight_invariant(d).map_err(|e| format!("{kind}: {e}"))?;
        }
        total += derivations.len();
        for (name, audit) in audit_base(&base) {
            match (name.as_str(), &audit) {
                ("pa1", SchemaAudit::Vacuous { .. }) => {}
                ("pa1", other) => return Err(format!("{kind}: pa1 audited as {other:?}")),
                (_, SchemaAudit::Preserves { .. }) => {}
                (_, other) => return Err(format!("{kind}: {name} audited as {other:?}")),
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{total} derivations, audits clean, {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_3() -> Outcome {
    let sig = BaseKind::AExt(3).signature();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut terms: Vec<Term> = (0..5_000).map(|_| random_closed_term(&mut rng, &sig, 30)).collect();
    ensure!(terms.iter().all(|t| t.size() <= 30), "random term above size 30");
    terms.extend(closed_terms_upto(&sig, 7));
    for t in &terms {
        let w = weight(t).map_err(|e| e.to_string())?;
        let v = eval_value(t).map_err(|e| e.to_string())?;
        ensure!(w.0 == v, "{t}: weight {w} value {v}");
    }
    Ok(format!("{} terms", terms.len()))
}

fn definite(kind: BaseKind, size: usize) -> Result<usize, String> {
    let report = numerically_definite_upto(kind, size).map_err(|e| e.to_string())?;
    ensure!(report.failures.is_empty(), "{kind}: {:?}", report.failures);
    let base = builtin_base(kind);
    let terms = closed_terms_upto(&kind.signature(), size);
    ensure!(report.terms == terms.len() && report.certified == terms.len(), "{kind}: {} of {}", report.certified, terms.len());
    let mut conclusions = HashSet::new();
    for rec in &report.instances {
        let r = rec.certificate_ref.as_deref().ok_or(format!("{kind}: {} has no certificate", rec.instance))?;
        let d = report.certificate(r).ok_or(format!("{kind}: dangling {r}"))?;
        check_derivation(&base, d, &HashSet::new()).map_err(|e| format!("{kind}: {}: {e}", rec.instance))?;
        conclusions.insert(d.atom.clone());
    }
    for t in &terms {
        let n = eval_value(t).map_err(|e| e.to_string())?;
        ensure!(conclusions.contains(&Atom::eq(t.clone(), Term::numeral(n))), "{kind}: no certificate for {t} = {n}");
    }
    Ok(terms.len())
}

fn criterion_4() -> Outcome {
    let a = definite(BaseKind::APlus, 7)?;
    let b = definite(BaseKind::AExt(3), 5)?;
    Ok(format!("{a} terms over A_PLUS, {b} over A_EXT(3)"))
}

fn schema(text: &str) -> Formula {
    parse_formula(text, &BaseKind::APlus.signature()).expect("schema parses")
}

fn verified(report: &CheckReport) -> Result<usize, String> {
    ensure!(report.passed, "{} {} failed: {:?}", report.check, report.schema, report.failure);
    report.verify_certificates().map_err(|(r, e)| format!("{} {}: certificate {r}: {e}", report.check, report.schema))
}

fn criterion_5() -> Outcome {
    let mut certs = 0;
    let phis = ["x + 0 = x", "0 + x = x", "x * 0 = 0", "0 * x = 0", "x + S(0) = S(x)"];
    for phi in phis {
        let f = schema(phi);
        certs += verified(&omega_check(BaseKind::APlus, &f, 25, 6).map_err(|e| e.to_string())?)?;
        certs += verified(&induction_check(BaseKind::APlus, &f, 25, 6).map_err(|e| e.to_string())?)?;
    }
    let omega = omega_check(BaseKind::APlus, &schema("x = S(x)"), 25, 6).map_err(|e| e.to_string())?;
    let fail = omega.failure.ok_or("x = S(x) passed omega_check")?;
    ensure!(
        fail.stage == Stage::Numeral && fail.n == Some(0) && fail.witness == [0, 1],
        "x = S(x): {fail:?}"
    );
    let ind = induction_check(BaseKind::APlus, &schema("x = 0"), 25, 6).map_err(|e| e.to_string())?;
    let fail = ind.failure.ok_or("x = 0 passed induction_check")?;
    ensure!(fail.stage == Stage::Step && fail.n == Some(0) && fail.witness == [1, 0], "x = 0: {fail:?}");
    Ok(format!("{} schemas, {certs} certificates replayed, controls fail as expected", phis.len()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let u = ToyUniverse::new(&["p", "q"]).map_err(|e| e.to_string())?;
    let sem = ToySemantics::new(&u).map_err(|e| e.to_string())?;
    let full = u.full_mask();
    ensure!(full == 255, "2-atom universe has {} bases", full + 1);
    let formulas = u.formulas_upto(3);
    let mut pairs = 0u64;
    for f in &formulas {
        let s = sem.support_set(f).map_err(|e| e.to_string())?;
        for b in 0..=full {
            if !s.contains(b) {
                continue;
            }
            // Every superset of b, by submask enumeration of its complement.
            let free = full & !b;
            let mut extra = free;
            loop {
                pairs += 1;
                ensure!(s.contains(b | extra), "{f}: supported at {b:#x}, not at {:#x}", b | extra);
                if extra == 0 {
                    break;
                }
                extra = (extra - 1) & free;
            }
        }
    }
    for law in ["((p -> q) -> p) -> p", "bot -> p", "~~p -> p", "((q -> p) -> q) -> q", "bot -> q", "~~q -> q"] {
        let f = parse_formula(law, &BaseKind::APlus.signature()).map_err(|e| e.to_string())?;
        let s = sem.support_set(&f).map_err(|e| e.to_string())?;
        ensure!(s.is_full(), "{law} fails in {} bases", 256 - s.count());
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!("{} formulas, {pairs} ordered pairs, {:.2}s", formulas.len(), elapsed.as_secs_f64()))
}

fn criterion_7() -> Outcome {
    let corpus = builtin_corpus();
    ensure!(corpus.len() >= 8, "corpus has {} entries", corpus.len());
    let report = soundness_harness(&corpus, &HARNESS_ATOMS, &ArithBounds::default()).map_err(|e| e.to_string())?;
    ensure!(report.is_sound(), "violations: {:?}", report.violations);
    let mut three_atom = 0;
    for e in &report.entries {
        ensure!(e.proof_checked, "{}: {:?}", e.name, e.proof_error);
        if let EntrySemantics::Exhaustive { universes } = &e.semantics {
            for u in universes {
                let expected = 1u64 << rule_count(u.universe.len());
                ensure!(u.bases_checked == expected, "{}: {:?} checked {} bases", e.name, u.universe, u.bases_checked);
                if u.universe.len() == 3 {
                    three_atom += 1;
                }
            }
        }
    }
    ensure!(three_atom > 0, "no 3-atom universe ran");
    Ok(format!("{} entries, {three_atom} exhaustive 3-atom runs", report.entries.len()))
}

/// Rules over n atoms: a premise set and a conclusion atom.
fn rule_count(n: usize) -> u32 {
    ((1usize << n) * n) as u32
}

fn criterion_8() -> Outcome {
    let kind = BaseKind::AExt(9);
    let base = builtin_base(kind);
    for i in 1..=9 {
        let c = Term::Const(i);
        match decide_equation(&c, &Term::Zero, kind).map_err(|e| e.to_string())? {
            EquationVerdict::True { certificate } => {
                let d: &Derivation = &certificate;
                check_derivation(&base, d, &HashSet::new()).map_err(|e| format!("c{i}: {e}"))?;
                ensure!(d.atom == Atom::eq(c.clone(), Term::Zero), "c{i}: certificate concludes {}", d.atom);
            }
            other => return Err(format!("c{i} = 0 decided {other:?}")),
        }
    }
    let again = consistency(&["A_EXT", "9"])?;
    Ok(format!("c1..c9 = 0 certified; {again}"))
}

fn mentions_bot(f: &Formula) -> bool {
    match f {
        Formula::Bot => true,
        Formula::Impl(a, b) => mentions_bot(a) || mentions_bot(b),
        Formula::Forall(_, b) => mentions_bot(b),
        Formula::Atom(_) => false,
    }
}

fn criterion_9() -> Outcome {
    let u = ToyUniverse::new(&["p", "q"]).map_err(|e| e.to_string())?;
    let (checked, bad) = fresh_atom_sweep(&u, 2).map_err(|e| e.to_string())?;
    ensure!(checked == 147 * 256, "checked {checked} pairs");
    if let Some(first) = bad.first() {
        let sig = BaseKind::APlus.signature();
        let via_bot = bad
            .iter()
            .filter(|d| parse_formula(&d.formula, &sig).map(|f| mentions_bot(&f)).unwrap_or(false))
            .count();
        return Err(format!(
            "{} of {checked} pairs differ ({via_bot} in formulas mentioning bot); first: {} over {:?}, {} here, {} with a fresh atom",
            bad.len(),
            first.formula,
            first.base,
            first.verdict_here,
            first.verdict_extended
        ));
    }
    Ok(format!("{checked} (base, formula) pairs"))
}

fn criterion_10() -> Outcome {
    let (code, v, elapsed) = run_json(&["probe-fidelity", "--base", "A"])?;
    ensure!(code == 0, "exit {code}");
    let failures = v["failures"].as_array().ok_or("no failures list")?;
    ensure!(v["term_size"] == 5, "term size {}", v["term_size"]);
    ensure!(v["gap"] == !failures.is_empty(), "gap flag disagrees with the list");
    // The gap is real iff some true normalization goal of size <= 5 needs
    // a congruence rule. Check each reported goal is true and that its
    // A_PLUS certificate uses congruence.
    let sig = BaseKind::APlus.signature();
    for f in failures {
        let goal = f["goal"].as_str().ok_or("goal missing")?;
        let atom = basesem::syntax::parse_atom(goal, &sig).map_err(|e| e.to_string())?;
        let (l, r) = atom.sides().ok_or("goal is not an equation")?;
        ensure!(eval_value(l).ok() == eval_value(r).ok(), "{goal} is false");
        match decide_equation(l, r, BaseKind::APlus).map_err(|e| e.to_string())? {
            EquationVerdict::True { certificate } => {
                let uses = ["cg1", "cg2", "cg3", "cg4", "cg5"].iter().any(|c| certificate.uses_rule(c));
                ensure!(uses, "{goal} is certified over A_PLUS without congruence");
            }
            other => return Err(format!("{goal}: {other:?}")),
        }
    }
    let s11 = failures.iter().any(|f| f["goal"] == "S(0) * S(0) = S(0)");
    ensure!(s11, "S(0) * S(0) = S(0) missing from the gap list");
    Ok(format!("{} gap goals of {} terms, {:.2}s", failures.len(), v["terms"], elapsed.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("consistency replay", criterion_1),
        ("weight invariant", criterion_2),
        ("weight equals value", criterion_3),
        ("numerical definiteness", criterion_4),
        ("omega and induction replays", criterion_5),
        ("toy exactness and classicality", criterion_6),
        ("soundness harness", criterion_7),
        ("extended-signature conservativity", criterion_8),
        ("fresh-atom robustness", criterion_9),
        ("fidelity probe", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
