//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use premset::cli;
use premset::engine::{
    axiom_schemata, detect_collapse, instantiate, Bounds, ClosedTheory, NId, Preset, TheoryConfig,
};
use premset::frontend::parse_arrow;
use premset::proofs::{bundled_scripts, check_script, mutations};
use premset::semantics::{
    decide_equal_cartesian, eval_finite_model, interpret_cartesian, interpret_symmetric, FiniteModel, Value,
};
use premset::term::{ArrowTerm, Formula, Signature};

const PROJECTION_LIMIT: Duration = Duration::from_secs(1);
const W_ISO_LIMIT: Duration = Duration::from_secs(30);
const SYM_LIMIT: Duration = Duration::from_secs(60);
const REPLAY_LIMIT: Duration = Duration::from_secs(10);
const AGREEMENT_LIMIT: Duration = Duration::from_secs(120);
const FUZZ_INSTANCES: usize = 100;
const FUZZ_DEPTH: usize = 4;
const FUZZ_SEED: u64 = 0x5eed;
/// Model evaluation enumerates 2^leaves inputs, so wider sources are
/// checked by the semantics alone.
const FUZZ_MODEL_LEAVES: usize = 8;
/// Pairs of size at most `AGREEMENT_SIZE` are judged inside a universe of
/// size `AGREEMENT_SIZE + 3`.
const AGREEMENT_SIZE: usize = 6;
const AGREEMENT_DEPTH: usize = 2;
const AGREEMENT_CAP: usize = 2_000_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn t(s: &str) -> ArrowTerm {
    parse_arrow(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn p() -> Formula {
    Formula::letter("p")
}

fn theory(preset: Preset, sig: Signature, assume: &[&str]) -> TheoryConfig {
    let mut cfg = TheoryConfig::new(preset, sig).unwrap();
    for a in assume {
        cfg.assume(a).unwrap();
    }
    cfg
}

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let e = start.elapsed();
    check(e < limit, format!("took {e:?}, limit {limit:?}"))
}

fn projection_separation() -> Outcome {
    let start = Instant::now();
    let (k1, k2) = (t("p1{p,p}"), t("p2{p,p}"));
    check(!decide_equal_cartesian(&k1, &k2).unwrap(), "semantics identifies the projections")?;
    let (m1, m2) = (interpret_cartesian(&k1).unwrap(), interpret_cartesian(&k2).unwrap());
    let (_, l, r) = m1.first_difference(&m2).ok_or("occurrence maps coincide")?;
    check((l.to_string(), r.to_string()) == ("L".into(), "R".into()), format!("leaves {l} vs {r}"))?;
    let model = FiniteModel::uniform(["p"], 2);
    let (t1, t2) = (eval_finite_model(&k1, &model).unwrap(), eval_finite_model(&k2, &model).unwrap());
    let at = t1.first_difference(&t2).ok_or("model tables coincide")?;
    check(*at == Value::pair(Value::Atom(0), Value::Atom(1)), format!("first difference at {at}"))?;
    within(start, PROJECTION_LIMIT)?;
    Ok(format!("occurrence maps differ (L vs R), tables differ at {at}"))
}

fn diagonal_identities() -> Outcome {
    let cfg = theory(Preset::Cartesian, Signature::with_letters(["p"]), &[]);
    let pairs = [(t("p1{p,p} . w{p}"), t("id{p}")), (t("p2{p,p} . w{p}"), t("id{p}"))];
    let seeds: Vec<ArrowTerm> = pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    let closed = ClosedTheory::build(&cfg, Bounds::new(7, 2), &seeds).map_err(|e| e.to_string())?;
    for (a, b) in &pairs {
        check(decide_equal_cartesian(a, b).unwrap(), format!("semantics: {a} != {b}"))?;
        check(closed.equal(a, b).unwrap(), format!("closure: {a} != {b}"))?;
        for n in [1, 2, 3] {
            let m = FiniteModel::uniform(["p"], n);
            check(
                eval_finite_model(a, &m).unwrap() == eval_finite_model(b, &m).unwrap(),
                format!("model of size {n}: {a} != {b}"),
            )?;
        }
    }
    Ok("both identities hold under semantics, closure at size 7 and models of size 1..3".into())
}

fn w_iso_collapses() -> Outcome {
    let start = Instant::now();
    let cfg = theory(Preset::Cartesian, Signature::with_letters(["p"]), &["iso w{p}"]);
    let bounds = Bounds::new(7, 2);
    let closed = ClosedTheory::build(&cfg, bounds, &[]).map_err(|e| e.to_string())?;
    check(closed.equal(&t("p1{p,p}"), &t("p2{p,p}")).unwrap(), "projections stay apart")?;
    let report = detect_collapse(&cfg, bounds).map_err(|e| e.to_string())?;
    check(report.preorder_at_bound, "not a preorder at the bound")?;
    check(report.structural_distinct_count == 0, "structural classes remain")?;
    let again = detect_collapse(&cfg, bounds).map_err(|e| e.to_string())?;
    check(
        serde_json::to_string(&report).unwrap() == serde_json::to_string(&again).unwrap(),
        "two runs differ",
    )?;
    within(start, W_ISO_LIMIT)?;
    Ok(format!("{} terms, {} classes, preorder", report.universe_size, report.class_count_after))
}

fn projections_give_w_iso() -> Outcome {
    let cfg = theory(Preset::Cartesian, Signature::with_letters(["p"]), &["p1{p,p} = p2{p,p}"]);
    let (lhs, rhs) = (t("w{p} . p1{p,p}"), t("id{p/\\p}"));
    let closed = ClosedTheory::build(&cfg, Bounds::new(7, 2), &[lhs.clone(), rhs.clone()]).map_err(|e| e.to_string())?;
    check(closed.equal(&lhs, &rhs).unwrap(), "w{p} . p1{p,p} = id{p/\\p} not proved")?;
    let other = t("p1{p,p} . w{p}");
    check(closed.universe.find_term(&other).is_some(), "k1 . w missing")?;
    Ok("w{p} . p1{p,p} = id{p/\\p} proved".into())
}

fn preorder_iff_diagonal_full() -> Outcome {
    let mut rows = 0;
    let mut mismatches = Vec::new();
    for assume in [&[][..], &["iso w{p}"][..], &["p1{p,p} = p2{p,p}"][..]] {
        for gens in [false, true] {
            for (size, depth) in [(5, 2), (7, 1)] {
                let mut sig = Signature::with_letters(["p"]);
                if gens {
                    sig.add_arrow("f", p(), p()).unwrap();
                }
                let cfg = theory(Preset::Cartesian, sig, assume);
                let closed = ClosedTheory::build(&cfg, Bounds::new(size, depth), &[]).map_err(|e| e.to_string())?;
                let r = premset::engine::fullness_of(&closed);
                rows += 1;
                if r.preorder != r.diagonal_full {
                    mismatches.push(format!("{assume:?} gens={gens} size={size} depth={depth}"));
                }
            }
        }
    }
    check(rows >= 8, "grid too small")?;
    check(mismatches.is_empty(), mismatches.join("; "))?;
    Ok(format!("{rows} configurations, 0 mismatches"))
}

fn symmetric_collapse() -> Outcome {
    let start = Instant::now();
    let letters = || Signature::with_letters(["p"]);
    let literal = detect_collapse(&theory(Preset::SymmetricAssociative, letters(), &["c{p,p} = id{p*p}"]), Bounds::new(7, 1))
        .map_err(|e| e.to_string())?;
    check(literal.preorder_at_bound, "c{p,p} = id does not collapse at depth 1")?;

    let mut sig = letters();
    sig.add_arrow("f", p(), p()).unwrap();
    sig.add_arrow("g", p(), p()).unwrap();
    let cfg = theory(Preset::SymmetricAssociative, sig, &["c{B,B} = id{B*B}"]);
    let bounds = Bounds::new(7, 2);
    let report = detect_collapse(&cfg, bounds).map_err(|e| e.to_string())?;
    check(report.structural_distinct_count == 0, format!("{} structural classes remain", report.structural_distinct_count))?;
    check(report.balance.holds, format!("unbalanced union {:?}", report.balance.offending))?;
    let (f, g) = (t("f{p->p}"), t("g{p->p}"));
    let closed = ClosedTheory::build(&cfg, bounds, &[]).map_err(|e| e.to_string())?;
    check(!closed.equal(&f, &g).unwrap(), "f and g merged")?;
    within(start, SYM_LIMIT)?;

    let residue = detect_collapse(&theory(Preset::SymmetricAssociative, letters(), &["c{p,p} = id{p*p}"]), bounds)
        .map_err(|e| e.to_string())?;
    let note = residue
        .structural_witnesses
        .first()
        .map(|w| format!("; literal instance at depth 2 leaves {} residue(s), e.g. {} vs {}", residue.structural_distinct_count, w.left, w.right))
        .unwrap_or_default();
    Ok(format!(
        "structural preorder at size 7 ({} terms), f != g, balance holds{note}",
        report.universe_size
    ))
}

fn proof_replay() -> Outcome {
    let start = Instant::now();
    let scripts = bundled_scripts();
    check(scripts.len() == 12, format!("{} scripts", scripts.len()))?;
    for s in &scripts {
        let v = check_script(s);
        check(v.accepted, format!("{} rejected: {:?}", s.name, v.failure))?;
    }
    let mut total = 0;
    for s in &scripts {
        for (line, m) in mutations(s) {
            total += 1;
            let v = check_script(&m);
            let at = v.failure.as_ref().and_then(|f| f.step);
            check(
                at == Some(line),
                format!("{} line {line} `{}` rejected at {at:?}", s.name, m.steps[line - 1].justification),
            )?;
        }
    }
    within(start, REPLAY_LIMIT)?;
    Ok(format!("12 scripts accepted, {total}/{total} mutants rejected at the mutated line"))
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let cfg = theory(Preset::Cartesian, Signature::with_letters(["p"]), &[]);
    let bounds = Bounds {
        size: AGREEMENT_SIZE + 3,
        depth: AGREEMENT_DEPTH,
        cap: AGREEMENT_CAP,
    };
    let closed = ClosedTheory::build(&cfg, bounds, &[]).map_err(|e| e.to_string())?;
    let u = &closed.universe;
    let small: Vec<NId> = (0..u.len() as NId).filter(|&n| u.size_of(n) as usize <= AGREEMENT_SIZE).collect();
    let maps: Vec<_> = small.iter().map(|&n| interpret_cartesian(&u.term(n)).unwrap()).collect();
    let (mut pairs, mut unsound, mut residue) = (0usize, Vec::new(), Vec::new());
    for i in 0..small.len() {
        for j in i + 1..small.len() {
            if u.ty(small[i]) != u.ty(small[j]) {
                continue;
            }
            pairs += 1;
            let sem = maps[i] == maps[j];
            let cl = closed.partition.same(small[i], small[j]);
            if cl && !sem {
                unsound.push(format!("{} = {}", u.term(small[i]), u.term(small[j])));
            }
            if sem && !cl {
                residue.push(format!("{} = {}", u.term(small[i]), u.term(small[j])));
            }
        }
    }
    check(unsound.is_empty(), format!("unsound: {}", unsound.join("; ")))?;
    check(residue.is_empty(), format!("residue: {}", residue.join("; ")))?;
    within(start, AGREEMENT_LIMIT)?;
    Ok(format!(
        "{pairs} parallel pairs of size <= {AGREEMENT_SIZE} at depth {AGREEMENT_DEPTH} in {} terms: 0 unsound, 0 residue",
        u.len()
    ))
}

fn axiom_fuzzing() -> Outcome {
    let mut schemas = 0;
    let mut instances = 0;
    let mut modelled = 0;
    for preset in Preset::ALL {
        for (i, schema) in axiom_schemata(preset).iter().enumerate() {
            schemas += 1;
            let mut rng = ChaCha8Rng::seed_from_u64(FUZZ_SEED ^ ((preset as u64) << 32) ^ i as u64);
            let mut found = 0;
            let mut attempts = 0;
            while found < FUZZ_INSTANCES {
                attempts += 1;
                check(attempts < 100 * FUZZ_INSTANCES, format!("{preset} {}: too few inhabited draws", schema.name))?;
                let Some((l, r)) = instantiate(schema, &mut rng, &["p", "q"], FUZZ_DEPTH, preset) else { continue };
                found += 1;
                let same = if preset.is_cartesian() {
                    interpret_cartesian(&l).unwrap() == interpret_cartesian(&r).unwrap()
                } else {
                    interpret_symmetric(&l).unwrap() == interpret_symmetric(&r).unwrap()
                };
                check(same, format!("{preset} {}: {l} vs {r} differ in semantics", schema.name))?;
                let m = FiniteModel::uniform(["p", "q"], 2);
                let (source, _) = l.endpoints().unwrap();
                if source.leaf_count() <= FUZZ_MODEL_LEAVES {
                    modelled += 1;
                    check(
                        eval_finite_model(&l, &m).unwrap() == eval_finite_model(&r, &m).unwrap(),
                        format!("{preset} {}: {l} vs {r} differ in the model", schema.name),
                    )?;
                }
            }
            instances += found;
        }
    }
    Ok(format!(
        "{schemas} schemata x {FUZZ_INSTANCES} instances = {instances} ({modelled} also in the model), 0 failures"
    ))
}

fn policy_demo() -> Outcome {
    let json = |policy: &str| -> Result<serde_json::Value, String> {
        let out = cli::run(["premset", "policy-report", "p, q |- p", "--subst", "q=p", "--policy", policy, "--emit", "json"]);
        check(out.code == 0, format!("exit {}: {}", out.code, out.stderr))?;
        serde_json::from_str(&out.stdout).map_err(|e| e.to_string())
    };
    let set = json("set")?;
    let e = &set["entries"][0];
    let sub = &e["substitution"];
    check(e["thinning_invisible"] == false, "thinning flagged before substitution")?;
    check(sub["substituted"] == "p, p |- p", format!("substituted {}", sub["substituted"]))?;
    check(sub["normalized"] == "p |- p", format!("normalized {}", sub["normalized"]))?;
    check(sub["shrank"] == true && sub["thinning_invisible"] == true, "set policy does not flag invisible thinning")?;
    let seq = json("sequence")?;
    let e = &seq["entries"][0];
    let sub = &e["substitution"];
    let flags = [&e["thinning_invisible"], &sub["thinning_invisible"], &sub["shrank"]];
    check(flags.iter().all(|f| **f == false), "sequence policy raised a flag")?;
    check(e["contraction_invisible"].is_null() && sub["contraction_invisible"] == false, "sequence contraction flag")?;
    Ok("set: p, p |- p collapses to p |- p with thinning invisible; sequence: no flags".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("projection separation", projection_separation),
        ("diagonal identities", diagonal_identities),
        ("invertible diagonal collapses the category", w_iso_collapses),
        ("equal projections make the diagonal invertible", projections_give_w_iso),
        ("preorder iff diagonal full", preorder_iff_diagonal_full),
        ("symmetric collapse", symmetric_collapse),
        ("proof replay", proof_replay),
        ("oracle agreement", oracle_agreement),
        ("axiom soundness fuzzing", axiom_fuzzing),
        ("premise policy demo", policy_demo),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({ms} ms): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
