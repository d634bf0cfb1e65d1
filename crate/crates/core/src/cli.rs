//! Command-line front end. [`run`] parses arguments and returns the exit
//! code with everything that would be written to stdout and stderr.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::engine::{detect_collapse, Bounds, ClosedTheory, EngineError, Preset, TheoryConfig, DEFAULT_CAP};
use crate::frontend::{
    parse_arrow, parse_formula, parse_sequent, parse_signature, policy_entry, sequent_to_arrow_type, PremisePolicy,
};
use crate::proofs::{check_script, parse_scripts, Verdict, BUNDLED};
use crate::semantics::{
    eval_finite_model, interpret_cartesian, interpret_symmetric, FiniteModel, FunctionTable, LeafBijection, Value,
};
use crate::term::{typecheck, ArrowTerm, Signature};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_RESOURCE_LIMIT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Oracle {
    Semantics,
    Closure,
    Model,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Sequence,
    Multiset,
    Set,
}

impl From<PolicyArg> for PremisePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Sequence => PremisePolicy::Sequence,
            PolicyArg::Multiset => PremisePolicy::Multiset,
            PolicyArg::Set => PremisePolicy::Set,
        }
    }
}

/// Global options and one subcommand.
#[derive(Debug, Parser)]
#[command(name = "premset", version, about = "Identity of deductions in free cartesian and symmetric associative categories")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// cartesian, cartesian-top or sym.
    #[arg(long, global = true, default_value = "cartesian")]
    pub theory: Preset,
    /// Signature file with `letter p` and `arrow f : p -> p` lines.
    #[arg(long, global = true)]
    pub sig: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub emit: Emit,
    /// Seed for randomized model tables.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest term size of the bounded universe.
    #[arg(long, global = true, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
    pub size: u64,
    /// Largest formula depth of the bounded universe.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    /// Largest number of universe terms.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse an arrow term, sequent or formula and print its normal form.
    Parse { text: String },
    /// Decide whether two arrow terms are equal.
    Equal {
        left: String,
        right: String,
        #[arg(long, value_enum)]
        oracle: Option<Oracle>,
        /// Run every applicable oracle and fail on disagreement.
        #[arg(long)]
        cross_check: bool,
    },
    /// Saturate a bounded universe and report what the assumptions collapse.
    Collapse {
        /// `iso <term>` or `<term> = <term>`; repeatable.
        #[arg(long)]
        assume: Vec<String>,
        /// Generators as `f:p->p,g:p->p`.
        #[arg(long)]
        gens: Option<String>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Check proof scripts; the bundled scripts when no file is given.
    Prove { file: Option<PathBuf> },
    /// Show how premise policies treat sequents.
    PolicyReport {
        sequents: Vec<String>,
        /// Read sequents from a file, one per line.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Substitution `q=p`.
        #[arg(long)]
        subst: Option<String>,
        /// Restrict to one policy.
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(msg: impl std::fmt::Display, code: i32) -> Outcome {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => execute(&cfg),
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: if e.use_stderr() { String::new() } else { e.to_string() },
            stderr: if e.use_stderr() { e.to_string() } else { String::new() },
        },
    }
}

pub fn execute(cfg: &RunConfig) -> Outcome {
    let result = match &cfg.command {
        Command::Parse { text } => cmd_parse(cfg, text),
        Command::Equal {
            left,
            right,
            oracle,
            cross_check,
        } => cmd_equal(cfg, left, right, *oracle, *cross_check),
        Command::Collapse { assume, gens, timing } => cmd_collapse(cfg, assume, gens.as_deref(), *timing),
        Command::Prove { file } => cmd_prove(cfg, file.as_ref()),
        Command::PolicyReport {
            sequents,
            file,
            subst,
            policy,
        } => cmd_policy_report(cfg, sequents, file.as_ref(), subst.as_deref(), *policy),
    };
    result.unwrap_or_else(|e| e)
}

type CmdResult = Result<Outcome, Outcome>;

fn fail(e: impl std::fmt::Display) -> Outcome {
    Outcome::error(e, EXIT_FAILURE)
}

fn engine_fail(e: EngineError) -> Outcome {
    let code = match e {
        EngineError::ResourceLimit { .. } => EXIT_RESOURCE_LIMIT,
        _ => EXIT_FAILURE,
    };
    Outcome::error(e, code)
}

fn bounds(cfg: &RunConfig) -> Bounds {
    Bounds {
        cap: cfg.cap,
        ..Bounds::new(cfg.size as usize, cfg.depth as usize)
    }
}

fn emit(cfg: &RunConfig, text: String, value: serde_json::Value, code: i32) -> Outcome {
    let stdout = match cfg.emit {
        Emit::Text => text,
        Emit::Json => {
            let mut v = value;
            if let serde_json::Value::Object(m) = &mut v {
                m.insert("schema".into(), json!(1));
            }
            serde_json::to_string_pretty(&v).expect("reports serialize") + "\n"
        }
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

fn signature(cfg: &RunConfig, terms: &[&ArrowTerm]) -> Result<Signature, Outcome> {
    let mut sig = match &cfg.sig {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
            parse_signature(&text).map_err(fail)?
        }
        None => Signature::with_letters(["p"]),
    };
    let cover = Signature::covering(terms.iter().copied());
    sig.letters.extend(cover.letters);
    for g in cover.arrows {
        if sig.arrow(&g.name).is_none() {
            sig.add_arrow(g.name, g.source, g.target).map_err(fail)?;
        }
    }
    Ok(sig)
}

fn cmd_parse(cfg: &RunConfig, text: &str) -> CmdResult {
    let (kind, printed, extra) = if let Ok(t) = parse_arrow(text) {
        let sig = signature(cfg, &[&t])?;
        let (s, tg) = typecheck(&t, &sig).map_err(fail)?;
        ("arrow", t.to_string(), json!({ "source": s.to_string(), "target": tg.to_string(), "size": t.size() }))
    } else if let Ok(s) = parse_sequent(text) {
        let (a, b) = sequent_to_arrow_type(&s, PremisePolicy::Sequence);
        ("sequent", s.to_string(), json!({ "source": a.to_string(), "target": b.to_string() }))
    } else {
        let f = parse_formula(text).map_err(fail)?;
        ("formula", f.to_string(), json!({ "depth": f.depth() }))
    };
    let mut text_out = format!("{kind}: {printed}\n");
    if let Some(m) = extra.as_object() {
        for (k, v) in m {
            text_out += &format!("  {k}: {}\n", v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()));
        }
    }
    let mut value = json!({ "kind": kind, "printed": printed });
    if let (Some(dst), Some(src)) = (value.as_object_mut(), extra.as_object()) {
        dst.extend(src.clone());
    }
    Ok(emit(cfg, text_out, value, EXIT_OK))
}

/// One oracle's answer and its evidence.
#[derive(Clone, Debug, Serialize)]
pub struct OracleVerdict {
    pub oracle: Oracle,
    pub equal: bool,
    /// Whether `equal == false` refutes equality; bounded closure only
    /// fails to prove.
    pub conclusive: bool,
    pub evidence: String,
}

fn semantics_verdict(theory: Preset, a: &ArrowTerm, b: &ArrowTerm) -> Option<OracleVerdict> {
    if !a.is_structural() || !b.is_structural() {
        return None;
    }
    let (equal, evidence) = if theory.is_cartesian() {
        let (ma, mb) = (interpret_cartesian(a).ok()?, interpret_cartesian(b).ok()?);
        match ma.first_difference(&mb) {
            None => (true, "same occurrence map".to_string()),
            Some((leaf, x, y)) => (false, format!("target leaf {leaf} copies source leaf {x} on the left and {y} on the right")),
        }
    } else {
        let (ma, mb) = (interpret_symmetric(a).ok()?, interpret_symmetric(b).ok()?);
        if ma == mb {
            (true, "same leaf bijection".to_string())
        } else {
            let show = |m: &LeafBijection| {
                m.links().iter().map(|l| format!("{}<-{}", l.target, l.source)).collect::<Vec<_>>().join(" ")
            };
            (false, format!("leaf bijections differ: [{}] vs [{}]", show(&ma), show(&mb)))
        }
    };
    Some(OracleVerdict {
        oracle: Oracle::Semantics,
        equal,
        conclusive: true,
        evidence,
    })
}

fn closure_verdict(cfg: &RunConfig, sig: &Signature, a: &ArrowTerm, b: &ArrowTerm) -> Result<OracleVerdict, Outcome> {
    let theory = TheoryConfig::new(cfg.theory, sig.clone()).map_err(engine_fail)?;
    let closed = ClosedTheory::build(&theory, bounds(cfg), &[a.clone(), b.clone()]).map_err(engine_fail)?;
    let ids = |t: &ArrowTerm| {
        let n = closed.universe.find_term(t).expect("seeded terms are in the universe");
        closed.partition.rep[n as usize]
    };
    let (ca, cb) = (ids(a), ids(b));
    Ok(OracleVerdict {
        oracle: Oracle::Closure,
        equal: ca == cb,
        conclusive: false,
        evidence: format!("classes {ca} and {cb} in a universe of {} terms", closed.universe.len()),
    })
}

/// Two-element carriers; generator tables are drawn from `seed`.
fn model_verdict(seed: u64, sig: &Signature, a: &ArrowTerm, b: &ArrowTerm) -> Result<OracleVerdict, Outcome> {
    let mut m = FiniteModel::uniform(sig.letters.iter().map(String::as_str), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for g in &sig.arrows {
        let outputs = m.elements(&g.target);
        let rows: Vec<(Value, Value)> = m
            .elements(&g.source)
            .into_iter()
            .map(|x| (x, outputs[rng.gen_range(0..outputs.len())].clone()))
            .collect();
        m = m.with_table(&g.name, rows);
    }
    let ta = eval_finite_model(a, &m).map_err(fail)?;
    let tb = eval_finite_model(b, &m).map_err(fail)?;
    let (equal, evidence) = match ta.first_difference(&tb) {
        None => (true, "same table on two-element carriers".to_string()),
        Some(x) => {
            let out = |t: &FunctionTable| t.rows.iter().find(|r| &r.0 == x).map(|r| r.1.to_string()).unwrap_or_default();
            (false, format!("input {x} goes to {} on the left and {} on the right", out(&ta), out(&tb)))
        }
    };
    Ok(OracleVerdict {
        oracle: Oracle::Model,
        equal,
        // Two-element carriers separate distinct structural maps; one table
        // choice for generators can only refute.
        conclusive: !equal || (a.is_structural() && b.is_structural()),
        evidence,
    })
}

fn cmd_equal(cfg: &RunConfig, left: &str, right: &str, oracle: Option<Oracle>, cross: bool) -> CmdResult {
    let a = parse_arrow(left).map_err(fail)?;
    let b = parse_arrow(right).map_err(fail)?;
    let sig = signature(cfg, &[&a, &b])?;
    let ta = typecheck(&a, &sig).map_err(fail)?;
    let tb = typecheck(&b, &sig).map_err(fail)?;
    if ta != tb {
        return Err(fail(format!("{a} : {} -> {} and {b} : {} -> {} are not parallel", ta.0, ta.1, tb.0, tb.1)));
    }
    let structural = a.is_structural() && b.is_structural();
    let chosen: Vec<Oracle> = if cross {
        let mut v = vec![Oracle::Closure, Oracle::Model];
        if structural {
            v.insert(0, Oracle::Semantics);
        }
        v
    } else {
        vec![oracle.unwrap_or(if structural { Oracle::Semantics } else { Oracle::Closure })]
    };
    let mut verdicts = Vec::new();
    for o in chosen {
        verdicts.push(match o {
            Oracle::Semantics => semantics_verdict(cfg.theory, &a, &b)
                .ok_or_else(|| fail("the semantics oracle needs structural terms of the chosen theory"))?,
            Oracle::Closure => closure_verdict(cfg, &sig, &a, &b)?,
            Oracle::Model => model_verdict(cfg.seed, &sig, &a, &b)?,
        });
    }
    // Conclusive answers must agree, and no bounded proof may contradict a refutation.
    let refuted = verdicts.iter().any(|v| !v.equal && v.conclusive);
    let proved = verdicts.iter().any(|v| v.equal && (v.conclusive || v.oracle == Oracle::Closure));
    let disagreement = refuted && proved;
    let equal = verdicts[0].equal;
    let mut text = format!("{}\n", if equal { "EQUAL" } else { "NOT EQUAL" });
    for v in &verdicts {
        let tag = match (v.equal, v.conclusive) {
            (true, _) => "equal",
            (false, true) => "not equal",
            (false, false) => "not proved at bound",
        };
        text += &format!("  {:?}: {tag}; {}\n", v.oracle, v.evidence);
    }
    if disagreement {
        text += "  ORACLES DISAGREE\n";
    }
    let value = json!({
        "left": a.to_string(),
        "right": b.to_string(),
        "theory": cfg.theory,
        "equal": equal,
        "verdicts": verdicts,
        "disagreement": disagreement,
    });
    let code = if disagreement { EXIT_FAILURE } else { EXIT_OK };
    let mut out = emit(cfg, text, value, code);
    if disagreement {
        out.stderr = "error: oracles disagree\n".into();
    }
    Ok(out)
}

fn parse_gens(list: &str, sig: &mut Signature) -> Result<(), Outcome> {
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, ty) = item
            .split_once(':')
            .ok_or_else(|| fail(format!("expected `name:source->target`, found `{item}`")))?;
        let (s, t) = ty
            .split_once("->")
            .ok_or_else(|| fail(format!("expected `->` in `{item}`")))?;
        let (s, t) = (parse_formula(s).map_err(fail)?, parse_formula(t).map_err(fail)?);
        for l in s.letters().into_iter().chain(t.letters()) {
            sig.letters.insert(l.to_string());
        }
        sig.add_arrow(name.trim(), s, t).map_err(fail)?;
    }
    Ok(())
}

fn cmd_collapse(cfg: &RunConfig, assume: &[String], gens: Option<&str>, timing: bool) -> CmdResult {
    let mut sig = signature(cfg, &[])?;
    if let Some(g) = gens {
        parse_gens(g, &mut sig)?;
    }
    for a in assume {
        let body = a.trim().strip_prefix("iso ").unwrap_or(a);
        for side in body.split('=') {
            let t = parse_arrow(side.trim()).map_err(fail)?;
            for l in Signature::covering([&t]).letters {
                if l.chars().any(|c| c.is_ascii_lowercase()) {
                    sig.letters.insert(l);
                }
            }
        }
    }
    let mut theory = TheoryConfig::new(cfg.theory, sig).map_err(engine_fail)?;
    for a in assume {
        theory.assume(a).map_err(engine_fail)?;
    }
    let start = Instant::now();
    let mut report = detect_collapse(&theory, bounds(cfg)).map_err(engine_fail)?;
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    let mut text = format!(
        "theory {} at size {} depth {}: {} terms, {} classes ({} with axioms alone)\n",
        report.theory,
        report.bounds.size,
        report.bounds.depth,
        report.universe_size,
        report.class_count_after,
        report.class_count_before
    );
    for a in &report.assumptions {
        text += &format!("  assume {a}\n");
    }
    text += &format!("preorder at bound: {}\n", report.preorder_at_bound);
    text += &format!("merged by assumptions: {}\n", report.merged_count);
    text += &format!("distinct structural classes sharing a hom-set: {}\n", report.structural_distinct_count);
    for w in report.structural_witnesses.iter().take(5) {
        text += &format!("  {} != {}\n", w.left, w.right);
    }
    text += &format!("distinct classes involving generators: {}\n", report.generator_distinct_count);
    for w in report.generator_witnesses.iter().take(5) {
        text += &format!("  {} != {}\n", w.left, w.right);
    }
    text += &format!(
        "generator balance: {}{}\n",
        if report.balance.holds { "holds" } else { "violated" },
        if report.balance_expected { "" } else { " (not an invariant of this theory)" }
    );
    if let Some(ms) = report.elapsed_ms {
        text += &format!("elapsed: {ms} ms\n");
    }
    let value = serde_json::to_value(&report).expect("reports serialize");
    Ok(emit(cfg, text, value, EXIT_OK))
}

fn cmd_prove(cfg: &RunConfig, file: Option<&PathBuf>) -> CmdResult {
    let text = match file {
        Some(p) => std::fs::read_to_string(p).map_err(|e| fail(format!("{}: {e}", p.display())))?,
        None => BUNDLED.to_string(),
    };
    let scripts = parse_scripts(&text).map_err(fail)?;
    let verdicts: Vec<Verdict> = scripts.iter().map(check_script).collect();
    let mut out_text = String::new();
    for v in &verdicts {
        match &v.failure {
            None => out_text += &format!("PASS {}\n", v.script),
            Some(f) => {
                let at = f.step.map(|s| format!("line {s}")).unwrap_or_else(|| "goal".into());
                out_text += &format!("FAIL {} at {at}: {}\n", v.script, f.error);
            }
        }
    }
    let failed = verdicts.iter().filter(|v| !v.accepted).count();
    out_text += &format!("{} scripts, {} failed\n", verdicts.len(), failed);
    let value = json!({ "scripts": verdicts, "failed": failed });
    let mut out = emit(cfg, out_text, value, if failed == 0 { EXIT_OK } else { EXIT_FAILURE });
    if scripts.is_empty() {
        out.stderr = "warning: no scripts found; nothing to check\n".into();
    }
    Ok(out)
}

fn cmd_policy_report(
    cfg: &RunConfig,
    sequents: &[String],
    file: Option<&PathBuf>,
    subst: Option<&str>,
    policy: Option<PolicyArg>,
) -> CmdResult {
    let mut lines: Vec<(String, String)> = sequents.iter().enumerate().map(|(i, s)| (format!("arg {}", i + 1), s.clone())).collect();
    if let Some(p) = file {
        let text = std::fs::read_to_string(p).map_err(|e| fail(format!("{}: {e}", p.display())))?;
        for (i, l) in text.lines().enumerate() {
            let l = l.split('#').next().unwrap_or("").trim();
            if !l.is_empty() {
                lines.push((format!("line {}", i + 1), l.to_string()));
            }
        }
    }
    let subst = match subst {
        Some(s) => {
            let (from, to) = s
                .split_once('=')
                .ok_or_else(|| fail(format!("expected `--subst q=p`, found `{s}`")))?;
            Some((from.trim().to_string(), to.trim().to_string()))
        }
        None => None,
    };
    let policies: Vec<PremisePolicy> = match policy {
        Some(p) => vec![p.into()],
        None => PremisePolicy::ALL.to_vec(),
    };
    let mut entries = Vec::new();
    let mut errors: BTreeMap<String, String> = BTreeMap::new();
    let mut text = String::new();
    for (origin, line) in &lines {
        let s = match parse_sequent(line) {
            Ok(s) => s,
            Err(e) => {
                text += &format!("{origin}: error: {e}\n");
                errors.insert(origin.clone(), e.to_string());
                continue;
            }
        };
        let mut sig = signature(cfg, &[])?;
        for f in s.premises.iter().chain([&s.conclusion]) {
            sig.letters.extend(f.letters().into_iter().map(str::to_string));
        }
        if let Some((_, to)) = &subst {
            sig.letters.insert(to.clone());
        }
        for &pol in &policies {
            match policy_entry(&s, pol, subst.as_ref().map(|(a, b)| (a.as_str(), b.as_str())), &sig) {
                Ok(e) => {
                    text += &format!("{}  [{}]  normalized: {}\n", e.input, e.policy, e.normalized);
                    if e.thinning_invisible {
                        text += "    thinning of the last premise is invisible\n";
                    }
                    if e.contraction_invisible == Some(true) {
                        text += "    contraction is invisible\n";
                    }
                    if let Some(sub) = &e.substitution {
                        text += &format!("    {}:={} gives {}, normalized {}\n", sub.from, sub.to, sub.substituted, sub.normalized);
                        if sub.shrank {
                            text += "    premise collection shrank\n";
                        }
                        if sub.thinning_invisible {
                            text += "    thinning invisible after substitution\n";
                        }
                        if sub.contraction_invisible == Some(true) {
                            text += "    contraction invisible after substitution\n";
                        }
                    }
                    entries.push(e);
                }
                Err(e) => {
                    text += &format!("{origin}: error: {e}\n");
                    errors.insert(origin.clone(), e.to_string());
                }
            }
        }
    }
    let value = json!({ "entries": entries, "errors": errors });
    let code = if errors.is_empty() { EXIT_OK } else { EXIT_FAILURE };
    Ok(emit(cfg, text, value, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("premset").chain(args.iter().copied()))
    }

    #[test]
    fn projections_are_not_equal() {
        let o = go(&["equal", "p1{p,p}", "p2{p,p}", "--oracle", "semantics"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.starts_with("NOT EQUAL"), "{}", o.stdout);
        assert!(o.stdout.contains("L") && o.stdout.contains("R"), "{}", o.stdout);
    }

    #[test]
    fn parse_errors_exit_nonzero() {
        assert_eq!(go(&["equal", "p1{p", "id{p}"]).code, EXIT_FAILURE);
        assert_eq!(go(&["equal", "p1{p,p}", "id{p}"]).code, EXIT_FAILURE);
    }

    #[test]
    fn resource_limit_has_its_own_code() {
        let o = go(&["collapse", "--size", "9", "--cap", "50"]);
        assert_eq!(o.code, EXIT_RESOURCE_LIMIT, "{o:?}");
    }

    #[test]
    fn json_is_versioned_and_deterministic() {
        let args = ["collapse", "--assume", "iso w{p}", "--size", "5", "--emit", "json"];
        let a = go(&args);
        let b = go(&args);
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(v["schema"], 1);
    }
}
