//! Checker for equational proof scripts about an adjunction `F -| G` (unit
//! `gamma`, counit `phi`), the diagonal functor `D` and cartesian structure.
//!
//! A script declares its theory, arrow variables, hypotheses and goal, then
//! lists numbered lines `n. lhs = rhs ; justification`. Every line is
//! type-checked and must follow from its justification; the script is
//! accepted when all lines do and the last one is the goal.
//!
//! Justifications:
//!
//! | form | meaning |
//! |---|---|
//! | `premise`, `hyp <label>`, `line k` | restates that equation |
//! | `sym k`, `trans k m ...` | symmetry, transitivity |
//! | `cong <ref>` | replaces a subterm outside functor applications by a proven equal; `<ref>` is `k`, `premise` or a label |
//! | `cong <Fun> <ref>` | applies a functor to both sides |
//! | `axiom <name>`, `naturality gamma\|phi\|w`, `triangle phi\|gamma`, `functoriality <Fun>` | oriented law |
//! | `hyp preorder` | any two parallel arrows of the base category are equal |
//! | `cancel monic k`, `cancel faithful <Fun> k` | left cancellation of `gamma`, faithfulness |
//! | `witness full <Fun>` | introduces a fresh declared arrow `h` with `<Fun>(h) = rhs` |
//!
//! Rewriting justifications hold when both sides reach a common term within
//! [`REWRITE_BOUND`] steps. With a suffix `@k` they instead rewrite the two
//! sides of line `k` into the two sides of the current line.

pub mod rules;
pub mod syntax;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::term::{ArrowTerm, Formula, Signature};
use rules::{functor_normal, reachable, Axiom, Ctx, Law, Rules};
pub use syntax::{norm, Arr, Equation, Functor, Obj};

/// Longest rewrite sequence explored from each side of a line.
pub const REWRITE_BOUND: usize = 4;

/// Proof scripts shipped with the crate.
pub const BUNDLED: &str = include_str!("../../scripts/adjunction_proofs.eqp");

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum ProofError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("unknown justification: {0}")]
    UnknownJustification(String),
    #[error("step does not follow: {0}")]
    StepDoesNotFollow(String),
    #[error("bad reference: {0}")]
    BadReference(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScriptTheory {
    Adjunction,
    Cartesian,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hyp {
    Faithful(Functor),
    Full(Functor),
    MonicGamma,
    Preorder,
    Eq { label: String, eq: Equation },
}

impl fmt::Display for Hyp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyp::Faithful(k) => write!(f, "faithful {k}"),
            Hyp::Full(k) => write!(f, "full {k}"),
            Hyp::MonicGamma => f.write_str("monic gamma"),
            Hyp::Preorder => f.write_str("preorder"),
            Hyp::Eq { label, eq } => write!(f, "eq {label}: {eq}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub number: usize,
    pub eq: Equation,
    pub justification: String,
    /// Line of the step in its source text.
    pub source_line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Script {
    pub name: String,
    pub theory: ScriptTheory,
    pub vars: Vec<(String, Obj, Obj)>,
    pub hyps: Vec<Hyp>,
    pub premise: Option<Equation>,
    pub goal: Equation,
    pub steps: Vec<Step>,
}

impl Script {
    fn ctx(&self) -> Ctx {
        Ctx {
            vars: self
                .vars
                .iter()
                .map(|(n, s, t)| (n.clone(), (s.clone(), t.clone())))
                .collect(),
        }
    }

    fn has(&self, h: &Hyp) -> bool {
        self.hyps.contains(h)
    }

    fn hyp_eq(&self, label: &str) -> Option<&Equation> {
        self.hyps.iter().find_map(|h| match h {
            Hyp::Eq { label: l, eq } if l == label => Some(eq),
            _ => None,
        })
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "script: {}", self.name)?;
        let theory = match self.theory {
            ScriptTheory::Adjunction => "adjunction",
            ScriptTheory::Cartesian => "cartesian",
        };
        writeln!(f, "theory: {theory}")?;
        for (n, s, t) in &self.vars {
            writeln!(f, "var: {n} : {s} -> {t}")?;
        }
        for h in &self.hyps {
            writeln!(f, "hyp: {h}")?;
        }
        match &self.premise {
            Some(p) => writeln!(f, "goal: {p} => {}", self.goal)?,
            None => writeln!(f, "goal: {}", self.goal)?,
        }
        for s in &self.steps {
            writeln!(f, "{}. {} ; {}", s.number, s.eq, s.justification)?;
        }
        Ok(())
    }
}

fn parse_hyp(text: &str) -> Result<Hyp, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let functor = |w: &str| Functor::parse(w).ok_or_else(|| format!("unknown functor `{w}`"));
    match words.as_slice() {
        ["faithful", k] => Ok(Hyp::Faithful(functor(k)?)),
        ["full", k] => Ok(Hyp::Full(functor(k)?)),
        ["monic", "gamma"] => Ok(Hyp::MonicGamma),
        ["preorder"] => Ok(Hyp::Preorder),
        ["eq", ..] => {
            let (label, eq) = syntax::parse_labelled(text.trim_start()["eq".len()..].trim())?;
            Ok(Hyp::Eq { label, eq })
        }
        _ => Err(format!("unknown hypothesis `{text}`")),
    }
}

#[derive(Default)]
struct Draft {
    name: String,
    theory: Option<ScriptTheory>,
    vars: Vec<(String, Obj, Obj)>,
    hyps: Vec<Hyp>,
    goal: Option<(Option<Equation>, Equation)>,
    steps: Vec<Step>,
    start: usize,
}

impl Draft {
    fn finish(self) -> Result<Script, ProofError> {
        let missing = |what: &str| ProofError::Parse {
            line: self.start,
            msg: format!("script `{}` has no {what}", self.name),
        };
        let theory = self.theory.ok_or_else(|| missing("theory"))?;
        let (premise, goal) = self.goal.clone().ok_or_else(|| missing("goal"))?;
        Ok(Script {
            name: self.name,
            theory,
            vars: self.vars,
            hyps: self.hyps,
            premise,
            goal,
            steps: self.steps,
        })
    }
}

/// Parses every script of a file. Blank lines and `#` comments are ignored.
pub fn parse_scripts(text: &str) -> Result<Vec<Script>, ProofError> {
    let mut out = Vec::new();
    let mut cur: Option<Draft> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| ProofError::Parse { line: line_no, msg };
        if let Some(name) = line.strip_prefix("script:") {
            if let Some(d) = cur.take() {
                out.push(d.finish()?);
            }
            cur = Some(Draft {
                name: name.trim().to_string(),
                start: line_no,
                ..Draft::default()
            });
            continue;
        }
        let d = cur.as_mut().ok_or_else(|| err("expected `script: <name>` first".into()))?;
        let digits = line.bytes().take_while(u8::is_ascii_digit).count();
        if digits > 0 && line[digits..].starts_with('.') {
            let number: usize = line[..digits].parse().map_err(|e| err(format!("{e}")))?;
            if number != d.steps.len() + 1 {
                return Err(err(format!("expected line number {}, found {number}", d.steps.len() + 1)));
            }
            let (eq, just) = line[digits + 1..]
                .rsplit_once(';')
                .ok_or_else(|| err("expected `; justification`".into()))?;
            let eq = syntax::parse_equation(eq).map_err(err)?;
            d.steps.push(Step {
                number,
                eq,
                justification: just.trim().to_string(),
                source_line: line_no,
            });
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err(format!("unrecognised line `{line}`")))?;
        let value = value.trim();
        match key.trim() {
            "theory" => {
                d.theory = Some(match value {
                    "adjunction" => ScriptTheory::Adjunction,
                    "cartesian" => ScriptTheory::Cartesian,
                    _ => return Err(err(format!("unknown theory `{value}`"))),
                })
            }
            "var" => {
                let (names, s, t) = syntax::parse_var_decl(value).map_err(err)?;
                for n in names {
                    if d.vars.iter().any(|(m, _, _)| *m == n) {
                        return Err(err(format!("`{n}` declared twice")));
                    }
                    d.vars.push((n, s.clone(), t.clone()));
                }
            }
            "hyp" => d.hyps.push(parse_hyp(value).map_err(err)?),
            "goal" => d.goal = Some(syntax::parse_goal(value).map_err(err)?),
            other => return Err(err(format!("unknown header `{other}`"))),
        }
    }
    if let Some(d) = cur.take() {
        out.push(d.finish()?);
    }
    Ok(out)
}

/// The scripts in [`BUNDLED`].
pub fn bundled_scripts() -> Vec<Script> {
    parse_scripts(BUNDLED).expect("bundled scripts parse")
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ref {
    Line(usize),
    Premise,
    Hyp(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Just {
    Premise,
    Hyp(String),
    Preorder,
    Line(usize),
    Sym(usize),
    Trans(Vec<usize>),
    Cong(Ref, Option<usize>),
    CongFun(Functor, Ref),
    Law(Law, Option<usize>),
    CancelMonic(usize),
    CancelFaithful(Functor, usize),
    Witness(Functor),
}

fn parse_just(text: &str) -> Result<Just, ProofError> {
    let unknown = || ProofError::UnknownJustification(text.to_string());
    let mut words: Vec<&str> = text.split_whitespace().collect();
    let at = match words.last() {
        Some(w) if w.starts_with('@') => {
            let k = w[1..].parse::<usize>().map_err(|_| unknown())?;
            words.pop();
            Some(k)
        }
        _ => None,
    };
    let num = |w: &str| w.parse::<usize>().map_err(|_| unknown());
    let functor = |w: &str| Functor::parse(w).ok_or_else(unknown);
    let reference = |w: &str| match w.parse::<usize>() {
        Ok(k) => Ref::Line(k),
        Err(_) if w == "premise" => Ref::Premise,
        Err(_) => Ref::Hyp(w.to_string()),
    };
    let law = |l: Law| Ok(Just::Law(l, at));
    let j = match words.as_slice() {
        ["cong", r] => return Ok(Just::Cong(reference(r), at)),
        ["axiom", name] => return law(Law::Axiom(Axiom::parse(name).ok_or_else(unknown)?)),
        ["naturality", "gamma"] => return law(Law::NatGamma),
        ["naturality", "phi"] => return law(Law::NatPhi),
        ["naturality", "w"] => return law(Law::NatW),
        ["triangle", "phi"] => return law(Law::TriPhi),
        ["triangle", "gamma"] => return law(Law::TriGamma),
        ["functoriality", k] => return law(Law::Functoriality(functor(k)?)),
        ["premise"] => Just::Premise,
        ["hyp", "preorder"] => Just::Preorder,
        ["hyp", label] => Just::Hyp(label.to_string()),
        ["line", k] => Just::Line(num(k)?),
        ["sym", k] => Just::Sym(num(k)?),
        ["trans", ks @ ..] if ks.len() >= 2 => Just::Trans(ks.iter().map(|k| num(k)).collect::<Result<_, _>>()?),
        ["cong", k, r] => Just::CongFun(functor(k)?, reference(r)),
        ["cancel", "monic", k] => Just::CancelMonic(num(k)?),
        ["cancel", "faithful", f, k] => Just::CancelFaithful(functor(f)?, num(k)?),
        ["witness", "full", f] => Just::Witness(functor(f)?),
        _ => return Err(unknown()),
    };
    if at.is_some() {
        return Err(unknown());
    }
    Ok(j)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub number: usize,
    pub equation: String,
    pub justification: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ProofError>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Failing line; `None` for header errors and an unreached goal.
    pub step: Option<usize>,
    pub error: ProofError,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub script: String,
    pub accepted: bool,
    pub steps: Vec<StepReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

struct Checker<'s> {
    script: &'s Script,
    ctx: Ctx,
    lines: Vec<Equation>,
}

impl Checker<'_> {
    fn typed(&self, e: &Equation) -> Result<(), ProofError> {
        let l = self.ctx.ty(&e.lhs).map_err(ProofError::TypeMismatch)?;
        let r = self.ctx.ty(&e.rhs).map_err(ProofError::TypeMismatch)?;
        if l != r {
            return Err(ProofError::TypeMismatch(format!(
                "{} : {} -> {} but {} : {} -> {}",
                e.lhs, l.0, l.1, e.rhs, r.0, r.1
            )));
        }
        Ok(())
    }

    fn line(&self, k: usize, current: usize) -> Result<&Equation, ProofError> {
        if k == 0 || k >= current {
            return Err(ProofError::BadReference(format!("line {k} is not before line {current}")));
        }
        Ok(&self.lines[k - 1])
    }

    fn resolve(&self, r: &Ref, current: usize) -> Result<Equation, ProofError> {
        match r {
            Ref::Line(k) => self.line(*k, current).cloned(),
            Ref::Premise => self
                .script
                .premise
                .as_ref()
                .map(Equation::normalized)
                .ok_or_else(|| ProofError::BadReference("the goal has no premise".into())),
            Ref::Hyp(l) => self
                .script
                .hyp_eq(l)
                .map(Equation::normalized)
                .ok_or_else(|| ProofError::BadReference(format!("no hypothesis labelled `{l}`"))),
        }
    }

    fn restates(&self, r: &Ref, eq: &Equation, current: usize) -> Result<(), ProofError> {
        if self.resolve(r, current)? == *eq {
            Ok(())
        } else {
            Err(ProofError::StepDoesNotFollow("the line differs from the cited equation".into()))
        }
    }

    fn require(&self, h: Hyp) -> Result<(), ProofError> {
        if self.script.has(&h) {
            Ok(())
        } else {
            Err(ProofError::StepDoesNotFollow(format!("hypothesis `{h}` is not assumed")))
        }
    }

    fn law_available(&self, law: Law) -> Result<(), ProofError> {
        let cartesian = matches!(law, Law::Axiom(_) | Law::NatW);
        let adjunction = matches!(law, Law::NatGamma | Law::NatPhi | Law::TriPhi | Law::TriGamma);
        let theory = self.script.theory;
        if (cartesian && theory != ScriptTheory::Cartesian) || (adjunction && theory != ScriptTheory::Adjunction) {
            return Err(ProofError::UnknownJustification(format!("{law:?} is not a law of this theory")));
        }
        Ok(())
    }

    fn rewrite(&self, rules: &Rules, eq: &Equation, at: Option<usize>, current: usize) -> Result<(), ProofError> {
        let fails = |what: String| Err(ProofError::StepDoesNotFollow(what));
        match at {
            None => {
                let left = reachable(&eq.lhs, rules, &self.ctx, REWRITE_BOUND);
                let right = reachable(&eq.rhs, rules, &self.ctx, REWRITE_BOUND);
                if left.iter().any(|t| right.contains(t)) {
                    Ok(())
                } else {
                    fails(format!("the sides do not meet within {REWRITE_BOUND} rewrites"))
                }
            }
            Some(k) => {
                let src = self.line(k, current)?.clone();
                if src == *eq {
                    return fails(format!("line {k} is unchanged"));
                }
                let ok_l = reachable(&src.lhs, rules, &self.ctx, REWRITE_BOUND).contains(&eq.lhs);
                let ok_r = reachable(&src.rhs, rules, &self.ctx, REWRITE_BOUND).contains(&eq.rhs);
                if ok_l && ok_r {
                    Ok(())
                } else {
                    fails(format!("line {k} does not rewrite to this line"))
                }
            }
        }
    }

    fn step(&self, step: &Step, eq: &Equation) -> Result<(), ProofError> {
        self.typed(&step.eq)?;
        if eq.lhs == eq.rhs {
            return Err(ProofError::StepDoesNotFollow("both sides are the same arrow".into()));
        }
        let n = step.number;
        let fails = |what: String| Err(ProofError::StepDoesNotFollow(what));
        match parse_just(&step.justification)? {
            Just::Premise => self.restates(&Ref::Premise, eq, n),
            Just::Hyp(l) => self.restates(&Ref::Hyp(l), eq, n),
            Just::Line(k) => self.restates(&Ref::Line(k), eq, n),
            Just::Preorder => {
                self.require(Hyp::Preorder)?;
                let (s, t) = self.ctx.ty(&eq.lhs).map_err(ProofError::TypeMismatch)?;
                if s.is_pair() || t.is_pair() {
                    fails("the preorder hypothesis concerns the base category only".into())
                } else {
                    Ok(())
                }
            }
            Just::Sym(k) => {
                if self.line(k, n)?.swapped() == *eq {
                    Ok(())
                } else {
                    fails(format!("the line is not line {k} reversed"))
                }
            }
            Just::Trans(ks) => {
                let eqs = ks.iter().map(|&k| self.line(k, n)).collect::<Result<Vec<_>, _>>()?;
                if let Some(w) = eqs.windows(2).position(|w| w[0].rhs != w[1].lhs) {
                    return fails(format!("lines {} and {} do not chain", ks[w], ks[w + 1]));
                }
                if eqs[0].lhs == eq.lhs && eqs[eqs.len() - 1].rhs == eq.rhs {
                    Ok(())
                } else {
                    fails("the chain does not connect the two sides".into())
                }
            }
            Just::Cong(r, at) => {
                let cited = self.resolve(&r, n)?;
                if cited == *eq || cited.swapped() == *eq {
                    return fails("congruence needs a proper context".into());
                }
                self.rewrite(&Rules::Equation(cited), eq, at, n)
            }
            Just::CongFun(k, r) => {
                let cited = self.resolve(&r, n)?;
                let lifted = |a: &Arr| functor_normal(k, &Arr::fun(k, a.clone()), &self.ctx);
                let same = |a: &Arr, b: &Arr| lifted(a) == functor_normal(k, b, &self.ctx);
                if same(&cited.lhs, &eq.lhs) && same(&cited.rhs, &eq.rhs) {
                    Ok(())
                } else {
                    fails(format!("the line is not {k} applied to the cited equation"))
                }
            }
            Just::Law(law, at) => {
                self.law_available(law)?;
                self.rewrite(&Rules::Law(law), eq, at, n)
            }
            Just::CancelMonic(k) => {
                self.require(Hyp::MonicGamma)?;
                let cited = self.line(k, n)?;
                let (l, r) = (cited.lhs.elements(), cited.rhs.elements());
                let head_ok = l.len() >= 2 && r.len() >= 2 && l[0] == r[0] && matches!(l[0], Arr::Gamma(_));
                if head_ok && Arr::chain(l[1..].to_vec()) == eq.lhs && Arr::chain(r[1..].to_vec()) == eq.rhs {
                    Ok(())
                } else {
                    fails(format!("line {k} is not this line behind a common unit"))
                }
            }
            Just::CancelFaithful(k, m) => {
                self.require(Hyp::Faithful(k))?;
                let cited = self.line(m, n)?;
                let lifted = |a: &Arr| functor_normal(k, &Arr::fun(k, a.clone()), &self.ctx);
                if lifted(&eq.lhs) == functor_normal(k, &cited.lhs, &self.ctx)
                    && lifted(&eq.rhs) == functor_normal(k, &cited.rhs, &self.ctx)
                {
                    Ok(())
                } else {
                    fails(format!("line {m} is not {k} applied to this line"))
                }
            }
            Just::Witness(k) => {
                self.require(Hyp::Full(k))?;
                let Arr::Fun(k2, h) = &eq.lhs else {
                    return fails("a witness line has the form `F(h) = ...`".into());
                };
                let Arr::Var(name) = &**h else {
                    return fails("the witness must be a declared arrow".into());
                };
                let fresh = *k2 == k
                    && !eq.rhs.mentions(name)
                    && !self.lines[..n - 1]
                        .iter()
                        .any(|e| e.lhs.mentions(name) || e.rhs.mentions(name))
                    && !self.script.premise.iter().any(|e| e.lhs.mentions(name) || e.rhs.mentions(name))
                    && !self.script.hyps.iter().any(|h| match h {
                        Hyp::Eq { eq, .. } => eq.lhs.mentions(name) || eq.rhs.mentions(name),
                        _ => false,
                    });
                if fresh {
                    Ok(())
                } else {
                    fails(format!("`{name}` is not a fresh witness for {k}"))
                }
            }
        }
    }
}

/// Checks every line of `script`.
pub fn check_script(script: &Script) -> Verdict {
    let checker = Checker {
        script,
        ctx: script.ctx(),
        lines: script.steps.iter().map(|s| s.eq.normalized()).collect(),
    };
    let mut failure = None;
    let header = script
        .hyps
        .iter()
        .filter_map(|h| match h {
            Hyp::Eq { eq, .. } => Some(eq),
            _ => None,
        })
        .chain(script.premise.iter())
        .chain(std::iter::once(&script.goal))
        .try_for_each(|e| checker.typed(e));
    if let Err(error) = header {
        failure = Some(Failure { step: None, error });
    }
    let mut steps = Vec::new();
    for (i, s) in script.steps.iter().enumerate() {
        let result = checker.step(s, &checker.lines[i]);
        if let (Err(e), None) = (&result, &failure) {
            failure = Some(Failure {
                step: Some(s.number),
                error: e.clone(),
            });
        }
        steps.push(StepReport {
            number: s.number,
            equation: s.eq.to_string(),
            justification: s.justification.clone(),
            ok: result.is_ok(),
            error: result.err(),
        });
    }
    if failure.is_none() && checker.lines.last() != Some(&script.goal.normalized()) {
        failure = Some(Failure {
            step: None,
            error: ProofError::StepDoesNotFollow(format!("the last line is not the goal {}", script.goal)),
        });
    }
    Verdict {
        script: script.name.clone(),
        accepted: failure.is_none(),
        steps,
        failure,
    }
}

/// Every replacement of one line's justification by a justification of a
/// different form, keeping the original line references. Returns
/// `(step number, mutated script)`.
pub fn mutations(script: &Script) -> Vec<(usize, Script)> {
    let mut out = Vec::new();
    let label = script
        .hyps
        .iter()
        .find_map(|h| match h {
            Hyp::Eq { label, .. } => Some(label.clone()),
            _ => None,
        })
        .unwrap_or_else(|| "none".into());
    for (i, step) in script.steps.iter().enumerate() {
        let refs: Vec<usize> = step
            .justification
            .split_whitespace()
            .filter_map(|w| w.trim_start_matches('@').parse().ok())
            .collect();
        let r = refs.first().copied().unwrap_or(step.number - 1);
        let r2 = refs.get(1).copied().unwrap_or(r);
        let mut candidates = vec![
            "premise".to_string(),
            format!("hyp {label}"),
            "hyp preorder".into(),
            format!("line {r}"),
            format!("sym {r}"),
            format!("trans {r} {r2}"),
            format!("cong {r}"),
            format!("cancel monic {r}"),
        ];
        for k in Functor::ALL {
            candidates.push(format!("cong {k} {r}"));
            candidates.push(format!("functoriality {k}"));
            candidates.push(format!("cancel faithful {k} {r}"));
            candidates.push(format!("witness full {k}"));
        }
        for (_, name) in Axiom::ALL {
            candidates.push(format!("axiom {name}"));
        }
        for x in ["naturality gamma", "naturality phi", "naturality w", "triangle phi", "triangle gamma"] {
            candidates.push(x.into());
        }
        let kind = |j: &str| {
            let w: Vec<&str> = j.split_whitespace().collect();
            match w.as_slice() {
                ["hyp", "preorder"] => "preorder".to_string(),
                ["cong", _, _] | ["cong", _, _, _] => "cong-functor".into(),
                _ => w.first().copied().unwrap_or("").to_string(),
            }
        };
        let original = kind(&step.justification);
        for c in candidates {
            if kind(&c) == original {
                continue;
            }
            let mut m = script.clone();
            m.steps[i].justification = c;
            out.push((step.number, m));
        }
    }
    out
}

/// Reading of a cartesian script equation as engine terms, with every
/// object variable sent to the letter `letter` and every arrow variable to
/// a generator of the same name.
pub fn cartesian_instance(script: &Script, letter: &str) -> Option<Instance> {
    if script.theory != ScriptTheory::Cartesian {
        return None;
    }
    let mut sig = Signature::with_letters([letter]);
    for (n, s, t) in &script.vars {
        sig.add_arrow(n.clone(), to_formula(s, letter)?, to_formula(t, letter)?).ok()?;
    }
    let conv = |e: &Equation| -> Option<(ArrowTerm, ArrowTerm)> {
        Some((to_term(&e.lhs, script, letter)?, to_term(&e.rhs, script, letter)?))
    };
    let mut assumptions = Vec::new();
    for h in &script.hyps {
        match h {
            Hyp::Eq { eq, .. } => assumptions.push(conv(eq)?),
            _ => return None,
        }
    }
    assumptions.extend(script.premise.iter().map(conv).collect::<Option<Vec<_>>>()?);
    Some(Instance {
        sig,
        assumptions,
        goal: conv(&script.goal)?,
        lines: script.steps.iter().map(|s| conv(&s.eq)).collect::<Option<_>>()?,
    })
}

/// Engine form of a cartesian script.
#[derive(Clone, Debug)]
pub struct Instance {
    pub sig: Signature,
    pub assumptions: Vec<(ArrowTerm, ArrowTerm)>,
    pub goal: (ArrowTerm, ArrowTerm),
    pub lines: Vec<(ArrowTerm, ArrowTerm)>,
}

fn to_formula(o: &Obj, letter: &str) -> Option<Formula> {
    match o {
        Obj::Var(_) => Some(Formula::letter(letter)),
        Obj::Prod(a, b) => Some(Formula::conj(to_formula(a, letter)?, to_formula(b, letter)?)),
        _ => None,
    }
}

fn to_term(a: &Arr, script: &Script, letter: &str) -> Option<ArrowTerm> {
    let f = |o: &Obj| to_formula(o, letter);
    let t = |x: &Arr| to_term(x, script, letter);
    let types: BTreeMap<&str, (&Obj, &Obj)> = script.vars.iter().map(|(n, s, t)| (n.as_str(), (s, t))).collect();
    Some(match a {
        Arr::Var(v) => {
            let (s, tg) = types.get(v.as_str())?;
            ArrowTerm::gen(v.clone(), f(s)?, f(tg)?)
        }
        Arr::Id(o) => ArrowTerm::Id(f(o)?),
        Arr::K1(x, y) => ArrowTerm::Proj1(f(x)?, f(y)?),
        Arr::K2(x, y) => ArrowTerm::Proj2(f(x)?, f(y)?),
        Arr::W(o) => ArrowTerm::Diag(f(o)?),
        Arr::C(x, y) => ArrowTerm::pair(ArrowTerm::Proj2(f(x)?, f(y)?), ArrowTerm::Proj1(f(x)?, f(y)?)),
        Arr::Tuple(x, y) => ArrowTerm::pair(t(x)?, t(y)?),
        Arr::Prod(x, y) => {
            let ctx = script.ctx();
            let (sx, _) = ctx.ty(x).ok()?;
            let (sy, _) = ctx.ty(y).ok()?;
            ArrowTerm::pair(
                ArrowTerm::comp(t(x)?, ArrowTerm::Proj1(f(&sx)?, f(&sy)?)),
                ArrowTerm::comp(t(y)?, ArrowTerm::Proj2(f(&sx)?, f(&sy)?)),
            )
        }
        Arr::Comp(items) => {
            let mut it = items.iter().rev();
            let mut acc = t(it.next()?)?;
            for g in it {
                acc = ArrowTerm::comp(t(g)?, acc);
            }
            acc
        }
        Arr::Gamma(_) | Arr::Phi(_) | Arr::Fun(..) | Arr::PairArr(..) => return None,
    })
}

/// Verdicts for every script, keyed by name.
pub fn check_all(scripts: &[Script]) -> HashMap<String, Verdict> {
    scripts.iter().map(|s| (s.name.clone(), check_script(s))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scripts_are_accepted() {
        let scripts = bundled_scripts();
        assert_eq!(scripts.len(), 12);
        for s in &scripts {
            let v = check_script(s);
            assert!(v.accepted, "{}: {:?}", s.name, v.failure);
        }
    }

    #[test]
    fn justification_grammar() {
        assert_eq!(parse_just("cong F premise").unwrap(), Just::CongFun(Functor::F, Ref::Premise));
        assert_eq!(parse_just("triangle phi @2").unwrap(), Just::Law(Law::TriPhi, Some(2)));
        assert!(matches!(parse_just("sym 1 @2"), Err(ProofError::UnknownJustification(_))));
        assert!(matches!(parse_just("trans 3"), Err(ProofError::UnknownJustification(_))));
        assert!(matches!(parse_just("magic"), Err(ProofError::UnknownJustification(_))));
    }
}
