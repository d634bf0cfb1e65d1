//! Sequents, premise policies, and the textual front end.
//!
//! A sequent `A1, ..., An |- B` keeps its premises as a sequence. Reading
//! the premise collection as a multiset or as a set is modelled by
//! [`apply_policy`], which re-linearizes the collection into a canonical
//! sequence (length-lexicographic order on printed formulae).

mod parse;
mod print;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use parse::{is_keyword, parse_arrow, parse_arrow_equation, parse_formula, parse_sequent, ParseError};

use crate::term::{Formula, Signature, TypeError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Self {
        Sequent {
            premises,
            conclusion,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PremisePolicy {
    Sequence,
    Multiset,
    Set,
}

impl PremisePolicy {
    pub const ALL: [PremisePolicy; 3] = [
        PremisePolicy::Sequence,
        PremisePolicy::Multiset,
        PremisePolicy::Set,
    ];
}

impl fmt::Display for PremisePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PremisePolicy::Sequence => "sequence",
            PremisePolicy::Multiset => "multiset",
            PremisePolicy::Set => "set",
        })
    }
}

impl FromStr for PremisePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequence" => Ok(PremisePolicy::Sequence),
            "multiset" => Ok(PremisePolicy::Multiset),
            "set" => Ok(PremisePolicy::Set),
            other => Err(format!("unknown premise policy `{other}`")),
        }
    }
}

/// Length-lexicographic order on printed form.
pub fn formula_order(a: &Formula, b: &Formula) -> Ordering {
    let (x, y) = (a.to_string(), b.to_string());
    x.len().cmp(&y.len()).then_with(|| x.cmp(&y))
}

fn normalize<T: Clone>(items: &[T], pol: PremisePolicy, cmp: impl Fn(&T, &T) -> Ordering) -> Vec<T> {
    let mut v = items.to_vec();
    match pol {
        PremisePolicy::Sequence => {}
        PremisePolicy::Multiset => v.sort_by(&cmp),
        PremisePolicy::Set => {
            v.sort_by(&cmp);
            v.dedup_by(|a, b| cmp(a, b) == Ordering::Equal);
        }
    }
    v
}

pub fn apply_policy(s: &Sequent, pol: PremisePolicy) -> Sequent {
    Sequent {
        premises: normalize(&s.premises, pol, formula_order),
        conclusion: s.conclusion.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("line {line}: {msg}")]
    Signature { line: usize, msg: String },
}

/// Replaces the letter `from` by `to` in every formula of the raw sequent.
pub fn substitute_letter(
    s: &Sequent,
    from: &str,
    to: &str,
    sig: &Signature,
) -> Result<Sequent, TypeError> {
    for l in [from, to] {
        if !sig.letters.contains(l) {
            return Err(TypeError::UnknownGenerator(l.to_string()));
        }
    }
    Ok(Sequent {
        premises: s.premises.iter().map(|a| a.rename_letter(from, to)).collect(),
        conclusion: s.conclusion.rename_letter(from, to),
    })
}

/// Adds `c` as a new premise under `pol`. The flag is true when the
/// normalized premise collection did not change.
pub fn apply_thinning(s: &Sequent, c: &Formula, pol: PremisePolicy) -> (Sequent, bool) {
    let before = apply_policy(s, pol);
    let mut premises = s.premises.clone();
    premises.push(c.clone());
    let after = apply_policy(&Sequent::new(premises, s.conclusion.clone()), pol);
    let invisible = after.premises == before.premises;
    (after, invisible)
}

/// Contracts the first repeated premise, if any. The flag is true when the
/// normalized premise collection did not change.
pub fn apply_contraction(s: &Sequent, pol: PremisePolicy) -> Option<(Sequent, bool)> {
    let dup = (0..s.premises.len())
        .find(|&j| s.premises[..j].contains(&s.premises[j]))?;
    let before = apply_policy(s, pol);
    let mut premises = s.premises.clone();
    premises.remove(dup);
    let after = apply_policy(&Sequent::new(premises, s.conclusion.clone()), pol);
    let invisible = after.premises == before.premises;
    Some((after, invisible))
}

/// Right-associated conjunction of the normalized premises, `T` when empty.
pub fn sequent_to_arrow_type(s: &Sequent, pol: PremisePolicy) -> (Formula, Formula) {
    let n = apply_policy(s, pol);
    let source = n
        .premises
        .into_iter()
        .rev()
        .reduce(|acc, a| Formula::conj(a, acc))
        .unwrap_or(Formula::Top);
    (source, s.conclusion.clone())
}

/// The sequence, multiset or set of letters occurring in `a`.
pub fn object_image(a: &Formula, pol: PremisePolicy) -> Vec<String> {
    let letters: Vec<String> = a.letter_occurrences().into_iter().map(String::from).collect();
    normalize(&letters, pol, |x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
}

/// Parses a signature file: `letter p` and `arrow f : p -> p` lines.
pub fn parse_signature(text: &str) -> Result<Signature, FrontendError> {
    let mut sig = Signature::default();
    let mut pending = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| FrontendError::Signature { line: i + 1, msg };
        if let Some(rest) = line.strip_prefix("letter ") {
            for l in rest.split_whitespace() {
                match parse_formula(l) {
                    Ok(Formula::Letter(p)) => {
                        sig.letters.insert(p);
                    }
                    _ => return Err(err(format!("bad letter `{l}`"))),
                }
            }
        } else if let Some(rest) = line.strip_prefix("arrow ") {
            let (name, ty) = rest
                .split_once(':')
                .ok_or_else(|| err("expected `arrow f : A -> B`".into()))?;
            let name = name.trim();
            let (s, t) = ty
                .split_once("->")
                .ok_or_else(|| err("expected `->`".into()))?;
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
                && name.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
            if !valid || is_keyword(name) {
                return Err(err(format!("bad arrow name `{name}`")));
            }
            pending.push((i + 1, name.to_string(), parse_formula(s)?, parse_formula(t)?));
        } else {
            return Err(err(format!("unrecognized line `{line}`")));
        }
    }
    for (line, name, s, t) in pending {
        sig.add_arrow(name, s, t)
            .map_err(|e| FrontendError::Signature { line, msg: e.to_string() })?;
    }
    Ok(sig)
}

/// One sequent examined under one policy.
#[derive(Clone, Debug, Serialize)]
pub struct PolicyEntry {
    pub input: String,
    pub policy: PremisePolicy,
    pub normalized: String,
    pub premise_count: usize,
    /// The sequent read as obtained by thinning its last premise onto the rest.
    pub thinning_invisible: bool,
    /// `None` when no premise repeats.
    pub contraction_invisible: Option<bool>,
    pub substitution: Option<SubstitutionEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubstitutionEntry {
    pub from: String,
    pub to: String,
    pub substituted: String,
    pub normalized: String,
    pub premise_count: usize,
    pub shrank: bool,
    pub thinning_invisible: bool,
    pub contraction_invisible: Option<bool>,
}

fn thinning_flag(s: &Sequent, pol: PremisePolicy) -> bool {
    match s.premises.split_last() {
        Some((last, rest)) => {
            apply_thinning(&Sequent::new(rest.to_vec(), s.conclusion.clone()), last, pol).1
        }
        None => false,
    }
}

/// Examines `s` under `pol`, optionally after substituting `subst.1` for `subst.0`.
pub fn policy_entry(
    s: &Sequent,
    pol: PremisePolicy,
    subst: Option<(&str, &str)>,
    sig: &Signature,
) -> Result<PolicyEntry, TypeError> {
    let normalized = apply_policy(s, pol);
    let substitution = match subst {
        Some((from, to)) => {
            let t = substitute_letter(s, from, to, sig)?;
            let tn = apply_policy(&t, pol);
            Some(SubstitutionEntry {
                from: from.to_string(),
                to: to.to_string(),
                substituted: t.to_string(),
                normalized: tn.to_string(),
                premise_count: tn.premises.len(),
                shrank: tn.premises.len() < normalized.premises.len(),
                thinning_invisible: thinning_flag(&t, pol),
                contraction_invisible: apply_contraction(&t, pol).map(|x| x.1),
            })
        }
        None => None,
    };
    Ok(PolicyEntry {
        input: s.to_string(),
        policy: pol,
        normalized: normalized.to_string(),
        premise_count: normalized.premises.len(),
        thinning_invisible: thinning_flag(s, pol),
        contraction_invisible: apply_contraction(s, pol).map(|x| x.1),
        substitution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> Sequent {
        parse_sequent(text).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn sig() -> Signature {
        Signature::with_letters(["p", "q", "r"])
    }

    #[test]
    fn set_policy_removes_duplicates() {
        assert_eq!(apply_policy(&seq("p, q, p |- r"), PremisePolicy::Set), seq("p, q |- r"));
        assert_eq!(apply_policy(&seq("p, p |- p"), PremisePolicy::Multiset), seq("p, p |- p"));
    }

    #[test]
    fn substitution_then_set_collapses_premises() {
        let s = substitute_letter(&seq("p, q |- p"), "q", "p", &sig()).unwrap();
        assert_eq!(s, seq("p, p |- p"));
        assert_eq!(apply_policy(&s, PremisePolicy::Set), seq("p |- p"));
        assert_eq!(
            substitute_letter(&seq("p |- p"), "q", "p", &sig()).unwrap(),
            seq("p |- p")
        );
        assert_eq!(
            substitute_letter(&seq("p /\\ q |- r"), "q", "p", &sig()).unwrap(),
            seq("p /\\ p |- r")
        );
        assert!(matches!(
            substitute_letter(&seq("p |- p"), "z", "p", &sig()),
            Err(TypeError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn thinning_visibility() {
        let (s, inv) = apply_thinning(&seq("p |- p"), &f("q"), PremisePolicy::Set);
        assert_eq!((s, inv), (seq("p, q |- p"), false));
        let (s, inv) = apply_thinning(&seq("p |- p"), &f("p"), PremisePolicy::Set);
        assert_eq!((s, inv), (seq("p |- p"), true));
        let (s, inv) = apply_thinning(&seq("p |- p"), &f("p"), PremisePolicy::Sequence);
        assert_eq!((s, inv), (seq("p, p |- p"), false));
    }

    #[test]
    fn sequent_types() {
        let pol = PremisePolicy::Sequence;
        assert_eq!(sequent_to_arrow_type(&seq("p, q |- p"), pol), (f("p/\\q"), f("p")));
        assert_eq!(sequent_to_arrow_type(&seq("|- p"), PremisePolicy::Set), (Formula::Top, f("p")));
        assert_eq!(sequent_to_arrow_type(&seq("p, p |- p"), PremisePolicy::Set), (f("p"), f("p")));
        assert_eq!(
            sequent_to_arrow_type(&seq("p, q, r |- p"), pol).0,
            f("p/\\(q/\\r)")
        );
    }

    #[test]
    fn object_images() {
        assert_eq!(object_image(&f("p/\\(p/\\q)"), PremisePolicy::Set), vec!["p", "q"]);
        assert_eq!(object_image(&f("p*p"), PremisePolicy::Multiset), vec!["p", "p"]);
        assert!(object_image(&Formula::Top, PremisePolicy::Set).is_empty());
        assert_eq!(object_image(&f("q/\\p/\\q"), PremisePolicy::Sequence), vec!["q", "p", "q"]);
    }

    #[test]
    fn canonical_order_is_length_lexicographic() {
        let s = apply_policy(&seq("q/\\p, r, p |- p"), PremisePolicy::Multiset);
        assert_eq!(s, seq("p, r, q/\\p |- p"));
    }

    #[test]
    fn signature_file() {
        let sig = parse_signature("# sig\nletter p q\narrow f : p -> p/\\q\n").unwrap();
        assert_eq!(sig.letters.len(), 2);
        assert_eq!(sig.arrow("f").unwrap().target, f("p/\\q"));
        assert!(parse_signature("arrow f : p -> z\nletter p").is_err());
        assert!(parse_signature("arrow id : p -> p\nletter p").is_err());
        assert!(parse_signature("bogus").is_err());
    }

    #[test]
    fn report_entry_flags() {
        let s = seq("p, q |- p");
        let e = policy_entry(&s, PremisePolicy::Set, Some(("q", "p")), &sig()).unwrap();
        assert!(!e.thinning_invisible);
        let sub = e.substitution.unwrap();
        assert!(sub.shrank);
        assert!(sub.thinning_invisible);
        assert_eq!(sub.normalized, "p |- p");
        let e = policy_entry(&s, PremisePolicy::Sequence, Some(("q", "p")), &sig()).unwrap();
        assert!(!e.substitution.unwrap().thinning_invisible);
        let e = policy_entry(&seq("p, p |- p"), PremisePolicy::Multiset, None, &sig()).unwrap();
        assert_eq!(e.normalized, "p, p |- p");
        assert_eq!(e.contraction_invisible, Some(false));
    }
}
