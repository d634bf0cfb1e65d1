//! Bounded decision engine: enumerate every term up to a size and formula
//! depth, saturate the universe under the axioms plus assumed equations,
//! then read off collapse, preorder and fullness facts.

pub mod closure;
pub mod schema;
pub mod union_find;
pub mod universe;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::frontend::{parse_arrow, parse_arrow_equation, ParseError};
use crate::term::{typecheck, ArrowTerm, Formula, Signature, TypeError};

pub use closure::{close, Partition};
pub use schema::{axiom_schemata, cancellation_rules, instantiate, Schema, SchemaInfo};
pub use universe::{NId, Node, Universe};

pub const DEFAULT_CAP: usize = 200_000;
/// Longest list printed for any family of pairs in a report.
pub const REPORT_LIMIT: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    Cartesian,
    CartesianWithTop,
    SymmetricAssociative,
}

impl Preset {
    pub const ALL: [Preset; 3] = [
        Preset::Cartesian,
        Preset::CartesianWithTop,
        Preset::SymmetricAssociative,
    ];

    pub fn is_cartesian(self) -> bool {
        self != Preset::SymmetricAssociative
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Cartesian => "cartesian",
            Preset::CartesianWithTop => "cartesian-top",
            Preset::SymmetricAssociative => "sym",
        })
    }
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| format!("unknown theory `{s}` (expected cartesian, cartesian-top or sym)"))
    }
}

impl Serialize for Preset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("term universe exceeds the cap of {cap} terms (reached {terms})")]
    ResourceLimit { terms: usize, cap: usize },
    #[error("{0} does not belong to the {1} theory")]
    WrongTheory(String, Preset),
    #[error("sides of an assumed equation have different types: {lhs} vs {rhs}")]
    EquationTypes { lhs: String, rhs: String },
    #[error("cannot assume the schematic term {0} invertible")]
    SchematicIso(String),
    #[error("{0} is not in the enumerated universe")]
    NotInUniverse(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An equation assumed on top of the axioms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub lhs: ArrowTerm,
    pub rhs: ArrowTerm,
    pub tag: String,
}

/// A fresh arrow introduced as a two-sided inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub name: String,
    pub source: Formula,
    pub target: Formula,
}

/// A theory: preset axioms, a signature and assumed equations.
#[derive(Clone, Debug)]
pub struct TheoryConfig {
    pub preset: Preset,
    pub sig: Signature,
    pub equations: Vec<Equation>,
    /// Equations over uppercase formula variables, one instance per
    /// assignment of universe objects.
    pub schematic: Vec<Equation>,
    pub witnesses: Vec<Witness>,
}

impl TheoryConfig {
    pub fn new(preset: Preset, sig: Signature) -> Result<Self, EngineError> {
        for g in &sig.arrows {
            let t = ArrowTerm::gen(g.name.clone(), g.source.clone(), g.target.clone());
            check_theory(&t, preset)?;
        }
        Ok(TheoryConfig {
            preset,
            sig,
            equations: Vec::new(),
            schematic: Vec::new(),
            witnesses: Vec::new(),
        })
    }

    /// Typing of `t` in this theory.
    pub fn type_of(&self, t: &ArrowTerm) -> Result<(Formula, Formula), EngineError> {
        check_theory(t, self.preset)?;
        let mut sig = self.sig.clone();
        sig.letters.extend(meta_letters(t));
        for w in &self.witnesses {
            for p in w.source.letters().into_iter().chain(w.target.letters()) {
                sig.letters.insert(p.to_string());
            }
        }
        Ok(typecheck(t, &sig)?)
    }

    pub fn add_equation(&mut self, lhs: ArrowTerm, rhs: ArrowTerm, tag: impl Into<String>) -> Result<(), EngineError> {
        let (l, r) = (self.type_of(&lhs)?, self.type_of(&rhs)?);
        if l != r {
            return Err(EngineError::EquationTypes {
                lhs: format!("{} -> {}", l.0, l.1),
                rhs: format!("{} -> {}", r.0, r.1),
            });
        }
        let schematic = !meta_letters(&lhs).is_empty() || !meta_letters(&rhs).is_empty();
        let eq = Equation {
            lhs,
            rhs,
            tag: tag.into(),
        };
        if schematic {
            self.schematic.push(eq);
        } else {
            self.equations.push(eq);
        }
        Ok(())
    }

    /// Every assumed equation, schematic ones included.
    pub fn assumptions(&self) -> impl Iterator<Item = &Equation> {
        self.equations.iter().chain(&self.schematic)
    }

    /// Assumes `t` invertible: adds a fresh witness `u` with `u . t = id`
    /// and `t . u = id`, and returns `u`.
    pub fn assume_iso(&mut self, t: &ArrowTerm) -> Result<ArrowTerm, EngineError> {
        let (a, b) = self.type_of(t)?;
        if !meta_letters(t).is_empty() {
            return Err(EngineError::SchematicIso(t.to_string()));
        }
        let name = format!("u{}", self.witnesses.len() + 1);
        self.witnesses.push(Witness {
            name: name.clone(),
            source: b.clone(),
            target: a.clone(),
        });
        let u = ArrowTerm::InvWitness {
            name: name.clone(),
            source: b.clone(),
            target: a.clone(),
        };
        self.add_equation(
            ArrowTerm::comp(u.clone(), t.clone()),
            ArrowTerm::Id(a),
            format!("{name} left inverse of {t}"),
        )?;
        self.add_equation(
            ArrowTerm::comp(t.clone(), u.clone()),
            ArrowTerm::Id(b),
            format!("{name} right inverse of {t}"),
        )?;
        Ok(u)
    }

    /// Reads `iso <term>` or `<term> = <term>`.
    pub fn assume(&mut self, text: &str) -> Result<(), EngineError> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("iso ") {
            let t = parse_arrow(rest)?;
            self.assume_iso(&t)?;
        } else {
            let (l, r) = parse_arrow_equation(text)?;
            self.add_equation(l, r, text.to_string())?;
        }
        Ok(())
    }
}

/// Uppercase letters of `t`; they act as formula variables.
pub fn meta_letters(t: &ArrowTerm) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    visit_formulas(t, &mut |a| {
        for p in a.letters() {
            if p.starts_with(|c: char| c.is_ascii_uppercase()) {
                out.insert(p.to_string());
            }
        }
    });
    out
}

fn visit_formulas(t: &ArrowTerm, f: &mut impl FnMut(&Formula)) {
    use ArrowTerm::*;
    match t {
        Id(a) | Diag(a) | Bang(a) => f(a),
        Proj1(a, b) | Proj2(a, b) | Sym(a, b) => {
            f(a);
            f(b);
        }
        Assoc(a, b, c) => {
            f(a);
            f(b);
            f(c);
        }
        Gen { source, target, .. } | InvWitness { source, target, .. } => {
            f(source);
            f(target);
        }
        Comp(x, y) | Pair(x, y) | TensorOf(x, y) => {
            visit_formulas(x, f);
            visit_formulas(y, f);
        }
    }
}

fn subst_formula(a: &Formula, map: &BTreeMap<String, Formula>) -> Formula {
    match a {
        Formula::Letter(p) => map.get(p).cloned().unwrap_or_else(|| a.clone()),
        Formula::Top => Formula::Top,
        Formula::Conj(l, r) => Formula::conj(subst_formula(l, map), subst_formula(r, map)),
        Formula::Tensor(l, r) => Formula::tensor(subst_formula(l, map), subst_formula(r, map)),
    }
}

/// Replaces formula variables of `t` according to `map`.
pub fn instantiate_meta(t: &ArrowTerm, map: &BTreeMap<String, Formula>) -> ArrowTerm {
    use ArrowTerm::*;
    let f = |a: &Formula| subst_formula(a, map);
    match t {
        Id(a) => Id(f(a)),
        Diag(a) => Diag(f(a)),
        Bang(a) => Bang(f(a)),
        Proj1(a, b) => Proj1(f(a), f(b)),
        Proj2(a, b) => Proj2(f(a), f(b)),
        Sym(a, b) => Sym(f(a), f(b)),
        Assoc(a, b, c) => Assoc(f(a), f(b), f(c)),
        Gen { name, source, target } => ArrowTerm::gen(name.clone(), f(source), f(target)),
        InvWitness { name, source, target } => InvWitness {
            name: name.clone(),
            source: f(source),
            target: f(target),
        },
        Comp(x, y) => ArrowTerm::comp(instantiate_meta(x, map), instantiate_meta(y, map)),
        Pair(x, y) => ArrowTerm::pair(instantiate_meta(x, map), instantiate_meta(y, map)),
        TensorOf(x, y) => ArrowTerm::tensor_of(instantiate_meta(x, map), instantiate_meta(y, map)),
    }
}

fn check_theory(t: &ArrowTerm, preset: Preset) -> Result<(), EngineError> {
    use ArrowTerm::*;
    let bad = match t {
        Proj1(..) | Proj2(..) | Pair(..) | Diag(..) => !preset.is_cartesian(),
        Bang(..) => preset != Preset::CartesianWithTop,
        Sym(..) | Assoc(..) | TensorOf(..) => preset.is_cartesian(),
        _ => false,
    };
    if bad {
        return Err(EngineError::WrongTheory(t.to_string(), preset));
    }
    let c = t.connectives();
    if (c.tensor && preset.is_cartesian()) || (c.cartesian && !preset.is_cartesian()) {
        return Err(EngineError::WrongTheory(t.to_string(), preset));
    }
    if let Some(top) = top_in(t) {
        if preset != Preset::CartesianWithTop {
            return Err(EngineError::WrongTheory(top, preset));
        }
    }
    match t {
        Comp(a, b) | Pair(a, b) | TensorOf(a, b) => {
            check_theory(a, preset)?;
            check_theory(b, preset)
        }
        _ => Ok(()),
    }
}

fn top_in(t: &ArrowTerm) -> Option<String> {
    fn has_top(a: &Formula) -> bool {
        match a {
            Formula::Top => true,
            Formula::Letter(_) => false,
            Formula::Conj(l, r) | Formula::Tensor(l, r) => has_top(l) || has_top(r),
        }
    }
    let (s, g) = t.endpoints().ok()?;
    (has_top(&s) || has_top(&g)).then(|| t.to_string())
}

/// Size and formula-depth bounds of a universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub size: usize,
    pub depth: usize,
    pub cap: usize,
}

impl Bounds {
    pub fn new(size: usize, depth: usize) -> Self {
        Bounds {
            size,
            depth,
            cap: DEFAULT_CAP,
        }
    }
}

/// Every term of `cfg` up to the bounds, plus the sides of assumed
/// equations and the `extra` terms.
pub fn term_universe(cfg: &TheoryConfig, bounds: Bounds, extra: &[ArrowTerm]) -> Result<Universe, EngineError> {
    for t in extra {
        cfg.type_of(t)?;
    }
    universe::enumerate(cfg, bounds.size, bounds.depth, bounds.cap, extra)
}

impl Universe {
    /// Node of `t` if `t` is in the universe.
    pub fn find_term(&self, t: &ArrowTerm) -> Option<NId> {
        use ArrowTerm::*;
        let f = |a: &Formula| self.formulas.find(a);
        let node = match t {
            Id(a) => Node::Id(f(a)?),
            Proj1(a, b) => Node::P1(f(a)?, f(b)?),
            Proj2(a, b) => Node::P2(f(a)?, f(b)?),
            Bang(a) => Node::Bang(f(a)?),
            Sym(a, b) => Node::Sym(f(a)?, f(b)?),
            Assoc(a, b, c) => Node::Assoc(f(a)?, f(b)?, f(c)?),
            Diag(a) => {
                let i = self.lookup(&Node::Id(f(a)?))?;
                Node::Pair(i, i)
            }
            Gen { name, source, target } => {
                let i = self.gen_table.iter().position(|g| &g.name == name)?;
                let g = &self.gen_table[i];
                if f(source)? != g.source || f(target)? != g.target {
                    return None;
                }
                Node::Gen(i as u32)
            }
            InvWitness { name, .. } => Node::Inv(self.inv_table.iter().position(|g| &g.name == name)? as u32),
            Comp(a, b) => Node::Comp(self.find_term(a)?, self.find_term(b)?),
            Pair(a, b) => Node::Pair(self.find_term(a)?, self.find_term(b)?),
            TensorOf(a, b) => Node::Tens(self.find_term(a)?, self.find_term(b)?),
        };
        self.lookup(&node)
    }

    /// All terms in enumeration order.
    pub fn terms(&self) -> Vec<ArrowTerm> {
        (0..self.len() as NId).map(|n| self.term(n)).collect()
    }
}

/// A saturated universe.
#[derive(Clone, Debug)]
pub struct ClosedTheory {
    pub universe: Universe,
    pub partition: Partition,
}

impl ClosedTheory {
    pub fn build(cfg: &TheoryConfig, bounds: Bounds, extra: &[ArrowTerm]) -> Result<Self, EngineError> {
        let universe = term_universe(cfg, bounds, extra)?;
        let partition = congruence_close(cfg, &universe)?;
        Ok(ClosedTheory { universe, partition })
    }

    /// Whether `a` and `b` are provably equal in the bounded closure.
    pub fn equal(&self, a: &ArrowTerm, b: &ArrowTerm) -> Result<bool, EngineError> {
        let find = |t: &ArrowTerm| {
            self.universe
                .find_term(t)
                .ok_or_else(|| EngineError::NotInUniverse(t.to_string()))
        };
        Ok(self.partition.same(find(a)?, find(b)?))
    }

    /// Classes of every hom-set, in order of first appearance.
    fn homsets(&self) -> BTreeMap<(u32, u32), Vec<Vec<NId>>> {
        let mut out: BTreeMap<(u32, u32), Vec<Vec<NId>>> = BTreeMap::new();
        let mut slot: HashMap<NId, usize> = HashMap::new();
        for n in 0..self.universe.len() as NId {
            let classes = out.entry(self.universe.ty(n)).or_default();
            let r = self.partition.rep[n as usize];
            match slot.get(&r) {
                Some(&i) => classes[i].push(n),
                None => {
                    slot.insert(r, classes.len());
                    classes.push(vec![n]);
                }
            }
        }
        out
    }
}

/// Saturates `u` under the axioms of `cfg.preset` and the assumed equations.
pub fn congruence_close(cfg: &TheoryConfig, u: &Universe) -> Result<Partition, EngineError> {
    let mut eqs = cfg
        .equations
        .iter()
        .map(|e| {
            let side = |t: &ArrowTerm| u.find_term(t).ok_or_else(|| EngineError::NotInUniverse(t.to_string()));
            Ok((side(&e.lhs)?, side(&e.rhs)?))
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    for e in &cfg.schematic {
        let vars: Vec<String> = meta_letters(&e.lhs).union(&meta_letters(&e.rhs)).cloned().collect();
        let objects: Vec<Formula> = u.objects().iter().map(|&f| u.formulas.formula(f)).collect();
        let mut choice = vec![0usize; vars.len()];
        'assign: loop {
            let map: BTreeMap<String, Formula> = vars
                .iter()
                .zip(&choice)
                .map(|(v, &i)| (v.clone(), objects[i].clone()))
                .collect();
            let (l, r) = (instantiate_meta(&e.lhs, &map), instantiate_meta(&e.rhs, &map));
            if let (Some(a), Some(b)) = (u.find_term(&l), u.find_term(&r)) {
                eqs.push((a, b));
            }
            for slot in choice.iter_mut() {
                *slot += 1;
                if *slot < objects.len() {
                    continue 'assign;
                }
                *slot = 0;
            }
            break;
        }
    }
    Ok(close(u, &eqs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermPair {
    pub left: String,
    pub right: String,
}

impl TermPair {
    fn of(u: &Universe, a: NId, b: NId) -> Self {
        TermPair {
            left: u.term(a).to_string(),
            right: u.term(b).to_string(),
        }
    }
}

/// Outcome of the generator-balance invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub holds: bool,
    pub offending: Option<TermPair>,
}

/// Checks that each pair has the same multiset of generator names on both
/// sides; reports the first pair that does not.
pub fn generator_balance_check(pairs: &[(ArrowTerm, ArrowTerm)]) -> BalanceReport {
    let offending = pairs
        .iter()
        .find(|(a, b)| a.generator_names() != b.generator_names())
        .map(|(a, b)| TermPair {
            left: a.to_string(),
            right: b.to_string(),
        });
    BalanceReport {
        holds: offending.is_none(),
        offending,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    pub schema: u32,
    pub theory: Preset,
    pub bounds: Bounds,
    pub assumptions: Vec<String>,
    pub universe_size: usize,
    /// Classes under the axioms alone.
    pub class_count_before: usize,
    /// Classes once the assumptions are added.
    pub class_count_after: usize,
    /// Axiom-only classes that the assumptions merged, with their new
    /// representative.
    pub merged_count: usize,
    pub merged_pairs: Vec<TermPair>,
    pub preorder_at_bound: bool,
    /// Distinct classes of structural terms sharing a hom-set.
    pub structural_distinct_count: usize,
    pub structural_witnesses: Vec<TermPair>,
    /// Distinct classes sharing a hom-set where a generator is involved.
    pub generator_distinct_count: usize,
    pub generator_witnesses: Vec<TermPair>,
    pub balance: BalanceReport,
    /// Whether generator balance is an invariant of the theory.
    pub balance_expected: bool,
    pub rounds: usize,
    pub schemata: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Saturates with and without the assumed equations and reports what the
/// assumptions collapse.
pub fn detect_collapse(cfg: &TheoryConfig, bounds: Bounds) -> Result<CollapseReport, EngineError> {
    let closed = ClosedTheory::build(cfg, bounds, &[])?;
    let u = &closed.universe;
    let base = close(u, &[]);
    let after = &closed.partition;

    let mut merged = Vec::new();
    let mut merged_count = 0;
    for n in 0..u.len() as NId {
        let b = base.rep[n as usize];
        if b == n && after.rep[n as usize] != n {
            merged_count += 1;
            if merged.len() < REPORT_LIMIT {
                merged.push(TermPair::of(u, n, after.rep[n as usize]));
            }
        }
    }

    let mut structural = Vec::new();
    let mut generator = Vec::new();
    let (mut s_count, mut g_count) = (0, 0);
    for classes in closed.homsets().values() {
        let pick = |c: &Vec<NId>| c.iter().copied().find(|&n| u.is_structural(n));
        let first_struct = classes.iter().find_map(pick);
        for (i, c) in classes.iter().enumerate() {
            if let (Some(s0), Some(s)) = (first_struct, pick(c)) {
                if s0 != s && after.rep[s0 as usize] != after.rep[s as usize] {
                    s_count += 1;
                    if structural.len() < REPORT_LIMIT {
                        structural.push(TermPair::of(u, s0, s));
                    }
                }
            }
            if i > 0 && (pick(c).is_none() || pick(&classes[0]).is_none()) {
                g_count += 1;
                if generator.len() < REPORT_LIMIT {
                    generator.push(TermPair::of(u, classes[0][0], c[0]));
                }
            }
        }
    }
    let preorder = closed.homsets().values().all(|c| c.len() == 1);
    let balance = BalanceReport {
        holds: after.balance_violation.is_none(),
        offending: after.balance_violation.map(|(a, b)| TermPair::of(u, a, b)),
    };
    let mut schemata: Vec<String> = axiom_schemata(cfg.preset).iter().map(|s| s.name.to_string()).collect();
    schemata.extend(cancellation_rules(cfg.preset).iter().map(|s| s.to_string()));
    Ok(CollapseReport {
        schema: 1,
        theory: cfg.preset,
        bounds,
        assumptions: cfg.assumptions().map(|e| format!("{} = {}", e.lhs, e.rhs)).collect(),
        universe_size: u.len(),
        class_count_before: base.class_count(),
        class_count_after: after.class_count(),
        merged_count,
        merged_pairs: merged,
        preorder_at_bound: preorder,
        structural_distinct_count: s_count,
        structural_witnesses: structural,
        generator_distinct_count: g_count,
        generator_witnesses: generator,
        balance,
        balance_expected: cfg.preset == Preset::SymmetricAssociative,
        rounds: after.rounds,
        schemata,
        elapsed_ms: None,
    })
}

/// Preorder and fullness of the diagonal, read off one bounded closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullnessReport {
    pub preorder: bool,
    /// Every `(f, g)` between diagonal objects has some `h` in both classes.
    pub diagonal_full: bool,
    pub homsets: usize,
    /// First `(f, g)` with no `h` equal to both.
    pub counterexample: Option<TermPair>,
}

pub fn preorder_and_fullness_checks(cfg: &TheoryConfig, bounds: Bounds) -> Result<FullnessReport, EngineError> {
    if !cfg.preset.is_cartesian() {
        return Err(EngineError::WrongTheory("diagonal".into(), cfg.preset));
    }
    let closed = ClosedTheory::build(cfg, bounds, &[])?;
    Ok(fullness_of(&closed))
}

/// Fullness of the diagonal on a closed universe.
pub fn fullness_of(closed: &ClosedTheory) -> FullnessReport {
    let homsets = closed.homsets();
    let preorder = homsets.values().all(|c| c.len() == 1);
    let p = &closed.partition;
    let mut counterexample = None;
    'outer: for classes in homsets.values() {
        let terms: Vec<NId> = classes.iter().flatten().copied().collect();
        for &f in &terms {
            for &g in &terms {
                let lifted = terms.iter().any(|&h| p.same(h, f) && p.same(h, g));
                if !lifted {
                    counterexample = Some(TermPair::of(&closed.universe, f, g));
                    break 'outer;
                }
            }
        }
    }
    FullnessReport {
        preorder,
        diagonal_full: counterexample.is_none(),
        homsets: homsets.len(),
        counterexample,
    }
}

/// Outcome of assuming `w{B}` invertible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WIsoReport {
    pub object: Formula,
    pub projections_equal: bool,
    pub preorder_at_bound: bool,
    pub universe_size: usize,
    pub classes: usize,
}

pub fn w_iso_criterion(cfg: &TheoryConfig, bounds: Bounds, b: &Formula) -> Result<WIsoReport, EngineError> {
    let mut cfg = cfg.clone();
    cfg.assume_iso(&ArrowTerm::Diag(b.clone()))?;
    let k1 = ArrowTerm::Proj1(b.clone(), b.clone());
    let k2 = ArrowTerm::Proj2(b.clone(), b.clone());
    let closed = ClosedTheory::build(&cfg, bounds, &[k1.clone(), k2.clone()])?;
    let fr = fullness_of(&closed);
    Ok(WIsoReport {
        object: b.clone(),
        projections_equal: closed.equal(&k1, &k2)?,
        preorder_at_bound: fr.preorder,
        universe_size: closed.universe.len(),
        classes: closed.partition.class_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::letter("p")
    }

    fn cart() -> TheoryConfig {
        TheoryConfig::new(Preset::Cartesian, Signature::with_letters(["p"])).unwrap()
    }

    fn t(s: &str) -> ArrowTerm {
        parse_arrow(s).unwrap()
    }

    #[test]
    fn universe_counts_w_as_one() {
        let u = term_universe(&cart(), Bounds::new(1, 1), &[]).unwrap();
        // id{p}, id{p/\p}, p1{p,p}, p2{p,p}, w{p}
        assert_eq!(u.len(), 5);
        let w = u.find_term(&t("w{p}")).unwrap();
        assert_eq!(u.size_of(w), 1);
        assert_eq!(u.term(w), t("w{p}"));
    }

    #[test]
    fn projections_stay_apart() {
        let c = ClosedTheory::build(&cart(), Bounds::new(4, 1), &[]).unwrap();
        assert!(!c.equal(&t("p1{p,p}"), &t("p2{p,p}")).unwrap());
        assert!(c.equal(&t("p1{p,p} . w{p}"), &t("id{p}")).unwrap());
        assert!(c.equal(&t("p2{p,p} . w{p}"), &t("p1{p,p} . w{p}")).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let b = Bounds {
            size: 5,
            depth: 1,
            cap: 50,
        };
        assert!(matches!(
            term_universe(&cart(), b, &[]),
            Err(EngineError::ResourceLimit { cap: 50, .. })
        ));
    }

    #[test]
    fn assumed_equation_must_typecheck() {
        let mut cfg = cart();
        assert!(matches!(
            cfg.assume("p1{p,p} = id{p}"),
            Err(EngineError::EquationTypes { .. })
        ));
        assert!(matches!(
            cfg.assume("c{p,p} = id{p*p}"),
            Err(EngineError::WrongTheory(..))
        ));
        cfg.assume("iso w{p}").unwrap();
        assert_eq!(cfg.witnesses.len(), 1);
        assert_eq!(cfg.equations.len(), 2);
    }

    #[test]
    fn w_iso_identifies_projections() {
        let r = w_iso_criterion(&cart(), Bounds::new(3, 1), &p()).unwrap();
        assert!(r.projections_equal);
    }

    #[test]
    fn balance_function() {
        let f = t("f{p->p}");
        let ok = generator_balance_check(&[(t("f{p->p} . id{p}"), f.clone())]);
        assert!(ok.holds);
        let bad = generator_balance_check(&[(f, t("id{p}"))]);
        assert_eq!(
            bad.offending,
            Some(TermPair {
                left: "f{p->p}".into(),
                right: "id{p}".into()
            })
        );
    }
}
