//! Axiom schemata as term patterns over formula and arrow variables.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::Preset;
use crate::gen::{cartesian_term, random_formula, symmetric_term, Shape};
use crate::term::{ArrowTerm, Formula};

/// Formula pattern. Variables index `Schema::fvars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FPat {
    Var(u8),
    Top,
    Conj(Box<FPat>, Box<FPat>),
    Tensor(Box<FPat>, Box<FPat>),
}

/// Arrow pattern. Arrow variables index `Schema::avars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pat {
    Arrow(u8),
    Id(FPat),
    P1(FPat, FPat),
    P2(FPat, FPat),
    Bang(FPat),
    Sym(FPat, FPat),
    Assoc(FPat, FPat, FPat),
    Comp(Box<Pat>, Box<Pat>),
    Pair(Box<Pat>, Box<Pat>),
    Tens(Box<Pat>, Box<Pat>),
}

/// An arrow variable with its typing pattern.
#[derive(Clone, Debug)]
pub struct ArrowVar {
    pub name: &'static str,
    pub source: FPat,
    pub target: FPat,
}

#[derive(Clone, Debug)]
pub struct Schema {
    pub name: &'static str,
    pub fvars: Vec<&'static str>,
    pub avars: Vec<ArrowVar>,
    pub lhs: Pat,
    pub rhs: Pat,
    /// Holds in the theory but is a consequence of the others.
    pub derived: bool,
}

/// Summary of a schema for reports.
#[derive(Clone, Debug, Serialize)]
pub struct SchemaInfo {
    pub name: String,
    pub equation: String,
    pub derived: bool,
}

impl Schema {
    pub fn info(&self) -> SchemaInfo {
        SchemaInfo {
            name: self.name.to_string(),
            equation: self.to_string(),
            derived: self.derived,
        }
    }
}

struct Show<'a, T>(&'a Schema, &'a T);

impl fmt::Display for Show<'_, FPat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0;
        let bin = |f: &mut fmt::Formatter<'_>, l: &FPat, op: &str, r: &FPat| {
            write!(f, "{}{op}", Show(s, l))?;
            match r {
                FPat::Conj(..) | FPat::Tensor(..) => write!(f, "({})", Show(s, r)),
                _ => write!(f, "{}", Show(s, r)),
            }
        };
        match self.1 {
            FPat::Var(v) => f.write_str(s.fvars[*v as usize]),
            FPat::Top => f.write_str("T"),
            FPat::Conj(l, r) => bin(f, l, "/\\", r),
            FPat::Tensor(l, r) => bin(f, l, "*", r),
        }
    }
}

impl fmt::Display for Show<'_, Pat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0;
        fn fp<'a>(s: &'a Schema, p: &'a FPat) -> Show<'a, FPat> {
            Show(s, p)
        }
        fn ap<'a>(s: &'a Schema, p: &'a Pat) -> Show<'a, Pat> {
            Show(s, p)
        }
        match self.1 {
            Pat::Arrow(v) => f.write_str(s.avars[*v as usize].name),
            Pat::Id(a) => write!(f, "id{{{}}}", fp(s, a)),
            Pat::P1(a, b) => write!(f, "p1{{{},{}}}", fp(s, a), fp(s, b)),
            Pat::P2(a, b) => write!(f, "p2{{{},{}}}", fp(s, a), fp(s, b)),
            Pat::Bang(a) => write!(f, "bang{{{}}}", fp(s, a)),
            Pat::Sym(a, b) => write!(f, "c{{{},{}}}", fp(s, a), fp(s, b)),
            Pat::Assoc(a, b, c) => write!(f, "a{{{},{},{}}}", fp(s, a), fp(s, b), fp(s, c)),
            Pat::Comp(g, h) => {
                if matches!(**g, Pat::Comp(..)) {
                    write!(f, "({}) . {}", ap(s, g), ap(s, h))
                } else {
                    write!(f, "{} . {}", ap(s, g), ap(s, h))
                }
            }
            Pat::Pair(x, y) => write!(f, "pair({}, {})", ap(s, x), ap(s, y)),
            Pat::Tens(x, y) => write!(f, "tens({}, {})", ap(s, x), ap(s, y)),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", Show(self, &self.lhs), Show(self, &self.rhs))
    }
}

mod build {
    use super::{FPat, Pat};

    pub fn v(i: u8) -> FPat {
        FPat::Var(i)
    }
    pub fn conj(a: FPat, b: FPat) -> FPat {
        FPat::Conj(Box::new(a), Box::new(b))
    }
    pub fn ten(a: FPat, b: FPat) -> FPat {
        FPat::Tensor(Box::new(a), Box::new(b))
    }
    pub fn x(i: u8) -> Pat {
        Pat::Arrow(i)
    }
    pub fn comp(g: Pat, f: Pat) -> Pat {
        Pat::Comp(Box::new(g), Box::new(f))
    }
    pub fn pair(f: Pat, g: Pat) -> Pat {
        Pat::Pair(Box::new(f), Box::new(g))
    }
    pub fn tens(f: Pat, g: Pat) -> Pat {
        Pat::Tens(Box::new(f), Box::new(g))
    }
}

use build::*;

const A: u8 = 0;
const B: u8 = 1;
const C: u8 = 2;
const D: u8 = 3;
const E: u8 = 4;
const F: u8 = 5;
const FV: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

fn av(name: &'static str, s: FPat, t: FPat) -> ArrowVar {
    ArrowVar {
        name,
        source: s,
        target: t,
    }
}

fn schema(name: &'static str, nf: usize, avars: Vec<ArrowVar>, lhs: Pat, rhs: Pat) -> Schema {
    Schema {
        name,
        fvars: FV[..nf].to_vec(),
        avars,
        lhs,
        rhs,
        derived: false,
    }
}

fn category() -> Vec<Schema> {
    vec![
        schema(
            "id-left",
            2,
            vec![av("f", v(A), v(B))],
            comp(Pat::Id(v(B)), x(0)),
            x(0),
        ),
        schema(
            "id-right",
            2,
            vec![av("f", v(A), v(B))],
            comp(x(0), Pat::Id(v(A))),
            x(0),
        ),
        schema(
            "comp-assoc",
            4,
            vec![av("f", v(A), v(B)), av("g", v(B), v(C)), av("h", v(C), v(D))],
            comp(comp(x(2), x(1)), x(0)),
            comp(x(2), comp(x(1), x(0))),
        ),
    ]
}

fn cartesian() -> Vec<Schema> {
    let mut out = category();
    out.push(schema(
        "beta1",
        3,
        vec![av("f", v(C), v(A)), av("g", v(C), v(B))],
        comp(Pat::P1(v(A), v(B)), pair(x(0), x(1))),
        x(0),
    ));
    out.push(schema(
        "beta2",
        3,
        vec![av("f", v(C), v(A)), av("g", v(C), v(B))],
        comp(Pat::P2(v(A), v(B)), pair(x(0), x(1))),
        x(1),
    ));
    out.push(schema(
        "eta",
        3,
        vec![av("h", v(C), conj(v(A), v(B)))],
        pair(comp(Pat::P1(v(A), v(B)), x(0)), comp(Pat::P2(v(A), v(B)), x(0))),
        x(0),
    ));
    let mut eta_id = schema(
        "eta-id",
        2,
        vec![],
        pair(Pat::P1(v(A), v(B)), Pat::P2(v(A), v(B))),
        Pat::Id(conj(v(A), v(B))),
    );
    eta_id.derived = true;
    out.push(eta_id);
    let mut nat = schema(
        "pair-nat",
        4,
        vec![av("h", v(A), v(B)), av("f", v(B), v(C)), av("g", v(B), v(D))],
        comp(pair(x(1), x(2)), x(0)),
        pair(comp(x(1), x(0)), comp(x(2), x(0))),
    );
    nat.derived = true;
    out.push(nat);
    out
}

fn terminal() -> Schema {
    schema(
        "terminal",
        1,
        vec![av("f", v(A), FPat::Top)],
        x(0),
        Pat::Bang(v(A)),
    )
}

fn symmetric() -> Vec<Schema> {
    let mut out = category();
    let a = |p: u8, q: u8, r: u8| Pat::Assoc(v(p), v(q), v(r));
    let c = |p: FPat, q: FPat| Pat::Sym(p, q);
    let id = |p: FPat| Pat::Id(p);
    out.push(schema(
        "tens-id",
        2,
        vec![],
        tens(id(v(A)), id(v(B))),
        id(ten(v(A), v(B))),
    ));
    out.push(schema(
        "tens-comp",
        6,
        vec![
            av("f", v(A), v(B)),
            av("h", v(C), v(D)),
            av("g", v(B), v(E)),
            av("k", v(D), v(F)),
        ],
        comp(tens(x(2), x(3)), tens(x(0), x(1))),
        tens(comp(x(2), x(0)), comp(x(3), x(1))),
    ));
    out.push(schema(
        "assoc-nat",
        6,
        vec![av("f", v(A), v(B)), av("g", v(C), v(D)), av("h", v(E), v(F))],
        comp(Pat::Assoc(v(B), v(D), v(F)), tens(x(0), tens(x(1), x(2)))),
        comp(tens(tens(x(0), x(1)), x(2)), Pat::Assoc(v(A), v(C), v(E))),
    ));
    out.push(schema(
        "sym-nat",
        4,
        vec![av("f", v(A), v(B)), av("g", v(C), v(D))],
        comp(c(v(B), v(D)), tens(x(0), x(1))),
        comp(tens(x(1), x(0)), c(v(A), v(C))),
    ));
    out.push(schema(
        "pentagon",
        4,
        vec![],
        comp(
            Pat::Assoc(ten(v(A), v(B)), v(C), v(D)),
            Pat::Assoc(v(A), v(B), ten(v(C), v(D))),
        ),
        comp(
            tens(a(A, B, C), id(v(D))),
            comp(
                Pat::Assoc(v(A), ten(v(B), v(C)), v(D)),
                tens(id(v(A)), a(B, C, D)),
            ),
        ),
    ));
    out.push(schema(
        "hexagon1",
        3,
        vec![],
        comp(
            a(A, B, C),
            comp(c(ten(v(B), v(C)), v(A)), a(B, C, A)),
        ),
        comp(
            tens(c(v(B), v(A)), id(v(C))),
            comp(a(B, A, C), tens(id(v(B)), c(v(C), v(A)))),
        ),
    ));
    out.push(schema(
        "hexagon2",
        3,
        vec![],
        comp(
            a(C, A, B),
            comp(c(ten(v(A), v(B)), v(C)), a(A, B, C)),
        ),
        comp(
            tens(c(v(A), v(C)), id(v(B))),
            comp(a(A, C, B), tens(id(v(A)), c(v(B), v(C)))),
        ),
    ));
    out.push(schema(
        "sym-inv",
        2,
        vec![],
        comp(c(v(B), v(A)), c(v(A), v(B))),
        id(ten(v(A), v(B))),
    ));
    out
}

/// The equational axioms used by the closure for `preset`.
pub fn axiom_schemata(preset: Preset) -> Vec<Schema> {
    match preset {
        Preset::Cartesian => cartesian(),
        Preset::CartesianWithTop => {
            let mut v = cartesian();
            v.push(terminal());
            v
        }
        Preset::SymmetricAssociative => symmetric(),
    }
}

/// Names of the non-equational rules the closure also applies.
pub fn cancellation_rules(preset: Preset) -> &'static [&'static str] {
    match preset {
        Preset::SymmetricAssociative => &["assoc-iso", "sym-iso"],
        _ => &[],
    }
}

/// Random ground instance of a schema: formula variables become random
/// formulae of depth at most `depth`, arrow variables become random
/// structural terms of the bound type. `None` when a drawn type is empty.
pub fn instantiate<R: Rng>(
    s: &Schema,
    rng: &mut R,
    letters: &[&str],
    depth: usize,
    preset: Preset,
) -> Option<(ArrowTerm, ArrowTerm)> {
    let shape = match preset {
        Preset::Cartesian => Shape::Cartesian { top: false },
        Preset::CartesianWithTop => Shape::Cartesian { top: true },
        Preset::SymmetricAssociative => Shape::Tensor,
    };
    let mut fv: Vec<Option<Formula>> = vec![None; s.fvars.len()];
    let mut arrows = Vec::new();
    for a in &s.avars {
        let src = fill(&a.source, &mut fv, rng, letters, depth, shape);
        let term = match (&a.target, preset) {
            (FPat::Var(v), Preset::SymmetricAssociative) if fv[*v as usize].is_none() => {
                let t = symmetric_term(rng, &src, 3);
                fv[*v as usize] = Some(t.endpoints().ok()?.1);
                t
            }
            (_, Preset::SymmetricAssociative) => return None,
            (FPat::Var(v), _) if fv[*v as usize].is_none() => {
                let pool: Vec<&str> = src.letters().into_iter().collect();
                let tgt = if pool.is_empty() {
                    Formula::Top
                } else {
                    random_formula(rng, &pool, depth, shape)
                };
                fv[*v as usize] = Some(tgt.clone());
                cartesian_term(rng, &src, &tgt, 2)?
            }
            (pat, _) => {
                let tgt = fill(pat, &mut fv, rng, letters, depth, shape);
                cartesian_term(rng, &src, &tgt, 2)?
            }
        };
        arrows.push(term);
    }
    let lhs = ground(&s.lhs, &mut fv, &arrows, rng, letters, depth, shape);
    let rhs = ground(&s.rhs, &mut fv, &arrows, rng, letters, depth, shape);
    Some((lhs, rhs))
}

fn fill<R: Rng>(
    p: &FPat,
    fv: &mut [Option<Formula>],
    rng: &mut R,
    letters: &[&str],
    depth: usize,
    shape: Shape,
) -> Formula {
    match p {
        FPat::Var(v) => fv[*v as usize]
            .get_or_insert_with(|| random_formula(rng, letters, depth, shape))
            .clone(),
        FPat::Top => Formula::Top,
        FPat::Conj(a, b) => {
            let a = fill(a, fv, rng, letters, depth, shape);
            Formula::conj(a, fill(b, fv, rng, letters, depth, shape))
        }
        FPat::Tensor(a, b) => {
            let a = fill(a, fv, rng, letters, depth, shape);
            Formula::tensor(a, fill(b, fv, rng, letters, depth, shape))
        }
    }
}

fn ground<R: Rng>(
    p: &Pat,
    fv: &mut [Option<Formula>],
    arrows: &[ArrowTerm],
    rng: &mut R,
    letters: &[&str],
    depth: usize,
    shape: Shape,
) -> ArrowTerm {
    let f = |q: &FPat, fv: &mut [Option<Formula>], rng: &mut R| fill(q, fv, rng, letters, depth, shape);
    match p {
        Pat::Arrow(i) => arrows[*i as usize].clone(),
        Pat::Id(a) => ArrowTerm::Id(f(a, fv, rng)),
        Pat::P1(a, b) => {
            let a = f(a, fv, rng);
            ArrowTerm::Proj1(a, f(b, fv, rng))
        }
        Pat::P2(a, b) => {
            let a = f(a, fv, rng);
            ArrowTerm::Proj2(a, f(b, fv, rng))
        }
        Pat::Bang(a) => ArrowTerm::Bang(f(a, fv, rng)),
        Pat::Sym(a, b) => {
            let a = f(a, fv, rng);
            ArrowTerm::Sym(a, f(b, fv, rng))
        }
        Pat::Assoc(a, b, c) => {
            let a = f(a, fv, rng);
            let b = f(b, fv, rng);
            ArrowTerm::Assoc(a, b, f(c, fv, rng))
        }
        Pat::Comp(g, h) => {
            let g = ground(g, fv, arrows, rng, letters, depth, shape);
            ArrowTerm::comp(g, ground(h, fv, arrows, rng, letters, depth, shape))
        }
        Pat::Pair(x, y) => {
            let x = ground(x, fv, arrows, rng, letters, depth, shape);
            ArrowTerm::pair(x, ground(y, fv, arrows, rng, letters, depth, shape))
        }
        Pat::Tens(x, y) => {
            let x = ground(x, fv, arrows, rng, letters, depth, shape);
            ArrowTerm::tensor_of(x, ground(y, fv, arrows, rng, letters, depth, shape))
        }
    }
}
