//! Seeded random formulae and structural terms for property suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::term::{ArrowTerm, Formula};

/// Shape of the formulae to draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Cartesian { top: bool },
    Tensor,
}

pub fn random_formula<R: Rng>(rng: &mut R, letters: &[&str], depth: usize, shape: Shape) -> Formula {
    let leaf = |rng: &mut R| match shape {
        Shape::Cartesian { top: true } if rng.gen_ratio(1, 6) => Formula::Top,
        _ => Formula::letter(*letters.choose(rng).expect("at least one letter")),
    };
    if depth == 0 || rng.gen_ratio(1, 3) {
        return leaf(rng);
    }
    let l = random_formula(rng, letters, depth - 1, shape);
    let r = random_formula(rng, letters, depth - 1, shape);
    match shape {
        Shape::Cartesian { .. } => Formula::conj(l, r),
        Shape::Tensor => Formula::tensor(l, r),
    }
}

/// True when the free cartesian category has an arrow `source -> target`.
pub fn cartesian_inhabited(source: &Formula, target: &Formula) -> bool {
    let s = source.letters();
    target.letters().iter().all(|p| s.contains(p))
}

fn projection_path(source: &Formula, path: &str) -> ArrowTerm {
    let mut here = source.clone();
    let mut term = ArrowTerm::Id(source.clone());
    let mut first = true;
    for c in path.chars() {
        let (l, r) = match &here {
            Formula::Conj(l, r) => ((**l).clone(), (**r).clone()),
            other => panic!("path {path} leaves formula at {other}"),
        };
        let (step, next) = if c == 'L' {
            (ArrowTerm::Proj1(l.clone(), r), l)
        } else {
            (ArrowTerm::Proj2(l, r.clone()), r)
        };
        term = if first { step } else { ArrowTerm::comp(step, term) };
        first = false;
        here = next;
    }
    term
}

/// A random structural cartesian term `source -> target`, if one exists.
/// `fuel` bounds the number of detours through intermediate objects.
pub fn cartesian_term<R: Rng>(
    rng: &mut R,
    source: &Formula,
    target: &Formula,
    fuel: usize,
) -> Option<ArrowTerm> {
    if !cartesian_inhabited(source, target) {
        return None;
    }
    if fuel > 0 && rng.gen_ratio(1, 4) {
        let letters: Vec<&str> = source.letters().into_iter().collect();
        let mid = if letters.is_empty() || rng.gen_bool(0.5) {
            Formula::conj(source.clone(), source.clone())
        } else {
            let m = random_formula(rng, &letters, 2, Shape::Cartesian { top: false });
            if cartesian_inhabited(&m, target) {
                m
            } else {
                Formula::conj(m, source.clone())
            }
        };
        let first = if mid == Formula::conj(source.clone(), source.clone()) && rng.gen_bool(0.5) {
            ArrowTerm::Diag(source.clone())
        } else {
            cartesian_term(rng, source, &mid, fuel - 1)?
        };
        let second = cartesian_term(rng, &mid, target, fuel - 1)?;
        return Some(ArrowTerm::comp(second, first));
    }
    if source == target && rng.gen_ratio(1, 3) {
        return Some(ArrowTerm::Id(source.clone()));
    }
    Some(match target {
        Formula::Conj(a, b) => {
            if source == &**a && a == b && rng.gen_bool(0.5) {
                ArrowTerm::Diag(source.clone())
            } else {
                ArrowTerm::pair(
                    cartesian_term(rng, source, a, fuel)?,
                    cartesian_term(rng, source, b, fuel)?,
                )
            }
        }
        Formula::Top => ArrowTerm::Bang(source.clone()),
        Formula::Letter(p) => {
            let choices: Vec<_> = source.leaves().into_iter().filter(|(_, l)| l == p).collect();
            let (path, _) = choices.choose(rng)?;
            if path.0.is_empty() {
                ArrowTerm::Id(source.clone())
            } else {
                projection_path(source, &path.0)
            }
        }
        Formula::Tensor(..) => return None,
    })
}

/// A random structural term of the symmetric associative theory out of
/// `source`; its target is whatever the term reaches.
pub fn symmetric_term<R: Rng>(rng: &mut R, source: &Formula, fuel: usize) -> ArrowTerm {
    let mut options = vec![0u8];
    if let Formula::Tensor(_, r) = source {
        options.extend([1, 3]);
        if matches!(**r, Formula::Tensor(..)) {
            options.push(2);
        }
    }
    if fuel > 0 {
        options.push(4);
    }
    match *options.choose(rng).unwrap() {
        1 => match source {
            Formula::Tensor(a, b) => ArrowTerm::Sym((**a).clone(), (**b).clone()),
            _ => unreachable!(),
        },
        2 => match source {
            Formula::Tensor(a, bc) => match &**bc {
                Formula::Tensor(b, c) => {
                    ArrowTerm::Assoc((**a).clone(), (**b).clone(), (**c).clone())
                }
                _ => unreachable!(),
            },
            _ => unreachable!(),
        },
        3 => match source {
            Formula::Tensor(a, b) => {
                let f = fuel.saturating_sub(1);
                ArrowTerm::tensor_of(symmetric_term(rng, a, f), symmetric_term(rng, b, f))
            }
            _ => unreachable!(),
        },
        4 => {
            let first = symmetric_term(rng, source, fuel - 1);
            let (_, mid) = first.endpoints().expect("generated terms are well typed");
            let second = symmetric_term(rng, &mid, fuel - 1);
            ArrowTerm::comp(second, first)
        }
        _ => ArrowTerm::Id(source.clone()),
    }
}
