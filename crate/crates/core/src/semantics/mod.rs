//! Coherence semantics for structural arrow terms.
//!
//! A structural cartesian term `t : A -> B` is interpreted as the map that
//! sends each leaf of `B` to the leaf of `A` it copies; two structural terms
//! are equal exactly when these maps coincide. Structural terms of the
//! symmetric associative theory are interpreted as leaf bijections. The
//! finite-set model in [`model`] evaluates terms set-theoretically and serves
//! as an independent check of both.

pub mod model;

use serde::Serialize;
use thiserror::Error;

use crate::term::{ArrowTerm, Formula, LeafPath, TypeError};

pub use model::{eval_finite_model, FiniteModel, FunctionTable, Value};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("term contains a generator arrow or witness: {0}")]
    NonStructuralTerm(String),
    #[error("constructor {0} does not belong to this theory")]
    WrongTheory(String),
    #[error("endpoints differ: {0} vs {1}")]
    TypeMismatch(String, String),
    #[error("no table for generator arrow `{0}`")]
    MissingGeneratorTable(String),
    #[error("table for `{0}` is not a total function between its endpoints")]
    BadGeneratorTable(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Letter-preserving map from the target leaves to the source leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OccurrenceMap {
    pub source: Formula,
    pub target: Formula,
    /// `map[i]` is the source leaf index that target leaf `i` copies.
    pub map: Vec<usize>,
}

/// Bijection between leaves; `map[i]` is the source leaf of target leaf `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LeafBijection {
    pub source: Formula,
    pub target: Formula,
    pub map: Vec<usize>,
}

/// One entry of a leaf map, keyed by paths; used for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafLink {
    pub target: String,
    pub source: String,
}

fn links(source: &Formula, target: &Formula, map: &[usize]) -> Vec<LeafLink> {
    let sl = source.leaves();
    target
        .leaves()
        .into_iter()
        .zip(map)
        .map(|((tp, _), &i)| LeafLink {
            target: tp.to_string(),
            source: sl[i].0.to_string(),
        })
        .collect()
}

impl OccurrenceMap {
    pub fn links(&self) -> Vec<LeafLink> {
        links(&self.source, &self.target, &self.map)
    }

    /// First target leaf on which the two maps disagree.
    pub fn first_difference(&self, other: &OccurrenceMap) -> Option<(LeafPath, LeafPath, LeafPath)> {
        let tl = self.target.leaves();
        let sl = self.source.leaves();
        self.map
            .iter()
            .zip(&other.map)
            .position(|(a, b)| a != b)
            .map(|i| (tl[i].0.clone(), sl[self.map[i]].0.clone(), sl[other.map[i]].0.clone()))
    }
}

impl LeafBijection {
    pub fn links(&self) -> Vec<LeafLink> {
        links(&self.source, &self.target, &self.map)
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }
}

fn non_structural(t: &ArrowTerm) -> SemanticsError {
    SemanticsError::NonStructuralTerm(t.to_string())
}

fn wrong(t: &ArrowTerm) -> SemanticsError {
    SemanticsError::WrongTheory(t.to_string())
}

pub fn interpret_cartesian(t: &ArrowTerm) -> Result<OccurrenceMap, SemanticsError> {
    let (source, target) = t.endpoints()?;
    let map = cartesian_map(&t.expand())?;
    Ok(OccurrenceMap {
        source,
        target,
        map,
    })
}

fn cartesian_map(t: &ArrowTerm) -> Result<Vec<usize>, SemanticsError> {
    use ArrowTerm::*;
    Ok(match t {
        Id(a) => (0..a.leaf_count()).collect(),
        Comp(g, f) => {
            let (mg, mf) = (cartesian_map(g)?, cartesian_map(f)?);
            mg.into_iter().map(|i| mf[i]).collect()
        }
        Proj1(a, _) => (0..a.leaf_count()).collect(),
        Proj2(a, b) => (a.leaf_count()..a.leaf_count() + b.leaf_count()).collect(),
        Pair(f, g) => {
            let mut m = cartesian_map(f)?;
            m.extend(cartesian_map(g)?);
            m
        }
        Bang(_) => Vec::new(),
        Diag(a) => (0..a.leaf_count()).chain(0..a.leaf_count()).collect(),
        Gen { .. } | InvWitness { .. } => return Err(non_structural(t)),
        Sym(..) | Assoc(..) | TensorOf(..) => return Err(wrong(t)),
    })
}

fn same_endpoints(t1: &ArrowTerm, t2: &ArrowTerm) -> Result<(), SemanticsError> {
    let (e1, e2) = (t1.endpoints()?, t2.endpoints()?);
    if e1 != e2 {
        return Err(SemanticsError::TypeMismatch(
            format!("{} -> {}", e1.0, e1.1),
            format!("{} -> {}", e2.0, e2.1),
        ));
    }
    Ok(())
}

/// Equality of structural cartesian deductions.
pub fn decide_equal_cartesian(t1: &ArrowTerm, t2: &ArrowTerm) -> Result<bool, SemanticsError> {
    same_endpoints(t1, t2)?;
    Ok(interpret_cartesian(t1)?.map == interpret_cartesian(t2)?.map)
}

pub fn interpret_symmetric(t: &ArrowTerm) -> Result<LeafBijection, SemanticsError> {
    let (source, target) = t.endpoints()?;
    let map = symmetric_map(t)?;
    Ok(LeafBijection {
        source,
        target,
        map,
    })
}

fn symmetric_map(t: &ArrowTerm) -> Result<Vec<usize>, SemanticsError> {
    use ArrowTerm::*;
    Ok(match t {
        Id(a) => (0..a.leaf_count()).collect(),
        Comp(g, f) => {
            let (mg, mf) = (symmetric_map(g)?, symmetric_map(f)?);
            mg.into_iter().map(|i| mf[i]).collect()
        }
        Sym(a, b) => {
            let (na, nb) = (a.leaf_count(), b.leaf_count());
            (na..na + nb).chain(0..na).collect()
        }
        Assoc(a, b, c) => (0..a.leaf_count() + b.leaf_count() + c.leaf_count()).collect(),
        TensorOf(f, g) => {
            let offset = f.endpoints()?.0.leaf_count();
            let mut m = symmetric_map(f)?;
            m.extend(symmetric_map(g)?.into_iter().map(|i| i + offset));
            m
        }
        Gen { .. } | InvWitness { .. } => return Err(non_structural(t)),
        Proj1(..) | Proj2(..) | Pair(..) | Diag(_) | Bang(_) => return Err(wrong(t)),
    })
}

pub fn decide_equal_symmetric(t1: &ArrowTerm, t2: &ArrowTerm) -> Result<bool, SemanticsError> {
    same_endpoints(t1, t2)?;
    Ok(interpret_symmetric(t1)?.map == interpret_symmetric(t2)?.map)
}

/// Which structural oracle applies to a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fragment {
    Cartesian,
    Symmetric,
}

pub fn fragment_of(t: &ArrowTerm) -> Fragment {
    if t.connectives().tensor {
        Fragment::Symmetric
    } else {
        Fragment::Cartesian
    }
}

/// Interprets either fragment as a target-to-source leaf index map.
pub fn leaf_map(t: &ArrowTerm) -> Result<Vec<usize>, SemanticsError> {
    match fragment_of(t) {
        Fragment::Cartesian => Ok(interpret_cartesian(t)?.map),
        Fragment::Symmetric => Ok(interpret_symmetric(t)?.map),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_arrow;

    fn t(s: &str) -> ArrowTerm {
        parse_arrow(s).unwrap()
    }

    #[test]
    fn diagonal_copies_one_leaf_twice() {
        let m = interpret_cartesian(&t("w{p}")).unwrap();
        assert_eq!(m.map, vec![0, 0]);
        let l = m.links();
        assert_eq!(l[0], LeafLink { target: "L".into(), source: "ε".into() });
        assert_eq!(l[1], LeafLink { target: "R".into(), source: "ε".into() });
    }

    #[test]
    fn projections_differ() {
        let m1 = interpret_cartesian(&t("p1{p,p}")).unwrap();
        let m2 = interpret_cartesian(&t("p2{p,p}")).unwrap();
        assert_eq!(m1.map, vec![0]);
        assert_eq!(m2.map, vec![1]);
        let (at, a, b) = m1.first_difference(&m2).unwrap();
        assert_eq!((at.to_string(), a.to_string(), b.to_string()), ("ε".into(), "L".into(), "R".into()));
        assert!(!decide_equal_cartesian(&t("p1{p,p}"), &t("p2{p,p}")).unwrap());
    }

    #[test]
    fn projection_after_diagonal_is_identity() {
        assert!(decide_equal_cartesian(&t("p1{p,p} . w{p}"), &t("id{p}")).unwrap());
        assert!(decide_equal_cartesian(&t("p2{p,p} . w{p}"), &t("id{p}")).unwrap());
        assert!(decide_equal_cartesian(&t("pair(p1{p,q}, p2{p,q})"), &t("id{p/\\q}")).unwrap());
    }

    #[test]
    fn equality_needs_equal_endpoints() {
        assert!(matches!(
            decide_equal_cartesian(&t("p1{p,q}"), &t("p2{q,p}")),
            Err(SemanticsError::TypeMismatch(..))
        ));
    }

    #[test]
    fn restrictions() {
        assert!(matches!(
            interpret_cartesian(&t("f{p->p}")),
            Err(SemanticsError::NonStructuralTerm(_))
        ));
        assert!(matches!(
            interpret_cartesian(&t("c{p,p}")),
            Err(SemanticsError::WrongTheory(_))
        ));
        assert!(matches!(
            interpret_symmetric(&t("p1{p,p}")),
            Err(SemanticsError::WrongTheory(_))
        ));
        assert_eq!(interpret_cartesian(&t("bang{p/\\p}")).unwrap().map, Vec::<usize>::new());
    }

    #[test]
    fn symmetry_and_associativity() {
        let c = interpret_symmetric(&t("c{p,p}")).unwrap();
        assert_eq!(c.map, vec![1, 0]);
        assert!(!decide_equal_symmetric(&t("c{p,p}"), &t("id{p*p}")).unwrap());
        assert!(decide_equal_symmetric(&t("c{q,p} . c{p,q}"), &t("id{p*q}")).unwrap());
        assert!(interpret_symmetric(&t("a{p,q,r}")).unwrap().is_identity());
        let m = interpret_symmetric(&t("tens(c{p,q}, id{r})")).unwrap();
        assert_eq!(m.map, vec![1, 0, 2]);
        let m = interpret_symmetric(&t("c{p*q,r}")).unwrap();
        assert_eq!(m.map, vec![2, 0, 1]);
    }
}
