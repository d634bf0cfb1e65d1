use std::fmt;

use super::Sequent;
use crate::term::{ArrowTerm, Formula};

// Binary connectives associate to the left, so only a binary right operand
// needs parentheses.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Letter(p) => f.write_str(p),
            Formula::Top => f.write_str("T"),
            Formula::Conj(l, r) => write_binary(f, l, "/\\", r),
            Formula::Tensor(l, r) => write_binary(f, l, "*", r),
        }
    }
}

fn write_binary(f: &mut fmt::Formatter<'_>, l: &Formula, op: &str, r: &Formula) -> fmt::Result {
    write!(f, "{l}{op}")?;
    match r {
        Formula::Conj(..) | Formula::Tensor(..) => write!(f, "({r})"),
        _ => write!(f, "{r}"),
    }
}

impl fmt::Display for ArrowTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ArrowTerm::*;
        match self {
            Id(a) => write!(f, "id{{{a}}}"),
            Comp(g, h) => {
                if matches!(**g, Comp(..)) {
                    write!(f, "({g}) . {h}")
                } else {
                    write!(f, "{g} . {h}")
                }
            }
            Proj1(a, b) => write!(f, "p1{{{a},{b}}}"),
            Proj2(a, b) => write!(f, "p2{{{a},{b}}}"),
            Pair(x, y) => write!(f, "pair({x}, {y})"),
            Diag(a) => write!(f, "w{{{a}}}"),
            Gen {
                name,
                source,
                target,
            } => write!(f, "{name}{{{source}->{target}}}"),
            Sym(a, b) => write!(f, "c{{{a},{b}}}"),
            Assoc(a, b, c) => write!(f, "a{{{a},{b},{c}}}"),
            TensorOf(x, y) => write!(f, "tens({x}, {y})"),
            Bang(a) => write!(f, "bang{{{a}}}"),
            InvWitness {
                name,
                source,
                target,
            } => write!(f, "~{name}{{{source}->{target}}}"),
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        if self.premises.is_empty() {
            write!(f, "|- {}", self.conclusion)
        } else {
            write!(f, " |- {}", self.conclusion)
        }
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for ArrowTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
