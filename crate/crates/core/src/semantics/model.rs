//! Finite-set models: letters denote finite sets, `/\` and `*` denote
//! cartesian product, `T` a one-element set.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::SemanticsError;
use crate::term::{ArrowTerm, Formula};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Atom(usize),
    Unit,
    Pair(Box<Value>, Box<Value>),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    fn split(&self) -> (&Value, &Value) {
        match self {
            Value::Pair(a, b) => (a, b),
            other => panic!("value {other} is not a pair"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(n) => write!(f, "{n}"),
            Value::Unit => f.write_str("*"),
            Value::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Carrier sizes for letters and function tables for named arrows.
#[derive(Clone, Debug, Default)]
pub struct FiniteModel {
    pub carriers: BTreeMap<String, usize>,
    pub tables: BTreeMap<String, BTreeMap<Value, Value>>,
}

impl FiniteModel {
    /// Every letter gets the carrier `{0, ..., n-1}`.
    pub fn uniform<'a>(letters: impl IntoIterator<Item = &'a str>, n: usize) -> Self {
        assert!(n > 0, "carriers are nonempty");
        FiniteModel {
            carriers: letters.into_iter().map(|l| (l.to_string(), n)).collect(),
            tables: BTreeMap::new(),
        }
    }

    pub fn with_table(mut self, name: &str, rows: impl IntoIterator<Item = (Value, Value)>) -> Self {
        self.tables.insert(name.to_string(), rows.into_iter().collect());
        self
    }

    /// All elements of the set denoted by `a`, in a fixed order.
    pub fn elements(&self, a: &Formula) -> Vec<Value> {
        match a {
            Formula::Letter(p) => {
                let n = self.carriers.get(p).copied().unwrap_or(1);
                (0..n).map(Value::Atom).collect()
            }
            Formula::Top => vec![Value::Unit],
            Formula::Conj(l, r) | Formula::Tensor(l, r) => {
                let rs = self.elements(r);
                self.elements(l)
                    .into_iter()
                    .flat_map(|x| rs.iter().map(move |y| Value::pair(x.clone(), y.clone())))
                    .collect()
            }
        }
    }

    fn check_table(&self, name: &str, source: &Formula, target: &Formula) -> Result<(), SemanticsError> {
        let table = self
            .tables
            .get(name)
            .ok_or_else(|| SemanticsError::MissingGeneratorTable(name.to_string()))?;
        let targets = self.elements(target);
        let total = self
            .elements(source)
            .iter()
            .all(|x| table.get(x).is_some_and(|y| targets.contains(y)));
        if total {
            Ok(())
        } else {
            Err(SemanticsError::BadGeneratorTable(name.to_string()))
        }
    }

    /// Applies `t` to one element of its source.
    pub fn apply(&self, t: &ArrowTerm, x: &Value) -> Value {
        use ArrowTerm::*;
        match t {
            Id(_) => x.clone(),
            Comp(g, f) => self.apply(g, &self.apply(f, x)),
            Proj1(..) => x.split().0.clone(),
            Proj2(..) => x.split().1.clone(),
            Pair(f, g) => Value::pair(self.apply(f, x), self.apply(g, x)),
            Diag(_) => Value::pair(x.clone(), x.clone()),
            Bang(_) => Value::Unit,
            Sym(..) => {
                let (a, b) = x.split();
                Value::pair(b.clone(), a.clone())
            }
            Assoc(..) => {
                let (a, bc) = x.split();
                let (b, c) = bc.split();
                Value::pair(Value::pair(a.clone(), b.clone()), c.clone())
            }
            TensorOf(f, g) => {
                let (a, b) = x.split();
                Value::pair(self.apply(f, a), self.apply(g, b))
            }
            Gen { name, .. } | InvWitness { name, .. } => self.tables[name][x].clone(),
        }
    }
}

/// Full input-to-output table of a term in a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionTable {
    pub rows: Vec<(Value, Value)>,
}

impl FunctionTable {
    /// First input on which the two tables disagree.
    pub fn first_difference(&self, other: &FunctionTable) -> Option<&Value> {
        self.rows
            .iter()
            .zip(&other.rows)
            .find(|(a, b)| a != b)
            .map(|(a, _)| &a.0)
    }
}

fn named_arrows(t: &ArrowTerm, out: &mut Vec<(String, Formula, Formula)>) {
    use ArrowTerm::*;
    match t {
        Gen {
            name,
            source,
            target,
        }
        | InvWitness {
            name,
            source,
            target,
        } => out.push((name.clone(), source.clone(), target.clone())),
        Comp(a, b) | Pair(a, b) | TensorOf(a, b) => {
            named_arrows(a, out);
            named_arrows(b, out);
        }
        _ => {}
    }
}

pub fn eval_finite_model(t: &ArrowTerm, m: &FiniteModel) -> Result<FunctionTable, SemanticsError> {
    let (source, _) = t.endpoints()?;
    let mut named = Vec::new();
    named_arrows(t, &mut named);
    for (name, s, tg) in &named {
        m.check_table(name, s, tg)?;
    }
    let rows = m
        .elements(&source)
        .into_iter()
        .map(|x| {
            let y = m.apply(t, &x);
            (x, y)
        })
        .collect();
    Ok(FunctionTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_arrow;

    fn t(s: &str) -> ArrowTerm {
        parse_arrow(s).unwrap()
    }

    fn a(n: usize) -> Value {
        Value::Atom(n)
    }

    fn two() -> FiniteModel {
        FiniteModel::uniform(["p"], 2)
    }

    #[test]
    fn diagonal_table() {
        let tab = eval_finite_model(&t("w{p}"), &two()).unwrap();
        assert_eq!(
            tab.rows,
            vec![(a(0), Value::pair(a(0), a(0))), (a(1), Value::pair(a(1), a(1)))]
        );
    }

    #[test]
    fn projections_differ_at_zero_one() {
        let t1 = eval_finite_model(&t("p1{p,p}"), &two()).unwrap();
        let t2 = eval_finite_model(&t("p2{p,p}"), &two()).unwrap();
        assert_eq!(t1.first_difference(&t2), Some(&Value::pair(a(0), a(1))));
    }

    #[test]
    fn symmetry_vs_identity_by_enumeration() {
        // The four inputs written out by hand.
        let expected_c = vec![
            (Value::pair(a(0), a(0)), Value::pair(a(0), a(0))),
            (Value::pair(a(0), a(1)), Value::pair(a(1), a(0))),
            (Value::pair(a(1), a(0)), Value::pair(a(0), a(1))),
            (Value::pair(a(1), a(1)), Value::pair(a(1), a(1))),
        ];
        let c = eval_finite_model(&t("c{p,p}"), &two()).unwrap();
        assert_eq!(c.rows, expected_c);
        let id = eval_finite_model(&t("id{p*p}"), &two()).unwrap();
        assert_eq!(c.first_difference(&id), Some(&Value::pair(a(0), a(1))));
    }

    #[test]
    fn generator_tables() {
        let m = two().with_table("f", [(a(0), a(1)), (a(1), a(1))]);
        let tab = eval_finite_model(&t("pair(f{p->p}, id{p})"), &m).unwrap();
        assert_eq!(tab.rows[0].1, Value::pair(a(1), a(0)));
        assert_eq!(
            eval_finite_model(&t("g{p->p}"), &m),
            Err(SemanticsError::MissingGeneratorTable("g".into()))
        );
        let bad = two().with_table("f", [(a(0), a(5))]);
        assert_eq!(
            eval_finite_model(&t("f{p->p}"), &bad),
            Err(SemanticsError::BadGeneratorTable("f".into()))
        );
    }

    #[test]
    fn terminal_and_associativity() {
        let m = FiniteModel::uniform(["p", "q"], 2);
        assert_eq!(m.elements(&Formula::Top), vec![Value::Unit]);
        let tab = eval_finite_model(&t("bang{p}"), &m).unwrap();
        assert!(tab.rows.iter().all(|(_, y)| *y == Value::Unit));
        let tab = eval_finite_model(&t("a{p,q,p}"), &m).unwrap();
        assert_eq!(tab.rows.len(), 8);
        assert_eq!(
            tab.rows[1].1,
            Value::pair(Value::pair(a(0), a(0)), a(1))
        );
    }
}
