//! Formulae and typed arrow terms of the freely generated categories.
//!
//! Formulae are the objects: generator letters closed under `/\` and `T`
//! (cartesian theories) or under `*` (the symmetric associative theory).
//! Arrow terms are deductions; each well-formed term has exactly one
//! source and one target, computed by [`typecheck`].

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// An object of a free category.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Letter(String),
    Conj(Box<Formula>, Box<Formula>),
    Top,
    Tensor(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn letter(name: impl Into<String>) -> Self {
        Formula::Letter(name.into())
    }

    pub fn conj(left: Formula, right: Formula) -> Self {
        Formula::Conj(Box::new(left), Box::new(right))
    }

    pub fn tensor(left: Formula, right: Formula) -> Self {
        Formula::Tensor(Box::new(left), Box::new(right))
    }

    /// Nesting depth of binary connectives; letters and `T` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Letter(_) | Formula::Top => 0,
            Formula::Conj(l, r) | Formula::Tensor(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Letters in left-to-right order, with repetitions.
    pub fn letter_occurrences(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::Letter(p) => out.push(p),
            Formula::Top => {}
            Formula::Conj(l, r) | Formula::Tensor(l, r) => {
                l.collect_letters(out);
                r.collect_letters(out);
            }
        }
    }

    pub fn letters(&self) -> BTreeSet<&str> {
        self.letter_occurrences().into_iter().collect()
    }

    /// Left-to-right leaf enumeration; `T` contributes no leaves.
    pub fn leaves(&self) -> Vec<(LeafPath, String)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut String::new(), &mut out);
        out
    }

    fn collect_leaves(&self, prefix: &mut String, out: &mut Vec<(LeafPath, String)>) {
        match self {
            Formula::Letter(p) => out.push((LeafPath(prefix.clone()), p.clone())),
            Formula::Top => {}
            Formula::Conj(l, r) | Formula::Tensor(l, r) => {
                prefix.push('L');
                l.collect_leaves(prefix, out);
                prefix.pop();
                prefix.push('R');
                r.collect_leaves(prefix, out);
                prefix.pop();
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Formula::Letter(_) => 1,
            Formula::Top => 0,
            Formula::Conj(l, r) | Formula::Tensor(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn connectives(&self) -> Connectives {
        let mut c = Connectives::default();
        self.note_connectives(&mut c);
        c
    }

    fn note_connectives(&self, c: &mut Connectives) {
        match self {
            Formula::Letter(_) => {}
            Formula::Top => c.cartesian = true,
            Formula::Conj(l, r) => {
                c.cartesian = true;
                l.note_connectives(c);
                r.note_connectives(c);
            }
            Formula::Tensor(l, r) => {
                c.tensor = true;
                l.note_connectives(c);
                r.note_connectives(c);
            }
        }
    }

    /// Replaces every occurrence of letter `from` by `to`.
    pub fn rename_letter(&self, from: &str, to: &str) -> Formula {
        match self {
            Formula::Letter(p) if p == from => Formula::letter(to),
            Formula::Letter(_) | Formula::Top => self.clone(),
            Formula::Conj(l, r) => Formula::conj(l.rename_letter(from, to), r.rename_letter(from, to)),
            Formula::Tensor(l, r) => {
                Formula::tensor(l.rename_letter(from, to), r.rename_letter(from, to))
            }
        }
    }
}

/// Which connective families a formula or term uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Connectives {
    pub cartesian: bool,
    pub tensor: bool,
}

impl Connectives {
    pub fn merge(self, other: Connectives) -> Connectives {
        Connectives {
            cartesian: self.cartesian || other.cartesian,
            tensor: self.tensor || other.tensor,
        }
    }

    pub fn is_mixed(self) -> bool {
        self.cartesian && self.tensor
    }
}

/// Position of a leaf: a string over `L`/`R` read from the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeafPath(pub String);

impl fmt::Display for LeafPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.0)
        }
    }
}

/// A deduction: a typed term of the free category.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArrowTerm {
    Id(Formula),
    /// `Comp(g, f)` is `g . f`: `f` acts first.
    Comp(Box<ArrowTerm>, Box<ArrowTerm>),
    Proj1(Formula, Formula),
    Proj2(Formula, Formula),
    Pair(Box<ArrowTerm>, Box<ArrowTerm>),
    /// Notation for `Pair(Id(A), Id(A))`.
    Diag(Formula),
    Gen {
        name: String,
        source: Formula,
        target: Formula,
    },
    /// `A * B -> B * A`.
    Sym(Formula, Formula),
    /// `A * (B * C) -> (A * B) * C`.
    Assoc(Formula, Formula, Formula),
    TensorOf(Box<ArrowTerm>, Box<ArrowTerm>),
    Bang(Formula),
    /// Named arrow standing for an asserted inverse.
    InvWitness {
        name: String,
        source: Formula,
        target: Formula,
    },
}

impl ArrowTerm {
    pub fn comp(g: ArrowTerm, f: ArrowTerm) -> Self {
        ArrowTerm::Comp(Box::new(g), Box::new(f))
    }

    pub fn pair(f: ArrowTerm, g: ArrowTerm) -> Self {
        ArrowTerm::Pair(Box::new(f), Box::new(g))
    }

    pub fn tensor_of(f: ArrowTerm, g: ArrowTerm) -> Self {
        ArrowTerm::TensorOf(Box::new(f), Box::new(g))
    }

    pub fn gen(name: impl Into<String>, source: Formula, target: Formula) -> Self {
        ArrowTerm::Gen {
            name: name.into(),
            source,
            target,
        }
    }

    /// Replaces every `Diag(A)` by `Pair(Id(A), Id(A))`.
    pub fn expand(&self) -> ArrowTerm {
        use ArrowTerm::*;
        match self {
            Diag(a) => ArrowTerm::pair(Id(a.clone()), Id(a.clone())),
            Comp(g, f) => ArrowTerm::comp(g.expand(), f.expand()),
            Pair(f, g) => ArrowTerm::pair(f.expand(), g.expand()),
            TensorOf(f, g) => ArrowTerm::tensor_of(f.expand(), g.expand()),
            other => other.clone(),
        }
    }

    /// Number of arrow constructors; formula annotations do not count and
    /// `Diag` counts as a single constructor.
    pub fn size(&self) -> usize {
        use ArrowTerm::*;
        match self {
            Comp(a, b) | Pair(a, b) | TensorOf(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    /// True when no generator arrow or inverse witness occurs.
    pub fn is_structural(&self) -> bool {
        use ArrowTerm::*;
        match self {
            Gen { .. } | InvWitness { .. } => false,
            Comp(a, b) | Pair(a, b) | TensorOf(a, b) => a.is_structural() && b.is_structural(),
            _ => true,
        }
    }

    /// Sorted multiset of generator-arrow names occurring in the term.
    pub fn generator_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_gens(&mut out);
        out.sort();
        out
    }

    fn collect_gens(&self, out: &mut Vec<String>) {
        use ArrowTerm::*;
        match self {
            Gen { name, .. } => out.push(name.clone()),
            Comp(a, b) | Pair(a, b) | TensorOf(a, b) => {
                a.collect_gens(out);
                b.collect_gens(out);
            }
            _ => {}
        }
    }

    /// Connectives used by the term's formula annotations and constructors.
    pub fn connectives(&self) -> Connectives {
        use ArrowTerm::*;
        let cart = Connectives {
            cartesian: true,
            tensor: false,
        };
        let tens = Connectives {
            cartesian: false,
            tensor: true,
        };
        match self {
            Id(a) => a.connectives(),
            Comp(g, f) => g.connectives().merge(f.connectives()),
            Proj1(a, b) | Proj2(a, b) => cart.merge(a.connectives()).merge(b.connectives()),
            Pair(f, g) => cart.merge(f.connectives()).merge(g.connectives()),
            Diag(a) | Bang(a) => cart.merge(a.connectives()),
            Gen { source, target, .. } | InvWitness { source, target, .. } => {
                source.connectives().merge(target.connectives())
            }
            Sym(a, b) => tens.merge(a.connectives()).merge(b.connectives()),
            Assoc(a, b, c) => tens
                .merge(a.connectives())
                .merge(b.connectives())
                .merge(c.connectives()),
            TensorOf(f, g) => tens.merge(f.connectives()).merge(g.connectives()),
        }
    }

    /// Source and target without checking letters against a signature.
    pub fn endpoints(&self) -> Result<(Formula, Formula), TypeError> {
        typecheck_with(self, None)
    }
}

/// A generating arrow of the signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenArrow {
    pub name: String,
    pub source: Formula,
    pub target: Formula,
}

/// Generating objects and generating arrows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub letters: BTreeSet<String>,
    pub arrows: Vec<GenArrow>,
}

impl Signature {
    pub fn with_letters<I, S>(letters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Signature {
            letters: letters.into_iter().map(Into::into).collect(),
            arrows: Vec::new(),
        }
    }

    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        source: Formula,
        target: Formula,
    ) -> Result<(), TypeError> {
        let name = name.into();
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(TypeError::DuplicateGenerator(name));
        }
        self.check_formula(&source)?;
        self.check_formula(&target)?;
        self.arrows.push(GenArrow {
            name,
            source,
            target,
        });
        Ok(())
    }

    pub fn arrow(&self, name: &str) -> Option<&GenArrow> {
        self.arrows.iter().find(|a| a.name == name)
    }

    pub fn check_formula(&self, a: &Formula) -> Result<(), TypeError> {
        for p in a.letters() {
            if !self.letters.contains(p) {
                return Err(TypeError::UnknownLetter(p.to_string()));
            }
        }
        if a.connectives().is_mixed() {
            return Err(TypeError::MixedConnectives);
        }
        Ok(())
    }

    /// Smallest signature covering the letters and generator arrows of `terms`.
    pub fn covering<'a>(terms: impl IntoIterator<Item = &'a ArrowTerm>) -> Signature {
        fn walk(t: &ArrowTerm, sig: &mut Signature) {
            use ArrowTerm::*;
            let note = |a: &Formula, sig: &mut Signature| {
                for p in a.letters() {
                    sig.letters.insert(p.to_string());
                }
            };
            match t {
                Id(a) | Diag(a) | Bang(a) => note(a, sig),
                Proj1(a, b) | Proj2(a, b) | Sym(a, b) => {
                    note(a, sig);
                    note(b, sig);
                }
                Assoc(a, b, c) => {
                    note(a, sig);
                    note(b, sig);
                    note(c, sig);
                }
                Comp(x, y) | Pair(x, y) | TensorOf(x, y) => {
                    walk(x, sig);
                    walk(y, sig);
                }
                Gen {
                    name,
                    source,
                    target,
                } => {
                    note(source, sig);
                    note(target, sig);
                    if sig.arrow(name).is_none() {
                        sig.arrows.push(GenArrow {
                            name: name.clone(),
                            source: source.clone(),
                            target: target.clone(),
                        });
                    }
                }
                InvWitness { source, target, .. } => {
                    note(source, sig);
                    note(target, sig);
                }
            }
        }
        let mut sig = Signature::default();
        for t in terms {
            walk(t, &mut sig);
        }
        sig
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("composition mismatch: inner target {inner_target} differs from outer source {outer_source}")]
    CompositionMismatch {
        inner_target: Formula,
        outer_source: Formula,
    },
    #[error("pairing mismatch: sources {left} and {right} differ")]
    PairSourceMismatch { left: Formula, right: Formula },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("generator `{name}` is declared as {declared} but used as {used}")]
    GeneratorTypeMismatch {
        name: String,
        declared: String,
        used: String,
    },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("conjunction and tensor mixed in one theory")]
    MixedConnectives,
}

/// Computes the unique `(source, target)` of `t`, checking letters and
/// generator arrows against `sig`. `Diag` is expanded first.
pub fn typecheck(t: &ArrowTerm, sig: &Signature) -> Result<(Formula, Formula), TypeError> {
    typecheck_with(t, Some(sig))
}

fn typecheck_with(
    t: &ArrowTerm,
    sig: Option<&Signature>,
) -> Result<(Formula, Formula), TypeError> {
    if t.connectives().is_mixed() {
        return Err(TypeError::MixedConnectives);
    }
    infer(&t.expand(), sig)
}

fn infer(t: &ArrowTerm, sig: Option<&Signature>) -> Result<(Formula, Formula), TypeError> {
    use ArrowTerm::*;
    let check = |a: &Formula| match sig {
        Some(s) => s.check_formula(a),
        None => Ok(()),
    };
    Ok(match t {
        Id(a) => {
            check(a)?;
            (a.clone(), a.clone())
        }
        Comp(g, f) => {
            let (fs, ft) = infer(f, sig)?;
            let (gs, gt) = infer(g, sig)?;
            if ft != gs {
                return Err(TypeError::CompositionMismatch {
                    inner_target: ft,
                    outer_source: gs,
                });
            }
            (fs, gt)
        }
        Proj1(a, b) => {
            check(a)?;
            check(b)?;
            (Formula::conj(a.clone(), b.clone()), a.clone())
        }
        Proj2(a, b) => {
            check(a)?;
            check(b)?;
            (Formula::conj(a.clone(), b.clone()), b.clone())
        }
        Pair(f, g) => {
            let (fs, ft) = infer(f, sig)?;
            let (gs, gt) = infer(g, sig)?;
            if fs != gs {
                return Err(TypeError::PairSourceMismatch {
                    left: fs,
                    right: gs,
                });
            }
            (fs, Formula::conj(ft, gt))
        }
        Diag(a) => {
            check(a)?;
            (a.clone(), Formula::conj(a.clone(), a.clone()))
        }
        Gen {
            name,
            source,
            target,
        } => {
            check(source)?;
            check(target)?;
            if let Some(s) = sig {
                let decl = s
                    .arrow(name)
                    .ok_or_else(|| TypeError::UnknownGenerator(name.clone()))?;
                if &decl.source != source || &decl.target != target {
                    return Err(TypeError::GeneratorTypeMismatch {
                        name: name.clone(),
                        declared: format!("{} -> {}", decl.source, decl.target),
                        used: format!("{} -> {}", source, target),
                    });
                }
            }
            (source.clone(), target.clone())
        }
        InvWitness { source, target, .. } => {
            check(source)?;
            check(target)?;
            (source.clone(), target.clone())
        }
        Sym(a, b) => {
            check(a)?;
            check(b)?;
            (
                Formula::tensor(a.clone(), b.clone()),
                Formula::tensor(b.clone(), a.clone()),
            )
        }
        Assoc(a, b, c) => {
            check(a)?;
            check(b)?;
            check(c)?;
            (
                Formula::tensor(a.clone(), Formula::tensor(b.clone(), c.clone())),
                Formula::tensor(Formula::tensor(a.clone(), b.clone()), c.clone()),
            )
        }
        TensorOf(f, g) => {
            let (fs, ft) = infer(f, sig)?;
            let (gs, gt) = infer(g, sig)?;
            (Formula::tensor(fs, gs), Formula::tensor(ft, gt))
        }
        Bang(a) => {
            check(a)?;
            (a.clone(), Formula::Top)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::letter("p")
    }
    fn q() -> Formula {
        Formula::letter("q")
    }

    fn sig() -> Signature {
        Signature::with_letters(["p", "q", "r"])
    }

    #[test]
    fn projection_typing() {
        let t = ArrowTerm::Proj1(p(), q());
        assert_eq!(typecheck(&t, &sig()).unwrap(), (Formula::conj(p(), q()), p()));
    }

    #[test]
    fn diagonal_typing() {
        let t = ArrowTerm::Diag(p());
        assert_eq!(typecheck(&t, &sig()).unwrap(), (p(), Formula::conj(p(), p())));
    }

    #[test]
    fn composition_mismatch() {
        let t = ArrowTerm::comp(ArrowTerm::Proj1(p(), q()), ArrowTerm::Id(q()));
        assert!(matches!(
            typecheck(&t, &sig()),
            Err(TypeError::CompositionMismatch { .. })
        ));
    }

    #[test]
    fn unknown_generator_and_letter() {
        let t = ArrowTerm::gen("f", p(), p());
        assert_eq!(
            typecheck(&t, &sig()),
            Err(TypeError::UnknownGenerator("f".into()))
        );
        let t = ArrowTerm::Id(Formula::letter("z"));
        assert_eq!(typecheck(&t, &sig()), Err(TypeError::UnknownLetter("z".into())));
    }

    #[test]
    fn mixed_connectives_rejected() {
        let t = ArrowTerm::Id(Formula::conj(p(), Formula::tensor(p(), q())));
        assert_eq!(typecheck(&t, &sig()), Err(TypeError::MixedConnectives));
        let t = ArrowTerm::comp(ArrowTerm::Sym(p(), p()), ArrowTerm::Id(Formula::tensor(p(), p())));
        assert!(typecheck(&t, &sig()).is_ok());
        let t = ArrowTerm::Proj1(Formula::tensor(p(), p()), p());
        assert_eq!(typecheck(&t, &sig()), Err(TypeError::MixedConnectives));
    }

    #[test]
    fn leaves_enumeration() {
        let a = Formula::conj(p(), Formula::conj(q(), p()));
        let got: Vec<(String, String)> = a
            .leaves()
            .into_iter()
            .map(|(path, l)| (path.0, l))
            .collect();
        assert_eq!(
            got,
            vec![
                ("L".into(), "p".into()),
                ("RL".into(), "q".into()),
                ("RR".into(), "p".into())
            ]
        );
        assert!(Formula::Top.leaves().is_empty());
        assert_eq!(p().leaves(), vec![(LeafPath(String::new()), "p".to_string())]);
    }

    #[test]
    fn generator_checked_against_signature() {
        let mut s = sig();
        s.add_arrow("f", p(), q()).unwrap();
        assert!(typecheck(&ArrowTerm::gen("f", p(), q()), &s).is_ok());
        assert!(matches!(
            typecheck(&ArrowTerm::gen("f", p(), p()), &s),
            Err(TypeError::GeneratorTypeMismatch { .. })
        ));
        assert_eq!(
            s.add_arrow("f", p(), p()),
            Err(TypeError::DuplicateGenerator("f".into()))
        );
    }

    #[test]
    fn size_counts_constructors() {
        let t = ArrowTerm::comp(ArrowTerm::Proj1(p(), p()), ArrowTerm::Diag(p()));
        assert_eq!(t.size(), 3);
        assert_eq!(t.expand().size(), 5);
    }
}
