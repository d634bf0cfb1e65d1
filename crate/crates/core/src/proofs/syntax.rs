//! Abstract objects and arrows of proof scripts, with parser and printer.

use std::fmt;

use super::ProofError;

/// Functors that may be applied to objects and arrows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Functor {
    F,
    G,
    D,
    P1,
    P2,
}

impl Functor {
    pub const ALL: [Functor; 5] = [Functor::F, Functor::G, Functor::D, Functor::P1, Functor::P2];

    pub fn parse(s: &str) -> Option<Functor> {
        Functor::ALL.into_iter().find(|f| f.to_string() == s)
    }

    /// Image of an object; `None` when a projection meets a non-pair.
    pub fn on_object(self, o: &Obj) -> Option<Obj> {
        Some(match self {
            Functor::F => Obj::F(Box::new(o.clone())),
            Functor::G => Obj::G(Box::new(o.clone())),
            Functor::D => Obj::Pair(Box::new(o.clone()), Box::new(o.clone())),
            Functor::P1 => match o {
                Obj::Pair(a, _) => (**a).clone(),
                _ => return None,
            },
            Functor::P2 => match o {
                Obj::Pair(_, b) => (**b).clone(),
                _ => return None,
            },
        })
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Functor::F => "F",
            Functor::G => "G",
            Functor::D => "D",
            Functor::P1 => "P1",
            Functor::P2 => "P2",
        })
    }
}

/// Objects: variables closed under `F`, `G`, pairing and binary product.
/// `D(X)` is read as `(X,X)` and projections of pairs are resolved.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obj {
    Var(String),
    F(Box<Obj>),
    G(Box<Obj>),
    Pair(Box<Obj>, Box<Obj>),
    Prod(Box<Obj>, Box<Obj>),
}

impl Obj {
    pub fn prod(a: Obj, b: Obj) -> Obj {
        Obj::Prod(Box::new(a), Box::new(b))
    }

    pub fn is_pair(&self) -> bool {
        matches!(self, Obj::Pair(..))
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::Var(v) => f.write_str(v),
            Obj::F(o) => write!(f, "F({o})"),
            Obj::G(o) => write!(f, "G({o})"),
            Obj::Pair(a, b) => write!(f, "({a},{b})"),
            Obj::Prod(a, b) => {
                write!(f, "{a}*")?;
                if matches!(**b, Obj::Prod(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

/// Arrows. After `norm`, compositions are flat lists (outermost first) of
/// at least two non-identity, non-composite arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arr {
    Var(String),
    Id(Obj),
    Gamma(Obj),
    Phi(Obj),
    Fun(Functor, Box<Arr>),
    PairArr(Box<Arr>, Box<Arr>),
    Tuple(Box<Arr>, Box<Arr>),
    Prod(Box<Arr>, Box<Arr>),
    K1(Obj, Obj),
    K2(Obj, Obj),
    W(Obj),
    C(Obj, Obj),
    Comp(Vec<Arr>),
}

impl Arr {
    pub fn fun(f: Functor, a: Arr) -> Arr {
        Arr::Fun(f, Box::new(a))
    }

    pub fn tuple(a: Arr, b: Arr) -> Arr {
        Arr::Tuple(Box::new(a), Box::new(b))
    }

    pub fn pair(a: Arr, b: Arr) -> Arr {
        Arr::PairArr(Box::new(a), Box::new(b))
    }

    /// Composite of a chain, outermost first.
    pub fn chain(items: Vec<Arr>) -> Arr {
        norm(&Arr::Comp(items))
    }

    /// Elements of a normalized arrow read as a chain.
    pub fn elements(&self) -> Vec<Arr> {
        match self {
            Arr::Comp(v) => v.clone(),
            other => vec![other.clone()],
        }
    }

    /// Whether `name` occurs as an arrow variable.
    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Arr::Var(v) => v == name,
            Arr::Fun(_, a) => a.mentions(name),
            Arr::PairArr(a, b) | Arr::Tuple(a, b) | Arr::Prod(a, b) => a.mentions(name) || b.mentions(name),
            Arr::Comp(v) => v.iter().any(|a| a.mentions(name)),
            _ => false,
        }
    }
}

/// Flattens compositions and drops identities; a chain of identities keeps
/// its first one.
pub fn norm(a: &Arr) -> Arr {
    match a {
        Arr::Comp(items) => {
            let mut flat = Vec::new();
            let mut first_id = None;
            for x in items {
                match norm(x) {
                    Arr::Comp(inner) => flat.extend(inner),
                    id @ Arr::Id(_) => {
                        first_id.get_or_insert(id);
                    }
                    other => flat.push(other),
                }
            }
            match flat.len() {
                0 => first_id.expect("compositions are nonempty"),
                1 => flat.pop().unwrap(),
                _ => Arr::Comp(flat),
            }
        }
        Arr::Fun(f, x) => Arr::fun(*f, norm(x)),
        Arr::PairArr(x, y) => Arr::pair(norm(x), norm(y)),
        Arr::Tuple(x, y) => Arr::tuple(norm(x), norm(y)),
        Arr::Prod(x, y) => Arr::Prod(Box::new(norm(x)), Box::new(norm(y))),
        other => other.clone(),
    }
}

impl fmt::Display for Arr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arr::Var(v) => f.write_str(v),
            Arr::Id(o) => write!(f, "id{{{o}}}"),
            Arr::Gamma(o) => write!(f, "gamma{{{o}}}"),
            Arr::Phi(o) => write!(f, "phi{{{o}}}"),
            Arr::Fun(k, a) => write!(f, "{k}({a})"),
            Arr::PairArr(a, b) => write!(f, "({a}, {b})"),
            Arr::Tuple(a, b) => write!(f, "<{a}, {b}>"),
            Arr::Prod(a, b) => write!(f, "({a}*{b})"),
            Arr::K1(x, y) => write!(f, "k1{{{x},{y}}}"),
            Arr::K2(x, y) => write!(f, "k2{{{x},{y}}}"),
            Arr::W(o) => write!(f, "w{{{o}}}"),
            Arr::C(x, y) => write!(f, "c{{{x},{y}}}"),
            Arr::Comp(items) => {
                for (i, a) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" . ")?;
                    }
                    if matches!(a, Arr::Comp(_)) {
                        write!(f, "({a})")?;
                    } else {
                        write!(f, "{a}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// An equation between arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Arr,
    pub rhs: Arr,
}

impl Equation {
    pub fn normalized(&self) -> Equation {
        Equation {
            lhs: norm(&self.lhs),
            rhs: norm(&self.rhs),
        }
    }

    pub fn swapped(&self) -> Equation {
        Equation {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Dot,
    Star,
    Lt,
    Gt,
    Eq,
    Implies,
    To,
    Colon,
}

fn lex(text: &str) -> Result<Vec<Tok>, String> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == b'_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(text[start..i].to_string()));
            continue;
        }
        let two = b.get(i + 1).copied();
        let (tok, len) = match (c, two) {
            (b'=', Some(b'>')) => (Tok::Implies, 2),
            (b'-', Some(b'>')) => (Tok::To, 2),
            (b'=', _) => (Tok::Eq, 1),
            (b'{', _) => (Tok::LBrace, 1),
            (b'}', _) => (Tok::RBrace, 1),
            (b'(', _) => (Tok::LParen, 1),
            (b')', _) => (Tok::RParen, 1),
            (b',', _) => (Tok::Comma, 1),
            (b'.', _) => (Tok::Dot, 1),
            (b'*', _) => (Tok::Star, 1),
            (b'<', _) => (Tok::Lt, 1),
            (b'>', _) => (Tok::Gt, 1),
            (b':', _) => (Tok::Colon, 1),
            _ => return Err(format!("unexpected character `{}`", text[i..].chars().next().unwrap())),
        };
        out.push(tok);
        i += len;
    }
    Ok(out)
}

struct P {
    toks: Vec<Tok>,
    pos: usize,
}

impl P {
    fn new(text: &str) -> Result<P, String> {
        Ok(P { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), String> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(format!("expected {t:?}, found {:?}", self.peek()))
        }
    }

    fn done(&self) -> Result<(), String> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(format!("trailing input at {t:?}")),
        }
    }

    fn ident(&mut self) -> Result<String, String> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            other => Err(format!("expected a name, found {other:?}")),
        }
    }

    fn obj(&mut self) -> Result<Obj, String> {
        let mut left = self.obj_atom()?;
        while self.eat(&Tok::Star) {
            left = Obj::prod(left, self.obj_atom()?);
        }
        Ok(left)
    }

    fn obj_atom(&mut self) -> Result<Obj, String> {
        if self.eat(&Tok::LParen) {
            let a = self.obj()?;
            if self.eat(&Tok::Comma) {
                let b = self.obj()?;
                self.expect(Tok::RParen)?;
                return Ok(Obj::Pair(Box::new(a), Box::new(b)));
            }
            self.expect(Tok::RParen)?;
            return Ok(a);
        }
        let name = self.ident()?;
        if let Some(k) = Functor::parse(&name) {
            self.expect(Tok::LParen)?;
            let o = self.obj()?;
            self.expect(Tok::RParen)?;
            return k
                .on_object(&o)
                .ok_or_else(|| format!("{k} applied to the non-pair object {o}"));
        }
        if name.starts_with(|c: char| c.is_ascii_uppercase()) {
            Ok(Obj::Var(name))
        } else {
            Err(format!("object names start with an uppercase letter: `{name}`"))
        }
    }

    fn braced(&mut self, n: usize) -> Result<Vec<Obj>, String> {
        self.expect(Tok::LBrace)?;
        let mut out = vec![self.obj()?];
        while out.len() < n {
            self.expect(Tok::Comma)?;
            out.push(self.obj()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(out)
    }

    fn arrow(&mut self) -> Result<Arr, String> {
        let mut items = vec![self.arrow_prod()?];
        while self.eat(&Tok::Dot) {
            items.push(self.arrow_prod()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Arr::Comp(items)
        })
    }

    fn arrow_prod(&mut self) -> Result<Arr, String> {
        let mut left = self.arrow_atom()?;
        while self.eat(&Tok::Star) {
            left = Arr::Prod(Box::new(left), Box::new(self.arrow_atom()?));
        }
        Ok(left)
    }

    fn arrow_atom(&mut self) -> Result<Arr, String> {
        if self.eat(&Tok::Lt) {
            let a = self.arrow()?;
            self.expect(Tok::Comma)?;
            let b = self.arrow()?;
            self.expect(Tok::Gt)?;
            return Ok(Arr::tuple(a, b));
        }
        if self.eat(&Tok::LParen) {
            let a = self.arrow()?;
            if self.eat(&Tok::Comma) {
                let b = self.arrow()?;
                self.expect(Tok::RParen)?;
                return Ok(Arr::pair(a, b));
            }
            self.expect(Tok::RParen)?;
            return Ok(a);
        }
        let name = self.ident()?;
        let braced = self.peek() == Some(&Tok::LBrace);
        match name.as_str() {
            "id" if braced => Ok(Arr::Id(self.braced(1)?.remove(0))),
            "gamma" if braced => Ok(Arr::Gamma(self.braced(1)?.remove(0))),
            "phi" if braced => Ok(Arr::Phi(self.braced(1)?.remove(0))),
            "w" if braced => Ok(Arr::W(self.braced(1)?.remove(0))),
            "k1" | "k2" | "c" if braced => {
                let mut v = self.braced(2)?;
                let (x, y) = (v.remove(0), v.remove(0));
                Ok(match name.as_str() {
                    "k1" => Arr::K1(x, y),
                    "k2" => Arr::K2(x, y),
                    _ => Arr::C(x, y),
                })
            }
            _ => {
                if let Some(k) = Functor::parse(&name) {
                    self.expect(Tok::LParen)?;
                    let a = self.arrow()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Arr::fun(k, a));
                }
                if name.starts_with(|c: char| c.is_ascii_lowercase()) {
                    Ok(Arr::Var(name))
                } else {
                    Err(format!("arrow names start with a lowercase letter: `{name}`"))
                }
            }
        }
    }

    fn equation(&mut self) -> Result<Equation, String> {
        let lhs = self.arrow()?;
        self.expect(Tok::Eq)?;
        let rhs = self.arrow()?;
        Ok(Equation { lhs, rhs })
    }
}

pub fn parse_obj(text: &str) -> Result<Obj, String> {
    let mut p = P::new(text)?;
    let o = p.obj()?;
    p.done()?;
    Ok(o)
}

pub fn parse_arr(text: &str) -> Result<Arr, String> {
    let mut p = P::new(text)?;
    let a = p.arrow()?;
    p.done()?;
    Ok(a)
}

pub fn parse_equation(text: &str) -> Result<Equation, String> {
    let mut p = P::new(text)?;
    let e = p.equation()?;
    p.done()?;
    Ok(e)
}

/// `[premise =>] conclusion`.
pub fn parse_goal(text: &str) -> Result<(Option<Equation>, Equation), String> {
    let mut p = P::new(text)?;
    let first = p.equation()?;
    if p.eat(&Tok::Implies) {
        let second = p.equation()?;
        p.done()?;
        Ok((Some(first), second))
    } else {
        p.done()?;
        Ok((None, first))
    }
}

/// `name, name : Source -> Target`.
pub fn parse_var_decl(text: &str) -> Result<(Vec<String>, Obj, Obj), String> {
    let mut p = P::new(text)?;
    let mut names = vec![p.ident()?];
    while p.eat(&Tok::Comma) {
        names.push(p.ident()?);
    }
    p.expect(Tok::Colon)?;
    let s = p.obj()?;
    p.expect(Tok::To)?;
    let t = p.obj()?;
    p.done()?;
    if let Some(bad) = names.iter().find(|n| !n.starts_with(|c: char| c.is_ascii_lowercase())) {
        return Err(format!("arrow names start with a lowercase letter: `{bad}`"));
    }
    Ok((names, s, t))
}

/// `label: equation` of an equational hypothesis.
pub fn parse_labelled(text: &str) -> Result<(String, Equation), String> {
    let mut p = P::new(text)?;
    let label = p.ident()?;
    if p.peek() != Some(&Tok::Colon) || p.peek2().is_none() {
        return Err("expected `label: lhs = rhs`".into());
    }
    p.pos += 1;
    let e = p.equation()?;
    p.done()?;
    Ok((label, e))
}

impl From<(usize, String)> for ProofError {
    fn from((line, msg): (usize, String)) -> Self {
        ProofError::Parse { line, msg }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_normal_form() {
        for s in [
            "phi{F(B)} . F(gamma{B}) . F(g1)",
            "<k1{B,B}, k2{B,B}>",
            "(f*f) . w{A}",
            "(g, g2)",
            "G(F(h)) . gamma{G(F(B))}",
        ] {
            let a = norm(&parse_arr(s).unwrap());
            assert_eq!(a.to_string(), s);
            assert_eq!(norm(&parse_arr(&a.to_string()).unwrap()), a);
        }
        let a = norm(&parse_arr("(f . id{B}) . (id{A} . g)").unwrap());
        assert_eq!(a.to_string(), "f . g");
        let i = norm(&parse_arr("id{A} . id{A}").unwrap());
        assert_eq!(i.to_string(), "id{A}");
    }

    #[test]
    fn diagonal_objects() {
        assert_eq!(parse_obj("D(B)").unwrap().to_string(), "(B,B)");
        assert_eq!(parse_obj("P2(D(B))").unwrap().to_string(), "B");
        assert!(parse_obj("P1(B)").is_err());
        assert_eq!(parse_obj("B*B*B").unwrap().to_string(), "B*B*B");
    }
}
