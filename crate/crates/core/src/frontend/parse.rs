//! Recursive-descent parser for formulae, arrow terms and sequents.

use thiserror::Error;

use super::Sequent;
use crate::term::{ArrowTerm, Formula};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("conjunction and tensor mixed in one expression")]
    MixedConnectives,
}

const KEYWORDS: &[&str] = &["id", "p1", "p2", "pair", "w", "c", "a", "bang", "tens"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    /// Uppercase formula variable of a schematic equation.
    Meta(String),
    Top,
    Conj,
    Tensor,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Arrow,
    Turnstile,
    Tilde,
    Equals,
}

struct Lexer;

impl Lexer {
    fn run(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            let tok = match c {
                b'#' => break,
                b' ' | b'\t' | b'\r' | b'\n' => {
                    i += 1;
                    continue;
                }
                b'a'..=b'z' => {
                    while i < bytes.len()
                        && (bytes[i].is_ascii_lowercase()
                            || bytes[i].is_ascii_digit()
                            || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    out.push((start, Tok::Ident(text[start..i].to_string())));
                    continue;
                }
                b'T' => Tok::Top,
                b'A'..=b'Z' => Tok::Meta((c as char).to_string()),
                b'*' => Tok::Tensor,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'{' => Tok::LBrace,
                b'}' => Tok::RBrace,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b'~' => Tok::Tilde,
                b'=' => Tok::Equals,
                b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                    i += 1;
                    Tok::Conj
                }
                b'-' if bytes.get(i + 1) == Some(&b'>') => {
                    i += 1;
                    Tok::Arrow
                }
                b'|' if bytes.get(i + 1) == Some(&b'-') => {
                    i += 1;
                    Tok::Turnstile
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                    })
                }
            };
            i += 1;
            out.push((start, tok));
        }
        Ok(out)
    }
}

/// Token cursor shared by the grammar entry points.
pub(crate) struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: Lexer::run(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.error("trailing input")
        } else {
            Ok(())
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("expected identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.formula_atom()?;
        loop {
            if self.eat(&Tok::Conj) {
                left = Formula::conj(left, self.formula_atom()?);
            } else if self.eat(&Tok::Tensor) {
                left = Formula::tensor(left, self.formula_atom()?);
            } else {
                return Ok(left);
            }
        }
    }

    fn formula_atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Formula::Letter(self.ident()?)),
            Some(Tok::Meta(m)) => {
                let m = m.clone();
                self.pos += 1;
                Ok(Formula::Letter(m))
            }
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let a = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(a)
            }
            _ => self.error("expected formula"),
        }
    }

    fn braced_formulas(&mut self, n: usize) -> Result<Vec<Formula>, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.expect(Tok::Comma, "`,`")?;
            }
            out.push(self.formula()?);
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(out)
    }

    fn typed_name(&mut self) -> Result<(Formula, Formula), ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let s = self.formula()?;
        self.expect(Tok::Arrow, "`->`")?;
        let t = self.formula()?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok((s, t))
    }

    pub(crate) fn arrow(&mut self) -> Result<ArrowTerm, ParseError> {
        let g = self.arrow_atom()?;
        if self.eat(&Tok::Dot) {
            Ok(ArrowTerm::comp(g, self.arrow()?))
        } else {
            Ok(g)
        }
    }

    fn two_args(&mut self) -> Result<(ArrowTerm, ArrowTerm), ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let x = self.arrow()?;
        self.expect(Tok::Comma, "`,`")?;
        let y = self.arrow()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((x, y))
    }

    fn arrow_atom(&mut self) -> Result<ArrowTerm, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.arrow()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Tilde) => {
                self.pos += 1;
                let name = self.ident()?;
                let (source, target) = self.typed_name()?;
                Ok(ArrowTerm::InvWitness {
                    name,
                    source,
                    target,
                })
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                let f = |p: &mut Self, n| p.braced_formulas(n);
                Ok(match name.as_str() {
                    "id" => ArrowTerm::Id(f(self, 1)?.remove(0)),
                    "w" => ArrowTerm::Diag(f(self, 1)?.remove(0)),
                    "bang" => ArrowTerm::Bang(f(self, 1)?.remove(0)),
                    "p1" | "p2" | "c" => {
                        let mut v = f(self, 2)?;
                        let (b, a) = (v.pop().unwrap(), v.pop().unwrap());
                        match name.as_str() {
                            "p1" => ArrowTerm::Proj1(a, b),
                            "p2" => ArrowTerm::Proj2(a, b),
                            _ => ArrowTerm::Sym(a, b),
                        }
                    }
                    "a" => {
                        let mut v = f(self, 3)?;
                        let (c, b, a) = (v.pop().unwrap(), v.pop().unwrap(), v.pop().unwrap());
                        ArrowTerm::Assoc(a, b, c)
                    }
                    "pair" => {
                        let (x, y) = self.two_args()?;
                        ArrowTerm::pair(x, y)
                    }
                    "tens" => {
                        let (x, y) = self.two_args()?;
                        ArrowTerm::tensor_of(x, y)
                    }
                    _ => {
                        let (source, target) = self.typed_name()?;
                        ArrowTerm::Gen {
                            name,
                            source,
                            target,
                        }
                    }
                })
            }
            _ => self.error("expected arrow term"),
        }
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let mut premises = Vec::new();
        if !self.eat(&Tok::Turnstile) {
            premises.push(self.formula()?);
            while self.eat(&Tok::Comma) {
                premises.push(self.formula()?);
            }
            self.expect(Tok::Turnstile, "`|-`")?;
        }
        let conclusion = self.formula()?;
        Ok(Sequent {
            premises,
            conclusion,
        })
    }
}

/// True when `name` is reserved for a structural constructor.
pub fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

fn reject_mixed(mixed: bool) -> Result<(), ParseError> {
    if mixed {
        Err(ParseError::MixedConnectives)
    } else {
        Ok(())
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let a = p.formula()?;
    p.finish()?;
    reject_mixed(a.connectives().is_mixed())?;
    Ok(a)
}

pub fn parse_arrow(text: &str) -> Result<ArrowTerm, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.arrow()?;
    p.finish()?;
    reject_mixed(t.connectives().is_mixed())?;
    Ok(t)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.sequent()?;
    p.finish()?;
    let mixed = s
        .premises
        .iter()
        .chain(std::iter::once(&s.conclusion))
        .fold(Default::default(), |c: crate::term::Connectives, a| c.merge(a.connectives()))
        .is_mixed();
    reject_mixed(mixed)?;
    Ok(s)
}

/// Parses `lhs = rhs` between two arrow terms.
pub fn parse_arrow_equation(text: &str) -> Result<(ArrowTerm, ArrowTerm), ParseError> {
    let mut p = Parser::new(text)?;
    let l = p.arrow()?;
    p.expect(Tok::Equals, "`=`")?;
    let r = p.arrow()?;
    p.finish()?;
    reject_mixed(l.connectives().merge(r.connectives()).is_mixed())?;
    Ok((l, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::letter("p")
    }

    #[test]
    fn formula_is_left_associative() {
        let a = parse_formula("p /\\ q /\\ r").unwrap();
        assert_eq!(
            a,
            Formula::conj(Formula::conj(p(), Formula::letter("q")), Formula::letter("r"))
        );
        assert_eq!(a.to_string(), "p/\\q/\\r");
        let b = parse_formula("p/\\(q/\\r)").unwrap();
        assert_eq!(b.to_string(), "p/\\(q/\\r)");
    }

    #[test]
    fn pair_of_identities() {
        let t = parse_arrow("pair(id{p}, id{p})").unwrap();
        assert_eq!(t, ArrowTerm::pair(ArrowTerm::Id(p()), ArrowTerm::Id(p())));
    }

    #[test]
    fn composition_binds_right_operand_first() {
        let t = parse_arrow("p1{p,p} . w{p}").unwrap();
        assert_eq!(t, ArrowTerm::comp(ArrowTerm::Proj1(p(), p()), ArrowTerm::Diag(p())));
    }

    #[test]
    fn sequent_forms() {
        let s = parse_sequent("p, q |- p").unwrap();
        assert_eq!(s.premises, vec![p(), Formula::letter("q")]);
        assert_eq!(s.conclusion, p());
        let s = parse_sequent("|- p # comment").unwrap();
        assert!(s.premises.is_empty());
    }

    #[test]
    fn errors_carry_position() {
        match parse_formula("p /\\ ") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_arrow("id{p"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_formula("p $ q"), Err(ParseError::Syntax { pos: 2, .. })));
        assert_eq!(parse_formula("p /\\ q * r"), Err(ParseError::MixedConnectives));
        assert_eq!(parse_formula("T * p"), Err(ParseError::MixedConnectives));
    }

    #[test]
    fn generator_and_witness_names() {
        let t = parse_arrow("f{p->p/\\p} . ~u1{p/\\p->p}").unwrap();
        assert_eq!(t.to_string(), "f{p->p/\\p} . ~u1{p/\\p->p}");
    }

    #[test]
    fn left_nested_composition_round_trips() {
        let t = ArrowTerm::comp(
            ArrowTerm::comp(ArrowTerm::Id(p()), ArrowTerm::Id(p())),
            ArrowTerm::Id(p()),
        );
        assert_eq!(parse_arrow(&t.to_string()).unwrap(), t);
    }
}
