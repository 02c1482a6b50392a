//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "!" unary | "exists" IDENT unary | "(" formula ")" | atom
//! atom    := "P(" term ")" | "D+[" INT "](" term ")" | "D-[" INT "](" term ")"
//!          | term "=" term | term "!=" term
//! term    := ["-"] summand (("+" | "-") summand)*
//! summand := INT ["*" IDENT] | IDENT
//! ```

use std::collections::BTreeSet;

use super::{Atom, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{name}` at byte {pos}")]
    Unbound { name: String, pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i128),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Star,
    Eq,
    Neq,
    Bang,
    Amp,
    Bar,
    DPlus,
    DMinus,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'=' => Tok::Eq,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Neq
            }
            b'!' => Tok::Bang,
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let v = src[start..=i].parse::<i128>().map_err(|_| syntax(start, "integer literal too large"))?;
                Tok::Int(v)
            }
            b'D' if matches!(bytes.get(i + 1), Some(b'+' | b'-')) && bytes.get(i + 2) == Some(&b'[') => {
                i += 1;
                if bytes[i] == b'+' {
                    Tok::DPlus
                } else {
                    Tok::DMinus
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(src[start..=i].to_string())
            }
            _ => return Err(syntax(start, &format!("unexpected character {:?}", c as char))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

fn syntax(pos: usize, msg: &str) -> ParseError {
    ParseError::Syntax { pos, msg: msg.to_string() }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    /// Free variable occurrences with positions, checked after parsing.
    uses: Vec<(String, usize)>,
    bound: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), &format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conj()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Formula::Or(parts) })
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(k) if k == "exists" => {
                self.bump();
                let pos = self.pos();
                let v = match self.bump() {
                    Tok::Ident(v) if !is_reserved(&v) => v,
                    _ => return Err(syntax(pos, "expected a variable after `exists`")),
                };
                self.bound.push(v.clone());
                let body = self.unary();
                self.bound.pop();
                Ok(Formula::Exists(v, Box::new(body?)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(p) if p == "P" && *self.peek2() == Tok::LParen => {
                self.bump();
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::in_p(t))
            }
            Tok::DPlus | Tok::DMinus => {
                let plus = self.bump() == Tok::DPlus;
                self.expect(Tok::LBracket, "`[`")?;
                let pos = self.pos();
                let m = match self.bump() {
                    Tok::Int(m) if m >= 1 => i64::try_from(m).map_err(|_| syntax(pos, "modulus too large"))?,
                    _ => return Err(syntax(pos, "expected a positive modulus")),
                };
                self.expect(Tok::RBracket, "`]`")?;
                self.expect(Tok::LParen, "`(`")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::Atom(if plus { Atom::DivPlus(m, t) } else { Atom::DivMinus(m, t) }))
            }
            _ => {
                let lhs = self.term()?;
                let pos = self.pos();
                let negated = match self.bump() {
                    Tok::Eq => false,
                    Tok::Neq => true,
                    _ => return Err(syntax(pos, "expected `=` or `!=` after a term")),
                };
                let rhs = self.term()?;
                let t = lhs.checked_sub(&rhs).ok_or_else(|| syntax(pos, "coefficient overflow"))?;
                let eq = Formula::eq0(t);
                Ok(if negated { Formula::not(eq) } else { eq })
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.pos();
        let mut sign = 1i128;
        if *self.peek() == Tok::Minus {
            self.bump();
            sign = -1;
        }
        let mut acc = self.summand(sign)?;
        loop {
            let sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => break,
            };
            self.bump();
            let s = self.summand(sign)?;
            acc = acc.checked_add(&s).ok_or_else(|| syntax(start, "coefficient overflow"))?;
        }
        Ok(acc)
    }

    fn summand(&mut self, sign: i128) -> Result<Term, ParseError> {
        let pos = self.pos();
        let (mag, var) = match self.bump() {
            Tok::Int(n) => {
                if *self.peek() == Tok::Star {
                    self.bump();
                    (n, Some(self.variable()?))
                } else {
                    (n, None)
                }
            }
            Tok::Ident(v) if !is_reserved(&v) => {
                self.use_var(&v, pos);
                (1, Some(v))
            }
            _ => return Err(syntax(pos, "expected an integer or a variable")),
        };
        let c = i64::try_from(sign * mag).map_err(|_| syntax(pos, "integer literal out of range"))?;
        Ok(match var {
            Some(v) => Term::new(0, [(v, c)]),
            None => Term::constant(c),
        })
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(v) if !is_reserved(&v) => {
                self.use_var(&v, pos);
                Ok(v)
            }
            _ => Err(syntax(pos, "expected a variable after `*`")),
        }
    }

    fn use_var(&mut self, v: &str, pos: usize) {
        if !self.bound.iter().any(|b| b == v) {
            self.uses.push((v.to_string(), pos));
        }
    }
}

fn is_reserved(v: &str) -> bool {
    v == "exists" || v == "P"
}

/// Parses `text`, rejecting free variables outside `allowed` (all allowed if `None`).
pub fn parse_with_free(text: &str, allowed: Option<&BTreeSet<String>>) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0, uses: Vec::new(), bound: Vec::new() };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    if let Some(allowed) = allowed {
        if let Some((name, pos)) = p.uses.into_iter().find(|(v, _)| !allowed.contains(v)) {
            return Err(ParseError::Unbound { name, pos });
        }
    }
    Ok(f)
}

/// Parses a formula; free variables are allowed.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with_free(text, None)
}

/// Parses a sentence; any free variable is an error.
pub fn parse_sentence(text: &str) -> Result<Formula, ParseError> {
    parse_with_free(text, Some(&BTreeSet::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let f = parse("P(x + 2*y)").unwrap();
        assert_eq!(f, Formula::in_p(Term::new(0, [("x".into(), 1), ("y".into(), 2)])));
        let f = parse("exists y (P(x+y) & !P(x+2*y))").unwrap();
        assert!(matches!(f, Formula::Exists(ref v, _) if v == "y"));
        assert_eq!(parse("D+[3](x)").unwrap(), Formula::Atom(Atom::DivPlus(3, Term::var("x"))));
        assert_eq!(parse("exists y P(y)").unwrap(), Formula::exists("y", Formula::in_p(Term::var("y"))));
    }

    #[test]
    fn equations_and_disequations() {
        assert_eq!(parse("x = 2").unwrap(), Formula::eq0(Term::var("x").shift(-2)));
        assert_eq!(parse("x != 0").unwrap(), Formula::not(Formula::eq0(Term::var("x"))));
        assert_eq!(parse("-x - 3 = -y").unwrap(), Formula::eq0(Term::var("y").minus(&Term::var("x")).shift(-3)));
    }

    #[test]
    fn precedence() {
        let f = parse("P(x) | P(y) & !P(z)").unwrap();
        assert!(matches!(f, Formula::Or(ref v) if v.len() == 2 && matches!(v[1], Formula::And(_))));
        let f = parse("exists y P(y) & P(x)").unwrap();
        assert!(matches!(f, Formula::And(_)));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("P(x").unwrap_err(), ParseError::Syntax { pos: 3, msg: "expected `)`".into() });
        assert!(matches!(parse("D+[0](x)"), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("x"), Err(ParseError::Syntax { pos: 1, .. })));
        assert_eq!(parse_sentence("exists y P(y + z)").unwrap_err(), ParseError::Unbound { name: "z".into(), pos: 15 });
        assert!(parse_sentence("exists y P(y)").is_ok());
    }
}
