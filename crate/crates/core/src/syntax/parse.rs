//! Recursive-descent parser for the concrete grammar:
//!
//! ```text
//! term    := "0" | "c" DIGITS | "S(" term ")" | term "+" term | term "*" term
//!          | "(" term ")" | VAR
//! formula := "bot" | term "=" term | "~" formula | formula "->" formula
//!          | "forall" VAR "." formula | "(" formula ")"
//! ```
//!
//! `*` binds tighter than `+`, both left-associative. `->` is
//! right-associative and binds looser than everything except `forall`,
//! whose body extends as far right as possible. A bare identifier in
//! formula position is a 0-ary atom. `?x` is accepted wherever a variable
//! is, for rule-file metavariables.

use thiserror::Error;

use super::{Atom, Formula, Signature, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown constant `{name}` at offset {pos}")]
    UnknownConstant { pos: usize, name: String },
    #[error("unbound variable `{0}` in a closed formula")]
    Unbound(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Zero,
    Const(u32),
    Succ,
    Plus,
    Star,
    LParen,
    RParen,
    Eq,
    Arrow,
    Tilde,
    Dot,
    Bot,
    Forall,
    Ident(String),
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(t) => format!("{t:?}"),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().expect("in bounds");
        let start = i;
        match c {
            c if c.is_whitespace() => {
                i += c.len_utf8();
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '*' | '·' => out.push((Tok::Star, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            '=' => out.push((Tok::Eq, start)),
            '~' => out.push((Tok::Tilde, start)),
            '.' => out.push((Tok::Dot, start)),
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((Tok::Arrow, start));
                i += 2;
                continue;
            }
            '0'..='9' => {
                let end = scan(bytes, i + 1, |b| b.is_ascii_digit());
                if &text[i..end] != "0" {
                    return Err(ParseError::Syntax {
                        pos: start,
                        msg: format!("numeric literal `{}`; write numerals as S(...)", &text[i..end]),
                    });
                }
                out.push((Tok::Zero, start));
                i = end;
                continue;
            }
            '?' => {
                let end = scan(bytes, i + 1, is_ident_byte);
                if end == i + 1 {
                    return Err(ParseError::Syntax { pos: start, msg: "expected metavariable name after `?`".into() });
                }
                out.push((Tok::Ident(text[i + 1..end].to_string()), start));
                i = end;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let end = scan(bytes, i + 1, is_ident_byte);
                let word = &text[i..end];
                let tok = match word {
                    "S" => Tok::Succ,
                    "bot" => Tok::Bot,
                    "forall" => Tok::Forall,
                    w if w.len() > 1 && w.starts_with('c') && w[1..].bytes().all(|b| b.is_ascii_digit()) => {
                        let idx: u32 = w[1..].parse().map_err(|_| ParseError::UnknownConstant {
                            pos: start,
                            name: w.to_string(),
                        })?;
                        if idx == 0 {
                            Tok::Zero
                        } else {
                            Tok::Const(idx)
                        }
                    }
                    w => Tok::Ident(w.to_string()),
                };
                out.push((tok, start));
                i = end;
                continue;
            }
            other => {
                return Err(ParseError::Syntax { pos: start, msg: format!("unexpected character `{other}`") });
            }
        }
        i += c.len_utf8();
    }
    Ok(out)
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'\''
}

fn scan(bytes: &[u8], mut i: usize, pred: impl Fn(u8) -> bool) -> usize {
    while i < bytes.len() && pred(bytes[i]) {
        i += 1;
    }
    i
}

struct Parser<'s> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    sig: &'s Signature,
}

impl<'s> Parser<'s> {
    fn new(text: &str, sig: &'s Signature) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len(), sig })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(format!("expected {:?}, found {}", t, describe(self.peek())))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.error(format!("unexpected trailing {}", describe(Some(t)))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.product()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.product()?;
            lhs = Term::add(lhs, rhs);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.factor()?;
        while self.eat(&Tok::Star) {
            let rhs = self.factor()?;
            lhs = Term::mul(lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some(Tok::Const(i)) => {
                if !self.sig.has_constant(i) {
                    return Err(ParseError::UnknownConstant { pos: at, name: format!("c{i}") });
                }
                self.pos += 1;
                Ok(Term::Const(i))
            }
            Some(Tok::Succ) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::succ(t))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Term::Var(name))
            }
            other => self.error(format!("expected a term, found {}", describe(other.as_ref()))),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Forall) {
            let var = match self.peek().cloned() {
                Some(Tok::Ident(v)) => {
                    self.pos += 1;
                    v
                }
                other => return self.error(format!("expected a variable after `forall`, found {}", describe(other.as_ref()))),
            };
            self.expect(Tok::Dot)?;
            let body = self.formula()?;
            return Ok(Formula::forall(var, body));
        }
        let lhs = self.unary()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Tilde) {
            let inner = if self.peek() == Some(&Tok::Forall) { self.formula()? } else { self.unary()? };
            return Ok(Formula::not(inner));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Bot) {
            return Ok(Formula::Bot);
        }
        // An equation may itself start with `(`, so try it first and fall
        // back to a parenthesised formula.
        let save = self.pos;
        let eq_attempt = self.equation();
        match eq_attempt {
            Ok(Some(f)) => return Ok(f),
            Ok(None) => {}
            Err(e @ ParseError::UnknownConstant { .. }) => return Err(e),
            Err(_) => {}
        }
        self.pos = save;
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::prop(name))
            }
            _ => {
                self.pos = save;
                match self.equation() {
                    Ok(Some(f)) => Ok(f),
                    Ok(None) => self.error(format!("expected `=`, found {}", describe(self.peek()))),
                    Err(e) => Err(e),
                }
            }
        }
    }

    /// `Ok(None)` when a term parsed but no `=` follows.
    fn equation(&mut self) -> Result<Option<Formula>, ParseError> {
        let lhs = self.term()?;
        if !self.eat(&Tok::Eq) {
            return Ok(None);
        }
        let rhs = self.term()?;
        Ok(Some(Formula::eq(lhs, rhs)))
    }
}

/// Parse a (possibly open) term.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse a formula; free variables are allowed.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parse a closed formula.
pub fn parse_sentence(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let f = parse_formula(text, sig)?;
    match f.free_vars().into_iter().next() {
        Some(v) => Err(ParseError::Unbound(v)),
        None => Ok(f),
    }
}

/// Parse a single atom: an equation or a 0-ary atom name.
pub fn parse_atom(text: &str, sig: &Signature) -> Result<Atom, ParseError> {
    match parse_formula(text, sig)? {
        Formula::Atom(a) => Ok(a),
        other => Err(ParseError::Syntax { pos: 0, msg: format!("expected an atom, found `{other}`") }),
    }
}
