//! Recursive-descent parser for terms.
//!
//! ```text
//! join  := add ('|' add)*
//! add   := scale ('+' scale)*
//! scale := literal '*' scale | atom
//! atom  := 'bot' | '⊥' | '0' | ident | '(' join ')'
//! ```
//!
//! Literals are digits with an optional `/digits` denominator and are read
//! with the semiring's own `FromStr`. A bare `0` is the term `0`.

use crate::error::{Error, Result};
use crate::semiring::Semiring;

use super::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Bot,
    Ident(String),
    Number(String),
    Star,
    Plus,
    Bar,
    Open,
    Close,
    End,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '*' | '·' => {
                chars.next();
                out.push((pos, Tok::Star));
            }
            '+' => {
                chars.next();
                out.push((pos, Tok::Plus));
            }
            '|' | '⊔' => {
                chars.next();
                out.push((pos, Tok::Bar));
            }
            '(' => {
                chars.next();
                out.push((pos, Tok::Open));
            }
            ')' => {
                chars.next();
                out.push((pos, Tok::Close));
            }
            '⊥' => {
                chars.next();
                out.push((pos, Tok::Bot));
            }
            c if c.is_ascii_digit() => {
                let mut lit = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() || d == '/' {
                        lit.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Number(lit)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut id = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        id.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, if id == "bot" { Tok::Bot } else { Tok::Ident(id) }));
            }
            other => return Err(syntax(pos, format!("unexpected character '{other}'"))),
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn join<S: Semiring>(&mut self) -> Result<Term<S>> {
        let mut left = self.add()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let right = self.add()?;
            left = Term::Join(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn add<S: Semiring>(&mut self) -> Result<Term<S>> {
        let mut left = self.scale()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let right = self.scale()?;
            left = Term::Add(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn scale<S: Semiring>(&mut self) -> Result<Term<S>> {
        let pos = self.pos();
        if let Tok::Number(lit) = self.peek().clone() {
            self.bump();
            if *self.peek() == Tok::Star {
                self.bump();
                let lambda: S = lit.parse().map_err(|_| {
                    syntax(pos, format!("'{lit}' is not a {} literal", S::KIND))
                })?;
                return Ok(Term::Scale(lambda, Box::new(self.scale()?)));
            }
            if lit == "0" {
                return Ok(Term::Zero);
            }
            return Err(syntax(self.pos(), format!("expected '*' after scalar '{lit}'")));
        }
        self.atom()
    }

    fn atom<S: Semiring>(&mut self) -> Result<Term<S>> {
        let pos = self.pos();
        match self.bump() {
            Tok::Bot => Ok(Term::Bottom),
            Tok::Ident(id) => Ok(Term::Var(id)),
            Tok::Open => {
                let inner = self.join()?;
                let close = self.pos();
                match self.bump() {
                    Tok::Close => Ok(inner),
                    _ => Err(syntax(close, "expected ')'")),
                }
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            other => Err(syntax(pos, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Bot => "'bot'".into(),
        Tok::Ident(s) | Tok::Number(s) => format!("'{s}'"),
        Tok::Star => "'*'".into(),
        Tok::Plus => "'+'".into(),
        Tok::Bar => "'|'".into(),
        Tok::Open => "'('".into(),
        Tok::Close => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

pub fn parse<S: Semiring>(text: &str) -> Result<Term<S>> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, at: 0 };
    let term = p.join()?;
    match p.peek() {
        Tok::End => Ok(term),
        other => Err(syntax(p.pos(), format!("unexpected {}", describe(other)))),
    }
}
