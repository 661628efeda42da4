//! Recursive-descent parser for the clause language.
//!
//! ```text
//! term   := var | bot | top | ~term | term /\ term | term \/ term | term* | (term)
//! ident  := term = term | term <= term
//! clause := (true | ident {, ident}) => (false | ident {| ident})
//! ```
//! Binding strength, tightest first: postfix `*`, prefix `~`, `/\`, `\/`.
//! Binary operators associate to the left.

use std::fmt;

use thiserror::Error;

use crate::term::{Clause, Identity, Term};

/// Syntax error; `column` is 1-based and counts bytes of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Tilde,
    Star,
    Meet,
    Join,
    Eq,
    Leq,
    Implies,
    Comma,
    Bar,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Meet => f.write_str("`/\\`"),
            Tok::Join => f.write_str("`\\/`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Leq => f.write_str("`<=`"),
            Tok::Implies => f.write_str("`=>`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}


fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |i: usize, message: String| ParseError { column: i + 1, message };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |next: u8| bytes.get(i + 1) == Some(&next);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'~' => Tok::Tilde,
            b'*' => Tok::Star,
            b',' => Tok::Comma,
            b'|' => Tok::Bar,
            b'/' if two(b'\\') => Tok::Meet,
            b'\\' if two(b'/') => Tok::Join,
            b'<' if two(b'=') => Tok::Leq,
            b'=' if two(b'>') => Tok::Implies,
            b'=' => Tok::Eq,
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            b'/' => return Err(err(i, "expected `/\\`".into())),
            b'\\' => return Err(err(i, "expected `\\/`".into())),
            b'<' => return Err(err(i, "expected `<=`".into())),
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(err(i, format!("unexpected character `{ch}`")));
            }
        };
        i += match tok {
            Tok::Meet | Tok::Join | Tok::Leq | Tok::Implies => 2,
            _ => 1,
        };
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            column: self.toks[self.pos].1 + 1,
            message,
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", self.peek())))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.meet()?;
        while *self.peek() == Tok::Join {
            self.bump();
            t = Term::join(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unary()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            t = Term::meet(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Term::neg(self.unary()?));
        }
        let mut t = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            t = Term::star(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => match name.as_str() {
                "bot" => {
                    self.bump();
                    Ok(Term::Bot)
                }
                "top" => {
                    self.bump();
                    Ok(Term::Top)
                }
                "true" | "false" => Err(self.error(format!("`{name}` cannot be used inside a term"))),
                _ => {
                    self.bump();
                    Ok(Term::Var(name))
                }
            },
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            other => Err(self.error(format!("expected a term, found {other}"))),
        }
    }

    fn identity(&mut self) -> Result<Identity, ParseError> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Identity::eq(lhs, self.term()?))
            }
            Tok::Leq => {
                self.bump();
                Ok(Identity::leq(lhs, self.term()?))
            }
            other => Err(self.error(format!("expected `=` or `<=`, found {other}"))),
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == word) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let mut clause = Clause::default();
        if !self.keyword("true") {
            clause.premises.insert(self.identity()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                clause.premises.insert(self.identity()?);
            }
        }
        self.expect(Tok::Implies, "`=>`")?;
        if !self.keyword("false") {
            clause.conclusions.insert(self.identity()?);
            while *self.peek() == Tok::Bar {
                self.bump();
                clause.conclusions.insert(self.identity()?);
            }
        }
        self.end()?;
        Ok(clause)
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => Err(self.error(format!("unexpected {other} after the end of the input"))),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.end()?;
    Ok(t)
}

pub fn parse_identity(text: &str) -> Result<Identity, ParseError> {
    let mut p = Parser::new(text)?;
    let id = p.identity()?;
    p.end()?;
    Ok(id)
}

pub fn parse_clause(text: &str) -> Result<Clause, ParseError> {
    Parser::new(text)?.clause()
}

pub fn print_clause(clause: &Clause) -> String {
    clause.to_string()
}
