//! Structured identifiers for labels and elements.
//!
//! Universal constructions build new names out of old ones: products pair
//! them, coproducts tag them, quotients pick a class representative and
//! migration encodes a witness value. The text rendering is injective and
//! parses back:
//!
//! ```text
//! id   := '(' id ',' id ')' | 'L:' id | 'R:' id | 'C:' id | 'E:' id '=' value | atom
//! atom := bare | json-string
//! ```

use std::fmt;

use super::value::{Literal, Value};
use super::AdtError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ident {
    Atom(String),
    Pair(Box<Ident>, Box<Ident>),
    Left(Box<Ident>),
    Right(Box<Ident>),
    /// Equivalence class named by its least member.
    Class(Box<Ident>),
    /// Element produced by migration: a label together with a witness value.
    Enc(Box<Ident>, Box<Value>),
}

/// Labels and element ids share one identifier space.
pub type Label = Ident;
pub type ElementId = Ident;

impl Ident {
    pub fn atom(s: impl Into<String>) -> Ident {
        Ident::Atom(s.into())
    }

    pub fn pair(a: Ident, b: Ident) -> Ident {
        Ident::Pair(Box::new(a), Box::new(b))
    }

    pub fn left(a: Ident) -> Ident {
        Ident::Left(Box::new(a))
    }

    pub fn right(a: Ident) -> Ident {
        Ident::Right(Box::new(a))
    }

    pub fn class(a: Ident) -> Ident {
        Ident::Class(Box::new(a))
    }

    pub fn enc(label: Ident, witness: Value) -> Ident {
        Ident::Enc(Box::new(label), Box::new(witness))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Ident::Atom(s) => Some(s),
            _ => None,
        }
    }

    pub fn parse(text: &str) -> Result<Ident, AdtError> {
        let mut cur = Cursor::new(text);
        let id = cur.ident()?;
        cur.skip_ws();
        cur.expect_end()?;
        Ok(id)
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::Atom(s.to_string())
    }
}

impl From<String> for Ident {
    fn from(s: String) -> Self {
        Ident::Atom(s)
    }
}

fn is_bare_char(c: char) -> bool {
    !(c.is_whitespace() || "()\",:=@`\\".contains(c))
}

pub(crate) fn is_bare(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_bare_char)
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ident::Atom(s) if is_bare(s) => f.write_str(s),
            Ident::Atom(s) => f.write_str(&serde_json::Value::String(s.clone()).to_string()),
            Ident::Pair(a, b) => write!(f, "({a},{b})"),
            Ident::Left(a) => write!(f, "L:{a}"),
            Ident::Right(a) => write!(f, "R:{a}"),
            Ident::Class(a) => write!(f, "C:{a}"),
            Ident::Enc(l, v) => write!(f, "E:{l}={v}"),
        }
    }
}

/// Parses the text rendering of a [`Value`] (as produced by its `Display`).
pub fn parse_value_text(text: &str) -> Result<Value, AdtError> {
    let mut cur = Cursor::new(text);
    let v = cur.value()?;
    cur.skip_ws();
    cur.expect_end()?;
    Ok(v)
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> AdtError {
        AdtError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), AdtError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), AdtError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }

    pub(crate) fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    /// A JSON string literal starting at the current position.
    pub(crate) fn json_string(&mut self) -> Result<String, AdtError> {
        let start = self.pos;
        self.expect('"')?;
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string")),
                Some('\\') => {
                    self.bump();
                }
                Some('"') => break,
                Some(_) => {}
            }
        }
        serde_json::from_str(&self.src[start..self.pos]).map_err(|e| AdtError::Syntax {
            pos: start,
            message: format!("bad string literal: {e}"),
        })
    }

    pub(crate) fn ident(&mut self) -> Result<Ident, AdtError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let a = self.ident()?;
                self.expect(',')?;
                let b = self.ident()?;
                self.expect(')')?;
                Ok(Ident::pair(a, b))
            }
            Some('"') => Ok(Ident::Atom(self.json_string()?)),
            Some(c) if is_bare_char(c) => {
                let word = self.take_while(is_bare_char);
                if self.peek() != Some(':') {
                    return Ok(Ident::Atom(word.to_string()));
                }
                match word {
                    "L" | "R" | "C" => {
                        self.bump();
                        let inner = self.ident()?;
                        Ok(match word {
                            "L" => Ident::left(inner),
                            "R" => Ident::right(inner),
                            _ => Ident::class(inner),
                        })
                    }
                    "E" => {
                        self.bump();
                        let label = self.ident()?;
                        self.expect('=')?;
                        let v = self.value()?;
                        Ok(Ident::enc(label, v))
                    }
                    _ => Err(self.error(format!("unknown identifier tag '{word}'"))),
                }
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    pub(crate) fn value(&mut self) -> Result<Value, AdtError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.bump();
                    return Ok(Value::Unit);
                }
                let a = self.value()?;
                self.skip_ws();
                self.expect(',')?;
                let b = self.value()?;
                self.skip_ws();
                self.expect(')')?;
                Ok(Value::pair(a, b))
            }
            Some('@') => {
                self.bump();
                Ok(Value::Ref(self.ident()?))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                self.skip_ws();
                self.expect('(')?;
                let v = match name {
                    "inl" => Value::inl(self.value()?),
                    "inr" => Value::inr(self.value()?),
                    _ => {
                        self.skip_ws();
                        Value::Prim(name.to_string(), self.literal()?)
                    }
                };
                self.skip_ws();
                self.expect(')')?;
                Ok(v)
            }
            _ => Err(self.error("expected value")),
        }
    }

    pub(crate) fn literal(&mut self) -> Result<Literal, AdtError> {
        if self.peek() == Some('"') {
            return Ok(Literal::Text(self.json_string()?));
        }
        let start = self.pos;
        let tok = self.take_while(|c| c.is_ascii_alphanumeric() || "+-.".contains(c));
        parse_literal_token(tok).ok_or(AdtError::Syntax {
            pos: start,
            message: format!("bad literal '{tok}'"),
        })
    }
}

/// Unquoted literal tokens: booleans, integers, and floats (which always carry
/// a `.`, an exponent, or are `inf`/`NaN`).
pub(crate) fn parse_literal_token(tok: &str) -> Option<Literal> {
    match tok {
        "true" => return Some(Literal::Bool(true)),
        "false" => return Some(Literal::Bool(false)),
        _ => {}
    }
    let is_float = tok.contains(['.', 'e', 'E']) || tok.ends_with("inf") || tok == "NaN";
    if is_float {
        tok.parse::<f64>().ok().map(Literal::Double)
    } else {
        tok.parse::<i64>().ok().map(Literal::Int)
    }
}
