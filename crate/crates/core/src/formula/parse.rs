use std::fmt;

use thiserror::Error;

use super::{Formula, Sequent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Turnstile,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(name) => write!(f, "identifier `{name}`"),
            Token::Not => f.write_str("`~`"),
            Token::And => f.write_str("`&`"),
            Token::Or => f.write_str("`|`"),
            Token::Turnstile => f.write_str("`|-`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'~' | b'!' => {
                out.push((i, Token::Not));
                i += 1;
            }
            b'&' => {
                out.push((i, Token::And));
                i += 1;
            }
            b'|' if bytes.get(i + 1) == Some(&b'-') => {
                out.push((i, Token::Turnstile));
                i += 2;
            }
            b'|' => {
                out.push((i, Token::Or));
                i += 1;
            }
            b'(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(i, format!("unexpected character {ch:?}")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(self.offset(), format!("expected {wanted}, found {t}")),
            None => ParseError::new(self.end, format!("expected {wanted}, found end of input")),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::neg(self.unary()?))
            }
            Some(Token::Ident(name)) => {
                let f = Formula::var(name.clone());
                self.pos += 1;
                Ok(f)
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.disjunction()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

fn parser_for(text: &str) -> Result<Parser, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::new(0, "empty input"));
    }
    Ok(Parser {
        tokens: lex(text)?,
        pos: 0,
        end: text.len(),
    })
}

/// Parses a formula. `~`/`!` binds tighter than `&`, which binds tighter than
/// `|`; both binary connectives associate to the left.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = parser_for(text)?;
    let f = p.disjunction()?;
    if p.peek().is_some() {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

/// Parses `LHS |- RHS`.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = parser_for(text)?;
    let lhs = p.disjunction()?;
    if p.peek() != Some(&Token::Turnstile) {
        return Err(p.unexpected("`|-`"));
    }
    p.pos += 1;
    let rhs = p.disjunction()?;
    if p.peek().is_some() {
        return Err(p.unexpected("end of input"));
    }
    Ok(Sequent::new(lhs, rhs))
}

// Binding strength of the context a subformula is printed in.
const CTX_OR: u8 = 1;
const CTX_AND: u8 = 2;
const CTX_NEG: u8 = 3;

pub(super) fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula, ctx: u8) -> fmt::Result {
    match f {
        Formula::Var(name) => out.write_str(name),
        Formula::Neg(inner) => {
            out.write_str("~")?;
            write_formula(out, inner, CTX_NEG)
        }
        Formula::And(l, r) => {
            let wrap = ctx > CTX_AND;
            if wrap {
                out.write_str("(")?;
            }
            write_formula(out, l, CTX_AND)?;
            out.write_str(" & ")?;
            write_formula(out, r, CTX_AND + 1)?;
            if wrap {
                out.write_str(")")?;
            }
            Ok(())
        }
        Formula::Or(l, r) => {
            let wrap = ctx > CTX_OR;
            if wrap {
                out.write_str("(")?;
            }
            write_formula(out, l, CTX_OR)?;
            out.write_str(" | ")?;
            write_formula(out, r, CTX_OR + 1)?;
            if wrap {
                out.write_str(")")?;
            }
            Ok(())
        }
    }
}
