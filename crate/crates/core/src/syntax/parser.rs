//! Recursive descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | modal unary | primary
//! modal   := ("A"|"I"|"E"|"S"|"C") "[" agent "]"
//!          | ("+"|"-") "[" agent "]" "{" atom ("," atom)* "}"
//! primary := atom | "(" formula ")"
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Agent, Atom, Connective, Formula, Modality, Update};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: expected {}, found {found}", .expected.join(" or "))]
    Unexpected {
        line: usize,
        column: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("line {line}, column {column}: unexpected character {ch:?}")]
    BadChar { line: usize, column: usize, ch: char },
    #[error("update operators may not occur inside an awareness operator")]
    UpdateUnderAwareness,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Modal(Modality),
    Plus,
    Minus,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    LParen,
    RParen,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Modal(m) => write!(f, "`{}`", m.letter()),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DoubleArrow => f.write_str("`<->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_column) = (line, column);
        let mut advance = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                column = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => None,
            'a'..='z' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                advance = len;
                Some(Tok::Ident(chars[i..i + len].iter().collect()))
            }
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance = 2;
                Some(Tok::Arrow)
            }
            '-' => Some(Tok::Minus),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                advance = 3;
                Some(Tok::DoubleArrow)
            }
            c => match Modality::from_letter(c) {
                Some(m) => Some(Tok::Modal(m)),
                None => {
                    return Err(ParseError::BadChar {
                        line: start_line,
                        column: start_column,
                        ch: c,
                    })
                }
            },
        };
        if let Some(tok) = tok {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_column,
            });
        }
        i += advance;
        column += advance;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Parses a formula. Update operators inside an awareness operand are
/// rejected.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
    };
    let f = parser.formula()?;
    parser.expect(Tok::Eof, "end of input")?;
    if f.has_update_under_awareness() {
        return Err(ParseError::UpdateUnderAwareness);
    }
    Ok(f)
}

const UNARY_START: &[&str] = &["`~`", "modal operator", "`+[`", "`-[`", "atom", "`(`"];

struct Parser<'t> {
    tokens: &'t [Spanned],
    pos: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &'t Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> &'t Tok {
        let t = &self.tokens[self.pos].tok;
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let s = &self.tokens[self.pos];
        ParseError::Unexpected {
            line: s.line,
            column: s.column,
            found: s.tok.to_string(),
            expected: expected.to_vec(),
        }
    }

    fn expect(&mut self, tok: Tok, label: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[label]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::binary(Connective::Iff, lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::binary(Connective::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::binary(Connective::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::binary(Connective::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Modal(m) => {
                let m = *m;
                self.bump();
                let agent = self.agent()?;
                Ok(Formula::Modal(m, agent, Box::new(self.unary()?)))
            }
            Tok::Plus | Tok::Minus => {
                let u = if *self.bump() == Tok::Plus {
                    Update::Add
                } else {
                    Update::Remove
                };
                let agent = self.agent()?;
                let atoms = self.atom_set()?;
                Ok(Formula::Update(u, agent, atoms, Box::new(self.unary()?)))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(Atom(name.clone())))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.error(UNARY_START)),
        }
    }

    fn agent(&mut self) -> Result<Agent, ParseError> {
        self.expect(Tok::LBracket, "`[`")?;
        let name = match self.peek() {
            Tok::Ident(name) => name.clone(),
            _ => return Err(self.error(&["agent name"])),
        };
        self.bump();
        self.expect(Tok::RBracket, "`]`")?;
        Ok(Agent(name))
    }

    fn atom_set(&mut self) -> Result<BTreeSet<Atom>, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut atoms = BTreeSet::new();
        loop {
            match self.peek() {
                Tok::Ident(name) => {
                    atoms.insert(Atom(name.clone()));
                    self.bump();
                }
                _ => return Err(self.error(&["atom"])),
            }
            match self.bump() {
                Tok::Comma => continue,
                Tok::RBrace => return Ok(atoms),
                _ => {
                    self.pos -= 1;
                    return Err(self.error(&["`,`", "`}`"]));
                }
            }
        }
    }
}
