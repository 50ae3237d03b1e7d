use std::fmt;

use super::{Pos, SpecError, SpecErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(String),
    Arrow,
    Colon,
    Comma,
    Star,
    Plus,
    Minus,
    Slash,
    Equals,
    LBracket,
    RBracket,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(s) => write!(f, "integer `{s}`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// A statement: the tokens between two newlines or semicolons, plus the position it starts at.
#[derive(Debug, Clone)]
pub(crate) struct Statement {
    pub tokens: Vec<Token>,
}

pub(crate) fn decode(bytes: &[u8]) -> Result<&str, SpecError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let good = &bytes[..e.valid_up_to()];
        let line = good.iter().filter(|&&b| b == b'\n').count() + 1;
        let col = good.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        SpecError::new(SpecErrorKind::Syntax, Pos::new(line, col), "input is not valid UTF-8")
    })
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Statement>, SpecError> {
    let mut statements = Vec::new();
    let mut current = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    let flush = |current: &mut Vec<Token>, statements: &mut Vec<Statement>| {
        if !current.is_empty() {
            statements.push(Statement { tokens: std::mem::take(current) });
        }
    };

    while let Some(&c) = chars.peek() {
        let pos = Pos::new(line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let ch = chars.next();
            if ch == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        };
        match c {
            '\n' | ';' => {
                advance(&mut chars);
                flush(&mut current, &mut statements);
            }
            c if c.is_whitespace() => {
                advance(&mut chars);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    advance(&mut chars);
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        s.push(c);
                        advance(&mut chars);
                    } else {
                        break;
                    }
                }
                current.push(Token { tok: Tok::Ident(s), pos });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        advance(&mut chars);
                    } else {
                        break;
                    }
                }
                current.push(Token { tok: Tok::Int(s), pos });
            }
            '-' => {
                advance(&mut chars);
                if chars.peek() == Some(&'>') {
                    advance(&mut chars);
                    current.push(Token { tok: Tok::Arrow, pos });
                } else {
                    current.push(Token { tok: Tok::Minus, pos });
                }
            }
            _ => {
                let tok = match c {
                    ':' => Tok::Colon,
                    ',' => Tok::Comma,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '/' => Tok::Slash,
                    '=' => Tok::Equals,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => {
                        return Err(SpecError::new(
                            SpecErrorKind::Syntax,
                            pos,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                };
                advance(&mut chars);
                current.push(Token { tok, pos });
            }
        }
    }
    flush(&mut current, &mut statements);
    Ok(statements)
}
