//! Hand-rolled lexer for MinC. `//` comments run to end of line.

use alloc::string::String;
use alloc::vec::Vec;

use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    // literals / names
    Int(i32),
    Str(String),
    Ident(String),
    // keywords
    Record,
    Fn,
    Let,
    If,
    Else,
    While,
    Return,
    Free,
    Alloc,
    Input,
    InputStr,
    Sanitize,
    DbQuery,
    Concat,
    KwInt,
    KwStr,
    KwRef,
    // punctuation
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Arrow,     // ->
    ThinArrow, // same token; kept single
    Assign,    // =
    Plus,
    Minus,
    Star,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Bang,
    Eof,
}

impl core::fmt::Display for Tok {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Record => write!(f, "record"),
            Tok::Fn => write!(f, "fn"),
            Tok::Let => write!(f, "let"),
            Tok::If => write!(f, "if"),
            Tok::Else => write!(f, "else"),
            Tok::While => write!(f, "while"),
            Tok::Return => write!(f, "return"),
            Tok::Free => write!(f, "free"),
            Tok::Alloc => write!(f, "alloc"),
            Tok::Input => write!(f, "input"),
            Tok::InputStr => write!(f, "input_str"),
            Tok::Sanitize => write!(f, "sanitize"),
            Tok::DbQuery => write!(f, "db_query"),
            Tok::Concat => write!(f, "concat"),
            Tok::KwInt => write!(f, "int"),
            Tok::KwStr => write!(f, "str"),
            Tok::KwRef => write!(f, "Ref"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::Comma => write!(f, ","),
            Tok::Semi => write!(f, ";"),
            Tok::Colon => write!(f, ":"),
            Tok::Arrow | Tok::ThinArrow => write!(f, "->"),
            Tok::Assign => write!(f, "="),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::EqEq => write!(f, "=="),
            Tok::NotEq => write!(f, "!="),
            Tok::Lt => write!(f, "<"),
            Tok::Le => write!(f, "<="),
            Tok::Gt => write!(f, ">"),
            Tok::Ge => write!(f, ">="),
            Tok::AndAnd => write!(f, "&&"),
            Tok::OrOr => write!(f, "||"),
            Tok::Bang => write!(f, "!"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

pub fn lex(source: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = source.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(ch) = c {
                if ch == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    loop {
        let span = Span::new(line, col);
        let c = match chars.peek() {
            Some(c) => *c,
            None => {
                toks.push((Tok::Eof, span));
                return Ok(toks);
            }
        };

        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' {
            // either a comment or an error; MinC has no division
            bump!();
            if chars.peek() == Some(&'/') {
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    bump!();
                }
                continue;
            }
            return Err(ParseError::new(span, "unexpected character `/`"));
        }
        if c.is_ascii_digit() {
            let mut value: i64 = 0;
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                value = value * 10 + i64::from(d as u8 - b'0');
                if value > i64::from(i32::MAX) {
                    return Err(ParseError::new(span, "integer literal out of range"));
                }
                bump!();
            }
            toks.push((Tok::Int(value as i32), span));
            continue;
        }
        if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                match bump!() {
                    Some('"') => break,
                    Some('\\') => match bump!() {
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        _ => return Err(ParseError::new(span, "invalid escape in string literal")),
                    },
                    Some('\n') | None => {
                        return Err(ParseError::new(span, "unterminated string literal"))
                    }
                    Some(ch) => s.push(ch),
                }
            }
            toks.push((Tok::Str(s), span));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    word.push(ch);
                    bump!();
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "record" => Tok::Record,
                "fn" => Tok::Fn,
                "let" => Tok::Let,
                "if" => Tok::If,
                "else" => Tok::Else,
                "while" => Tok::While,
                "return" => Tok::Return,
                "free" => Tok::Free,
                "alloc" => Tok::Alloc,
                "input" => Tok::Input,
                "input_str" => Tok::InputStr,
                "sanitize" => Tok::Sanitize,
                "db_query" => Tok::DbQuery,
                "concat" => Tok::Concat,
                "int" => Tok::KwInt,
                "str" => Tok::KwStr,
                "Ref" => Tok::KwRef,
                _ => Tok::Ident(word),
            };
            toks.push((tok, span));
            continue;
        }

        bump!();
        let two = |next: char| chars.peek() == Some(&next);
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '-' => {
                if two('>') {
                    bump!();
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            '=' => {
                if two('=') {
                    bump!();
                    Tok::EqEq
                } else {
                    Tok::Assign
                }
            }
            '!' => {
                if two('=') {
                    bump!();
                    Tok::NotEq
                } else {
                    Tok::Bang
                }
            }
            '<' => {
                if two('=') {
                    bump!();
                    Tok::Le
                } else {
                    Tok::Lt
                }
            }
            '>' => {
                if two('=') {
                    bump!();
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            '&' => {
                if two('&') {
                    bump!();
                    Tok::AndAnd
                } else {
                    return Err(ParseError::new(span, "expected `&&`"));
                }
            }
            '|' => {
                if two('|') {
                    bump!();
                    Tok::OrOr
                } else {
                    return Err(ParseError::new(span, "expected `||`"));
                }
            }
            other => {
                return Err(ParseError::new(
                    span,
                    alloc::format!("unexpected character `{other}`"),
                ))
            }
        };
        toks.push((tok, span));
    }
}
