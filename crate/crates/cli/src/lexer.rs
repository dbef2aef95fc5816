use std::fmt;

use crate::error::{Pos, ScriptError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Comment(String),
    Newline,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Assign,
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
    Arrow,
    Semi,
    Star,
    Minus,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Int(n) => return write!(f, "integer {n}"),
            Tok::Str(s) => return write!(f, "string {s:?}"),
            Tok::Comment(_) => "comment",
            Tok::Newline => "newline",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::Dot => "`.`",
            Tok::Assign => "`=`",
            Tok::Eq => "`==`",
            Tok::Ne => "`!=`",
            Tok::Le => "`<=`",
            Tok::Ge => "`>=`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Arrow => "`->`",
            Tok::Semi => "`;`",
            Tok::Star => "`*`",
            Tok::Minus => "`-`",
            Tok::Slash => "`/`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Identifiers may contain letters (any script), digits, `_`, `'` and `∂`
/// after the first character.
fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '∂')
}

pub fn lex(src: &str) -> Result<Vec<Token>, ScriptError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Token { tok, pos });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                out.push(Token { tok: Tok::Newline, pos });
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '#' => {
                let start = i + 1;
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start + 1;
                out.push(Token {
                    tok: Tok::Comment(text.trim().to_string()),
                    pos,
                });
            }
            '"' => {
                let mut j = i + 1;
                let mut s = String::new();
                while j < chars.len() && chars[j] != '"' {
                    if chars[j] == '\n' {
                        return Err(ScriptError::lex(pos, "unterminated string"));
                    }
                    s.push(chars[j]);
                    j += 1;
                }
                if j == chars.len() {
                    return Err(ScriptError::lex(pos, "unterminated string"));
                }
                let len = j + 1 - i;
                push(Tok::Str(s), len, &mut i, &mut col);
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let n = text
                    .parse()
                    .map_err(|_| ScriptError::lex(pos, format!("integer `{text}` out of range")))?;
                push(Tok::Int(n), j - i, &mut i, &mut col);
            }
            c if ident_start(c) => {
                let mut j = i;
                while j < chars.len() && ident_continue(chars[j]) {
                    j += 1;
                }
                // Dataset names such as `RP2-6`: a hyphen directly followed by a digit.
                while j + 1 < chars.len() && chars[j] == '-' && chars[j + 1].is_ascii_digit() && chars[i].is_uppercase()
                {
                    j += 1;
                    while j < chars.len() && ident_continue(chars[j]) {
                        j += 1;
                    }
                }
                let text: String = chars[i..j].iter().collect();
                push(Tok::Ident(text), j - i, &mut i, &mut col);
            }
            _ => {
                let next = chars.get(i + 1).copied();
                let (tok, len) = match (c, next) {
                    ('=', Some('=')) => (Tok::Eq, 2),
                    ('!', Some('=')) => (Tok::Ne, 2),
                    ('<', Some('=')) => (Tok::Le, 2),
                    ('>', Some('=')) => (Tok::Ge, 2),
                    ('-', Some('>')) => (Tok::Arrow, 2),
                    ('=', _) => (Tok::Assign, 1),
                    ('<', _) => (Tok::Lt, 1),
                    ('>', _) => (Tok::Gt, 1),
                    ('{', _) => (Tok::LBrace, 1),
                    ('}', _) => (Tok::RBrace, 1),
                    ('[', _) => (Tok::LBracket, 1),
                    (']', _) => (Tok::RBracket, 1),
                    ('(', _) => (Tok::LParen, 1),
                    (')', _) => (Tok::RParen, 1),
                    (',', _) => (Tok::Comma, 1),
                    (':', _) => (Tok::Colon, 1),
                    ('.', _) => (Tok::Dot, 1),
                    (';', _) => (Tok::Semi, 1),
                    ('*', _) => (Tok::Star, 1),
                    ('-', _) => (Tok::Minus, 1),
                    ('/', _) => (Tok::Slash, 1),
                    _ => return Err(ScriptError::lex(pos, format!("unexpected character `{c}`"))),
                };
                push(tok, len, &mut i, &mut col);
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn tokens() {
        assert_eq!(
            kinds("let D = double(RP2-6) # x\n"),
            vec![
                Tok::Ident("let".into()),
                Tok::Ident("D".into()),
                Tok::Assign,
                Tok::Ident("double".into()),
                Tok::LParen,
                Tok::Ident("RP2-6".into()),
                Tok::RParen,
                Tok::Comment("x".into()),
                Tok::Newline,
                Tok::Eof
            ]
        );
        assert_eq!(kinds("a-1")[1], Tok::Minus);
        assert_eq!(kinds("x >= -1/7")[1..5], [Tok::Ge, Tok::Minus, Tok::Int(1), Tok::Slash]);
    }

    #[test]
    fn positions_and_errors() {
        let t = lex("a\n  b").unwrap();
        assert_eq!(t[2].pos, Pos { line: 2, col: 3 });
        let e = lex("a $").unwrap_err();
        assert_eq!(e.pos(), Some(Pos { line: 1, col: 3 }));
        assert!(lex("\"abc").is_err());
    }
}
