use std::fmt;

/// One-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Keyword(&'static str),
    Int(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Keyword(k) => write!(f, "'{k}'"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Sym(s) => write!(f, "'{s}'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "field", "QQ", "GF", "ring", "ideal", "prime", "maximal", "point", "action", "jet", "ram", "at", "upto", "taylor",
    "kernel", "order", "verify", "depth", "fiber",
];

const SYMBOLS: &[&str] = &["->", ",", "=", "(", ")", "{", "}", ";", "+", "-", "*", "^", "."];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    /// Byte range of the token in the source.
    pub offset: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub span: Span,
    pub found: char,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut it = src.char_indices().peekable();
    while let Some(&(off, c)) = it.peek() {
        let span = Span { line, col };
        if c == '\n' {
            it.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            it.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&(_, c)) = it.peek() {
                if c == '\n' {
                    break;
                }
                it.next();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, c)) = it.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    it.next();
                } else {
                    break;
                }
            }
            let len = s.len();
            col += len;
            let tok = match KEYWORDS.iter().find(|k| **k == s) {
                Some(k) => Tok::Keyword(k),
                None => Tok::Ident(s),
            };
            out.push(Token { tok, span, offset: off, end: off + len });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, c)) = it.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    it.next();
                } else {
                    break;
                }
            }
            col += s.len();
            let end = off + s.len();
            out.push(Token { tok: Tok::Int(s), span, offset: off, end });
            continue;
        }
        let rest = &src[off..];
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                for _ in 0..s.len() {
                    it.next();
                }
                col += s.len();
                out.push(Token { tok: Tok::Sym(s), span, offset: off, end: off + s.len() });
            }
            None => return Err(LexError { span, found: c }),
        }
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col }, offset: src.len(), end: src.len() });
    Ok(out)
}
