use super::ast::Symbol;
use super::{DslError, ErrorKind, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(u64),
    Sym(Symbol),
    KwB,
    KwA,
    KwParam,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
    Semi,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::KwB => "`b`".into(),
            Tok::KwA => "`a`".into(),
            Tok::KwParam => "`param`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
                col += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            let n = s.parse().map_err(|_| {
                DslError::new(ErrorKind::Lexical, pos, format!("integer literal `{s}` is too large"))
            })?;
            out.push(Token { tok: Tok::Int(n), pos });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                col += 1;
            }
            let tok = match s.as_str() {
                "b" => Tok::KwB,
                "a" => Tok::KwA,
                "param" => Tok::KwParam,
                other => match Symbol::from_name(other) {
                    Some(sym) => Tok::Sym(sym),
                    None => {
                        return Err(DslError::new(
                            ErrorKind::Semantic,
                            pos,
                            format!("unknown identifier `{other}` (expected one of q, v, z, i, d)"),
                        ))
                    }
                },
            };
            out.push(Token { tok, pos });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            ';' => Tok::Semi,
            other => {
                return Err(DslError::new(ErrorKind::Lexical, pos, format!("unexpected character `{other}`")));
            }
        };
        chars.next();
        col += 1;
        out.push(Token { tok, pos });
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let toks = tokenize("b = 1+v # touchard\n  ;a(i)").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            [
                Tok::KwB,
                Tok::Eq,
                Tok::Int(1),
                Tok::Plus,
                Tok::Sym(Symbol::V),
                Tok::Semi,
                Tok::KwA,
                Tok::LParen,
                Tok::Sym(Symbol::I),
                Tok::RParen,
                Tok::Eof
            ]
        );
        assert_eq!(toks[5].pos, Pos { line: 2, col: 3 });
        assert_eq!(toks[10].pos, Pos { line: 2, col: 8 });
    }

    #[test]
    fn bad_input() {
        let e = tokenize("b = 1 $ v").unwrap_err();
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::Lexical, 1, 7));
        let e = tokenize("b = 1 +\n  w").unwrap_err();
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::Semantic, 2, 3));
        assert!(tokenize("b = 99999999999999999999999").is_err());
    }
}
