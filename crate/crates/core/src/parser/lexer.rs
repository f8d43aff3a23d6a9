//! Tokenizer for program files and BDE specifications.

use std::fmt;

use super::{ParseError, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Kw(Kw),
    Sym(Sym),
    Eof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kw {
    Type,
    Def,
    Mu,
    Nat,
    Zero,
    Succ,
    Fst,
    Snd,
    Fold,
    Unfold,
    Next,
    Prev,
    Box,
    Unbox,
    In1,
    In2,
    Case,
    Of,
    Abort,
    Boxplus,
    Fix,
    Iota,
}

const KEYWORDS: &[(&str, Kw)] = &[
    ("type", Kw::Type),
    ("def", Kw::Def),
    ("mu", Kw::Mu),
    ("Nat", Kw::Nat),
    ("zero", Kw::Zero),
    ("succ", Kw::Succ),
    ("fst", Kw::Fst),
    ("snd", Kw::Snd),
    ("fold", Kw::Fold),
    ("unfold", Kw::Unfold),
    ("next", Kw::Next),
    ("prev", Kw::Prev),
    ("box", Kw::Box),
    ("unbox", Kw::Unbox),
    ("in1", Kw::In1),
    ("in2", Kw::In2),
    ("case", Kw::Case),
    ("of", Kw::Of),
    ("abort", Kw::Abort),
    ("boxplus", Kw::Boxplus),
    ("fix", Kw::Fix),
    ("iota", Kw::Iota),
];

impl Kw {
    pub fn text(self) -> &'static str {
        KEYWORDS
            .iter()
            .find(|(_, k)| *k == self)
            .map(|(s, _)| *s)
            .unwrap_or("?")
    }
}

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.iter().any(|(k, _)| *k == s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sym {
    Later,
    Hash,
    Star,
    Plus,
    Arrow,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Comma,
    Dot,
    Semi,
    Colon,
    Eq,
    Backslash,
    Ap,
    LeftArrow,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
}

impl Sym {
    pub fn text(self) -> &'static str {
        match self {
            Sym::Later => "|>",
            Sym::Hash => "#",
            Sym::Star => "*",
            Sym::Plus => "+",
            Sym::Arrow => "->",
            Sym::LParen => "(",
            Sym::RParen => ")",
            Sym::LAngle => "<",
            Sym::RAngle => ">",
            Sym::Comma => ",",
            Sym::Dot => ".",
            Sym::Semi => ";",
            Sym::Colon => ":",
            Sym::Eq => "=",
            Sym::Backslash => "\\",
            Sym::Ap => "<*>",
            Sym::LeftArrow => "<-",
            Sym::LBracket => "[",
            Sym::RBracket => "]",
            Sym::LBrace => "{",
            Sym::RBrace => "}",
        }
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Num(n) => write!(f, "numeral `{n}`"),
            Tok::Kw(k) => write!(f, "`{}`", k.text()),
            Tok::Sym(s) => write!(f, "`{}`", s.text()),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

// Longest symbols first so that `<*>` and `<-` win over `<`.
const SYMBOLS: &[(&str, Sym)] = &[
    ("<*>", Sym::Ap),
    ("<-", Sym::LeftArrow),
    ("->", Sym::Arrow),
    ("|>", Sym::Later),
    ("#", Sym::Hash),
    ("*", Sym::Star),
    ("+", Sym::Plus),
    ("(", Sym::LParen),
    (")", Sym::RParen),
    ("<", Sym::LAngle),
    (">", Sym::RAngle),
    (",", Sym::Comma),
    (".", Sym::Dot),
    (";", Sym::Semi),
    (":", Sym::Colon),
    ("=", Sym::Eq),
    ("\\", Sym::Backslash),
    ("[", Sym::LBracket),
    ("]", Sym::RBracket),
    ("{", Sym::LBrace),
    ("}", Sym::RBrace),
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let advance = |i: &mut usize, line: &mut u32, col: &mut u32, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    'outer: while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        let span = Span { line, col };
        if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                let digit = chars[i] as u64 - '0' as u64;
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(digit))
                    .ok_or_else(|| {
                        ParseError::new(
                            span,
                            vec!["a numeral that fits in 64 bits".into()],
                            "overflow",
                        )
                    })?;
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            out.push(Token {
                tok: Tok::Num(n),
                span,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match KEYWORDS.iter().find(|(k, _)| *k == word) {
                Some((_, kw)) => Tok::Kw(*kw),
                None => Tok::Ident(word),
            };
            out.push(Token { tok, span });
            continue;
        }
        for (text, sym) in SYMBOLS {
            let len = text.chars().count();
            if i + len <= chars.len() && chars[i..i + len].iter().copied().eq(text.chars()) {
                for _ in 0..len {
                    {
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut col, ch);
                    }
                }
                out.push(Token {
                    tok: Tok::Sym(*sym),
                    span,
                });
                continue 'outer;
            }
        }
        return Err(ParseError::new(
            span,
            vec!["a token".into()],
            &format!("character `{c}`"),
        ));
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn symbols_prefer_longest_match() {
        assert_eq!(
            toks("<a, b> <*> x <- y"),
            vec![
                Tok::Sym(Sym::LAngle),
                Tok::Ident("a".into()),
                Tok::Sym(Sym::Comma),
                Tok::Ident("b".into()),
                Tok::Sym(Sym::RAngle),
                Tok::Sym(Sym::Ap),
                Tok::Ident("x".into()),
                Tok::Sym(Sym::LeftArrow),
                Tok::Ident("y".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let ts = tokenize("-- note\n  next 0").unwrap();
        assert_eq!(ts[0].tok, Tok::Kw(Kw::Next));
        assert_eq!(ts[0].span, Span { line: 2, col: 3 });
        assert_eq!(ts[1].tok, Tok::Num(0));
    }

    #[test]
    fn primes_in_identifiers() {
        assert_eq!(toks("s'"), vec![Tok::Ident("s'".into()), Tok::Eof]);
    }

    #[test]
    fn bad_character() {
        let err = tokenize("x @").unwrap_err();
        assert_eq!((err.span.line, err.span.col), (1, 3));
    }
}
