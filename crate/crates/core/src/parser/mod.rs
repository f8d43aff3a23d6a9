//! Concrete syntax: lexer, parser and pretty-printer.

pub mod ast;
pub mod lexer;
pub mod parse;
pub mod pretty;

use std::fmt;

use thiserror::Error;

use crate::syntax::{Name, Type};

pub use ast::{Definition, Expr, ExprKind, SourceProgram, SubstSpec};
pub use parse::Parser;
pub use pretty::{pretty_expr, pretty_term, pretty_term_annotated, pretty_type, to_surface};

/// One-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    /// Position of synthesized syntax.
    pub fn none() -> Span {
        Span { line: 0, col: 0 }
    }

    pub fn is_none(&self) -> bool {
        self.line == 0
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("expected {}, found {found}", expected_list(.expected))]
pub struct ParseError {
    pub span: Span,
    pub expected: Vec<String>,
    pub found: String,
}

fn expected_list(items: &[String]) -> String {
    match items {
        [] => "something else".into(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} or {}", init.join(", "), last),
    }
}

impl ParseError {
    pub fn new(span: Span, expected: Vec<String>, found: &str) -> ParseError {
        ParseError {
            span,
            expected,
            found: found.to_string(),
        }
    }
}

pub fn parse_program(text: &str) -> Result<SourceProgram, ParseError> {
    parse_program_with(text, "<input>", &[])
}

/// Parse a program with some type aliases already in scope.
pub fn parse_program_with(
    text: &str,
    file: &str,
    aliases: &[(Name, Type)],
) -> Result<SourceProgram, ParseError> {
    let mut p = Parser::new(text, aliases)?;
    p.program(file)
}

pub fn parse_expr(text: &str, aliases: &[(Name, Type)]) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, aliases)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_type(text: &str, aliases: &[(Name, Type)]) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, aliases)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_definition() {
        let p = parse_program("def id : Nat -> Nat = \\x. x;").unwrap();
        assert_eq!(p.definitions.len(), 1);
        assert_eq!(p.definitions[0].ty, Type::arrow(Type::Nat, Type::Nat));
        assert!(matches!(p.definitions[0].body.kind, ExprKind::Lam(..)));
    }

    #[test]
    fn later_definition() {
        let p = parse_program("def s : |>Nat = next 0;").unwrap();
        assert_eq!(p.definitions[0].ty, Type::later(Type::Nat));
        let ExprKind::Next(inner) = &p.definitions[0].body.kind else {
            panic!()
        };
        assert!(matches!(inner.kind, ExprKind::Num(0)));
    }

    #[test]
    fn aliases_expand() {
        let src =
            "type StrG = mu a. Nat * |>a;\ndef c : Nat -> |>StrG -> StrG = \\n.\\s. fold <n, s>;";
        let p = parse_program(src).unwrap();
        assert_eq!(
            p.definitions[0].ty,
            Type::arrows(
                [Type::Nat, Type::later(Type::guarded_stream())],
                Type::guarded_stream()
            )
        );
    }

    #[test]
    fn empty_program() {
        assert!(parse_program("-- nothing\n")
            .unwrap()
            .definitions
            .is_empty());
    }

    #[test]
    fn error_display() {
        let err = parse_expr("<0; 0>", &[]).unwrap_err();
        assert!(err.expected.contains(&"`,`".to_string()));
        assert_eq!(err.found, "`;`");
        assert!(err.to_string().starts_with("expected "));
    }
}
