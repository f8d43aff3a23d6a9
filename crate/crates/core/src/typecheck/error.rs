use std::fmt;

use serde_json::json;

use crate::parser::Span;
use crate::syntax::{Name, Type, WfError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Mismatch,
    UnguardedMu,
    NonconstantContext,
    UnboundVariable,
    IllFormedType,
    NotAFunction,
    NotAProduct,
    NotASum,
    NotAMu,
    NotLater,
    NotBox,
    CannotInfer,
    DuplicateDefinition,
    DuplicateBinder,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Mismatch => "mismatch",
            ErrorKind::UnguardedMu => "unguarded-mu",
            ErrorKind::NonconstantContext => "nonconstant-context",
            ErrorKind::UnboundVariable => "unbound-variable",
            ErrorKind::IllFormedType => "ill-formed-type",
            ErrorKind::NotAFunction => "not-a-function",
            ErrorKind::NotAProduct => "not-a-product",
            ErrorKind::NotASum => "not-a-sum",
            ErrorKind::NotAMu => "not-a-mu",
            ErrorKind::NotLater => "not-later",
            ErrorKind::NotBox => "not-box",
            ErrorKind::CannotInfer => "cannot-infer",
            ErrorKind::DuplicateDefinition => "duplicate-definition",
            ErrorKind::DuplicateBinder => "duplicate-binder",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: ErrorKind,
    pub span: Span,
    pub message: String,
    pub expected: Option<Type>,
    pub found: Option<Type>,
    /// The definition being checked when the error arose.
    pub definition: Option<Name>,
}

impl TypeError {
    pub fn new(kind: ErrorKind, span: Span, message: impl Into<String>) -> TypeError {
        TypeError {
            kind,
            span,
            message: message.into(),
            expected: None,
            found: None,
            definition: None,
        }
    }

    pub fn mismatch(span: Span, expected: &Type, found: &Type) -> TypeError {
        TypeError {
            expected: Some(expected.clone()),
            found: Some(found.clone()),
            ..TypeError::new(
                ErrorKind::Mismatch,
                span,
                format!("expected type `{expected}`, found `{found}`"),
            )
        }
    }

    pub fn with_found(mut self, found: &Type) -> TypeError {
        self.found = Some(found.clone());
        self
    }

    pub fn with_expected(mut self, expected: &Type) -> TypeError {
        self.expected = Some(expected.clone());
        self
    }

    pub fn from_wf(span: Span, ty: &Type, err: WfError) -> TypeError {
        let kind = match err {
            WfError::Unguarded(_) => ErrorKind::UnguardedMu,
            _ => ErrorKind::IllFormedType,
        };
        TypeError::new(kind, span, format!("in type `{ty}`: {err}")).with_found(ty)
    }

    fn location(&self, file: &str) -> String {
        if self.span.is_none() {
            file.to_string()
        } else {
            format!("{file}:{}", self.span)
        }
    }

    /// `file:line:col: [kind] message`
    pub fn render(&self, file: &str) -> String {
        let mut msg = self.message.clone();
        if let Some(d) = &self.definition {
            msg = format!("{msg} (in definition `{d}`)");
        }
        format!("{}: [{}] {}", self.location(file), self.kind, msg)
    }

    pub fn to_json(&self, file: &str) -> serde_json::Value {
        json!({
            "kind": self.kind.as_str(),
            "location": self.location(file),
            "expected": self.expected.as_ref().map(|t| t.to_string()),
            "found": self.found.as_ref().map(|t| t.to_string()),
            "message": self.message,
        })
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.kind, self.message)
    }
}

impl std::error::Error for TypeError {}
