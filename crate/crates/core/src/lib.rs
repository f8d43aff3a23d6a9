//! Guarded λ-calculus toolkit: syntax, type checking, call-by-name
//! evaluation, finite-index topos-of-trees semantics, an executable logical
//! relation, and a compiler from behavioural differential equations to
//! guarded stream programs.

pub mod adequacy;
pub mod bde;
pub mod cli;
pub mod denote;
pub mod eval;
pub mod gen;
pub mod parser;
pub mod prelude;
pub mod samples;
pub mod stdlib;
pub mod syntax;
pub mod typecheck;

pub use syntax::{Name, Term, TermKind, Type};
