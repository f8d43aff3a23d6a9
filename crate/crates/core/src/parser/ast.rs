//! Surface syntax produced by the parser, before elaboration.

use crate::syntax::{Name, PrimOp, Type};

use super::Span;

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum SubstSpec {
    /// `prev t`: the body must be closed.
    Closed,
    /// `prev iota. t`: every free variable of the body substituted for itself.
    Iota,
    Explicit(Vec<(Name, Expr)>),
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Var(Name),
    Unit,
    Num(u64),
    Succ(Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Proj(u8, Box<Expr>),
    Lam(Name, Option<Type>, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Fold(Box<Expr>),
    Unfold(Box<Expr>),
    Next(Box<Expr>),
    Prev(SubstSpec, Box<Expr>),
    BoxI(SubstSpec, Box<Expr>),
    Unbox(Box<Expr>),
    LaterApp(Box<Expr>, Box<Expr>),
    Inj(u8, Box<Expr>),
    Case(Box<Expr>, Name, Box<Expr>, Name, Box<Expr>),
    Abort(Box<Expr>),
    BoxSum(SubstSpec, Box<Expr>),
    Fix(Name, Box<Expr>),
    Ann(Box<Expr>, Type),
    Prim(PrimOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    pub fn at(span: Span) -> impl Fn(ExprKind) -> Expr {
        move |kind| Expr { kind, span }
    }

    /// Variables occurring free, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        use ExprKind::*;
        let under = |e: &Expr, names: &[Name], bound: &mut Vec<Name>, out: &mut Vec<Name>| {
            let n = names.len();
            bound.extend(names.iter().cloned());
            e.collect_free(bound, out);
            bound.truncate(bound.len() - n);
        };
        match &self.kind {
            Var(x) => {
                if !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Unit | Num(_) => {}
            Succ(e)
            | Proj(_, e)
            | Fold(e)
            | Unfold(e)
            | Next(e)
            | Unbox(e)
            | Inj(_, e)
            | Abort(e)
            | Ann(e, _) => e.collect_free(bound, out),
            Pair(a, b) | App(a, b) | LaterApp(a, b) | Prim(_, a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Lam(x, _, b) | Fix(x, b) => under(b, std::slice::from_ref(x), bound, out),
            Prev(s, b) | BoxI(s, b) | BoxSum(s, b) => match s {
                SubstSpec::Closed => {}
                SubstSpec::Iota => b.collect_free(bound, out),
                SubstSpec::Explicit(entries) => {
                    for (_, e) in entries {
                        e.collect_free(bound, out);
                    }
                }
            },
            Case(t, x1, b1, x2, b2) => {
                t.collect_free(bound, out);
                under(b1, std::slice::from_ref(x1), bound, out);
                under(b2, std::slice::from_ref(x2), bound, out);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Definition {
    pub name: Name,
    pub ty: Type,
    pub body: Expr,
    pub span: Span,
}

/// A parsed program: definitions in source order, aliases already expanded.
#[derive(Clone, Debug, Default)]
pub struct SourceProgram {
    pub file: String,
    pub definitions: Vec<Definition>,
    pub aliases: Vec<(Name, Type)>,
}

impl SourceProgram {
    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| &*d.name == name)
    }
}
