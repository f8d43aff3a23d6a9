//! Pretty-printing of surface and core terms.

use std::collections::BTreeSet;

use crate::syntax::{Name, PrimOp, Subst, Term, TermKind, Type};

use super::ast::{Expr, ExprKind, SubstSpec};
use super::lexer::is_keyword;
use super::Span;

const L_BINDER: u8 = 0;
const L_AP: u8 = 1;
const L_ADD: u8 = 2;
const L_MUL: u8 = 3;
const L_APP: u8 = 4;
const L_PREFIX: u8 = 5;
const L_ATOM: u8 = 6;

pub fn pretty_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, L_BINDER);
    out
}

fn level(e: &Expr) -> u8 {
    use ExprKind::*;
    match &e.kind {
        Lam(..) | Fix(..) | Case(..) | BoxSum(..) => L_BINDER,
        Prev(SubstSpec::Closed, _) | BoxI(SubstSpec::Closed, _) => L_PREFIX,
        Prev(..) | BoxI(..) => L_BINDER,
        LaterApp(..) => L_AP,
        Prim(PrimOp::Add, ..) => L_ADD,
        Prim(PrimOp::Mul, ..) => L_MUL,
        App(..) => L_APP,
        Succ(_) | Proj(..) | Fold(_) | Unfold(_) | Next(_) | Unbox(_) | Inj(..) | Abort(_) => {
            L_PREFIX
        }
        Var(_) | Num(_) | Unit | Pair(..) | Ann(..) => L_ATOM,
    }
}

fn write_expr(out: &mut String, e: &Expr, ctx: u8) {
    use ExprKind::*;
    let paren = level(e) < ctx;
    if paren {
        out.push('(');
    }
    match &e.kind {
        Var(x) => out.push_str(x),
        Num(n) => out.push_str(&n.to_string()),
        Unit => out.push_str("()"),
        Pair(a, b) => {
            out.push('<');
            write_expr(out, a, L_BINDER);
            out.push_str(", ");
            write_expr(out, b, L_BINDER);
            out.push('>');
        }
        Ann(a, ty) => {
            out.push('(');
            write_expr(out, a, L_BINDER);
            out.push_str(&format!(" : {ty})"));
        }
        Succ(a) => prefix(out, "succ", a),
        Proj(1, a) => prefix(out, "fst", a),
        Proj(_, a) => prefix(out, "snd", a),
        Fold(a) => prefix(out, "fold", a),
        Unfold(a) => prefix(out, "unfold", a),
        Next(a) => prefix(out, "next", a),
        Unbox(a) => prefix(out, "unbox", a),
        Inj(1, a) => prefix(out, "in1", a),
        Inj(_, a) => prefix(out, "in2", a),
        Abort(a) => prefix(out, "abort", a),
        Prev(s, b) => subst_form(out, "prev", s, b),
        BoxI(s, b) => subst_form(out, "box", s, b),
        BoxSum(s, b) => subst_form(out, "boxplus", s, b),
        App(f, a) => {
            write_expr(out, f, L_APP);
            out.push(' ');
            write_expr(out, a, L_ATOM);
        }
        LaterApp(a, b) => binary(out, a, " <*> ", b, L_AP),
        Prim(PrimOp::Add, a, b) => binary(out, a, " + ", b, L_ADD),
        Prim(PrimOp::Mul, a, b) => binary(out, a, " * ", b, L_MUL),
        Lam(x, ty, b) => {
            match ty {
                Some(ty) => out.push_str(&format!("\\({x} : {ty}). ")),
                None => out.push_str(&format!("\\{x}. ")),
            }
            write_expr(out, b, L_BINDER);
        }
        Fix(x, b) => {
            out.push_str(&format!("fix {x}. "));
            write_expr(out, b, L_BINDER);
        }
        Case(t, x1, b1, x2, b2) => {
            out.push_str("case ");
            write_expr(out, t, L_BINDER);
            out.push_str(&format!(" of {x1}. "));
            write_expr(out, b1, L_BINDER);
            out.push_str(&format!("; {x2}. "));
            write_expr(out, b2, L_BINDER);
        }
    }
    if paren {
        out.push(')');
    }
}

fn prefix(out: &mut String, kw: &str, arg: &Expr) {
    out.push_str(kw);
    out.push(' ');
    write_expr(out, arg, L_PREFIX);
}

fn binary(out: &mut String, a: &Expr, op: &str, b: &Expr, lvl: u8) {
    write_expr(out, a, lvl);
    out.push_str(op);
    write_expr(out, b, lvl + 1);
}

fn subst_form(out: &mut String, kw: &str, s: &SubstSpec, body: &Expr) {
    out.push_str(kw);
    match s {
        SubstSpec::Closed if kw != "boxplus" => {
            out.push(' ');
            write_expr(out, body, L_PREFIX);
            return;
        }
        SubstSpec::Closed => out.push_str(" []. "),
        SubstSpec::Iota => out.push_str(" iota. "),
        SubstSpec::Explicit(entries) => {
            out.push_str(" [");
            for (i, (x, e)) in entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&format!("{x} <- "));
                write_expr(out, e, L_BINDER);
            }
            out.push_str("]. ");
        }
    }
    write_expr(out, body, L_BINDER);
}

/// Print a core term without its type annotations.
pub fn pretty_term(t: &Term) -> String {
    pretty_expr(&to_surface(t, false))
}

/// Print a core term with enough annotations to elaborate back to itself.
pub fn pretty_term_annotated(t: &Term) -> String {
    pretty_expr(&to_surface(t, true))
}

pub fn pretty_type(ty: &Type) -> String {
    ty.to_string()
}

/// Convert a core term to surface syntax, choosing printable binder names
/// that neither capture nor shadow anything the body refers to.
pub fn to_surface(t: &Term, annotate: bool) -> Expr {
    let mut cx = Namer {
        avoid: t.free_names(),
        scope: Vec::new(),
        annotate,
    };
    cx.convert(t)
}

struct Namer {
    avoid: BTreeSet<Name>,
    scope: Vec<Name>,
    annotate: bool,
}

impl Namer {
    fn fresh(&self, hint: &str) -> Name {
        let base = if hint.is_empty() || is_keyword(hint) || hint.starts_with('?') {
            "x"
        } else {
            hint
        };
        let taken = |n: &str| {
            self.scope.iter().any(|s| &**s == n)
                || self.avoid.iter().any(|s| &**s == n)
                || is_keyword(n)
        };
        if !taken(base) {
            return base.into();
        }
        let mut k = 1;
        loop {
            let cand = format!("{base}{k}");
            if !taken(&cand) {
                return cand.into();
            }
            k += 1;
        }
    }

    fn under<R>(&mut self, names: &[Name], f: impl FnOnce(&mut Self) -> R) -> R {
        let n = names.len();
        self.scope.extend(names.iter().cloned());
        let r = f(self);
        self.scope.truncate(self.scope.len() - n);
        r
    }

    fn bind(&mut self, hint: &str) -> Name {
        self.fresh(hint)
    }

    fn boxed(&mut self, t: &Term) -> Box<Expr> {
        Box::new(self.convert(t))
    }

    fn subst(&mut self, s: &Subst, body: &Term) -> (SubstSpec, Box<Expr>) {
        if s.is_empty() {
            return (SubstSpec::Closed, self.boxed(body));
        }
        let mut names: Vec<Name> = Vec::new();
        let mut entries = Vec::new();
        for (x, e) in &s.entries {
            let conv = self.convert(e);
            // names within one list must be distinct from each other too
            let name = self.under(&names.clone(), |cx| cx.bind(x.name()));
            names.push(name.clone());
            entries.push((name, conv));
        }
        let body = self.under(&names, |cx| cx.boxed(body));
        (SubstSpec::Explicit(entries), body)
    }

    fn annotated(&self, e: Expr, ty: &Option<Type>) -> Expr {
        match ty {
            Some(ty) if self.annotate => {
                Expr::new(ExprKind::Ann(e.into(), ty.clone()), Span::none())
            }
            _ => e,
        }
    }

    fn convert(&mut self, t: &Term) -> Expr {
        use TermKind as K;
        if let Some(n) = t.as_numeral() {
            return mk(ExprKind::Num(n));
        }
        match t.kind() {
            K::Bound(k) => {
                let k = *k as usize;
                match self.scope.len().checked_sub(k + 1) {
                    Some(i) => mk(ExprKind::Var(self.scope[i].clone())),
                    None => mk(ExprKind::Var(format!("?{k}").into())),
                }
            }
            K::Free(x) => mk(ExprKind::Var(x.clone())),
            K::Unit => mk(ExprKind::Unit),
            K::Zero => mk(ExprKind::Num(0)),
            K::Succ(a) => mk(ExprKind::Succ(self.boxed(a))),
            K::Pair(a, b) => mk(ExprKind::Pair(self.boxed(a), self.boxed(b))),
            K::Proj(d, a) => mk(ExprKind::Proj(*d, self.boxed(a))),
            K::Lam(x, ty, b) => {
                let name = self.bind(x.name());
                let body = self.under(std::slice::from_ref(&name), |cx| cx.boxed(b));
                let ty = if self.annotate { ty.clone() } else { None };
                mk(ExprKind::Lam(name, ty, body))
            }
            K::App(a, b) => mk(ExprKind::App(self.boxed(a), self.boxed(b))),
            K::Fold(ty, a) => {
                let e = mk(ExprKind::Fold(self.boxed(a)));
                self.annotated(e, ty)
            }
            K::Unfold(a) => mk(ExprKind::Unfold(self.boxed(a))),
            K::Next(a) => mk(ExprKind::Next(self.boxed(a))),
            K::Prev(s, b) => {
                let (s, b) = self.subst(s, b);
                mk(ExprKind::Prev(s, b))
            }
            K::BoxI(s, b) => {
                let (s, b) = self.subst(s, b);
                mk(ExprKind::BoxI(s, b))
            }
            K::BoxSum(s, b) => {
                let (s, b) = self.subst(s, b);
                mk(ExprKind::BoxSum(s, b))
            }
            K::Unbox(a) => mk(ExprKind::Unbox(self.boxed(a))),
            K::LaterApp(a, b) => mk(ExprKind::LaterApp(self.boxed(a), self.boxed(b))),
            K::Inj(d, ty, a) => {
                let e = mk(ExprKind::Inj(*d, self.boxed(a)));
                self.annotated(e, ty)
            }
            K::Case(s, x1, b1, x2, b2) => {
                let scrut = self.boxed(s);
                let n1 = self.bind(x1.name());
                let e1 = self.under(std::slice::from_ref(&n1), |cx| cx.boxed(b1));
                let n2 = self.bind(x2.name());
                let e2 = self.under(std::slice::from_ref(&n2), |cx| cx.boxed(b2));
                mk(ExprKind::Case(scrut, n1, e1, n2, e2))
            }
            K::Abort(ty, a) => {
                let e = mk(ExprKind::Abort(self.boxed(a)));
                self.annotated(e, ty)
            }
            K::Prim(op, a, b) => mk(ExprKind::Prim(*op, self.boxed(a), self.boxed(b))),
        }
    }
}

fn mk(kind: ExprKind) -> Expr {
    Expr::new(kind, Span::none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(pretty_term(&Term::zero()), "0");
        assert_eq!(pretty_type(&Type::later(Type::Nat)), "|>Nat");
        let t = Term::prev(vec![("x", Term::zero())], Term::next(Term::var("x")));
        assert_eq!(pretty_term(&t), "prev [x <- 0]. next x");
    }

    #[test]
    fn shadowing_binders_are_renamed() {
        // \x. \x'. x  where both hints are "x"
        let inner = Term::mk(TermKind::Lam("x".into(), None, Term::bound(1)));
        let t = Term::mk(TermKind::Lam("x".into(), None, inner));
        assert_eq!(pretty_term(&t), "\\x. \\x1. x");
    }

    #[test]
    fn binders_avoid_free_names() {
        let t = Term::lam("y", None, Term::app(Term::var("y1"), Term::var("y")));
        let t = t.subst1("y1", &Term::var("y"));
        assert_eq!(pretty_term(&t), "\\y1. y y1");
    }

    #[test]
    fn operator_layout() {
        let t = Term::later_app(
            Term::later_app(Term::var("g"), Term::var("t")),
            Term::next(Term::app(Term::var("tl"), Term::var("s"))),
        );
        assert_eq!(pretty_term(&t), "g <*> t <*> next (tl s)");
        let t = Term::app(
            Term::lam("x", None, Term::var("x")),
            Term::succ(Term::var("y")),
        );
        assert_eq!(pretty_term(&t), "(\\x. x) (succ y)");
    }
}
