//! Bidirectional elaboration of surface syntax into annotated core terms.
//!
//! Sugar is removed here: numerals, `iota` and closed substitutions, `fix`,
//! type ascriptions and references to earlier definitions (inlined).

use crate::parser::{Expr, ExprKind, Span, SubstSpec};
use crate::syntax::{is_constant, Binder, Name, Subst, Term, TermKind, Type};

use super::error::{ErrorKind, TypeError};
use super::infer::check_annotation;
use super::program::Program;
use super::theta::theta;

type Scope = Vec<(Name, Type)>;

pub struct Elab<'a> {
    env: &'a Program,
    /// Scopes made invisible by entering a `prev`/`box` body, for diagnostics.
    hidden: Vec<Scope>,
}

type Res<T> = Result<T, TypeError>;

fn lookup(scope: &[(Name, Type)], x: &str) -> Option<(u32, Type)> {
    scope
        .iter()
        .rposition(|(y, _)| &**y == x)
        .map(|i| ((scope.len() - 1 - i) as u32, scope[i].1.clone()))
}

fn cannot_infer(span: Span, what: &str) -> TypeError {
    TypeError::new(
        ErrorKind::CannotInfer,
        span,
        format!("cannot infer the type of {what}; add a type ascription `(t : A)`"),
    )
}

impl<'a> Elab<'a> {
    pub fn new(env: &'a Program) -> Elab<'a> {
        Elab {
            env,
            hidden: Vec::new(),
        }
    }

    pub fn infer_closed(&mut self, e: &Expr) -> Res<(Term, Type)> {
        self.infer(&mut Vec::new(), e)
    }

    pub fn check_closed(&mut self, e: &Expr, ty: &Type) -> Res<Term> {
        self.check(&mut Vec::new(), e, ty)
    }

    fn var(&self, scope: &Scope, x: &Name, span: Span) -> Res<(Term, Type)> {
        if let Some((k, ty)) = lookup(scope, x) {
            return Ok((Term::bound(k), ty));
        }
        if let Some(def) = self.env.get(x) {
            return Ok((def.term.clone(), def.ty.clone()));
        }
        let hidden = self.hidden.iter().any(|s| lookup(s, x).is_some());
        let msg = if hidden {
            format!(
                "variable `{x}` is not in scope inside this prev/box body; pass it through `iota` or an explicit substitution"
            )
        } else {
            format!("variable `{x}` is not in scope")
        };
        Err(TypeError::new(ErrorKind::UnboundVariable, span, msg))
    }

    /// Elaborate a substitution list, returning its entries and the scope of
    /// the body.
    fn subst(
        &mut self,
        scope: &mut Scope,
        spec: &SubstSpec,
        body: &Expr,
        span: Span,
    ) -> Res<(Subst, Scope)> {
        let mut entries = Vec::new();
        let mut inner: Scope = Vec::new();
        let mut push = |x: Name, t: Term, a: Type, at: Span, inner: &mut Scope| -> Res<()> {
            if inner.iter().any(|(y, _)| *y == x) {
                return Err(TypeError::new(
                    ErrorKind::DuplicateBinder,
                    at,
                    format!("`{x}` is bound twice in one substitution"),
                ));
            }
            if !is_constant(&a).unwrap_or(false) {
                return Err(TypeError::new(
                    ErrorKind::NonconstantContext,
                    at,
                    format!("`{x}` has type `{a}`, which is not constant"),
                )
                .with_found(&a));
            }
            entries.push((Binder(x.clone()), t));
            inner.push((x, a));
            Ok(())
        };
        match spec {
            SubstSpec::Closed => {}
            SubstSpec::Iota => {
                let free = body.free_vars();
                let mut locals: Vec<(usize, Name)> = free
                    .into_iter()
                    .filter_map(|x| scope.iter().rposition(|(y, _)| *y == x).map(|i| (i, x)))
                    .collect();
                locals.sort();
                for (_, x) in locals {
                    let (k, a) = lookup(scope, &x).expect("filtered to locals");
                    push(x, Term::bound(k), a, span, &mut inner)?;
                }
            }
            SubstSpec::Explicit(list) => {
                for (x, e) in list {
                    let (t, a) = self.infer(scope, e)?;
                    push(x.clone(), t, a, e.span, &mut inner)?;
                }
            }
        }
        Ok((Subst { entries }, inner))
    }

    fn in_body<R>(&mut self, outer: &Scope, f: impl FnOnce(&mut Self) -> R) -> R {
        self.hidden.push(outer.clone());
        let r = f(self);
        self.hidden.pop();
        r
    }

    fn under<R>(
        &mut self,
        scope: &mut Scope,
        x: &Name,
        ty: &Type,
        f: impl FnOnce(&mut Self, &mut Scope) -> R,
    ) -> R {
        scope.push((x.clone(), ty.clone()));
        let r = f(self, scope);
        scope.pop();
        r
    }

    pub fn infer(&mut self, scope: &mut Scope, e: &Expr) -> Res<(Term, Type)> {
        use ExprKind as E;
        let span = e.span;
        match &e.kind {
            E::Var(x) => self.var(scope, x, span),
            E::Unit => Ok((Term::unit(), Type::Unit)),
            E::Num(n) => Ok((Term::numeral(*n), Type::Nat)),
            E::Succ(a) => Ok((Term::succ(self.check(scope, a, &Type::Nat)?), Type::Nat)),
            E::Prim(op, a, b) => {
                let ta = self.check(scope, a, &Type::Nat)?;
                let tb = self.check(scope, b, &Type::Nat)?;
                Ok((Term::prim(*op, ta, tb), Type::Nat))
            }
            E::Pair(a, b) => {
                let (ta, aa) = self.infer(scope, a)?;
                let (tb, ab) = self.infer(scope, b)?;
                Ok((Term::pair(ta, tb), Type::prod(aa, ab)))
            }
            E::Proj(d, a) => {
                let (ta, ty) = self.infer(scope, a)?;
                match &ty {
                    Type::Prod(l, r) => {
                        let out = if *d == 1 { l } else { r };
                        Ok((Term::proj(*d, ta), (**out).clone()))
                    }
                    _ => Err(TypeError::new(
                        ErrorKind::NotAProduct,
                        a.span,
                        format!("cannot project from a term of type `{ty}`"),
                    )
                    .with_found(&ty)),
                }
            }
            E::Lam(x, Some(a), body) => {
                check_annotation(a, span)?;
                let (tb, b) = self.under(scope, x, a, |cx, sc| cx.infer(sc, body))?;
                Ok((
                    Term::mk(TermKind::Lam(Binder(x.clone()), Some(a.clone()), tb)),
                    Type::arrow(a.clone(), b),
                ))
            }
            E::Lam(x, None, _) => Err(cannot_infer(span, &format!("binder `{x}`"))),
            E::App(f, a) => {
                if let E::Lam(x, None, body) = &f.kind {
                    // infer the argument first and use it as the binder's type
                    let (ta, aty) = self.infer(scope, a)?;
                    let (tb, b) = self.under(scope, x, &aty, |cx, sc| cx.infer(sc, body))?;
                    let lam = Term::mk(TermKind::Lam(Binder(x.clone()), Some(aty), tb));
                    return Ok((Term::app(lam, ta), b));
                }
                let (tf, fty) = self.infer(scope, f)?;
                match &fty {
                    Type::Arrow(dom, cod) => {
                        let ta = self.check(scope, a, dom)?;
                        Ok((Term::app(tf, ta), (**cod).clone()))
                    }
                    _ => Err(TypeError::new(
                        ErrorKind::NotAFunction,
                        f.span,
                        format!("cannot apply a term of type `{fty}`"),
                    )
                    .with_found(&fty)),
                }
            }
            E::Fold(_) => Err(cannot_infer(span, "this fold")),
            E::Inj(..) => Err(cannot_infer(span, "this injection")),
            E::Abort(_) => Err(cannot_infer(span, "this abort")),
            E::Fix(x, _) => Err(cannot_infer(span, &format!("the fixed point of `{x}`"))),
            E::Unfold(a) => {
                let (ta, ty) = self.infer(scope, a)?;
                match ty.unfold_mu() {
                    Some(u) => Ok((Term::unfold(ta), u)),
                    None => Err(TypeError::new(
                        ErrorKind::NotAMu,
                        a.span,
                        format!("cannot unfold a term of type `{ty}`"),
                    )
                    .with_found(&ty)),
                }
            }
            E::Next(a) => {
                let (ta, ty) = self.infer(scope, a)?;
                Ok((Term::next(ta), Type::later(ty)))
            }
            E::Prev(spec, body) => {
                let (s, mut inner) = self.subst(scope, spec, body, span)?;
                let outer = scope.clone();
                let (tb, bty) = self.in_body(&outer, |cx| cx.infer(&mut inner, body))?;
                match &bty {
                    Type::Later(a) => Ok((Term::mk(TermKind::Prev(s, tb)), (**a).clone())),
                    _ => Err(TypeError::new(
                        ErrorKind::NotLater,
                        body.span,
                        format!("the body of prev has type `{bty}`, which is not a later type"),
                    )
                    .with_found(&bty)),
                }
            }
            E::BoxI(spec, body) => {
                let (s, mut inner) = self.subst(scope, spec, body, span)?;
                let outer = scope.clone();
                let (tb, bty) = self.in_body(&outer, |cx| cx.infer(&mut inner, body))?;
                Ok((Term::mk(TermKind::BoxI(s, tb)), Type::boxed(bty)))
            }
            E::BoxSum(spec, body) => {
                let (s, mut inner) = self.subst(scope, spec, body, span)?;
                let outer = scope.clone();
                let (tb, bty) = self.in_body(&outer, |cx| cx.infer(&mut inner, body))?;
                match &bty {
                    Type::Sum(l, r) => Ok((
                        Term::mk(TermKind::BoxSum(s, tb)),
                        Type::sum(Type::Box(l.clone()), Type::Box(r.clone())),
                    )),
                    _ => Err(TypeError::new(
                        ErrorKind::NotASum,
                        body.span,
                        format!("the body of boxplus has type `{bty}`, which is not a sum"),
                    )
                    .with_found(&bty)),
                }
            }
            E::Unbox(a) => {
                let (ta, ty) = self.infer(scope, a)?;
                match &ty {
                    Type::Box(inner) => Ok((Term::unbox(ta), (**inner).clone())),
                    _ => Err(TypeError::new(
                        ErrorKind::NotBox,
                        a.span,
                        format!("cannot unbox a term of type `{ty}`"),
                    )
                    .with_found(&ty)),
                }
            }
            E::LaterApp(f, a) => {
                let (tf, fty) = self.infer(scope, f)?;
                let (dom, cod) = later_arrow(&fty, f.span)?;
                let ta = self.check(scope, a, &Type::later(dom))?;
                Ok((Term::later_app(tf, ta), Type::later(cod)))
            }
            E::Case(s, x1, b1, x2, b2) => {
                let (ts, sty) = self.infer(scope, s)?;
                let (l, r) = as_sum(&sty, s.span)?;
                let (t1, c) = self.under(scope, x1, &l, |cx, sc| cx.infer(sc, b1))?;
                let t2 = self.under(scope, x2, &r, |cx, sc| cx.check(sc, b2, &c))?;
                Ok((case_term(ts, x1, t1, x2, t2), c))
            }
            E::Ann(a, ty) => {
                check_annotation(ty, span)?;
                Ok((self.check(scope, a, ty)?, ty.clone()))
            }
        }
    }

    pub fn check(&mut self, scope: &mut Scope, e: &Expr, expected: &Type) -> Res<Term> {
        use ExprKind as E;
        let span = e.span;
        match (&e.kind, expected) {
            (E::Lam(x, ann, body), Type::Arrow(dom, cod)) => {
                if let Some(a) = ann {
                    check_annotation(a, span)?;
                    if a != &**dom {
                        return Err(TypeError::mismatch(span, dom, a));
                    }
                }
                let tb = self.under(scope, x, dom, |cx, sc| cx.check(sc, body, cod))?;
                Ok(Term::mk(TermKind::Lam(
                    Binder(x.clone()),
                    Some((**dom).clone()),
                    tb,
                )))
            }
            (E::Lam(..), _) => Err(TypeError::new(
                ErrorKind::Mismatch,
                span,
                format!("expected type `{expected}`, found a function"),
            )
            .with_expected(expected)),
            (E::Fold(a), Type::Mu(..)) => {
                let unfolded = expected.unfold_mu().expect("matched a mu type");
                let ta = self.check(scope, a, &unfolded)?;
                Ok(Term::fold(Some(expected.clone()), ta))
            }
            (E::Fold(_), _) => Err(TypeError::new(
                ErrorKind::NotAMu,
                span,
                format!("fold used at type `{expected}`, which is not recursive"),
            )
            .with_expected(expected)),
            (E::Inj(d, a), Type::Sum(l, r)) => {
                let ta = self.check(scope, a, if *d == 1 { l } else { r })?;
                Ok(Term::inj(*d, Some(expected.clone()), ta))
            }
            (E::Inj(..), _) => Err(TypeError::new(
                ErrorKind::NotASum,
                span,
                format!("injection used at type `{expected}`, which is not a sum"),
            )
            .with_expected(expected)),
            (E::Abort(a), _) => {
                let ta = self.check(scope, a, &Type::Empty)?;
                Ok(Term::abort(Some(expected.clone()), ta))
            }
            (E::Fix(x, body), _) => {
                let later = Type::later(expected.clone());
                let tb = self.under(scope, x, &later, |cx, sc| cx.check(sc, body, expected))?;
                let f = Term::mk(TermKind::Lam(Binder(x.clone()), Some(later), tb));
                Ok(Term::app(theta(Some(expected)), f))
            }
            (E::Pair(a, b), Type::Prod(l, r)) => {
                let ta = self.check(scope, a, l)?;
                let tb = self.check(scope, b, r)?;
                Ok(Term::pair(ta, tb))
            }
            (E::Next(a), Type::Later(inner)) => Ok(Term::next(self.check(scope, a, inner)?)),
            (E::Prev(spec, body), _) => {
                let (s, mut inner) = self.subst(scope, spec, body, span)?;
                let outer = scope.clone();
                let later = Type::later(expected.clone());
                let tb = self.in_body(&outer, |cx| cx.check(&mut inner, body, &later))?;
                Ok(Term::mk(TermKind::Prev(s, tb)))
            }
            (E::BoxI(spec, body), Type::Box(inner_ty)) => {
                let (s, mut inner) = self.subst(scope, spec, body, span)?;
                let outer = scope.clone();
                let tb = self.in_body(&outer, |cx| cx.check(&mut inner, body, inner_ty))?;
                Ok(Term::mk(TermKind::BoxI(s, tb)))
            }
            (E::BoxSum(spec, body), Type::Sum(l, r))
                if matches!((&**l, &**r), (Type::Box(_), Type::Box(_))) =>
            {
                let (Type::Box(b1), Type::Box(b2)) = (&**l, &**r) else {
                    unreachable!()
                };
                let (s, mut inner) = self.subst(scope, spec, body, span)?;
                let outer = scope.clone();
                let sum = Type::Sum(b1.clone(), b2.clone());
                let tb = self.in_body(&outer, |cx| cx.check(&mut inner, body, &sum))?;
                Ok(Term::mk(TermKind::BoxSum(s, tb)))
            }
            (E::Case(s, x1, b1, x2, b2), _) => {
                let (ts, sty) = self.infer(scope, s)?;
                let (l, r) = as_sum(&sty, s.span)?;
                let t1 = self.under(scope, x1, &l, |cx, sc| cx.check(sc, b1, expected))?;
                let t2 = self.under(scope, x2, &r, |cx, sc| cx.check(sc, b2, expected))?;
                Ok(case_term(ts, x1, t1, x2, t2))
            }
            (E::LaterApp(f, a), Type::Later(cod)) => match self.infer(scope, f) {
                Ok((tf, fty)) => {
                    let (dom, fcod) = later_arrow(&fty, f.span)?;
                    if fcod != **cod {
                        return Err(TypeError::mismatch(span, expected, &Type::later(fcod)));
                    }
                    let ta = self.check(scope, a, &Type::later(dom))?;
                    Ok(Term::later_app(tf, ta))
                }
                Err(err) if err.kind == ErrorKind::CannotInfer => {
                    let (ta, aty) = self.infer(scope, a)?;
                    let Type::Later(dom) = &aty else {
                        return Err(TypeError::new(
                            ErrorKind::NotLater,
                            a.span,
                            format!("right of <*> has type `{aty}`, which is not a later type"),
                        )
                        .with_found(&aty));
                    };
                    let fty = Type::later(Type::Arrow(dom.clone(), cod.clone()));
                    let tf = self.check(scope, f, &fty)?;
                    Ok(Term::later_app(tf, ta))
                }
                Err(err) => Err(err),
            },
            _ => {
                let (t, found) = self.infer(scope, e)?;
                if &found == expected {
                    Ok(t)
                } else {
                    Err(TypeError::mismatch(span, expected, &found))
                }
            }
        }
    }
}

fn case_term(scrut: Term, x1: &Name, t1: Term, x2: &Name, t2: Term) -> Term {
    Term::mk(TermKind::Case(
        scrut,
        Binder(x1.clone()),
        t1,
        Binder(x2.clone()),
        t2,
    ))
}

fn as_sum(ty: &Type, span: Span) -> Res<(Type, Type)> {
    match ty {
        Type::Sum(l, r) => Ok(((**l).clone(), (**r).clone())),
        _ => Err(TypeError::new(
            ErrorKind::NotASum,
            span,
            format!("cannot case on a term of type `{ty}`"),
        )
        .with_found(ty)),
    }
}

fn later_arrow(ty: &Type, span: Span) -> Res<(Type, Type)> {
    match ty {
        Type::Later(inner) => match &**inner {
            Type::Arrow(d, c) => Ok(((**d).clone(), (**c).clone())),
            _ => Err(TypeError::new(
                ErrorKind::NotAFunction,
                span,
                format!("left of <*> has type `{ty}`, which is not a later function"),
            )
            .with_found(ty)),
        },
        _ => Err(TypeError::new(
            ErrorKind::NotLater,
            span,
            format!("left of <*> has type `{ty}`, which is not a later type"),
        )
        .with_found(ty)),
    }
}

/// Translate surface syntax to core without type checking. Annotations come
/// only from the source; `fix` uses the unannotated combinator.
pub fn lower(env: &Program, e: &Expr) -> Res<Term> {
    lower_in(env, &mut Vec::new(), e)
}

fn lower_in(env: &Program, scope: &mut Vec<Name>, e: &Expr) -> Res<Term> {
    use ExprKind as E;
    let go = |scope: &mut Vec<Name>, e: &Expr| lower_in(env, scope, e);
    let under = |scope: &mut Vec<Name>, names: &[Name], e: &Expr| {
        scope.extend(names.iter().cloned());
        let r = lower_in(env, scope, e);
        scope.truncate(scope.len() - names.len());
        r
    };
    Ok(match &e.kind {
        E::Var(x) => match scope.iter().rposition(|y| y == x) {
            Some(i) => Term::bound((scope.len() - 1 - i) as u32),
            None => match env.get(x) {
                Some(def) => def.term.clone(),
                None => {
                    return Err(TypeError::new(
                        ErrorKind::UnboundVariable,
                        e.span,
                        format!("variable `{x}` is not in scope"),
                    ))
                }
            },
        },
        E::Unit => Term::unit(),
        E::Num(n) => Term::numeral(*n),
        E::Succ(a) => Term::succ(go(scope, a)?),
        E::Prim(op, a, b) => Term::prim(*op, go(scope, a)?, go(scope, b)?),
        E::Pair(a, b) => Term::pair(go(scope, a)?, go(scope, b)?),
        E::Proj(d, a) => Term::proj(*d, go(scope, a)?),
        E::Lam(x, ty, b) => {
            let tb = under(scope, std::slice::from_ref(x), b)?;
            Term::mk(TermKind::Lam(Binder(x.clone()), ty.clone(), tb))
        }
        E::App(f, a) => Term::app(go(scope, f)?, go(scope, a)?),
        E::Fold(a) => Term::fold(None, go(scope, a)?),
        E::Unfold(a) => Term::unfold(go(scope, a)?),
        E::Next(a) => Term::next(go(scope, a)?),
        E::Unbox(a) => Term::unbox(go(scope, a)?),
        E::LaterApp(f, a) => Term::later_app(go(scope, f)?, go(scope, a)?),
        E::Inj(d, a) => Term::inj(*d, None, go(scope, a)?),
        E::Abort(a) => Term::abort(None, go(scope, a)?),
        E::Fix(x, b) => {
            let tb = under(scope, std::slice::from_ref(x), b)?;
            Term::app(
                theta(None),
                Term::mk(TermKind::Lam(Binder(x.clone()), None, tb)),
            )
        }
        E::Case(s, x1, b1, x2, b2) => {
            let ts = go(scope, s)?;
            let t1 = under(scope, std::slice::from_ref(x1), b1)?;
            let t2 = under(scope, std::slice::from_ref(x2), b2)?;
            case_term(ts, x1, t1, x2, t2)
        }
        E::Ann(a, ty) => {
            let t = go(scope, a)?;
            let ty = Some(ty.clone());
            match t.kind() {
                TermKind::Fold(None, inner) => Term::fold(ty, inner.clone()),
                TermKind::Inj(d, None, inner) => Term::inj(*d, ty, inner.clone()),
                TermKind::Abort(None, inner) => Term::abort(ty, inner.clone()),
                _ => t,
            }
        }
        E::Prev(spec, body) | E::BoxI(spec, body) | E::BoxSum(spec, body) => {
            let entries: Vec<(Name, Term)> = match spec {
                SubstSpec::Closed => Vec::new(),
                SubstSpec::Iota => {
                    let mut locals: Vec<(usize, Name)> = body
                        .free_vars()
                        .into_iter()
                        .filter_map(|x| scope.iter().rposition(|y| *y == x).map(|i| (i, x)))
                        .collect();
                    locals.sort();
                    locals
                        .into_iter()
                        .map(|(i, x)| (x, Term::bound((scope.len() - 1 - i) as u32)))
                        .collect()
                }
                SubstSpec::Explicit(list) => list
                    .iter()
                    .map(|(x, e)| Ok((x.clone(), go(scope, e)?)))
                    .collect::<Res<_>>()?,
            };
            let names: Vec<Name> = entries.iter().map(|(x, _)| x.clone()).collect();
            let tb = under(scope, &names, body)?;
            let s = Subst {
                entries: entries.into_iter().map(|(x, t)| (Binder(x), t)).collect(),
            };
            match &e.kind {
                E::Prev(..) => Term::mk(TermKind::Prev(s, tb)),
                E::BoxI(..) => Term::mk(TermKind::BoxI(s, tb)),
                _ => Term::mk(TermKind::BoxSum(s, tb)),
            }
        }
    })
}
