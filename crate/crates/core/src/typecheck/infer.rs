//! Type synthesis on annotated core terms.

use std::collections::{BTreeMap, BTreeSet};

use crate::parser::Span;
use crate::syntax::{check_wf, is_constant, Name, Subst, Term, TermKind, Type};

use super::error::{ErrorKind, TypeError};

/// Types of the free variables of a term.
pub type TypingCtx = BTreeMap<Name, Type>;

/// The unique type of `t` in `gamma`, or the first violated rule.
pub fn infer(gamma: &TypingCtx, t: &Term) -> Result<Type, TypeError> {
    Synth { gamma }.infer(&mut Vec::new(), t)
}

pub fn infer_closed(t: &Term) -> Result<Type, TypeError> {
    infer(&TypingCtx::new(), t)
}

struct Synth<'a> {
    gamma: &'a TypingCtx,
}

fn err(kind: ErrorKind, msg: impl Into<String>) -> TypeError {
    TypeError::new(kind, Span::none(), msg)
}

pub(crate) fn check_annotation(ty: &Type, span: Span) -> Result<(), TypeError> {
    check_wf(&BTreeSet::new(), ty).map_err(|e| TypeError::from_wf(span, ty, e))
}

impl Synth<'_> {
    fn check(&self, env: &mut Vec<Type>, t: &Term, expected: &Type) -> Result<(), TypeError> {
        let found = self.infer(env, t)?;
        if &found == expected {
            Ok(())
        } else {
            Err(TypeError::mismatch(Span::none(), expected, &found))
        }
    }

    /// Types of a substitution list, each required to be constant.
    fn subst_types(&self, env: &mut Vec<Type>, s: &Subst) -> Result<Vec<Type>, TypeError> {
        let mut out = Vec::new();
        for (x, t) in &s.entries {
            let a = self.infer(env, t)?;
            if !is_constant(&a).unwrap_or(false) {
                return Err(err(
                    ErrorKind::NonconstantContext,
                    format!("`{}` has type `{a}`, which is not constant", x.name()),
                )
                .with_found(&a));
            }
            out.push(a);
        }
        Ok(out)
    }

    fn body(&self, tys: Vec<Type>, body: &Term) -> Result<Type, TypeError> {
        let inner = TypingCtx::new();
        Synth { gamma: &inner }.infer(&mut tys.clone(), body)
    }

    fn infer(&self, env: &mut Vec<Type>, t: &Term) -> Result<Type, TypeError> {
        use TermKind as K;
        match t.kind() {
            K::Bound(k) => {
                let k = *k as usize;
                env.len()
                    .checked_sub(k + 1)
                    .map(|i| env[i].clone())
                    .ok_or_else(|| {
                        err(
                            ErrorKind::UnboundVariable,
                            format!("index {k} escapes its scope"),
                        )
                    })
            }
            K::Free(x) => self.gamma.get(x).cloned().ok_or_else(|| {
                err(
                    ErrorKind::UnboundVariable,
                    format!("variable `{x}` is not in scope"),
                )
            }),
            K::Unit => Ok(Type::Unit),
            K::Zero => Ok(Type::Nat),
            K::Succ(a) => {
                self.check(env, a, &Type::Nat)?;
                Ok(Type::Nat)
            }
            K::Prim(_, a, b) => {
                self.check(env, a, &Type::Nat)?;
                self.check(env, b, &Type::Nat)?;
                Ok(Type::Nat)
            }
            K::Pair(a, b) => Ok(Type::prod(self.infer(env, a)?, self.infer(env, b)?)),
            K::Proj(d, a) => match self.infer(env, a)? {
                Type::Prod(l, r) => Ok(if *d == 1 { (*l).clone() } else { (*r).clone() }),
                other => Err(err(
                    ErrorKind::NotAProduct,
                    format!("cannot project from `{other}`"),
                )
                .with_found(&other)),
            },
            K::Lam(x, ty, body) => {
                let a = ty.clone().ok_or_else(|| {
                    err(
                        ErrorKind::CannotInfer,
                        format!("binder `{}` lacks a type", x.name()),
                    )
                })?;
                check_annotation(&a, Span::none())?;
                env.push(a.clone());
                let b = self.infer(env, body);
                env.pop();
                Ok(Type::arrow(a, b?))
            }
            K::App(f, a) => match self.infer(env, f)? {
                Type::Arrow(dom, cod) => {
                    self.check(env, a, &dom)?;
                    Ok((*cod).clone())
                }
                other => Err(err(
                    ErrorKind::NotAFunction,
                    format!("cannot apply a term of type `{other}`"),
                )
                .with_found(&other)),
            },
            K::Fold(ty, a) => {
                let mu = ty
                    .clone()
                    .ok_or_else(|| err(ErrorKind::CannotInfer, "fold lacks its recursive type"))?;
                check_annotation(&mu, Span::none())?;
                let unfolded = mu.unfold_mu().ok_or_else(|| {
                    err(ErrorKind::NotAMu, format!("fold annotated with `{mu}`")).with_found(&mu)
                })?;
                self.check(env, a, &unfolded)?;
                Ok(mu)
            }
            K::Unfold(a) => {
                let mu = self.infer(env, a)?;
                mu.unfold_mu().ok_or_else(|| {
                    err(
                        ErrorKind::NotAMu,
                        format!("cannot unfold a term of type `{mu}`"),
                    )
                    .with_found(&mu)
                })
            }
            K::Next(a) => Ok(Type::later(self.infer(env, a)?)),
            K::Prev(s, body) => {
                let tys = self.subst_types(env, s)?;
                match self.body(tys, body)? {
                    Type::Later(a) => Ok((*a).clone()),
                    other => Err(
                        err(ErrorKind::NotLater, format!("prev body has type `{other}`"))
                            .with_found(&other),
                    ),
                }
            }
            K::BoxI(s, body) => {
                let tys = self.subst_types(env, s)?;
                Ok(Type::boxed(self.body(tys, body)?))
            }
            K::BoxSum(s, body) => {
                let tys = self.subst_types(env, s)?;
                match self.body(tys, body)? {
                    Type::Sum(a, b) => Ok(Type::sum(Type::Box(a), Type::Box(b))),
                    other => Err(err(
                        ErrorKind::NotASum,
                        format!("boxplus body has type `{other}`"),
                    )
                    .with_found(&other)),
                }
            }
            K::Unbox(a) => match self.infer(env, a)? {
                Type::Box(inner) => Ok((*inner).clone()),
                other => Err(err(
                    ErrorKind::NotBox,
                    format!("cannot unbox a term of type `{other}`"),
                )
                .with_found(&other)),
            },
            K::LaterApp(f, a) => {
                let ft = self.infer(env, f)?;
                let Type::Later(inner) = &ft else {
                    return Err(
                        err(ErrorKind::NotLater, format!("left of <*> has type `{ft}`"))
                            .with_found(&ft),
                    );
                };
                let Type::Arrow(dom, cod) = &**inner else {
                    return Err(err(
                        ErrorKind::NotAFunction,
                        format!("left of <*> has type `{ft}`"),
                    )
                    .with_found(&ft));
                };
                self.check(env, a, &Type::Later(dom.clone()))?;
                Ok(Type::Later(cod.clone()))
            }
            K::Inj(d, ty, a) => {
                let sum = ty
                    .clone()
                    .ok_or_else(|| err(ErrorKind::CannotInfer, "injection lacks its sum type"))?;
                check_annotation(&sum, Span::none())?;
                let Type::Sum(l, r) = &sum else {
                    return Err(err(
                        ErrorKind::NotASum,
                        format!("injection annotated with `{sum}`"),
                    )
                    .with_found(&sum));
                };
                self.check(env, a, if *d == 1 { l } else { r })?;
                Ok(sum)
            }
            K::Case(scrut, _, b1, _, b2) => {
                let st = self.infer(env, scrut)?;
                let Type::Sum(l, r) = &st else {
                    return Err(
                        err(ErrorKind::NotASum, format!("cannot case on `{st}`")).with_found(&st)
                    );
                };
                env.push((**l).clone());
                let c1 = self.infer(env, b1);
                env.pop();
                env.push((**r).clone());
                let c2 = self.infer(env, b2);
                env.pop();
                let (c1, c2) = (c1?, c2?);
                if c1 == c2 {
                    Ok(c1)
                } else {
                    Err(TypeError::mismatch(Span::none(), &c1, &c2))
                }
            }
            K::Abort(ty, a) => {
                let c = ty
                    .clone()
                    .ok_or_else(|| err(ErrorKind::CannotInfer, "abort lacks its result type"))?;
                check_annotation(&c, Span::none())?;
                self.check(env, a, &Type::Empty)?;
                Ok(c)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg() -> Type {
        Type::guarded_stream()
    }

    fn cons() -> Term {
        Term::lams(
            &[("n", Some(Type::Nat)), ("s", Some(Type::later(sg())))],
            Term::fold(Some(sg()), Term::pair(Term::var("n"), Term::var("s"))),
        )
    }

    fn tlg() -> Term {
        Term::lam("s", Some(sg()), Term::snd(Term::unfold(Term::var("s"))))
    }

    #[test]
    fn cons_type() {
        assert_eq!(
            infer_closed(&cons()).unwrap(),
            Type::arrows([Type::Nat, Type::later(sg())], sg())
        );
    }

    #[test]
    fn nat_to_box_nat() {
        let t = Term::lam("n", Some(Type::Nat), Term::box_iota(Term::var("n")));
        assert_eq!(
            infer_closed(&t).unwrap(),
            Type::arrow(Type::Nat, Type::boxed(Type::Nat))
        );
    }

    #[test]
    fn prev_in_nonconstant_context() {
        let mut gamma = TypingCtx::new();
        gamma.insert("s".into(), sg());
        let t = Term::prev_iota(Term::app(tlg(), Term::var("s")));
        let e = infer(&gamma, &t).unwrap_err();
        assert_eq!(e.kind, ErrorKind::NonconstantContext);
    }

    #[test]
    fn coinductive_tail() {
        let body = Term::box_iota(Term::prev_iota(Term::app(
            tlg(),
            Term::unbox(Term::var("s")),
        )));
        let t = Term::lam("s", Some(Type::boxed(sg())), body);
        assert_eq!(
            infer_closed(&t).unwrap(),
            Type::arrow(Type::stream(), Type::stream())
        );
    }

    #[test]
    fn sums() {
        let sum = Type::sum(Type::Nat, Type::Unit);
        let t = Term::case(
            Term::inj(1, Some(sum), Term::zero()),
            "a",
            Term::var("a"),
            "b",
            Term::zero(),
        );
        assert_eq!(infer_closed(&t).unwrap(), Type::Nat);
        let bp = Term::boxplus(
            vec![],
            Term::inj(2, Some(Type::sum(Type::Nat, Type::Unit)), Term::unit()),
        );
        assert_eq!(
            infer_closed(&bp).unwrap(),
            Type::sum(Type::boxed(Type::Nat), Type::boxed(Type::Unit))
        );
    }

    #[test]
    fn weakening_does_not_change_types() {
        let mut gamma = TypingCtx::new();
        gamma.insert("x".into(), Type::Nat);
        let t = Term::succ(Term::var("x"));
        let a = infer(&gamma, &t).unwrap();
        gamma.insert("y".into(), Type::later(Type::Nat));
        assert_eq!(infer(&gamma, &t).unwrap(), a);
    }
}
