//! Annotated core terms for the stream primitives used by the evaluator,
//! the semantics and the equation compiler.

use crate::syntax::{Term, Type};

fn sg() -> Type {
    Type::guarded_stream()
}

/// `cons : Nat -> |>StrG -> StrG`
pub fn cons() -> Term {
    Term::lams(
        &[("n", Some(Type::Nat)), ("s", Some(Type::later(sg())))],
        Term::fold(Some(sg()), Term::pair(Term::var("n"), Term::var("s"))),
    )
}

/// `hdg : StrG -> Nat`
pub fn hdg() -> Term {
    Term::lam("s", Some(sg()), Term::fst(Term::unfold(Term::var("s"))))
}

/// `tlg : StrG -> |>StrG`
pub fn tlg() -> Term {
    Term::lam("s", Some(sg()), Term::snd(Term::unfold(Term::var("s"))))
}

/// `hd : Str -> Nat`
pub fn hd() -> Term {
    Term::lam(
        "s",
        Some(Type::stream()),
        Term::app(hdg(), Term::unbox(Term::var("s"))),
    )
}

/// `tl : Str -> Str`
pub fn tl() -> Term {
    let body = Term::box_iota(Term::prev_iota(Term::app(
        tlg(),
        Term::unbox(Term::var("s")),
    )));
    Term::lam("s", Some(Type::stream()), body)
}

/// `lim : #(A -> B) -> #A -> #B`
pub fn lim(a: &Type, b: &Type) -> Term {
    let body = Term::box_iota(Term::app(
        Term::unbox(Term::var("f")),
        Term::unbox(Term::var("x")),
    ));
    Term::lams(
        &[
            ("f", Some(Type::boxed(Type::arrow(a.clone(), b.clone())))),
            ("x", Some(Type::boxed(a.clone()))),
        ],
        body,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecheck::infer_closed;

    #[test]
    fn types() {
        let s = Type::stream();
        assert_eq!(infer_closed(&hdg()).unwrap(), Type::arrow(sg(), Type::Nat));
        assert_eq!(
            infer_closed(&tlg()).unwrap(),
            Type::arrow(sg(), Type::later(sg()))
        );
        assert_eq!(
            infer_closed(&hd()).unwrap(),
            Type::arrow(s.clone(), Type::Nat)
        );
        assert_eq!(
            infer_closed(&tl()).unwrap(),
            Type::arrow(s.clone(), s.clone())
        );
        assert_eq!(
            infer_closed(&lim(&sg(), &sg())).unwrap(),
            Type::arrows([Type::boxed(Type::arrow(sg(), sg())), s.clone()], s)
        );
    }
}
