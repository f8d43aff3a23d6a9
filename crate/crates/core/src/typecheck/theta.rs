//! The guarded fixed-point combinator, encoded with a recursive type.
//!
//! With `W = mu w. |>w -> A`:
//!
//! ```text
//! h     = \y:|>W. f ((next (\w:W. unfold w) <*> y) <*> next y)
//! Theta = \f:|>A -> A. h (next (fold h))
//! ```

use crate::syntax::{Name, Term, Type};

/// `mu w. |>w -> A`, with the binder renamed away from the free variables
/// of `A`.
pub fn w_type(a: &Type) -> Type {
    let fv = a.free_vars();
    let mut name = String::from("w");
    while fv.contains(&Name::from(name.as_str())) {
        name.push('\'');
    }
    Type::mu(&name, Type::arrow(Type::later(Type::var(&name)), a.clone()))
}

/// `Theta_A : (|>A -> A) -> A`. Without a type the result is unannotated and
/// only suitable for evaluation.
pub fn theta(a: Option<&Type>) -> Term {
    let w = a.map(w_type);
    let later_w = w.clone().map(Type::later);
    let unfold_w = Term::lam("w", w.clone(), Term::unfold(Term::var("w")));
    let y = Term::var("y");
    let h = Term::lam(
        "y",
        later_w,
        Term::app(
            Term::var("f"),
            Term::later_app(
                Term::later_app(Term::next(unfold_w), y.clone()),
                Term::next(y),
            ),
        ),
    );
    let f_ty = a.map(|a| Type::arrow(Type::later(a.clone()), a.clone()));
    Term::lam(
        "f",
        f_ty,
        Term::app(h.clone(), Term::next(Term::fold(w, h))),
    )
}

/// `fix x. body` at type `A`, as `Theta_A (\x:|>A. body)`.
pub fn elaborate_fix(x: &str, a: Option<&Type>, body: Term) -> Term {
    let param_ty = a.map(|a| Type::later(a.clone()));
    Term::app(theta(a), Term::lam(x, param_ty, body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecheck::infer_closed;

    #[test]
    fn theta_has_fixed_point_type() {
        for a in [
            Type::Nat,
            Type::guarded_stream(),
            Type::arrow(Type::Nat, Type::Nat),
        ] {
            let expected = Type::arrow(Type::arrow(Type::later(a.clone()), a.clone()), a.clone());
            assert_eq!(infer_closed(&theta(Some(&a))).unwrap(), expected);
        }
    }

    #[test]
    fn w_binder_avoids_capture() {
        let a = Type::var("w");
        let w = w_type(&a);
        assert!(w.free_vars().contains(&Name::from("w")));
    }
}
