//! Types of the guarded λ-calculus and the syntactic predicates over them.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use super::Name;

/// A type expression. Children are reference counted since types are cloned
/// freely by the checker and the denotation engine.
///
/// Equality is α-equivalence of `mu` binders, so `==` never distinguishes
/// types that differ only in the choice of bound names.
#[derive(Clone, Debug)]
pub enum Type {
    Var(Name),
    Unit,
    Nat,
    Empty,
    Prod(Rc<Type>, Rc<Type>),
    Sum(Rc<Type>, Rc<Type>),
    Arrow(Rc<Type>, Rc<Type>),
    Mu(Name, Rc<Type>),
    Later(Rc<Type>),
    Box(Rc<Type>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WfError {
    #[error("type variable `{0}` is not in scope")]
    UnboundVar(Name),
    #[error("`{0}` is not guarded in the body of its mu binder")]
    Unguarded(Name),
    #[error("the body of a box type must be closed, but mentions `{0}`")]
    OpenBox(Name),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type `{0}` is open")]
pub struct OpenType(pub String);

impl Type {
    pub fn var(name: &str) -> Type {
        Type::Var(name.into())
    }

    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Rc::new(a), Rc::new(b))
    }

    pub fn sum(a: Type, b: Type) -> Type {
        Type::Sum(Rc::new(a), Rc::new(b))
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Rc::new(a), Rc::new(b))
    }

    /// Right-nested arrow `args[0] -> ... -> result`.
    pub fn arrows(args: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, a| Type::arrow(a, acc))
    }

    pub fn mu(binder: &str, body: Type) -> Type {
        Type::Mu(binder.into(), Rc::new(body))
    }

    pub fn later(a: Type) -> Type {
        Type::Later(Rc::new(a))
    }

    pub fn boxed(a: Type) -> Type {
        Type::Box(Rc::new(a))
    }

    /// `mu a. Nat * |>a`, the guarded streams of naturals.
    pub fn guarded_stream() -> Type {
        Type::mu("a", Type::prod(Type::Nat, Type::later(Type::var("a"))))
    }

    /// `#(mu a. Nat * |>a)`, the coinductive streams of naturals.
    pub fn stream() -> Type {
        Type::boxed(Type::guarded_stream())
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Type::Var(a) => {
                if !bound.contains(a) {
                    out.insert(a.clone());
                }
            }
            Type::Unit | Type::Nat | Type::Empty => {}
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Type::Mu(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Type::Later(a) | Type::Box(a) => a.collect_free(bound, out),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn occurs_free(&self, alpha: &str) -> bool {
        match self {
            Type::Var(a) => &**a == alpha,
            Type::Unit | Type::Nat | Type::Empty => false,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
                a.occurs_free(alpha) || b.occurs_free(alpha)
            }
            Type::Mu(x, body) => &**x != alpha && body.occurs_free(alpha),
            Type::Later(a) | Type::Box(a) => a.occurs_free(alpha),
        }
    }

    /// Capture-avoiding substitution `self[replacement/alpha]`.
    pub fn subst(&self, alpha: &str, replacement: &Type) -> Type {
        let fv = replacement.free_vars();
        self.subst_with(alpha, replacement, &fv)
    }

    fn subst_with(&self, alpha: &str, rep: &Type, rep_fv: &BTreeSet<Name>) -> Type {
        match self {
            Type::Var(a) if &**a == alpha => rep.clone(),
            Type::Var(_) | Type::Unit | Type::Nat | Type::Empty => self.clone(),
            Type::Prod(a, b) => Type::prod(
                a.subst_with(alpha, rep, rep_fv),
                b.subst_with(alpha, rep, rep_fv),
            ),
            Type::Sum(a, b) => Type::sum(
                a.subst_with(alpha, rep, rep_fv),
                b.subst_with(alpha, rep, rep_fv),
            ),
            Type::Arrow(a, b) => Type::arrow(
                a.subst_with(alpha, rep, rep_fv),
                b.subst_with(alpha, rep, rep_fv),
            ),
            Type::Later(a) => Type::later(a.subst_with(alpha, rep, rep_fv)),
            Type::Box(a) => Type::boxed(a.subst_with(alpha, rep, rep_fv)),
            Type::Mu(x, body) => {
                if &**x == alpha || !body.occurs_free(alpha) {
                    return self.clone();
                }
                if rep_fv.contains(x) {
                    let mut avoid = rep_fv.clone();
                    avoid.extend(body.free_vars());
                    let fresh = fresh_type_var(x, &avoid);
                    let renamed = body.subst(x, &Type::Var(fresh.clone()));
                    Type::Mu(fresh, Rc::new(renamed.subst_with(alpha, rep, rep_fv)))
                } else {
                    Type::Mu(x.clone(), Rc::new(body.subst_with(alpha, rep, rep_fv)))
                }
            }
        }
    }

    /// For `mu a. A`, the unfolding `A[mu a. A / a]`.
    pub fn unfold_mu(&self) -> Option<Type> {
        match self {
            Type::Mu(x, body) => Some(body.subst(x, self)),
            _ => None,
        }
    }

    /// Unguarded size: syntax-tree node count where every leaf counts one and
    /// a `|>` subtree counts zero.
    pub fn usize(&self) -> usize {
        match self {
            Type::Var(_) | Type::Unit | Type::Nat | Type::Empty => 1,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => 1 + a.usize() + b.usize(),
            Type::Mu(_, a) | Type::Box(a) => 1 + a.usize(),
            Type::Later(_) => 0,
        }
    }

    /// Box depth: binary formers take the minimum of their operands, `mu` and
    /// `|>` are transparent, `#` adds one.
    pub fn box_depth(&self) -> usize {
        match self {
            Type::Var(_) | Type::Unit | Type::Nat | Type::Empty => 0,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
                a.box_depth().min(b.box_depth())
            }
            Type::Mu(_, a) | Type::Later(a) => a.box_depth(),
            Type::Box(a) => a.box_depth() + 1,
        }
    }

    /// Plain syntax-tree size, used by generators.
    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) | Type::Unit | Type::Nat | Type::Empty => 1,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Mu(_, a) | Type::Box(a) | Type::Later(a) => 1 + a.size(),
        }
    }

    pub fn contains_arrow(&self) -> bool {
        match self {
            Type::Arrow(..) => true,
            Type::Var(_) | Type::Unit | Type::Nat | Type::Empty => false,
            Type::Prod(a, b) | Type::Sum(a, b) => a.contains_arrow() || b.contains_arrow(),
            Type::Mu(_, a) | Type::Box(a) | Type::Later(a) => a.contains_arrow(),
        }
    }

    pub fn contains_box(&self) -> bool {
        match self {
            Type::Box(_) => true,
            Type::Var(_) | Type::Unit | Type::Nat | Type::Empty => false,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
                a.contains_box() || b.contains_box()
            }
            Type::Mu(_, a) | Type::Later(a) => a.contains_box(),
        }
    }
}

/// True iff every free occurrence of `alpha` in `ty` sits beneath a `|>`.
pub fn guarded_in(alpha: &str, ty: &Type) -> bool {
    fn go(alpha: &str, ty: &Type, under_later: bool) -> bool {
        match ty {
            Type::Var(a) => &**a != alpha || under_later,
            Type::Unit | Type::Nat | Type::Empty => true,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
                go(alpha, a, under_later) && go(alpha, b, under_later)
            }
            Type::Mu(x, body) => &**x == alpha || go(alpha, body, under_later),
            Type::Later(a) => go(alpha, a, true),
            Type::Box(a) => go(alpha, a, under_later),
        }
    }
    go(alpha, ty, false)
}

/// A closed type is constant when every `|>` sits beneath a `#`.
pub fn is_constant(ty: &Type) -> Result<bool, OpenType> {
    if !ty.is_closed() {
        return Err(OpenType(ty.to_string()));
    }
    Ok(constant_shape(ty))
}

fn constant_shape(ty: &Type) -> bool {
    match ty {
        Type::Later(_) => false,
        Type::Box(_) => true,
        Type::Var(_) | Type::Unit | Type::Nat | Type::Empty => true,
        Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
            constant_shape(a) && constant_shape(b)
        }
        Type::Mu(_, a) => constant_shape(a),
    }
}

/// Type formation: checks scoping, guardedness of every `mu` and closedness of
/// every `#` body, reporting the first violated side condition.
pub fn check_wf(nabla: &BTreeSet<Name>, ty: &Type) -> Result<(), WfError> {
    match ty {
        Type::Var(a) => {
            if nabla.contains(a) {
                Ok(())
            } else {
                Err(WfError::UnboundVar(a.clone()))
            }
        }
        Type::Unit | Type::Nat | Type::Empty => Ok(()),
        Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
            check_wf(nabla, a)?;
            check_wf(nabla, b)
        }
        Type::Mu(x, body) => {
            let mut inner = nabla.clone();
            inner.insert(x.clone());
            check_wf(&inner, body)?;
            if guarded_in(x, body) {
                Ok(())
            } else {
                Err(WfError::Unguarded(x.clone()))
            }
        }
        Type::Later(a) => check_wf(nabla, a),
        Type::Box(a) => {
            if let Some(v) = a.free_vars().into_iter().next() {
                return Err(WfError::OpenBox(v));
            }
            check_wf(&BTreeSet::new(), a)
        }
    }
}

pub fn wf_type(nabla: &BTreeSet<Name>, ty: &Type) -> bool {
    check_wf(nabla, ty).is_ok()
}

/// Conservative syntactic approximation of "total and inhabited". A `true`
/// answer is sound; `false` means unknown.
pub fn is_total_inhabited_syntactic(ty: &Type) -> bool {
    fn ti(ty: &Type, assumed: &mut Vec<Name>) -> bool {
        match ty {
            Type::Unit | Type::Nat => true,
            Type::Empty => false,
            Type::Var(a) => assumed.contains(a),
            Type::Prod(a, b) | Type::Sum(a, b) => ti(a, assumed) && ti(b, assumed),
            Type::Arrow(a, b) => {
                // exponents must not mention the recursion variables
                assumed.iter().all(|v| !a.occurs_free(v)) && ti(a, assumed) && ti(b, assumed)
            }
            Type::Later(a) => ti(a, assumed),
            // the global sections of a total inhabited object are non-empty
            Type::Box(a) => ti(a, &mut Vec::new()),
            Type::Mu(x, body) => {
                if !guarded_in(x, body) {
                    return false;
                }
                assumed.push(x.clone());
                let ok = ti(body, assumed);
                assumed.pop();
                ok
            }
        }
    }
    ty.is_closed() && ti(ty, &mut Vec::new())
}

fn fresh_type_var(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = format!("{base}'");
    while avoid.iter().any(|n| **n == *candidate) {
        candidate.push('\'');
    }
    candidate.into()
}

impl PartialEq for Type {
    fn eq(&self, other: &Self) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }
}

impl Eq for Type {}

fn alpha_eq(a: &Type, b: &Type, env: &mut Vec<(Name, Name)>) -> bool {
    match (a, b) {
        (Type::Var(x), Type::Var(y)) => {
            for (l, r) in env.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (Type::Unit, Type::Unit) | (Type::Nat, Type::Nat) | (Type::Empty, Type::Empty) => true,
        (Type::Prod(a1, b1), Type::Prod(a2, b2))
        | (Type::Sum(a1, b1), Type::Sum(a2, b2))
        | (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
            alpha_eq(a1, a2, env) && alpha_eq(b1, b2, env)
        }
        (Type::Later(a1), Type::Later(a2)) => alpha_eq(a1, a2, env),
        (Type::Box(a1), Type::Box(a2)) => alpha_eq(a1, a2, &mut Vec::new()),
        (Type::Mu(x, a1), Type::Mu(y, a2)) => {
            env.push((x.clone(), y.clone()));
            let r = alpha_eq(a1, a2, env);
            env.pop();
            r
        }
        _ => false,
    }
}

// Printing follows the surface grammar: unary formers bind tightest, then
// `*`, `+`, `->` (right associative); `mu` extends as far right as possible.
impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(f, self, 0, &[])
    }
}

/// Displays a type, printing any subterm equal to an alias by its name.
pub struct WithAliases<'a>(pub &'a Type, pub &'a [(Name, Type)]);

impl fmt::Display for WithAliases<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(f, self.0, 0, self.1)
    }
}

const P_ARROW: u8 = 0;
const P_SUM: u8 = 1;
const P_PROD: u8 = 2;
const P_UNARY: u8 = 3;

fn write_type(
    f: &mut fmt::Formatter<'_>,
    ty: &Type,
    prec: u8,
    aliases: &[(Name, Type)],
) -> fmt::Result {
    if let Some((name, _)) = aliases.iter().rev().find(|(_, t)| t == ty) {
        return write!(f, "{name}");
    }
    let own = match ty {
        Type::Arrow(..) | Type::Mu(..) => P_ARROW,
        Type::Sum(..) => P_SUM,
        Type::Prod(..) => P_PROD,
        _ => P_UNARY,
    };
    let paren = own < prec;
    if paren {
        f.write_str("(")?;
    }
    match ty {
        Type::Var(a) => write!(f, "{a}")?,
        Type::Unit => f.write_str("1")?,
        Type::Nat => f.write_str("Nat")?,
        Type::Empty => f.write_str("0")?,
        Type::Prod(a, b) => {
            write_type(f, a, P_PROD, aliases)?;
            f.write_str(" * ")?;
            write_type(f, b, P_PROD + 1, aliases)?;
        }
        Type::Sum(a, b) => {
            write_type(f, a, P_SUM, aliases)?;
            f.write_str(" + ")?;
            write_type(f, b, P_SUM + 1, aliases)?;
        }
        Type::Arrow(a, b) => {
            write_type(f, a, P_SUM, aliases)?;
            f.write_str(" -> ")?;
            write_type(f, b, P_ARROW, aliases)?;
        }
        Type::Mu(x, body) => {
            write!(f, "mu {x}. ")?;
            write_type(f, body, P_ARROW, aliases)?;
        }
        Type::Later(a) => {
            f.write_str("|>")?;
            write_type(f, a, P_UNARY, aliases)?;
        }
        Type::Box(a) => {
            f.write_str("#")?;
            write_type(f, a, P_UNARY, aliases)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Type {
        Type::var("a")
    }

    #[test]
    fn guardedness_examples() {
        assert!(guarded_in("a", &Type::prod(Type::Nat, Type::later(a()))));
        assert!(!guarded_in("a", &a()));
        assert!(guarded_in("a", &Type::later(Type::arrow(a(), a()))));
        assert!(!guarded_in("a", &Type::prod(a(), Type::later(a()))));
        // shadowed binder hides the occurrence
        assert!(guarded_in("a", &Type::mu("a", Type::later(a()))));
    }

    #[test]
    fn constancy_examples() {
        assert_eq!(is_constant(&Type::arrow(Type::Nat, Type::Nat)), Ok(true));
        assert_eq!(is_constant(&Type::later(Type::Nat)), Ok(false));
        assert_eq!(is_constant(&Type::stream()), Ok(true));
        assert_eq!(is_constant(&Type::guarded_stream()), Ok(false));
        assert!(is_constant(&a()).is_err());
    }

    #[test]
    fn formation_examples() {
        let empty = BTreeSet::new();
        assert!(wf_type(&empty, &Type::guarded_stream()));
        let nabla: BTreeSet<Name> = [Name::from("a")].into_iter().collect();
        assert!(!wf_type(&nabla, &Type::boxed(a())));
        assert_eq!(
            check_wf(&nabla, &Type::boxed(a())),
            Err(WfError::OpenBox("a".into()))
        );
        assert_eq!(
            check_wf(&empty, &Type::mu("a", a())),
            Err(WfError::Unguarded("a".into()))
        );
        assert_eq!(check_wf(&empty, &a()), Err(WfError::UnboundVar("a".into())));
    }

    #[test]
    fn size_metrics() {
        assert_eq!(Type::later(Type::prod(Type::Nat, Type::Nat)).usize(), 0);
        assert_eq!(Type::Nat.usize(), 1);
        assert_eq!(Type::prod(Type::Nat, Type::later(Type::Nat)).usize(), 2);
        assert_eq!(Type::boxed(Type::Nat).box_depth(), 1);
        assert_eq!(Type::prod(Type::Nat, Type::boxed(Type::Nat)).box_depth(), 0);
        assert_eq!(Type::guarded_stream().box_depth(), 0);
    }

    #[test]
    fn total_inhabited() {
        assert!(is_total_inhabited_syntactic(&Type::guarded_stream()));
        assert!(!is_total_inhabited_syntactic(&Type::Empty));
        assert!(is_total_inhabited_syntactic(&Type::Nat));
        assert!(is_total_inhabited_syntactic(&Type::stream()));
        assert!(!is_total_inhabited_syntactic(&Type::prod(
            Type::Nat,
            Type::Empty
        )));
        assert!(!is_total_inhabited_syntactic(&Type::mu(
            "a",
            Type::arrow(Type::later(a()), Type::Nat)
        )));
    }

    #[test]
    fn alpha_equivalence_and_unfolding() {
        let s1 = Type::guarded_stream();
        let s2 = Type::mu("b", Type::prod(Type::Nat, Type::later(Type::var("b"))));
        assert_eq!(s1, s2);
        assert_ne!(
            s1,
            Type::mu("b", Type::prod(Type::Nat, Type::later(Type::var("a"))))
        );
        let unfolded = s1.unfold_mu().unwrap();
        assert_eq!(unfolded, Type::prod(Type::Nat, Type::later(s1.clone())));
    }

    #[test]
    fn substitution_avoids_capture() {
        // (mu b. a * |>b)[b/a] must rename the binder
        let ty = Type::mu("b", Type::prod(a(), Type::later(Type::var("b"))));
        let out = ty.subst("a", &Type::var("b"));
        match &out {
            Type::Mu(x, _) => assert_ne!(&**x, "b"),
            other => panic!("unexpected {other}"),
        }
        assert_eq!(
            out.free_vars().into_iter().collect::<Vec<_>>(),
            vec![Name::from("b")]
        );
    }

    #[test]
    fn display_precedence() {
        let t = Type::arrow(
            Type::Nat,
            Type::arrow(Type::later(Type::guarded_stream()), Type::guarded_stream()),
        );
        assert_eq!(
            t.to_string(),
            "Nat -> |>(mu a. Nat * |>a) -> mu a. Nat * |>a"
        );
        let p = Type::prod(Type::sum(Type::Nat, Type::Unit), Type::Nat);
        assert_eq!(p.to_string(), "(Nat + 1) * Nat");
    }
}
