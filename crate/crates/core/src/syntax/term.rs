//! Locally nameless terms.
//!
//! Bound variables are de Bruijn indices; free variables are names. Binder
//! names survive only as printing hints and never take part in equality, so
//! `==` on terms is α-equivalence.
//!
//! A substitution list `[x1 <- t1, ..., xn <- tn]` binds n variables in the
//! body: entry k is `Bound(n - 1 - k)` there, as if the entries were pushed
//! in order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use super::{Name, Type};

/// Name hint carried by a binding site.
#[derive(Clone, Debug)]
pub struct Binder(pub Name);

impl Binder {
    pub fn name(&self) -> &Name {
        &self.0
    }
}

impl PartialEq for Binder {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Binder {}

impl From<&str> for Binder {
    fn from(s: &str) -> Self {
        Binder(s.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimOp {
    Add,
    Mul,
}

impl PrimOp {
    pub fn apply(self, a: u64, b: u64) -> u64 {
        match self {
            PrimOp::Add => a.saturating_add(b),
            PrimOp::Mul => a.saturating_mul(b),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PrimOp::Add => "+",
            PrimOp::Mul => "*",
        }
    }
}

/// Explicit substitution list of `prev`, `box` and `boxplus`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Subst {
    pub entries: Vec<(Binder, Term)>,
}

impl Subst {
    pub fn empty() -> Subst {
        Subst::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn terms(&self) -> Vec<Term> {
        self.entries.iter().map(|(_, t)| t.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind {
    Bound(u32),
    Free(Name),
    Unit,
    Zero,
    Succ(Term),
    Pair(Term, Term),
    Proj(u8, Term),
    /// The annotation is the domain type.
    Lam(Binder, Option<Type>, Term),
    App(Term, Term),
    /// The annotation is the recursive type being introduced.
    Fold(Option<Type>, Term),
    Unfold(Term),
    Next(Term),
    Prev(Subst, Term),
    BoxI(Subst, Term),
    Unbox(Term),
    /// `t1 <*> t2`
    LaterApp(Term, Term),
    /// The annotation is the whole sum type.
    Inj(u8, Option<Type>, Term),
    Case(Term, Binder, Term, Binder, Term),
    /// The annotation is the result type.
    Abort(Option<Type>, Term),
    BoxSum(Subst, Term),
    Prim(PrimOp, Term, Term),
}

struct Node {
    kind: TermKind,
    loose: u32,
    has_free: bool,
    size: u32,
}

#[derive(Clone)]
pub struct Term(Rc<Node>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
            || (self.0.size == other.0.size && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.kind.fmt(f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::pretty_term(self))
    }
}

impl Term {
    pub fn mk(kind: TermKind) -> Term {
        let mut loose = 0u32;
        let mut has_free = false;
        let mut size = 1u32;
        {
            let mut visit = |child: &Term, binds: u32| {
                loose = loose.max(child.0.loose.saturating_sub(binds));
                has_free |= child.0.has_free;
                size = size.saturating_add(child.0.size);
            };
            for_each_child(&kind, &mut visit);
        }
        match &kind {
            TermKind::Bound(k) => loose = k + 1,
            TermKind::Free(_) => has_free = true,
            _ => {}
        }
        Term(Rc::new(Node {
            kind,
            loose,
            has_free,
            size,
        }))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    /// True when no de Bruijn index escapes the term.
    pub fn is_locally_closed(&self) -> bool {
        self.0.loose == 0
    }

    pub fn has_free(&self) -> bool {
        self.0.has_free
    }

    pub fn is_closed(&self) -> bool {
        self.0.loose == 0 && !self.0.has_free
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut out);
        out
    }

    /// `succ^n zero` as a natural, if the term has that shape.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut cur = self;
        loop {
            match cur.kind() {
                TermKind::Zero => return Some(n),
                TermKind::Succ(t) => {
                    n += 1;
                    cur = t;
                }
                _ => return None,
            }
        }
    }

    /// Replace the outermost `args.len()` bound variables by `args`, given in
    /// substitution-list order.
    pub fn instantiate(&self, args: &[Term]) -> Term {
        if args.is_empty() && self.0.loose == 0 {
            return self.clone();
        }
        instantiate_at(self, 0, args)
    }

    /// Abstract the named free variables, making them the outermost bound
    /// variables in substitution-list order. Inverse of `instantiate`.
    pub fn close(&self, names: &[Name]) -> Term {
        if names.is_empty() {
            return self.clone();
        }
        close_at(self, 0, names)
    }

    /// Simultaneous substitution for free names. Capture cannot occur since
    /// bound variables are nameless.
    pub fn subst_free(&self, map: &HashMap<Name, Term>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        subst_free_at(self, 0, map)
    }

    pub fn subst1(&self, name: &str, replacement: &Term) -> Term {
        let mut map = HashMap::new();
        map.insert(Name::from(name), replacement.clone());
        self.subst_free(&map)
    }

    /// Rebuild the node with every child passed through `f`, which receives
    /// the number of binders crossed to reach that child.
    pub fn map_children(&self, mut f: impl FnMut(&Term, u32) -> Term) -> Term {
        use TermKind::*;
        let k = match self.kind() {
            Bound(_) | Free(_) | Unit | Zero => return self.clone(),
            Succ(t) => Succ(f(t, 0)),
            Pair(a, b) => Pair(f(a, 0), f(b, 0)),
            Proj(d, t) => Proj(*d, f(t, 0)),
            Lam(x, ty, b) => Lam(x.clone(), ty.clone(), f(b, 1)),
            App(a, b) => App(f(a, 0), f(b, 0)),
            Fold(ty, t) => Fold(ty.clone(), f(t, 0)),
            Unfold(t) => Unfold(f(t, 0)),
            Next(t) => Next(f(t, 0)),
            Prev(s, b) => {
                let (s, n) = map_subst(s, &mut f);
                Prev(s, f(b, n))
            }
            BoxI(s, b) => {
                let (s, n) = map_subst(s, &mut f);
                BoxI(s, f(b, n))
            }
            BoxSum(s, b) => {
                let (s, n) = map_subst(s, &mut f);
                BoxSum(s, f(b, n))
            }
            Unbox(t) => Unbox(f(t, 0)),
            LaterApp(a, b) => LaterApp(f(a, 0), f(b, 0)),
            Inj(d, ty, t) => Inj(*d, ty.clone(), f(t, 0)),
            Case(t, x1, b1, x2, b2) => Case(f(t, 0), x1.clone(), f(b1, 1), x2.clone(), f(b2, 1)),
            Abort(ty, t) => Abort(ty.clone(), f(t, 0)),
            Prim(op, a, b) => Prim(*op, f(a, 0), f(b, 0)),
        };
        Term::mk(k)
    }

    /// Rewrite every type annotation.
    pub fn map_annotations(&self, f: &mut dyn FnMut(Option<&Type>) -> Option<Type>) -> Term {
        let rebuilt = self.map_children(|c, _| c.map_annotations(f));
        let k = match rebuilt.kind() {
            TermKind::Lam(x, ty, b) => TermKind::Lam(x.clone(), f(ty.as_ref()), b.clone()),
            TermKind::Fold(ty, t) => TermKind::Fold(f(ty.as_ref()), t.clone()),
            TermKind::Inj(d, ty, t) => TermKind::Inj(*d, f(ty.as_ref()), t.clone()),
            TermKind::Abort(ty, t) => TermKind::Abort(f(ty.as_ref()), t.clone()),
            _ => return rebuilt,
        };
        Term::mk(k)
    }

    /// Drop every type annotation.
    pub fn erase(&self) -> Term {
        self.map_annotations(&mut |_| None)
    }
}

fn map_subst(s: &Subst, f: &mut impl FnMut(&Term, u32) -> Term) -> (Subst, u32) {
    let entries = s
        .entries
        .iter()
        .map(|(x, t)| (x.clone(), f(t, 0)))
        .collect::<Vec<_>>();
    let n = entries.len() as u32;
    (Subst { entries }, n)
}

fn for_each_child(kind: &TermKind, visit: &mut impl FnMut(&Term, u32)) {
    use TermKind::*;
    match kind {
        Bound(_) | Free(_) | Unit | Zero => {}
        Succ(t)
        | Proj(_, t)
        | Fold(_, t)
        | Unfold(t)
        | Next(t)
        | Unbox(t)
        | Inj(_, _, t)
        | Abort(_, t) => visit(t, 0),
        Pair(a, b) | App(a, b) | LaterApp(a, b) | Prim(_, a, b) => {
            visit(a, 0);
            visit(b, 0);
        }
        Lam(_, _, b) => visit(b, 1),
        Prev(s, b) | BoxI(s, b) | BoxSum(s, b) => {
            for (_, t) in &s.entries {
                visit(t, 0);
            }
            visit(b, s.entries.len() as u32);
        }
        Case(t, _, b1, _, b2) => {
            visit(t, 0);
            visit(b1, 1);
            visit(b2, 1);
        }
    }
}

fn collect_free(t: &Term, out: &mut BTreeSet<Name>) {
    if !t.0.has_free {
        return;
    }
    if let TermKind::Free(x) = t.kind() {
        out.insert(x.clone());
        return;
    }
    for_each_child(t.kind(), &mut |c, _| collect_free(c, out));
}

fn shift(t: &Term, by: u32, cutoff: u32) -> Term {
    if by == 0 || t.0.loose <= cutoff {
        return t.clone();
    }
    match t.kind() {
        TermKind::Bound(k) if *k >= cutoff => Term::mk(TermKind::Bound(k + by)),
        _ => t.map_children(|c, b| shift(c, by, cutoff + b)),
    }
}

fn instantiate_at(t: &Term, depth: u32, args: &[Term]) -> Term {
    if t.0.loose <= depth {
        return t.clone();
    }
    let n = args.len() as u32;
    match t.kind() {
        TermKind::Bound(k) => {
            let k = *k;
            if k < depth {
                t.clone()
            } else if k - depth < n {
                shift(&args[(n - 1 - (k - depth)) as usize], depth, 0)
            } else {
                Term::mk(TermKind::Bound(k - n))
            }
        }
        _ => t.map_children(|c, b| instantiate_at(c, depth + b, args)),
    }
}

fn close_at(t: &Term, depth: u32, names: &[Name]) -> Term {
    if !t.0.has_free && t.0.loose <= depth {
        return t.clone();
    }
    let n = names.len() as u32;
    match t.kind() {
        TermKind::Free(x) => match names.iter().rposition(|y| y == x) {
            Some(k) => Term::mk(TermKind::Bound(depth + n - 1 - k as u32)),
            None => t.clone(),
        },
        TermKind::Bound(k) if *k >= depth => Term::mk(TermKind::Bound(k + n)),
        _ => t.map_children(|c, b| close_at(c, depth + b, names)),
    }
}

fn subst_free_at(t: &Term, depth: u32, map: &HashMap<Name, Term>) -> Term {
    if !t.0.has_free {
        return t.clone();
    }
    match t.kind() {
        TermKind::Free(x) => match map.get(x) {
            Some(rep) => shift(rep, depth, 0),
            None => t.clone(),
        },
        _ => t.map_children(|c, b| subst_free_at(c, depth + b, map)),
    }
}

/// Named constructors. Binding forms close over the given names.
impl Term {
    pub fn var(x: &str) -> Term {
        Term::mk(TermKind::Free(x.into()))
    }

    pub fn bound(k: u32) -> Term {
        Term::mk(TermKind::Bound(k))
    }

    pub fn unit() -> Term {
        Term::mk(TermKind::Unit)
    }

    pub fn zero() -> Term {
        Term::mk(TermKind::Zero)
    }

    pub fn succ(t: Term) -> Term {
        Term::mk(TermKind::Succ(t))
    }

    pub fn numeral(n: u64) -> Term {
        let mut t = Term::zero();
        for _ in 0..n {
            t = Term::succ(t);
        }
        t
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::mk(TermKind::Pair(a, b))
    }

    pub fn proj(d: u8, t: Term) -> Term {
        Term::mk(TermKind::Proj(d, t))
    }

    pub fn fst(t: Term) -> Term {
        Term::proj(1, t)
    }

    pub fn snd(t: Term) -> Term {
        Term::proj(2, t)
    }

    pub fn lam(x: &str, ty: Option<Type>, body: Term) -> Term {
        let body = body.close(&[x.into()]);
        Term::mk(TermKind::Lam(x.into(), ty, body))
    }

    /// Curried lambda over several annotated binders.
    pub fn lams(params: &[(&str, Option<Type>)], body: Term) -> Term {
        params
            .iter()
            .rev()
            .fold(body, |acc, (x, ty)| Term::lam(x, ty.clone(), acc))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::mk(TermKind::App(f, a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn fold(ty: Option<Type>, t: Term) -> Term {
        Term::mk(TermKind::Fold(ty, t))
    }

    pub fn unfold(t: Term) -> Term {
        Term::mk(TermKind::Unfold(t))
    }

    pub fn next(t: Term) -> Term {
        Term::mk(TermKind::Next(t))
    }

    fn with_subst(entries: Vec<(&str, Term)>, body: Term, k: fn(Subst, Term) -> TermKind) -> Term {
        let names: Vec<Name> = entries.iter().map(|(x, _)| Name::from(*x)).collect();
        let body = body.close(&names);
        let subst = Subst {
            entries: entries
                .into_iter()
                .map(|(x, t)| (Binder::from(x), t))
                .collect(),
        };
        Term::mk(k(subst, body))
    }

    pub fn prev(entries: Vec<(&str, Term)>, body: Term) -> Term {
        Term::with_subst(entries, body, TermKind::Prev)
    }

    pub fn boxi(entries: Vec<(&str, Term)>, body: Term) -> Term {
        Term::with_subst(entries, body, TermKind::BoxI)
    }

    pub fn boxplus(entries: Vec<(&str, Term)>, body: Term) -> Term {
        Term::with_subst(entries, body, TermKind::BoxSum)
    }

    /// `prev iota. body`: substitutes every free name of the body for itself.
    pub fn prev_iota(body: Term) -> Term {
        let names = body.free_names();
        let entries = names.iter().map(|x| (&**x, Term::var(x))).collect();
        Term::prev(entries, body)
    }

    /// `box iota. body`
    pub fn box_iota(body: Term) -> Term {
        let names = body.free_names();
        let entries = names.iter().map(|x| (&**x, Term::var(x))).collect();
        Term::boxi(entries, body)
    }

    pub fn unbox(t: Term) -> Term {
        Term::mk(TermKind::Unbox(t))
    }

    pub fn later_app(a: Term, b: Term) -> Term {
        Term::mk(TermKind::LaterApp(a, b))
    }

    pub fn inj(d: u8, ty: Option<Type>, t: Term) -> Term {
        Term::mk(TermKind::Inj(d, ty, t))
    }

    pub fn case(t: Term, x1: &str, b1: Term, x2: &str, b2: Term) -> Term {
        Term::mk(TermKind::Case(
            t,
            x1.into(),
            b1.close(&[x1.into()]),
            x2.into(),
            b2.close(&[x2.into()]),
        ))
    }

    pub fn abort(ty: Option<Type>, t: Term) -> Term {
        Term::mk(TermKind::Abort(ty, t))
    }

    pub fn prim(op: PrimOp, a: Term, b: Term) -> Term {
        Term::mk(TermKind::Prim(op, a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_into_variable() {
        assert_eq!(Term::var("x").subst1("x", &Term::zero()), Term::zero());
    }

    #[test]
    fn substitution_hits_only_the_list() {
        let t = Term::prev(vec![("y", Term::var("x"))], Term::next(Term::var("y")));
        let expected = Term::prev(vec![("y", Term::zero())], Term::next(Term::var("y")));
        assert_eq!(t.subst1("x", &Term::zero()), expected);
    }

    #[test]
    fn substitution_avoids_capture() {
        // (\y. x)[y/x] keeps the new y free
        let t = Term::lam("y", None, Term::var("x"));
        let out = t.subst1("x", &Term::var("y"));
        assert_eq!(out.free_names().len(), 1);
        match out.kind() {
            TermKind::Lam(_, _, body) => assert_eq!(body, &Term::var("y")),
            other => panic!("unexpected {other:?}"),
        }
        // a different term from \y. y
        assert_ne!(out, Term::lam("y", None, Term::var("y")));
    }

    #[test]
    fn alpha_equivalence_ignores_binder_names() {
        let a = Term::lam("x", None, Term::var("x"));
        let b = Term::lam("z", None, Term::var("z"));
        assert_eq!(a, b);
    }

    #[test]
    fn instantiate_inverts_close() {
        let body = Term::pair(Term::var("a"), Term::app(Term::var("b"), Term::var("c")));
        let closed = body.close(&["a".into(), "b".into()]);
        assert!(!closed.is_locally_closed());
        let back = closed.instantiate(&[Term::var("a"), Term::var("b")]);
        assert_eq!(back, body);
    }

    #[test]
    fn subst_list_order() {
        // prev [a <- 0, b <- 1]. <a, b>
        let t = Term::prev(
            vec![("a", Term::numeral(0)), ("b", Term::numeral(1))],
            Term::pair(Term::var("a"), Term::var("b")),
        );
        let TermKind::Prev(s, body) = t.kind() else {
            panic!()
        };
        let opened = body.instantiate(&s.terms());
        assert_eq!(opened, Term::pair(Term::numeral(0), Term::numeral(1)));
    }

    #[test]
    fn instantiate_under_binders_shifts_correctly() {
        // \x. \y. x y opened one level: body is \y. B1 B0
        let t = Term::lams(
            &[("x", None), ("y", None)],
            Term::app(Term::var("x"), Term::var("y")),
        );
        let TermKind::Lam(_, _, body) = t.kind() else {
            panic!()
        };
        let out = body.instantiate(&[Term::unit()]);
        assert_eq!(
            out,
            Term::lam("y", None, Term::app(Term::unit(), Term::var("y")))
        );
    }

    #[test]
    fn numerals() {
        assert_eq!(Term::numeral(3).as_numeral(), Some(3));
        assert_eq!(Term::unit().as_numeral(), None);
        assert_eq!(Term::numeral(3).size(), 4);
    }
}
