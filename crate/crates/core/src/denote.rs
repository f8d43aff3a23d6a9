//! Finite-index semantics in the topos of trees.
//!
//! An element of the denotation of a type at index `i` is a [`SemElem`].
//! Elements of types containing `|>` shrink as the index drops; elements of
//! constant types can be moved to any index with [`reindex`].

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::samples::Sampler;
use crate::syntax::{Term, TermKind, Type};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DenoteError {
    #[error("expected {expected}, found {found}")]
    Shape {
        expected: &'static str,
        found: String,
    },
    #[error("free variable `{0}` has no denotation")]
    Open(String),
    #[error("the empty type has no elements")]
    Empty,
    #[error("index {0} is out of range")]
    Index(usize),
}

pub type DenRes = Result<SemElem, DenoteError>;

type FunMap = dyn Fn(usize, &SemElem) -> DenRes;

/// A natural family of maps `f_j`, one for every `j <= index`.
#[derive(Clone)]
pub struct FunVal {
    pub index: usize,
    map: Rc<FunMap>,
}

impl FunVal {
    pub fn new(index: usize, map: impl Fn(usize, &SemElem) -> DenRes + 'static) -> FunVal {
        FunVal {
            index,
            map: Rc::new(map),
        }
    }

    /// `f_j(a)` for `a` at index `j`.
    pub fn apply(&self, j: usize, a: &SemElem) -> DenRes {
        if j == 0 || j > self.index {
            return Err(DenoteError::Index(j));
        }
        (self.map)(j, a)
    }
}

/// A global element: a compatible family of elements, one per index.
#[derive(Clone)]
pub struct Section {
    family: Rc<dyn Fn(usize) -> DenRes>,
    memo: Rc<RefCell<HashMap<usize, SemElem>>>,
}

impl Section {
    pub fn new(family: impl Fn(usize) -> DenRes + 'static) -> Section {
        Section {
            family: Rc::new(family),
            memo: Rc::default(),
        }
    }

    pub fn at(&self, j: usize) -> DenRes {
        if j == 0 {
            return Err(DenoteError::Index(0));
        }
        if let Some(a) = self.memo.borrow().get(&j) {
            return Ok(a.clone());
        }
        let a = (self.family)(j)?;
        self.memo.borrow_mut().insert(j, a.clone());
        Ok(a)
    }
}

#[derive(Clone)]
pub enum SemElem {
    Nat(u64),
    Unit,
    Pair(Rc<SemElem>, Rc<SemElem>),
    Inj(u8, Rc<SemElem>),
    Fold(Rc<SemElem>),
    /// The only element of `|>A` at index 1.
    LaterUnit,
    /// An element of `A` one index lower.
    Later(Rc<SemElem>),
    Fun(FunVal),
    Section(Section),
}

impl SemElem {
    pub fn pair(a: SemElem, b: SemElem) -> SemElem {
        SemElem::Pair(Rc::new(a), Rc::new(b))
    }

    pub fn inj(d: u8, a: SemElem) -> SemElem {
        SemElem::Inj(d, Rc::new(a))
    }

    pub fn fold(a: SemElem) -> SemElem {
        SemElem::Fold(Rc::new(a))
    }

    pub fn later(a: SemElem) -> SemElem {
        SemElem::Later(Rc::new(a))
    }

    fn kind_name(&self) -> &'static str {
        match self {
            SemElem::Nat(_) => "a natural",
            SemElem::Unit => "the unit",
            SemElem::Pair(..) => "a pair",
            SemElem::Inj(..) => "an injection",
            SemElem::Fold(_) => "a fold",
            SemElem::LaterUnit | SemElem::Later(_) => "a later element",
            SemElem::Fun(_) => "a function",
            SemElem::Section(_) => "a global section",
        }
    }

    /// The prefix carried by a guarded stream element, or `None` if the
    /// element is not stream-shaped.
    pub fn stream_prefix(&self) -> Option<Vec<u64>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            let SemElem::Fold(p) = cur else { return None };
            let SemElem::Pair(h, t) = &**p else {
                return None;
            };
            let SemElem::Nat(n) = &**h else { return None };
            out.push(*n);
            match &**t {
                SemElem::LaterUnit => return Some(out),
                SemElem::Later(next) => cur = next,
                _ => return None,
            }
        }
    }
}

fn shape(expected: &'static str, found: &SemElem) -> DenoteError {
    DenoteError::Shape {
        expected,
        found: found.kind_name().to_string(),
    }
}

impl fmt::Debug for SemElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, 0))
    }
}

/// Render an element. Guarded streams appear as tuples of their heads and
/// sections of a box are listed up to `depth`.
pub fn render(a: &SemElem, depth: usize) -> String {
    if let Some(p) = a.stream_prefix() {
        let items: Vec<String> = p.iter().map(u64::to_string).collect();
        return format!("({})", items.join(", "));
    }
    match a {
        SemElem::Nat(n) => n.to_string(),
        SemElem::Unit => "*".into(),
        SemElem::Pair(x, y) => format!("<{}, {}>", render(x, depth), render(y, depth)),
        SemElem::Inj(d, x) => format!("in{d} {}", render(x, depth)),
        SemElem::Fold(x) => format!("fold {}", render(x, depth)),
        SemElem::LaterUnit => "next *".into(),
        SemElem::Later(x) => format!("next {}", render(x, depth)),
        SemElem::Fun(fv) => format!("<function at {}>", fv.index),
        SemElem::Section(s) => {
            let items: Vec<String> = (1..=depth)
                .map(|j| match s.at(j) {
                    Ok(x) => format!("{j}: {}", render(&x, depth)),
                    Err(e) => format!("{j}: <{e}>"),
                })
                .collect();
            format!("box [{}]", items.join(", "))
        }
    }
}

/// Restriction from index `from` down to `to`.
pub fn restrict_to(a: &SemElem, from: usize, to: usize) -> SemElem {
    if from <= to {
        return a.clone();
    }
    match a {
        SemElem::Nat(_) | SemElem::Unit | SemElem::Section(_) | SemElem::LaterUnit => a.clone(),
        SemElem::Pair(x, y) => SemElem::pair(restrict_to(x, from, to), restrict_to(y, from, to)),
        SemElem::Inj(d, x) => SemElem::inj(*d, restrict_to(x, from, to)),
        SemElem::Fold(x) => SemElem::fold(restrict_to(x, from, to)),
        SemElem::Later(x) => {
            if to == 1 {
                SemElem::LaterUnit
            } else {
                SemElem::later(restrict_to(x, from - 1, to - 1))
            }
        }
        SemElem::Fun(fv) => SemElem::Fun(FunVal {
            index: to,
            map: fv.map.clone(),
        }),
    }
}

/// The restriction map of `ty` from `i + 1` to `i`.
pub fn restrict(ty: &Type, i: usize, a: &SemElem) -> DenRes {
    if i == 0 {
        return Err(DenoteError::Index(0));
    }
    check_shape(ty, a)?;
    Ok(restrict_to(a, i + 1, i))
}

/// Shallow agreement between a type and an element.
fn check_shape(ty: &Type, a: &SemElem) -> Result<(), DenoteError> {
    let ok = matches!(
        (ty, a),
        (Type::Nat, SemElem::Nat(_))
            | (Type::Unit, SemElem::Unit)
            | (Type::Prod(..), SemElem::Pair(..))
            | (Type::Sum(..), SemElem::Inj(..))
            | (Type::Mu(..), SemElem::Fold(_))
            | (Type::Later(_), SemElem::Later(_) | SemElem::LaterUnit)
            | (Type::Arrow(..), SemElem::Fun(_))
            | (Type::Box(_), SemElem::Section(_))
    );
    if ok {
        Ok(())
    } else {
        Err(DenoteError::Shape {
            expected: "an element of the given type",
            found: a.kind_name().to_string(),
        })
    }
}

/// Move an element of a constant type from index `from` to index `to`.
pub fn reindex(a: &SemElem, from: usize, to: usize) -> DenRes {
    if to <= from {
        return Ok(restrict_to(a, from, to));
    }
    Ok(match a {
        SemElem::Nat(_) | SemElem::Unit | SemElem::Section(_) => a.clone(),
        SemElem::Pair(x, y) => SemElem::pair(reindex(x, from, to)?, reindex(y, from, to)?),
        SemElem::Inj(d, x) => SemElem::inj(*d, reindex(x, from, to)?),
        SemElem::Fold(x) => SemElem::fold(reindex(x, from, to)?),
        SemElem::Fun(fv) => {
            let fv = fv.clone();
            SemElem::Fun(FunVal::new(to, move |k, x| {
                let m = k.min(from);
                let r = fv.apply(m, &reindex(x, k, m)?)?;
                reindex(&r, m, k)
            }))
        }
        SemElem::Later(_) | SemElem::LaterUnit => {
            return Err(shape("an element of a constant type", a))
        }
    })
}

/// The unfolding isomorphism of a recursive type.
pub fn unfold_iso(ty: &Type, a: &SemElem) -> DenRes {
    if !matches!(ty, Type::Mu(..)) {
        return Err(DenoteError::Shape {
            expected: "a recursive type",
            found: ty.to_string(),
        });
    }
    match a {
        SemElem::Fold(x) => Ok((**x).clone()),
        other => Err(shape("a fold", other)),
    }
}

/// Inverse of [`unfold_iso`].
pub fn fold_iso(a: &SemElem) -> SemElem {
    SemElem::fold(a.clone())
}

/// Environment for the bound variables of a term, innermost last.
pub type Env = Vec<SemElem>;

fn restrict_env(env: &Env, from: usize, to: usize) -> Env {
    if from == to {
        return env.clone();
    }
    env.iter().map(|a| restrict_to(a, from, to)).collect()
}

/// Denotation of a closed term at index `i`.
pub fn denote_closed(t: &Term, i: usize) -> DenRes {
    denote(t, i, &Vec::new())
}

/// Denotation of a locally closed term at index `i` under `env`.
pub fn denote(t: &Term, i: usize, env: &Env) -> DenRes {
    use TermKind as K;
    if i == 0 {
        return Err(DenoteError::Index(0));
    }
    match t.kind() {
        K::Bound(k) => env
            .len()
            .checked_sub(*k as usize + 1)
            .map(|p| env[p].clone())
            .ok_or_else(|| DenoteError::Open(format!("#{k}"))),
        K::Free(x) => Err(DenoteError::Open(x.to_string())),
        K::Unit => Ok(SemElem::Unit),
        K::Zero => Ok(SemElem::Nat(0)),
        K::Succ(a) => match denote(a, i, env)? {
            SemElem::Nat(n) => Ok(SemElem::Nat(n.saturating_add(1))),
            other => Err(shape("a natural", &other)),
        },
        K::Prim(op, a, b) => match (denote(a, i, env)?, denote(b, i, env)?) {
            (SemElem::Nat(x), SemElem::Nat(y)) => Ok(SemElem::Nat(op.apply(x, y))),
            (x, _) => Err(shape("naturals", &x)),
        },
        K::Pair(a, b) => Ok(SemElem::pair(denote(a, i, env)?, denote(b, i, env)?)),
        K::Proj(d, a) => match denote(a, i, env)? {
            SemElem::Pair(x, y) => Ok(if *d == 1 { (*x).clone() } else { (*y).clone() }),
            other => Err(shape("a pair", &other)),
        },
        K::Lam(_, _, body) => {
            let body = body.clone();
            let env = env.clone();
            Ok(SemElem::Fun(FunVal::new(i, move |j, a| {
                let mut inner = restrict_env(&env, i, j);
                inner.push(a.clone());
                denote(&body, j, &inner)
            })))
        }
        K::App(f, a) => match denote(f, i, env)? {
            SemElem::Fun(fv) => fv.apply(i, &denote(a, i, env)?),
            other => Err(shape("a function", &other)),
        },
        K::Fold(_, a) => Ok(SemElem::fold(denote(a, i, env)?)),
        K::Unfold(a) => match denote(a, i, env)? {
            SemElem::Fold(x) => Ok((*x).clone()),
            other => Err(shape("a fold", &other)),
        },
        K::Next(a) => {
            if i == 1 {
                Ok(SemElem::LaterUnit)
            } else {
                Ok(SemElem::later(denote(
                    a,
                    i - 1,
                    &restrict_env(env, i, i - 1),
                )?))
            }
        }
        K::Prev(s, body) => {
            let args = s
                .entries
                .iter()
                .map(|(_, u)| reindex(&denote(u, i, env)?, i, i + 1))
                .collect::<Result<Env, _>>()?;
            match denote(body, i + 1, &args)? {
                SemElem::Later(x) => Ok((*x).clone()),
                other => Err(shape("a later element above index 1", &other)),
            }
        }
        K::BoxI(s, body) => {
            let args = s
                .entries
                .iter()
                .map(|(_, u)| denote(u, i, env))
                .collect::<Result<Env, _>>()?;
            let body = body.clone();
            Ok(SemElem::Section(Section::new(move |j| {
                let at_j = args
                    .iter()
                    .map(|a| reindex(a, i, j))
                    .collect::<Result<Env, _>>()?;
                denote(&body, j, &at_j)
            })))
        }
        K::Unbox(a) => match denote(a, i, env)? {
            SemElem::Section(s) => s.at(i),
            other => Err(shape("a global section", &other)),
        },
        K::LaterApp(f, a) => {
            let (fd, ad) = (denote(f, i, env)?, denote(a, i, env)?);
            if i == 1 {
                return Ok(SemElem::LaterUnit);
            }
            match (fd, ad) {
                (SemElem::Later(g), SemElem::Later(x)) => match &*g {
                    SemElem::Fun(fv) => Ok(SemElem::later(fv.apply(i - 1, &x)?)),
                    other => Err(shape("a function", other)),
                },
                (other, _) => Err(shape("later elements", &other)),
            }
        }
        K::Inj(d, _, a) => Ok(SemElem::inj(*d, denote(a, i, env)?)),
        K::Case(scrut, _, b1, _, b2) => match denote(scrut, i, env)? {
            SemElem::Inj(d, x) => {
                let mut inner = env.clone();
                inner.push((*x).clone());
                denote(if d == 1 { b1 } else { b2 }, i, &inner)
            }
            other => Err(shape("an injection", &other)),
        },
        K::Abort(_, a) => {
            denote(a, i, env)?;
            Err(DenoteError::Empty)
        }
        K::BoxSum(s, body) => {
            let args = s
                .entries
                .iter()
                .map(|(_, u)| denote(u, i, env))
                .collect::<Result<Env, _>>()?;
            let body = body.clone();
            let at = move |j: usize| -> DenRes {
                let at_j = args
                    .iter()
                    .map(|a| reindex(a, i, j))
                    .collect::<Result<Env, _>>()?;
                denote(&body, j, &at_j)
            };
            let (d, _) = match at(1)? {
                SemElem::Inj(d, x) => (d, x),
                other => return Err(shape("an injection", &other)),
            };
            let at = Rc::new(at);
            Ok(SemElem::inj(
                d,
                SemElem::Section(Section::new(move |j| match at(j)? {
                    SemElem::Inj(e, x) if e == d => Ok((*x).clone()),
                    other => Err(shape("an injection on a fixed side", &other)),
                })),
            ))
        }
    }
}

/// Whether a comparison inspected every element or only a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled,
}

impl Mode {
    pub fn join(self, other: Mode) -> Mode {
        if self == Mode::Exact && other == Mode::Exact {
            Mode::Exact
        } else {
            Mode::Sampled
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub mode: Mode,
    /// The first distinguishing observation.
    pub witness: Option<String>,
}

impl Verdict {
    pub fn yes(mode: Mode) -> Verdict {
        Verdict {
            holds: true,
            mode,
            witness: None,
        }
    }

    pub fn no(mode: Mode, witness: impl Into<String>) -> Verdict {
        Verdict {
            holds: false,
            mode,
            witness: Some(witness.into()),
        }
    }
}

/// Extra indices inspected beyond `i` when comparing global sections.
pub const SECTION_SLACK: usize = 2;

/// Equality in the denotation of `ty` at index `i`: structural on
/// first-order layers, extensional on sampled arguments at functions and
/// on sections up to `i + 2` at boxes.
pub fn sem_equal(ty: &Type, i: usize, a: &SemElem, b: &SemElem, sampler: &Sampler) -> Verdict {
    match sem_eq(ty, i, a, b, sampler) {
        Ok(v) => v,
        Err(e) => Verdict::no(Mode::Exact, e.to_string()),
    }
}

fn sem_eq(
    ty: &Type,
    i: usize,
    a: &SemElem,
    b: &SemElem,
    sampler: &Sampler,
) -> Result<Verdict, DenoteError> {
    use SemElem as S;
    Ok(match (ty, a, b) {
        (Type::Nat, S::Nat(x), S::Nat(y)) => {
            if x == y {
                Verdict::yes(Mode::Exact)
            } else {
                Verdict::no(Mode::Exact, format!("{x} differs from {y}"))
            }
        }
        (Type::Unit, S::Unit, S::Unit) => Verdict::yes(Mode::Exact),
        (Type::Prod(l, r), S::Pair(a1, a2), S::Pair(b1, b2)) => {
            let v = sem_eq(l, i, a1, b1, sampler)?;
            if !v.holds {
                return Ok(v);
            }
            let w = sem_eq(r, i, a2, b2, sampler)?;
            Verdict {
                mode: v.mode.join(w.mode),
                ..w
            }
        }
        (Type::Sum(l, r), S::Inj(d, x), S::Inj(e, y)) => {
            if d != e {
                Verdict::no(Mode::Exact, format!("in{d} differs from in{e}"))
            } else {
                sem_eq(if *d == 1 { l } else { r }, i, x, y, sampler)?
            }
        }
        (Type::Mu(..), S::Fold(x), S::Fold(y)) => {
            let unfolded = ty.unfold_mu().expect("recursive type");
            sem_eq(&unfolded, i, x, y, sampler)?
        }
        (Type::Later(_), S::LaterUnit, S::LaterUnit) if i == 1 => Verdict::yes(Mode::Exact),
        (Type::Later(inner), S::Later(x), S::Later(y)) if i > 1 => {
            sem_eq(inner, i - 1, x, y, sampler)?
        }
        (Type::Arrow(dom, cod), S::Fun(f), S::Fun(g)) => {
            for j in 1..=i {
                for x in sampler.elements(dom, j) {
                    let v = sem_eq(cod, j, &f.apply(j, &x)?, &g.apply(j, &x)?, sampler)?;
                    if !v.holds {
                        return Ok(Verdict::no(
                            Mode::Sampled,
                            format!(
                                "at index {j} on {}: {}",
                                render(&x, j),
                                v.witness.unwrap_or_default()
                            ),
                        ));
                    }
                }
            }
            Verdict::yes(Mode::Sampled)
        }
        (Type::Box(inner), S::Section(s), S::Section(t)) => {
            for j in 1..=i + SECTION_SLACK {
                let v = sem_eq(inner, j, &s.at(j)?, &t.at(j)?, sampler)?;
                if !v.holds {
                    return Ok(Verdict::no(
                        Mode::Sampled,
                        format!("section {j}: {}", v.witness.unwrap_or_default()),
                    ));
                }
            }
            Verdict::yes(Mode::Sampled)
        }
        (Type::Empty, _, _) => Verdict::yes(Mode::Exact),
        _ => Verdict::no(
            Mode::Exact,
            format!(
                "{} and {} do not inhabit `{ty}` at {i}",
                a.kind_name(),
                b.kind_name()
            ),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prelude::load_prelude;

    fn stream(xs: &[u64]) -> SemElem {
        xs.iter()
            .rev()
            .fold(None, |tail: Option<SemElem>, &n| {
                let t = tail.map(SemElem::later).unwrap_or(SemElem::LaterUnit);
                Some(SemElem::fold(SemElem::pair(SemElem::Nat(n), t)))
            })
            .unwrap()
    }

    fn def(name: &str) -> Term {
        load_prelude().get(name).unwrap().term.clone()
    }

    #[test]
    fn restriction() {
        let sg = Type::guarded_stream();
        let r = restrict(&sg, 2, &stream(&[0, 1, 2])).unwrap();
        assert_eq!(r.stream_prefix(), Some(vec![0, 1]));
        assert!(matches!(
            restrict(&Type::Nat, 4, &SemElem::Nat(7)).unwrap(),
            SemElem::Nat(7)
        ));
        let l = restrict(&Type::later(Type::Nat), 1, &SemElem::later(SemElem::Nat(5))).unwrap();
        assert!(matches!(l, SemElem::LaterUnit));
    }

    #[test]
    fn numerals_and_next() {
        for i in 1..5 {
            assert!(matches!(
                denote_closed(&Term::numeral(1), i).unwrap(),
                SemElem::Nat(1)
            ));
        }
        let n = Term::next(Term::zero());
        assert!(
            matches!(denote_closed(&n, 2).unwrap(), SemElem::Later(x) if matches!(*x, SemElem::Nat(0)))
        );
        assert!(matches!(denote_closed(&n, 1).unwrap(), SemElem::LaterUnit));
    }

    #[test]
    fn streams_carry_index_many_heads() {
        let nats = denote_closed(&def("nats"), 3).unwrap();
        assert_eq!(nats.stream_prefix(), Some(vec![0, 1, 2]));
        let pf = denote_closed(&def("paperfolds"), 6).unwrap();
        assert_eq!(pf.stream_prefix(), Some(vec![1, 1, 0, 1, 1, 0]));
    }

    #[test]
    fn box_builds_sections() {
        let t = Term::box_iota(def("toggle"));
        let SemElem::Section(s) = denote_closed(&t, 1).unwrap() else {
            panic!()
        };
        assert_eq!(s.at(2).unwrap().stream_prefix(), Some(vec![1, 0]));
        assert_eq!(s.at(5).unwrap().stream_prefix(), Some(vec![1, 0, 1, 0, 1]));
    }

    #[test]
    fn acausal_every2nd() {
        let t = Term::app(def("every2nd"), Term::box_iota(def("nats")));
        let e = denote_closed(&t, 4).unwrap();
        assert_eq!(e.stream_prefix(), Some(vec![0, 2, 4, 6]));
    }

    #[test]
    fn unfold_round_trip() {
        let sg = Type::guarded_stream();
        let a = SemElem::fold(SemElem::pair(SemElem::Nat(3), SemElem::LaterUnit));
        let u = unfold_iso(&sg, &a).unwrap();
        assert!(
            matches!(&u, SemElem::Pair(h, t) if matches!(**h, SemElem::Nat(3)) && matches!(**t, SemElem::LaterUnit))
        );
        let back = fold_iso(&u);
        assert!(sem_equal(&sg, 1, &a, &back, &Sampler::new()).holds);
    }

    #[test]
    fn reindex_constant_function() {
        let f = denote_closed(&Term::lam("x", None, Term::succ(Term::var("x"))), 1).unwrap();
        let SemElem::Fun(g) = reindex(&f, 1, 4).unwrap() else {
            panic!()
        };
        assert_eq!(g.index, 4);
        assert!(matches!(
            g.apply(3, &SemElem::Nat(4)).unwrap(),
            SemElem::Nat(5)
        ));
        assert!(reindex(&SemElem::LaterUnit, 1, 2).is_err());
    }

    #[test]
    fn equality_modes() {
        let s = Sampler::new();
        let v = sem_equal(&Type::Nat, 3, &SemElem::Nat(5), &SemElem::Nat(5), &s);
        assert_eq!((v.holds, v.mode), (true, Mode::Exact));
        let l = Type::later(Type::Nat);
        let v = sem_equal(&l, 1, &SemElem::LaterUnit, &SemElem::LaterUnit, &s);
        assert_eq!((v.holds, v.mode), (true, Mode::Exact));
        let v = sem_equal(&Type::Nat, 1, &SemElem::Nat(1), &SemElem::Nat(2), &s);
        assert!(!v.holds);
    }

    #[test]
    fn boxplus_picks_a_side() {
        let t = Term::app(def("box_split"), def("some_three"));
        let SemElem::Inj(1, x) = denote_closed(&t, 2).unwrap() else {
            panic!()
        };
        let SemElem::Section(s) = &*x else { panic!() };
        assert!(matches!(s.at(3).unwrap(), SemElem::Nat(3)));
    }
}
