//! Seeded random generation of closed well-typed terms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::stdlib;
use crate::syntax::types::is_constant;
use crate::syntax::{PrimOp, Term, Type};
use crate::typecheck::elaborate_fix;

pub const DEFAULT_MAX_SIZE: usize = 30;

/// A generated term with its type and generator size: the number of
/// randomly chosen nodes, each `fix` and library destructor counting once.
/// Minimal completions after the budget runs out are not counted.
#[derive(Clone, Debug)]
pub struct Generated {
    pub term: Term,
    pub ty: Type,
    pub size: usize,
}

pub fn list_type() -> Type {
    Type::mu(
        "a",
        Type::sum(
            Type::Unit,
            Type::prod(Type::Nat, Type::later(Type::var("a"))),
        ),
    )
}

pub struct Gen {
    rng: ChaCha8Rng,
    fuel: usize,
    used: usize,
    ctx: Vec<(String, Type)>,
    fresh: usize,
}

impl Gen {
    pub fn new(seed: u64, max_size: usize) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            fuel: max_size,
            used: 0,
            ctx: Vec::new(),
            fresh: 0,
        }
    }

    /// A random closed type of bounded depth, never mentioning `0`.
    pub fn ty(&mut self, depth: usize) -> Type {
        let leaf = depth == 0;
        match self.rng.gen_range(0..if leaf { 5 } else { 11 }) {
            0 | 1 => Type::Nat,
            2 => Type::Unit,
            3 => Type::guarded_stream(),
            4 => Type::stream(),
            5 => Type::prod(self.ty(depth - 1), self.ty(depth - 1)),
            6 => Type::sum(self.ty(depth - 1), self.ty(depth - 1)),
            7 | 8 => Type::arrow(self.ty(depth - 1), self.ty(depth - 1)),
            9 => Type::later(self.ty(depth - 1)),
            _ => {
                let a = self.ty(depth - 1);
                if is_constant(&a).unwrap_or(false) {
                    Type::boxed(a)
                } else {
                    Type::boxed(Type::Nat)
                }
            }
        }
    }

    /// A well-formed type over the free variable `alpha`, which may occur
    /// anywhere outside `#`. Nested `mu` binders are guarded.
    pub fn open_type(&mut self, alpha: &str, depth: usize) -> Type {
        if depth == 0 {
            return match self.rng.gen_range(0..4) {
                0 | 1 => Type::var(alpha),
                2 => Type::Nat,
                _ => Type::Unit,
            };
        }
        match self.rng.gen_range(0..9) {
            0 => Type::var(alpha),
            1 => self.ty(depth - 1),
            2 => Type::prod(
                self.open_type(alpha, depth - 1),
                self.open_type(alpha, depth - 1),
            ),
            3 => Type::sum(
                self.open_type(alpha, depth - 1),
                self.open_type(alpha, depth - 1),
            ),
            4 => Type::arrow(
                self.open_type(alpha, depth - 1),
                self.open_type(alpha, depth - 1),
            ),
            5 | 6 => Type::later(self.open_type(alpha, depth - 1)),
            7 => {
                let a = self.ty(depth - 1);
                Type::boxed(if is_constant(&a).unwrap_or(false) {
                    a
                } else {
                    Type::Nat
                })
            }
            _ => {
                let b = self.name("b");
                let body = self.open_type(alpha, depth - 1);
                Type::mu(&b, Type::prod(body, Type::later(Type::var(&b))))
            }
        }
    }

    /// Bind `x : ty` for the rest of this generator's life.
    pub fn assume(&mut self, x: &str, ty: Type) {
        self.ctx.push((x.to_string(), ty));
    }

    fn name(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("{base}{}", self.fresh)
    }

    fn spend(&mut self) -> bool {
        if self.fuel > 0 {
            self.fuel -= 1;
            self.used += 1;
            true
        } else {
            false
        }
    }

    fn var_of(&mut self, ty: &Type) -> Option<Term> {
        let hits: Vec<&String> = self
            .ctx
            .iter()
            .filter(|(_, t)| t == ty)
            .map(|(x, _)| x)
            .collect();
        hits.choose(&mut self.rng).map(|x| Term::var(x))
    }

    fn with_var<T>(&mut self, x: &str, ty: Type, f: impl FnOnce(&mut Self) -> T) -> T {
        self.ctx.push((x.to_string(), ty));
        let out = f(self);
        self.ctx.pop();
        out
    }

    /// Generate in a context restricted to the constant-typed variables,
    /// returned as identity substitution entries.
    fn constant_scope<T>(&mut self, f: impl FnOnce(&mut Self) -> T) -> (Vec<(String, Term)>, T) {
        let kept: Vec<(String, Type)> = self
            .ctx
            .iter()
            .filter(|(_, t)| is_constant(t).unwrap_or(false))
            .cloned()
            .collect();
        let saved = std::mem::replace(&mut self.ctx, kept.clone());
        let out = f(self);
        self.ctx = saved;
        (
            kept.into_iter()
                .map(|(x, _)| (x.clone(), Term::var(&x)))
                .collect(),
            out,
        )
    }

    /// A term of type `ty` in the current context.
    pub fn term(&mut self, ty: &Type) -> Term {
        if !self.spend() {
            return self.minimal(ty);
        }
        if self.rng.gen_bool(0.25) {
            if let Some(v) = self.var_of(ty) {
                return v;
            }
        }
        if self.rng.gen_bool(0.2) {
            if let Some(t) = self.elim(ty) {
                return t;
            }
        }
        self.intro(ty)
    }

    fn intro(&mut self, ty: &Type) -> Term {
        match ty {
            Type::Unit => Term::unit(),
            Type::Nat => match self.rng.gen_range(0..4) {
                0 => Term::numeral(self.rng.gen_range(0..4)),
                1 => Term::succ(self.term(ty)),
                2 => {
                    let op = if self.rng.gen_bool(0.5) {
                        PrimOp::Add
                    } else {
                        PrimOp::Mul
                    };
                    Term::prim(op, self.term(ty), self.term(ty))
                }
                _ => {
                    if self.rng.gen_bool(0.5) {
                        Term::app(stdlib::hdg(), self.term(&Type::guarded_stream()))
                    } else {
                        Term::app(stdlib::hd(), self.term(&Type::stream()))
                    }
                }
            },
            Type::Prod(a, b) => Term::pair(self.term(a), self.term(b)),
            Type::Sum(a, b) => {
                if let (Type::Box(a1), Type::Box(b1)) = (&**a, &**b) {
                    if self.rng.gen_bool(0.3) {
                        let inner = Type::sum((**a1).clone(), (**b1).clone());
                        let (entries, body) = self.constant_scope(|g| g.term(&inner));
                        return Term::boxplus(borrow(&entries), body);
                    }
                }
                if self.rng.gen_bool(0.5) {
                    Term::inj(1, Some(ty.clone()), self.term(a))
                } else {
                    Term::inj(2, Some(ty.clone()), self.term(b))
                }
            }
            Type::Arrow(a, b) => {
                let x = self.name("x");
                let body = self.with_var(&x, (**a).clone(), |g| g.term(b));
                Term::lam(&x, Some((**a).clone()), body)
            }
            Type::Later(a) => match self.rng.gen_range(0..4) {
                0 if **a == Type::guarded_stream() => Term::app(stdlib::tlg(), self.term(a)),
                1 => {
                    let x = self.name("x");
                    let arg = Type::Nat;
                    let f = Term::lam(
                        &x,
                        Some(arg.clone()),
                        self.with_var(&x, arg.clone(), |g| g.term(a)),
                    );
                    Term::later_app(Term::next(f), self.term(&Type::later(arg)))
                }
                _ => Term::next(self.term(a)),
            },
            Type::Box(a) => {
                if self.rng.gen_bool(0.8) {
                    let (entries, body) = self.constant_scope(|g| g.term(a));
                    Term::boxi(borrow(&entries), body)
                } else {
                    self.minimal(ty)
                }
            }
            Type::Mu(..) => {
                if ty == &Type::guarded_stream() && self.rng.gen_bool(0.3) {
                    let (entries, body) = self.constant_scope(|g| g.term(&Type::later(ty.clone())));
                    return Term::prev(borrow(&entries), body);
                }
                let r = self.name("r");
                let unfolded = ty.unfold_mu().unwrap();
                let body = self.with_var(&r, Type::later(ty.clone()), |g| g.term(&unfolded));
                let folded = Term::fold(Some(ty.clone()), body);
                if folded.free_names().iter().any(|n| **n == *r) {
                    elaborate_fix(&r, Some(ty), folded)
                } else {
                    folded
                }
            }
            Type::Empty | Type::Var(_) => panic!("generator asked for {ty}"),
        }
    }

    /// An elimination form producing `ty`, when one applies.
    fn elim(&mut self, ty: &Type) -> Option<Term> {
        Some(match self.rng.gen_range(0..5) {
            0 => {
                let a = self.ty(1);
                let x = self.name("x");
                let body = self.with_var(&x, a.clone(), |g| g.term(ty));
                Term::app(Term::lam(&x, Some(a.clone()), body), self.term(&a))
            }
            1 => {
                let other = self.ty(0);
                let (pair, d) = if self.rng.gen_bool(0.5) {
                    (Type::prod(ty.clone(), other), 1)
                } else {
                    (Type::prod(other, ty.clone()), 2)
                };
                Term::proj(d, self.term(&pair))
            }
            2 if is_constant(ty).unwrap_or(false) => {
                Term::unbox(self.term(&Type::boxed(ty.clone())))
            }
            3 => {
                let (a, b) = (self.ty(0), self.ty(0));
                let s = self.term(&Type::sum(a.clone(), b.clone()));
                let (x, y) = (self.name("x"), self.name("y"));
                let l = self.with_var(&x, a, |g| g.term(ty));
                let r = self.with_var(&y, b, |g| g.term(ty));
                Term::case(s, &x, l, &y, r)
            }
            _ if *ty == Type::stream() => Term::app(stdlib::tl(), self.term(ty)),
            _ => {
                let hits: Vec<(String, Type)> = self
                    .ctx
                    .iter()
                    .filter(|(_, t)| matches!(t, Type::Arrow(_, b) if **b == *ty))
                    .cloned()
                    .collect();
                let (f, fty) = hits.choose(&mut self.rng)?.clone();
                let Type::Arrow(a, _) = fty else {
                    unreachable!()
                };
                Term::app(Term::var(&f), self.term(&a))
            }
        })
    }

    /// The smallest term of `ty` this generator knows, preferring variables.
    fn minimal(&mut self, ty: &Type) -> Term {
        if let Some(v) = self.var_of(ty) {
            return v;
        }
        match ty {
            Type::Unit => Term::unit(),
            Type::Nat => Term::zero(),
            Type::Prod(a, b) => Term::pair(self.minimal(a), self.minimal(b)),
            Type::Sum(a, _) => Term::inj(1, Some(ty.clone()), self.minimal(a)),
            Type::Arrow(a, b) => {
                let x = self.name("x");
                let body = self.with_var(&x, (**a).clone(), |g| g.minimal(b));
                Term::lam(&x, Some((**a).clone()), body)
            }
            Type::Later(a) => Term::next(self.minimal(a)),
            Type::Box(a) => {
                let saved = std::mem::take(&mut self.ctx);
                let body = self.minimal(a);
                self.ctx = saved;
                Term::boxi(vec![], body)
            }
            Type::Mu(..) => {
                let r = self.name("r");
                let unfolded = ty.unfold_mu().unwrap();
                let body = self.with_var(&r, Type::later(ty.clone()), |g| g.minimal(&unfolded));
                let folded = Term::fold(Some(ty.clone()), body);
                if folded.free_names().iter().any(|n| **n == *r) {
                    elaborate_fix(&r, Some(ty), folded)
                } else {
                    folded
                }
            }
            Type::Empty | Type::Var(_) => panic!("generator asked for {ty}"),
        }
    }
}

fn borrow(entries: &[(String, Term)]) -> Vec<(&str, Term)> {
    entries
        .iter()
        .map(|(x, t)| (x.as_str(), t.clone()))
        .collect()
}

/// A closed term of a random type.
pub fn gen_closed(seed: u64, max_size: usize) -> Generated {
    let mut g = Gen::new(seed, max_size);
    let ty = g.ty(2);
    let term = g.term(&ty);
    Generated {
        term,
        ty,
        size: g.used,
    }
}

/// A closed term of the given type.
pub fn gen_of(seed: u64, ty: &Type, max_size: usize) -> Generated {
    let mut g = Gen::new(seed, max_size);
    let term = g.term(ty);
    Generated {
        term,
        ty: ty.clone(),
        size: g.used,
    }
}

/// A term of `ty` that may mention the variables of `ctx`.
pub fn gen_open(seed: u64, ctx: &[(&str, Type)], ty: &Type, max_size: usize) -> Generated {
    let mut g = Gen::new(seed, max_size);
    for (x, a) in ctx {
        g.assume(x, a.clone());
    }
    let term = g.term(ty);
    Generated {
        term,
        ty: ty.clone(),
        size: g.used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecheck::infer_closed;

    #[test]
    fn generated_terms_are_closed_and_typed() {
        for seed in 0..300 {
            let g = gen_closed(seed, DEFAULT_MAX_SIZE);
            assert!(g.term.is_closed(), "{}", g.term);
            assert!(g.size <= DEFAULT_MAX_SIZE);
            assert_eq!(
                infer_closed(&g.term).unwrap_or_else(|e| panic!("{}: {}", g.term, e.message)),
                g.ty
            );
        }
    }

    #[test]
    fn nat_and_list_terms() {
        for seed in 0..100 {
            for ty in [Type::Nat, list_type(), Type::guarded_stream()] {
                let g = gen_of(seed, &ty, DEFAULT_MAX_SIZE);
                assert_eq!(infer_closed(&g.term).unwrap(), ty, "{}", g.term);
            }
        }
    }

    #[test]
    fn open_types_are_well_formed() {
        let nabla = ["a".into()].into_iter().collect();
        for seed in 0..200 {
            let ty = Gen::new(seed, 0).open_type("a", 3);
            assert!(crate::syntax::wf_type(&nabla, &ty), "{ty}");
        }
    }

    #[test]
    fn open_terms_are_typed_in_context() {
        let mut gamma = crate::typecheck::TypingCtx::new();
        gamma.insert("x".into(), Type::Nat);
        for seed in 0..100 {
            let g = gen_open(seed, &[("x", Type::Nat)], &Type::Nat, 20);
            assert_eq!(crate::typecheck::infer(&gamma, &g.term).unwrap(), Type::Nat);
        }
    }

    #[test]
    fn deterministic_in_the_seed() {
        assert_eq!(gen_closed(7, 30).term, gen_closed(7, 30).term);
    }
}
