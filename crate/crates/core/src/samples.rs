//! Canonical closed inhabitants of types, used to instantiate the
//! quantifiers of semantic equality and of the logical relation.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::denote::{denote_closed, SemElem};
use crate::parser::parse_expr;
use crate::prelude::load_prelude;
use crate::syntax::{Name, Term, Type};
use crate::typecheck::{elaborate_fix, Elab, Program, TypeError};

/// Streams used wherever a guarded stream argument is needed.
pub const SAMPLE_STREAMS: &[&str] = &["nats", "toggle", "paperfolds", "zeros"];

pub struct Sampler {
    /// Upper bound on the number of inhabitants produced per type.
    pub per_type: usize,
    streams: Vec<Term>,
    terms: RefCell<HashMap<String, Vec<Term>>>,
    elements: RefCell<HashMap<(String, usize), Vec<SemElem>>>,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler::new()
    }
}

impl Sampler {
    pub fn new() -> Sampler {
        Sampler::with_limit(4)
    }

    pub fn with_limit(per_type: usize) -> Sampler {
        let p = load_prelude();
        Sampler {
            per_type,
            streams: SAMPLE_STREAMS
                .iter()
                .map(|n| p.get(n).unwrap().term.clone())
                .collect(),
            terms: RefCell::default(),
            elements: RefCell::default(),
        }
    }

    /// Closed terms of type `ty`, at most `per_type` of them.
    pub fn terms(&self, ty: &Type) -> Vec<Term> {
        let key = ty.to_string();
        if let Some(ts) = self.terms.borrow().get(&key) {
            return ts.clone();
        }
        let ts = self.build(ty, &mut Vec::new(), 3);
        self.terms.borrow_mut().insert(key, ts.clone());
        ts
    }

    /// Denotations at index `j` of the sample terms of `ty`.
    pub fn elements(&self, ty: &Type, j: usize) -> Vec<SemElem> {
        let key = (ty.to_string(), j);
        if let Some(es) = self.elements.borrow().get(&key) {
            return es.clone();
        }
        let es: Vec<SemElem> = self
            .terms(ty)
            .iter()
            .filter_map(|t| denote_closed(t, j).ok())
            .collect();
        self.elements.borrow_mut().insert(key, es.clone());
        es
    }

    /// `rec` lists recursion variables in scope: a variable of type `|>mu`
    /// for each recursive type being inhabited.
    fn build(&self, ty: &Type, rec: &mut Vec<(Type, Name)>, fuel: usize) -> Vec<Term> {
        let n = self.per_type;
        let mut out = match ty {
            Type::Unit => vec![Term::unit()],
            Type::Nat => (0..n as u64).map(Term::numeral).collect(),
            Type::Empty | Type::Var(_) => vec![],
            Type::Prod(a, b) => {
                let (xs, ys) = (self.build(a, rec, fuel), self.build(b, rec, fuel));
                if xs.is_empty() || ys.is_empty() {
                    vec![]
                } else {
                    (0..xs.len().max(ys.len()))
                        .map(|k| Term::pair(xs[k % xs.len()].clone(), ys[k % ys.len()].clone()))
                        .collect()
                }
            }
            Type::Sum(a, b) => {
                let xs = self.build(a, rec, fuel);
                let ys = self.build(b, rec, fuel);
                let mut out = Vec::new();
                for k in 0..xs.len().max(ys.len()) {
                    if let Some(x) = xs.get(k) {
                        out.push(Term::inj(1, Some(ty.clone()), x.clone()));
                    }
                    if let Some(y) = ys.get(k) {
                        out.push(Term::inj(2, Some(ty.clone()), y.clone()));
                    }
                }
                out
            }
            Type::Arrow(a, b) => {
                let mut out = Vec::new();
                if a == b {
                    out.push(Term::lam("x", Some((**a).clone()), Term::var("x")));
                }
                if **a == Type::Nat && **b == Type::Nat {
                    out.push(Term::lam("x", Some(Type::Nat), Term::succ(Term::var("x"))));
                }
                let avoid: Vec<Name> = rec.iter().map(|(_, r)| r.clone()).collect();
                let x = fresh("x", &avoid);
                for body in self.build(b, rec, fuel) {
                    out.push(Term::lam(&x, Some((**a).clone()), body));
                }
                out
            }
            Type::Later(a) => {
                if let Some((_, r)) = rec.iter().rev().find(|(mu, _)| mu == &**a) {
                    vec![Term::var(r)]
                } else {
                    self.build(a, rec, fuel)
                        .into_iter()
                        .map(Term::next)
                        .collect()
                }
            }
            Type::Box(a) => self
                .build(a, &mut Vec::new(), fuel)
                .into_iter()
                .map(|t| Term::boxi(vec![], t))
                .collect(),
            Type::Mu(..) if *ty == Type::guarded_stream() => self.streams.clone(),
            Type::Mu(..) => {
                if fuel == 0 {
                    return vec![];
                }
                let avoid: Vec<Name> = rec.iter().map(|(_, r)| r.clone()).collect();
                let r = fresh("r", &avoid);
                rec.push((ty.clone(), r.clone()));
                let bodies = self.build(&ty.unfold_mu().unwrap(), rec, fuel - 1);
                rec.pop();
                bodies
                    .into_iter()
                    .map(|b| {
                        let folded = Term::fold(Some(ty.clone()), b);
                        if folded.free_names().contains(&r) {
                            elaborate_fix(&r, Some(ty), folded)
                        } else {
                            folded
                        }
                    })
                    .collect()
            }
        };
        out.truncate(n);
        out
    }
}

fn fresh(base: &str, avoid: &[Name]) -> Name {
    let mut k = 0;
    loop {
        let cand: Name = format!("{base}{k}").into();
        if !avoid.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// Elaborate a closed surface expression against a checked program.
pub fn elaborate(program: &Program, src: &str) -> Result<(Term, Type), String> {
    let e = parse_expr(src, &program.aliases).map_err(|e| e.to_string())?;
    Elab::new(program)
        .infer_closed(&e)
        .map_err(|e: TypeError| e.message)
}

/// Guarded stream expressions over the prelude.
pub const GUARDED_STREAM_EXPRS: &[&str] = &[
    "nats",
    "toggle",
    "paperfolds",
    "zeros",
    "rho 5",
    "interleave nats (next toggle)",
    "interleave toggle (next nats)",
    "mapg (\\n. succ n) nats",
    "mapg (\\n. n * n) toggle",
    "iterate (next (\\n. n + 2)) 1",
    "plusg nats toggle",
    "plusg paperfolds paperfolds",
    "timesg nats nats",
    "timesg toggle nats",
    "every2nd (box nats)",
    "every2nd (box paperfolds)",
    "unbox (tl (box nats))",
];

/// Closed Nat-typed probes: heads, second and third elements of streams
/// built from the prelude, plus a few list and sum observations.
pub fn nat_probes() -> Vec<String> {
    let mut out = Vec::new();
    for s in GUARDED_STREAM_EXPRS {
        for obs in ["hd", "second", "third"] {
            out.push(format!("{obs} (box ({s}))"));
        }
    }
    for s in [
        "plus (box nats) (box toggle)",
        "times (box nats) (box nats)",
        "every2nd_box (box nats)",
    ] {
        out.push(format!("third ({s})"));
    }
    out.extend(
        [
            "hdg paperfolds",
            "lhead one_two",
            "lhead ones",
            "is_nil nil",
            "is_nil one_two",
            "case unbox (box_merge (box_split some_three)) of a. a; b. 0",
            "(\\(x : Nat). x) 0",
        ]
        .map(String::from),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecheck::infer_closed;

    #[test]
    fn samples_are_well_typed() {
        let p = load_prelude();
        let s = Sampler::new();
        let list = p.get("nil").unwrap().ty.clone();
        let tys = [
            Type::Nat,
            Type::guarded_stream(),
            Type::stream(),
            Type::later(Type::guarded_stream()),
            Type::boxed(Type::arrow(Type::guarded_stream(), Type::guarded_stream())),
            Type::prod(Type::Nat, Type::later(Type::guarded_stream())),
            Type::sum(Type::boxed(Type::Nat), Type::boxed(Type::Unit)),
            Type::later(Type::arrow(Type::Nat, Type::Nat)),
            list,
        ];
        for ty in tys {
            let ts = s.terms(&ty);
            assert!(!ts.is_empty(), "{ty}");
            for t in ts {
                assert_eq!(infer_closed(&t).unwrap(), ty, "{t}");
            }
        }
        assert!(s.terms(&Type::Empty).is_empty());
    }

    #[test]
    fn probes_elaborate_at_nat() {
        let p = load_prelude();
        let probes = nat_probes();
        assert!(probes.len() >= 50);
        for src in probes {
            let (_, ty) = elaborate(&p, &src).unwrap_or_else(|e| panic!("{src}: {e}"));
            assert_eq!(ty, Type::Nat, "{src}");
        }
    }
}
