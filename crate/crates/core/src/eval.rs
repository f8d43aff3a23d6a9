//! Call-by-name small-step evaluation of closed terms.

use std::fmt;

use crate::stdlib;
use crate::syntax::{Binder, PrimOp, Subst, Term, TermKind, Type};

/// Default step budget.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Recognizes values: `()`, numerals, pairs, abstractions, `fold t`,
/// `box σ. t`, `next t` and injections.
pub fn is_value(t: &Term) -> bool {
    use TermKind as K;
    match t.kind() {
        K::Unit | K::Zero => true,
        K::Succ(_) => t.as_numeral().is_some(),
        K::Pair(..) | K::Lam(..) | K::Fold(..) | K::BoxI(..) | K::Next(_) | K::Inj(..) => true,
        _ => false,
    }
}

/// Reduction rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Proj,
    Beta,
    UnfoldFold,
    PrevSubst,
    PrevNext,
    UnboxBox,
    LaterApp,
    CaseInj,
    BoxSumSubst,
    BoxSumInj,
    Prim,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Proj => "proj",
            Rule::Beta => "beta",
            Rule::UnfoldFold => "unfold-fold",
            Rule::PrevSubst => "prev-subst",
            Rule::PrevNext => "prev-next",
            Rule::UnboxBox => "unbox-box",
            Rule::LaterApp => "next-ap",
            Rule::CaseInj => "case-inj",
            Rule::BoxSumSubst => "boxplus-subst",
            Rule::BoxSumInj => "boxplus-inj",
            Rule::Prim => "prim",
        }
    }
}

/// One layer of an evaluation context. The hole is the evaluated subterm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    Succ,
    Proj(u8),
    /// `E t`
    AppFun(Term),
    Unfold,
    /// `prev E`, only with an empty substitution.
    Prev,
    Unbox,
    /// `E <*> t`
    ApLeft(Term),
    /// `v <*> E`
    ApRight(Term),
    Abort(Option<Type>),
    Case(Binder, Term, Binder, Term),
    /// `boxplus E`, only with an empty substitution.
    BoxSum,
    /// `E + t`
    PrimLeft(PrimOp, Term),
    /// `n + E`
    PrimRight(PrimOp, Term),
}

impl Frame {
    pub fn plug(&self, t: Term) -> Term {
        use TermKind as K;
        Term::mk(match self {
            Frame::Succ => K::Succ(t),
            Frame::Proj(d) => K::Proj(*d, t),
            Frame::AppFun(a) => K::App(t, a.clone()),
            Frame::Unfold => K::Unfold(t),
            Frame::Prev => K::Prev(Subst::empty(), t),
            Frame::Unbox => K::Unbox(t),
            Frame::ApLeft(b) => K::LaterApp(t, b.clone()),
            Frame::ApRight(a) => K::LaterApp(a.clone(), t),
            Frame::Abort(ty) => K::Abort(ty.clone(), t),
            Frame::Case(x1, b1, x2, b2) => {
                K::Case(t, x1.clone(), b1.clone(), x2.clone(), b2.clone())
            }
            Frame::BoxSum => K::BoxSum(Subst::empty(), t),
            Frame::PrimLeft(op, b) => K::Prim(*op, t, b.clone()),
            Frame::PrimRight(op, a) => K::Prim(*op, a.clone(), t),
        })
    }
}

/// An evaluation context, outermost frame first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    pub frames: Vec<Frame>,
}

impl Context {
    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn plug(&self, t: Term) -> Term {
        self.frames.iter().rev().fold(t, |acc, f| f.plug(acc))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StuckInfo {
    /// The subterm at which decomposition failed.
    pub at: Term,
    pub reason: String,
}

impl fmt::Display for StuckInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at `{}`", self.reason, self.at)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Value,
    Redex {
        context: Context,
        redex: Term,
        rule: Rule,
    },
    Stuck(StuckInfo),
}

fn stuck(at: &Term, reason: &str) -> Decomposition {
    Decomposition::Stuck(StuckInfo {
        at: at.clone(),
        reason: reason.to_string(),
    })
}

/// Split a closed term into an evaluation context and a redex.
pub fn decompose(t: &Term) -> Decomposition {
    use TermKind as K;
    let mut frames = Vec::new();
    let mut cur = t.clone();
    loop {
        if is_value(&cur) {
            // Frames are only pushed around non-values.
            debug_assert!(frames.is_empty());
            return Decomposition::Value;
        }
        let (frame, next) = match cur.kind() {
            K::Bound(_) | K::Free(_) => return stuck(&cur, "open term"),
            K::Succ(a) => {
                if is_value(a) {
                    return stuck(&cur, "succ of a non-numeral");
                }
                (Frame::Succ, a.clone())
            }
            K::Proj(d, a) => match a.kind() {
                K::Pair(..) => return redex(frames, cur, Rule::Proj),
                _ if is_value(a) => return stuck(&cur, "projection from a non-pair"),
                _ => (Frame::Proj(*d), a.clone()),
            },
            K::App(f, a) => match f.kind() {
                K::Lam(..) => return redex(frames, cur, Rule::Beta),
                _ if is_value(f) => return stuck(&cur, "application of a non-function"),
                _ => (Frame::AppFun(a.clone()), f.clone()),
            },
            K::Unfold(a) => match a.kind() {
                K::Fold(..) => return redex(frames, cur, Rule::UnfoldFold),
                _ if is_value(a) => return stuck(&cur, "unfold of a non-fold"),
                _ => (Frame::Unfold, a.clone()),
            },
            K::Prev(s, b) => {
                if !s.is_empty() {
                    return redex(frames, cur, Rule::PrevSubst);
                }
                match b.kind() {
                    K::Next(_) => return redex(frames, cur, Rule::PrevNext),
                    _ if is_value(b) => return stuck(&cur, "prev of a non-next"),
                    _ => (Frame::Prev, b.clone()),
                }
            }
            K::Unbox(a) => match a.kind() {
                K::BoxI(..) => return redex(frames, cur, Rule::UnboxBox),
                _ if is_value(a) => return stuck(&cur, "unbox of a non-box"),
                _ => (Frame::Unbox, a.clone()),
            },
            K::LaterApp(a, b) => {
                if !is_value(a) {
                    (Frame::ApLeft(b.clone()), a.clone())
                } else if !is_value(b) {
                    (Frame::ApRight(a.clone()), b.clone())
                } else if matches!((a.kind(), b.kind()), (K::Next(_), K::Next(_))) {
                    return redex(frames, cur, Rule::LaterApp);
                } else {
                    return stuck(&cur, "<*> of non-next values");
                }
            }
            K::Case(s, x1, b1, x2, b2) => match s.kind() {
                K::Inj(..) => return redex(frames, cur, Rule::CaseInj),
                _ if is_value(s) => return stuck(&cur, "case of a non-injection"),
                _ => (
                    Frame::Case(x1.clone(), b1.clone(), x2.clone(), b2.clone()),
                    s.clone(),
                ),
            },
            K::Abort(ty, a) => {
                if is_value(a) {
                    return stuck(&cur, "abort of a value");
                }
                (Frame::Abort(ty.clone()), a.clone())
            }
            K::BoxSum(s, b) => {
                if !s.is_empty() {
                    return redex(frames, cur, Rule::BoxSumSubst);
                }
                match b.kind() {
                    K::Inj(..) => return redex(frames, cur, Rule::BoxSumInj),
                    _ if is_value(b) => return stuck(&cur, "boxplus of a non-injection"),
                    _ => (Frame::BoxSum, b.clone()),
                }
            }
            K::Prim(op, a, b) => {
                if !is_value(a) {
                    (Frame::PrimLeft(*op, b.clone()), a.clone())
                } else if a.as_numeral().is_none() {
                    return stuck(&cur, "arithmetic on a non-numeral");
                } else if !is_value(b) {
                    (Frame::PrimRight(*op, a.clone()), b.clone())
                } else if b.as_numeral().is_some() {
                    return redex(frames, cur, Rule::Prim);
                } else {
                    return stuck(&cur, "arithmetic on a non-numeral");
                }
            }
            K::Unit
            | K::Zero
            | K::Pair(..)
            | K::Lam(..)
            | K::Fold(..)
            | K::BoxI(..)
            | K::Next(_)
            | K::Inj(..) => unreachable!("values handled above"),
        };
        frames.push(frame);
        cur = next;
    }
}

fn redex(frames: Vec<Frame>, redex: Term, rule: Rule) -> Decomposition {
    Decomposition::Redex {
        context: Context { frames },
        redex,
        rule,
    }
}

/// Contract a redex by the given rule. Panics if the rule does not apply.
pub fn contract(redex: &Term, rule: Rule) -> Term {
    use TermKind as K;
    match (rule, redex.kind()) {
        (Rule::Proj, K::Proj(d, p)) => match p.kind() {
            K::Pair(a, b) => {
                if *d == 1 {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            _ => panic!("proj rule on {redex}"),
        },
        (Rule::Beta, K::App(f, a)) => match f.kind() {
            K::Lam(_, _, body) => body.instantiate(std::slice::from_ref(a)),
            _ => panic!("beta rule on {redex}"),
        },
        (Rule::UnfoldFold, K::Unfold(f)) => match f.kind() {
            K::Fold(_, t) => t.clone(),
            _ => panic!("unfold rule on {redex}"),
        },
        (Rule::PrevSubst, K::Prev(s, b)) => {
            Term::mk(K::Prev(Subst::empty(), b.instantiate(&s.terms())))
        }
        (Rule::PrevNext, K::Prev(_, b)) => match b.kind() {
            K::Next(t) => t.clone(),
            _ => panic!("prev-next rule on {redex}"),
        },
        (Rule::UnboxBox, K::Unbox(b)) => match b.kind() {
            K::BoxI(s, t) => t.instantiate(&s.terms()),
            _ => panic!("unbox rule on {redex}"),
        },
        (Rule::LaterApp, K::LaterApp(a, b)) => match (a.kind(), b.kind()) {
            (K::Next(f), K::Next(x)) => Term::next(Term::app(f.clone(), x.clone())),
            _ => panic!("<*> rule on {redex}"),
        },
        (Rule::CaseInj, K::Case(s, _, b1, _, b2)) => match s.kind() {
            K::Inj(d, _, t) => {
                let b = if *d == 1 { b1 } else { b2 };
                b.instantiate(std::slice::from_ref(t))
            }
            _ => panic!("case rule on {redex}"),
        },
        (Rule::BoxSumSubst, K::BoxSum(s, b)) => {
            Term::mk(K::BoxSum(Subst::empty(), b.instantiate(&s.terms())))
        }
        (Rule::BoxSumInj, K::BoxSum(_, b)) => match b.kind() {
            K::Inj(d, ty, t) => {
                let ty = ty.as_ref().map(|ty| match ty {
                    Type::Sum(l, r) => Type::sum(Type::Box(l.clone()), Type::Box(r.clone())),
                    other => other.clone(),
                });
                Term::inj(*d, ty, Term::mk(K::BoxI(Subst::empty(), t.clone())))
            }
            _ => panic!("boxplus rule on {redex}"),
        },
        (Rule::Prim, K::Prim(op, a, b)) => {
            let (a, b) = (a.as_numeral(), b.as_numeral());
            match (a, b) {
                (Some(a), Some(b)) => Term::numeral(op.apply(a, b)),
                _ => panic!("prim rule on {redex}"),
            }
        }
        _ => panic!("rule {rule:?} does not apply to {redex}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Stepped(Term, Rule),
    IsValue,
    Stuck(StuckInfo),
}

pub fn step(t: &Term) -> StepResult {
    match decompose(t) {
        Decomposition::Value => StepResult::IsValue,
        Decomposition::Stuck(info) => StepResult::Stuck(info),
        Decomposition::Redex {
            context,
            redex,
            rule,
        } => StepResult::Stepped(context.plug(contract(&redex, rule)), rule),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("step budget of {budget} exhausted")]
    BudgetExceeded { budget: u64, last: Term },
    #[error("evaluation stuck: {0}")]
    Stuck(StuckInfo),
}

#[derive(Clone, Debug)]
pub struct Evaluated {
    pub value: Term,
    pub steps: u64,
}

/// Iterate `step` until a value is reached or `budget` steps have been taken.
pub fn eval(t: &Term, budget: u64) -> Result<Evaluated, EvalError> {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        match step(&cur) {
            StepResult::IsValue => return Ok(Evaluated { value: cur, steps }),
            StepResult::Stuck(info) => return Err(EvalError::Stuck(info)),
            StepResult::Stepped(next, _) => {
                if steps == budget {
                    return Err(EvalError::BudgetExceeded { budget, last: cur });
                }
                steps += 1;
                cur = next;
            }
        }
    }
}

/// Every term from the input to its value.
#[derive(Clone, Debug)]
pub struct Trace {
    pub terms: Vec<Term>,
    pub rules: Vec<Rule>,
    pub budget: u64,
    pub outcome: Result<(), EvalError>,
}

impl Trace {
    pub fn steps(&self) -> usize {
        self.rules.len()
    }

    pub fn last(&self) -> &Term {
        self.terms.last().expect("trace is never empty")
    }
}

pub fn trace(t: &Term, budget: u64) -> Trace {
    let mut terms = vec![t.clone()];
    let mut rules = Vec::new();
    let outcome = loop {
        let cur = terms.last().unwrap();
        match step(cur) {
            StepResult::IsValue => break Ok(()),
            StepResult::Stuck(info) => break Err(EvalError::Stuck(info)),
            StepResult::Stepped(next, rule) => {
                if rules.len() as u64 == budget {
                    break Err(EvalError::BudgetExceeded {
                        budget,
                        last: cur.clone(),
                    });
                }
                rules.push(rule);
                terms.push(next);
            }
        }
    };
    Trace {
        terms,
        rules,
        budget,
        outcome,
    }
}

/// Steps shared across several evaluations.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub limit: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    pub fn eval(&mut self, t: &Term) -> Result<Term, EvalError> {
        match eval(t, self.limit - self.used) {
            Ok(ev) => {
                self.used += ev.steps;
                Ok(ev.value)
            }
            Err(EvalError::BudgetExceeded { last, .. }) => {
                self.used = self.limit;
                Err(EvalError::BudgetExceeded {
                    budget: self.limit,
                    last,
                })
            }
            Err(e) => Err(e),
        }
    }

    /// Evaluate a term of type Nat to its numeral.
    pub fn eval_nat(&mut self, t: &Term) -> Result<u64, EvalError> {
        let v = self.eval(t)?;
        v.as_numeral().ok_or_else(|| {
            EvalError::Stuck(StuckInfo {
                at: v.clone(),
                reason: "expected a numeral".into(),
            })
        })
    }
}

/// `[hdg s, hdg (prev (tlg s)), ...]` for a closed guarded stream.
pub fn force_guarded_stream(
    s: &Term,
    n: usize,
    budget: &mut Budget,
) -> Result<Vec<u64>, EvalError> {
    let mut out = Vec::with_capacity(n);
    let mut cur = s.clone();
    for k in 0..n {
        out.push(budget.eval_nat(&Term::app(stdlib::hdg(), cur.clone()))?);
        if k + 1 < n {
            let tail = Term::mk(TermKind::Prev(
                Subst::empty(),
                Term::app(stdlib::tlg(), cur.clone()),
            ));
            cur = budget.eval(&tail)?;
        }
    }
    Ok(out)
}

/// `[hd s, hd (tl s), ...]` for a closed coinductive stream.
pub fn force_coinductive_stream(
    s: &Term,
    n: usize,
    budget: &mut Budget,
) -> Result<Vec<u64>, EvalError> {
    let mut out = Vec::with_capacity(n);
    let mut cur = s.clone();
    for k in 0..n {
        out.push(budget.eval_nat(&Term::app(stdlib::hd(), cur.clone()))?);
        if k + 1 < n {
            cur = budget.eval(&Term::app(stdlib::tl(), cur.clone()))?;
        }
    }
    Ok(out)
}


#[cfg(test)]
mod corpus_tests {
    use super::*;
    use crate::prelude::load_prelude;

    fn guarded(name: &str, n: usize) -> Vec<u64> {
        let p = load_prelude();
        force_guarded_stream(
            &p.get(name).unwrap().term,
            n,
            &mut Budget::new(DEFAULT_BUDGET),
        )
        .unwrap()
    }

    #[test]
    fn toggle_and_nats() {
        assert_eq!(guarded("toggle", 4), vec![1, 0, 1, 0]);
        assert_eq!(guarded("nats", 4), vec![0, 1, 2, 3]);
        assert_eq!(guarded("paperfolds", 8), vec![1, 1, 0, 1, 1, 0, 0, 1]);
    }

    #[test]
    fn coinductive_prefixes() {
        let p = load_prelude();
        let nats = Term::box_iota(p.get("nats").unwrap().term.clone());
        let mut b = Budget::new(DEFAULT_BUDGET);
        assert_eq!(
            force_coinductive_stream(&nats, 3, &mut b).unwrap(),
            vec![0, 1, 2]
        );
        let e2 = Term::app(p.get("every2nd_box").unwrap().term.clone(), nats);
        assert_eq!(
            force_coinductive_stream(&e2, 4, &mut b).unwrap(),
            vec![0, 2, 4, 6]
        );
        let toggle = Term::box_iota(p.get("toggle").unwrap().term.clone());
        assert_eq!(
            force_coinductive_stream(&toggle, 2, &mut b).unwrap(),
            vec![1, 0]
        );
    }
}
