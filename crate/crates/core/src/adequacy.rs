//! The logical relation between semantic elements and closed terms, and
//! the fundamental lemma and adequacy checks built on it.

use std::cmp::Ordering;
use std::fmt;

use crate::denote::{denote_closed, render, unfold_iso, DenoteError, Mode, SemElem, SECTION_SLACK};
use crate::eval::{eval, EvalError, DEFAULT_BUDGET};
use crate::samples::Sampler;
use crate::syntax::{Term, TermKind, Type};

/// The measure `(box depth, index, unguarded size)` of a relation instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Metric {
    pub box_depth: usize,
    pub index: usize,
    pub usize: usize,
}

impl Metric {
    pub fn of(ty: &Type, index: usize) -> Metric {
        Metric {
            box_depth: ty.box_depth(),
            index,
            usize: ty.usize(),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.box_depth, self.index, self.usize)
    }
}

/// Counts of recursive relation calls and of calls whose measure failed to
/// decrease.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetricStats {
    pub checks: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

impl MetricStats {
    pub fn absorb(&mut self, other: &MetricStats) {
        self.checks += other.checks;
        self.violations += other.violations;
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation.clone();
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelVerdict {
    pub holds: bool,
    pub mode: Mode,
    pub index: usize,
    pub ty: Type,
    /// Set when evaluation exhausted its budget.
    pub inconclusive: bool,
    /// The first distinguishing observation.
    pub witness: Option<String>,
    pub steps: u64,
    pub metric: MetricStats,
}

enum Failure {
    No(String),
    Eval(EvalError),
    Denote(DenoteError),
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::Eval(e)
    }
}

impl From<DenoteError> for Failure {
    fn from(e: DenoteError) -> Self {
        Failure::Denote(e)
    }
}

type Res = Result<Mode, Failure>;

/// State for one run of the relation.
pub struct Relation<'a> {
    sampler: &'a Sampler,
    budget: u64,
    steps: u64,
    pub stats: MetricStats,
}

impl<'a> Relation<'a> {
    pub fn new(sampler: &'a Sampler) -> Relation<'a> {
        Relation {
            sampler,
            budget: DEFAULT_BUDGET,
            steps: 0,
            stats: MetricStats::default(),
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Decide `a R^i_A t`.
    pub fn rel(&mut self, a: &SemElem, t: &Term, ty: &Type, i: usize) -> RelVerdict {
        let before = self.stats.clone();
        self.stats = MetricStats::default();
        let steps = self.steps;
        let result = self.go(a, t, ty, i, None);
        let metric = std::mem::replace(&mut self.stats, before);
        self.stats.absorb(&metric);
        let mut v = RelVerdict {
            holds: false,
            mode: Mode::Exact,
            index: i,
            ty: ty.clone(),
            inconclusive: false,
            witness: None,
            steps: self.steps - steps,
            metric,
        };
        match result {
            Ok(mode) => {
                v.holds = true;
                v.mode = mode;
            }
            Err(Failure::No(w)) => v.witness = Some(w),
            Err(Failure::Eval(e)) => {
                v.inconclusive = matches!(e, EvalError::BudgetExceeded { .. });
                v.witness = Some(e.to_string());
            }
            Err(Failure::Denote(e)) => v.witness = Some(format!("semantics: {e}")),
        }
        v
    }

    fn eval(&mut self, t: &Term) -> Result<Term, Failure> {
        let ev = eval(t, self.budget)?;
        self.steps += ev.steps;
        Ok(ev.value)
    }

    fn go(&mut self, a: &SemElem, t: &Term, ty: &Type, i: usize, parent: Option<Metric>) -> Res {
        let here = Metric::of(ty, i);
        if let Some(p) = parent {
            self.stats.checks += 1;
            if here.cmp(&p) != Ordering::Less {
                self.stats.violations += 1;
                if self.stats.first_violation.is_none() {
                    self.stats.first_violation =
                        Some(format!("{here} at `{ty}` does not decrease from {p}"));
                }
            }
        }
        let v = self.eval(t)?;
        let no = |what: &str| {
            Failure::No(format!(
                "at `{ty}`, index {i}: {what}, term reduced to `{v}`"
            ))
        };
        match (ty, a) {
            (Type::Unit, SemElem::Unit) => match v.kind() {
                TermKind::Unit => Ok(Mode::Exact),
                _ => Err(no("expected ()")),
            },
            (Type::Nat, SemElem::Nat(n)) => match v.as_numeral() {
                Some(m) if m == *n => Ok(Mode::Exact),
                _ => Err(no(&format!("expected the numeral {n}"))),
            },
            (Type::Prod(l, r), SemElem::Pair(x, y)) => match v.kind() {
                TermKind::Pair(t1, t2) => {
                    let m1 = self.go(x, t1, l, i, Some(here))?;
                    let m2 = self.go(y, t2, r, i, Some(here))?;
                    Ok(m1.join(m2))
                }
                _ => Err(no("expected a pair")),
            },
            (Type::Sum(l, r), SemElem::Inj(d, x)) => match v.kind() {
                TermKind::Inj(e, _, u) if e == d => {
                    self.go(x, u, if *d == 1 { l } else { r }, i, Some(here))
                }
                _ => Err(no(&format!("expected in{d}"))),
            },
            (Type::Arrow(dom, cod), SemElem::Fun(f)) => {
                let TermKind::Lam(_, _, body) = v.kind() else {
                    return Err(no("expected an abstraction"));
                };
                for j in 1..=i {
                    for u in self.sampler.terms(dom) {
                        let au = denote_closed(&u, j)?;
                        let fa = f.apply(j, &au)?;
                        let s = body.instantiate(std::slice::from_ref(&u));
                        self.go(&fa, &s, cod, j, Some(here)).map_err(|e| match e {
                            Failure::No(w) => Failure::No(format!(
                                "applied at index {j} to `{u}` ({}): {w}",
                                render(&au, j)
                            )),
                            other => other,
                        })?;
                    }
                }
                Ok(Mode::Sampled)
            }
            (Type::Mu(..), SemElem::Fold(_)) => match v.kind() {
                TermKind::Fold(_, u) => {
                    let unfolded = ty.unfold_mu().expect("recursive type");
                    self.go(&unfold_iso(ty, a)?, u, &unfolded, i, Some(here))
                }
                _ => Err(no("expected fold")),
            },
            (Type::Later(inner), SemElem::LaterUnit | SemElem::Later(_)) => {
                let TermKind::Next(u) = v.kind() else {
                    return Err(no("expected next"));
                };
                match a {
                    SemElem::Later(x) if i > 1 => self.go(x, u, inner, i - 1, Some(here)),
                    SemElem::LaterUnit if i == 1 => Ok(Mode::Exact),
                    _ => Err(no("element does not live at this index")),
                }
            }
            (Type::Box(inner), SemElem::Section(s)) => {
                let TermKind::BoxI(sigma, body) = v.kind() else {
                    return Err(no("expected box"));
                };
                let u = body.instantiate(&sigma.terms());
                for j in 1..=i + SECTION_SLACK {
                    self.go(&s.at(j)?, &u, inner, j, Some(here))
                        .map_err(|e| match e {
                            Failure::No(w) => Failure::No(format!("section {j}: {w}")),
                            other => other,
                        })?;
                }
                Ok(Mode::Sampled)
            }
            _ => Err(no(&format!(
                "element {} does not inhabit the type",
                render(a, i)
            ))),
        }
    }
}

/// `a R^i_A t` with a fresh relation state.
pub fn rel(a: &SemElem, t: &Term, ty: &Type, i: usize, sampler: &Sampler) -> RelVerdict {
    Relation::new(sampler).rel(a, t, ty, i)
}

/// Whether the denotation of a closed term is related to the term itself.
pub fn check_fundamental(t: &Term, ty: &Type, i: usize, sampler: &Sampler) -> RelVerdict {
    match denote_closed(t, i) {
        Ok(a) => rel(&a, t, ty, i, sampler),
        Err(e) => RelVerdict {
            holds: false,
            mode: Mode::Exact,
            index: i,
            ty: ty.clone(),
            inconclusive: false,
            witness: Some(format!("semantics: {e}")),
            steps: 0,
            metric: MetricStats::default(),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatAdequacy {
    pub denotation: Option<u64>,
    pub value: Option<u64>,
}

impl NatAdequacy {
    pub fn holds(&self) -> bool {
        self.denotation.is_some() && self.denotation == self.value
    }
}

/// Compare the denotation of a closed Nat term with its value.
pub fn check_adequacy_nat(t: &Term, i: usize) -> NatAdequacy {
    let denotation = match denote_closed(t, i) {
        Ok(SemElem::Nat(n)) => Some(n),
        _ => None,
    };
    let value = eval(t, DEFAULT_BUDGET)
        .ok()
        .and_then(|ev| ev.value.as_numeral());
    NatAdequacy { denotation, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prelude::load_prelude;

    fn def(name: &str) -> (Term, Type) {
        let p = load_prelude();
        let d = p.get(name).unwrap();
        (d.term.clone(), d.ty.clone())
    }

    #[test]
    fn numerals() {
        let s = Sampler::new();
        let v = rel(&SemElem::Nat(3), &Term::numeral(3), &Type::Nat, 2, &s);
        assert!(v.holds);
        assert_eq!(v.mode, Mode::Exact);
        assert!(!rel(&SemElem::Nat(2), &Term::numeral(3), &Type::Nat, 2, &s).holds);
    }

    #[test]
    fn later_at_index_one_needs_no_subcheck() {
        let s = Sampler::new();
        let t = Term::next(Term::app(Term::zero(), Term::zero()));
        let v = rel(&SemElem::LaterUnit, &t, &Type::later(Type::Nat), 1, &s);
        assert!(v.holds);
        assert_eq!(v.mode, Mode::Exact);
    }

    #[test]
    fn paperfolds_is_related_to_its_denotation() {
        let s = Sampler::new();
        let (t, ty) = def("paperfolds");
        let v = check_fundamental(&t, &ty, 4, &s);
        assert!(v.holds, "{:?}", v.witness);
        assert_eq!(v.mode, Mode::Exact);
        assert_eq!(v.metric.violations, 0);
        assert!(v.metric.checks > 0);
    }

    #[test]
    fn boxed_toggle_is_sampled() {
        let s = Sampler::new();
        let t = Term::box_iota(def("toggle").0);
        let v = check_fundamental(&t, &Type::stream(), 2, &s);
        assert!(v.holds, "{:?}", v.witness);
        assert_eq!(v.mode, Mode::Sampled);
    }

    #[test]
    fn zero_at_index_one() {
        let v = check_fundamental(&Term::zero(), &Type::Nat, 1, &Sampler::new());
        assert!(v.holds && v.mode == Mode::Exact);
    }

    #[test]
    fn functions() {
        let s = Sampler::new();
        let (t, ty) = def("interleave");
        let v = check_fundamental(&t, &ty, 3, &s);
        assert!(v.holds, "{:?}", v.witness);
        assert_eq!(v.mode, Mode::Sampled);
    }

    #[test]
    fn wrong_element_is_rejected() {
        let s = Sampler::new();
        let (t, ty) = def("toggle");
        let nats = denote_closed(&def("nats").0, 3).unwrap();
        let v = rel(&nats, &t, &ty, 3, &s);
        assert!(!v.holds);
        assert!(v.witness.is_some());
    }

    #[test]
    fn nat_adequacy() {
        let id = Term::app(Term::lam("x", None, Term::var("x")), Term::zero());
        assert!(check_adequacy_nat(&id, 1).holds());
        let head = Term::app(crate::stdlib::hdg(), def("paperfolds").0);
        let r = check_adequacy_nat(&head, 3);
        assert_eq!(r.value, Some(1));
        assert!(r.holds());
    }
}
