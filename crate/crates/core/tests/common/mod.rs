//! Oracles written independently of the library's own algorithms.

#![allow(dead_code)]

use glc::syntax::TermKind as K;
use glc::Term;

/// Values read off the grammar: unit, numerals, pairs, abstractions,
/// folds, boxes, nexts and injections.
pub fn is_value(t: &Term) -> bool {
    match t.kind() {
        K::Unit
        | K::Zero
        | K::Pair(..)
        | K::Lam(..)
        | K::Fold(..)
        | K::BoxI(..)
        | K::Next(_)
        | K::Inj(..) => true,
        K::Succ(a) => is_numeral(a),
        _ => false,
    }
}

pub fn is_numeral(t: &Term) -> bool {
    match t.kind() {
        K::Zero => true,
        K::Succ(a) => is_numeral(a),
        _ => false,
    }
}

/// Whether `t` is the left-hand side of some reduction rule.
pub fn is_redex(t: &Term) -> bool {
    match t.kind() {
        K::Proj(_, a) => matches!(a.kind(), K::Pair(..)),
        K::App(f, _) => matches!(f.kind(), K::Lam(..)),
        K::Unfold(a) => matches!(a.kind(), K::Fold(..)),
        K::Prev(s, b) => !s.is_empty() || matches!(b.kind(), K::Next(_)),
        K::Unbox(a) => matches!(a.kind(), K::BoxI(..)),
        K::LaterApp(a, b) => matches!((a.kind(), b.kind()), (K::Next(_), K::Next(_))),
        K::Case(s, ..) => matches!(s.kind(), K::Inj(..)),
        K::BoxSum(s, b) => !s.is_empty() || matches!(b.kind(), K::Inj(..)),
        K::Prim(_, a, b) => is_numeral(a) && is_numeral(b),
        _ => false,
    }
}

/// The positions at which the evaluation-context grammar allows a hole.
fn hole_children(t: &Term) -> Vec<&Term> {
    match t.kind() {
        K::Succ(a) | K::Proj(_, a) | K::Unfold(a) | K::Unbox(a) | K::Abort(_, a) => vec![a],
        K::App(f, _) => vec![f],
        K::Case(s, ..) => vec![s],
        K::Prev(s, b) | K::BoxSum(s, b) if s.is_empty() => vec![b],
        K::LaterApp(a, b) => {
            if is_value(a) {
                vec![a, b]
            } else {
                vec![a]
            }
        }
        K::Prim(_, a, b) => {
            if is_numeral(a) {
                vec![a, b]
            } else {
                vec![a]
            }
        }
        _ => vec![],
    }
}

/// Every split of `t` into an evaluation context and a redex, as the
/// context depth and the redex.
pub fn all_decompositions(t: &Term) -> Vec<(usize, Term)> {
    let mut out = Vec::new();
    if is_redex(t) {
        out.push((0, t.clone()));
    }
    for c in hole_children(t) {
        out.extend(all_decompositions(c).into_iter().map(|(d, r)| (d + 1, r)));
    }
    out
}

/// Paperfolds by its recurrence: p(2k) = toggle(k), p(2k+1) = p(k).
pub fn paperfolds(n: usize) -> u64 {
    if n.is_multiple_of(2) {
        (n / 2).is_multiple_of(2) as u64
    } else {
        paperfolds(n / 2)
    }
}

/// Run `f` on a thread with a large stack.
pub fn big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(glc::cli::STACK_SIZE)
        .spawn(f)
        .unwrap()
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}
