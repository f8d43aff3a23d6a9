mod common;

use glc::bde::{check_equations, check_lift, parse_specs, sample_streams, Session, STREAMS_BDE};
use glc::eval::{force_coinductive_stream, force_guarded_stream, Budget, DEFAULT_BUDGET};
use glc::prelude::load_prelude;
use glc::syntax::TermKind;
use glc::typecheck::infer_closed;
use glc::{Term, Type};

const DEPTH: usize = 8;

fn compiled() -> Session {
    let mut s = Session::new();
    s.compile_file(STREAMS_BDE).unwrap();
    s
}

fn guarded_samples() -> Vec<Term> {
    sample_streams()
        .into_iter()
        .map(|(_, t)| Term::unbox(t))
        .collect()
}

fn prefix(t: &Term) -> Vec<u64> {
    force_guarded_stream(t, DEPTH, &mut Budget::new(DEFAULT_BUDGET)).unwrap()
}

#[test]
fn unfolding_the_fixed_point_preserves_prefixes() {
    common::big_stack(|| {
        let s = compiled();
        for c in &s.compiled {
            let TermKind::App(theta, phi) = c.guarded.kind() else {
                panic!("{} is not a fixed point", c.spec.name)
            };
            let unfolded = Term::app(phi.clone(), Term::next(c.guarded.clone()));
            assert_eq!(
                infer_closed(&unfolded).unwrap(),
                infer_closed(&c.guarded).unwrap()
            );
            assert!(matches!(theta.kind(), TermKind::Lam(..)));
            for x in guarded_samples() {
                for y in guarded_samples() {
                    let a = prefix(&Term::apps(c.guarded.clone(), [x.clone(), y.clone()]));
                    let b = prefix(&Term::apps(unfolded.clone(), [x.clone(), y.clone()]));
                    assert_eq!(a, b, "{}", c.spec.name);
                }
            }
        }
    });
}

#[test]
fn plus_is_commutative() {
    common::big_stack(|| {
        let s = compiled();
        let plus = &s.get("plus").unwrap().lifted;
        let samples = sample_streams();
        for (_, x) in &samples {
            for (_, y) in &samples {
                let mut b = Budget::new(DEFAULT_BUDGET);
                let xy = force_coinductive_stream(
                    &Term::apps(plus.clone(), [x.clone(), y.clone()]),
                    DEPTH,
                    &mut b,
                );
                let yx = force_coinductive_stream(
                    &Term::apps(plus.clone(), [y.clone(), x.clone()]),
                    DEPTH,
                    &mut b,
                );
                assert_eq!(xy.unwrap(), yx.unwrap());
            }
        }
    });
}

#[test]
fn products_by_convolution() {
    common::big_stack(|| {
        let s = compiled();
        let times = &s.get("times").unwrap().guarded;
        let p = load_prelude();
        let nats = p.get("nats").unwrap().term.clone();
        let got = prefix(&Term::apps(times.clone(), [nats.clone(), nats]));
        let want: Vec<u64> = (0..DEPTH as u64)
            .map(|n| (0..=n).map(|k| k * (n - k)).sum())
            .collect();
        assert_eq!(got, want);
    });
}

#[test]
fn recompiling_dependencies_gives_the_same_streams() {
    common::big_stack(|| {
        let first = compiled();
        let second = compiled();
        let a = &first.get("times").unwrap().guarded;
        let b = &second.get("times").unwrap().guarded;
        assert_eq!(a, b);
        for x in guarded_samples() {
            let y = guarded_samples().remove(0);
            assert_eq!(
                prefix(&Term::apps(a.clone(), [x.clone(), y.clone()])),
                prefix(&Term::apps(b.clone(), [x, y]))
            );
        }
    });
}

#[test]
fn lifting_commutes_with_unboxing() {
    common::big_stack(|| {
        let s = compiled();
        for c in &s.compiled {
            assert_eq!(
                check_lift(&c.guarded, c.spec.arity, DEPTH).unwrap(),
                None,
                "{}",
                c.spec.name
            );
        }
        let p = load_prelude();
        let succ = Term::lam("n", Some(Type::Nat), Term::succ(Term::var("n")));
        let mapg = Term::app(p.get("mapg").unwrap().term.clone(), succ);
        assert_eq!(check_lift(&mapg, 1, DEPTH).unwrap(), None);
    });
}

#[test]
fn equations_of_user_specifications() {
    common::big_stack(|| {
        let mut s = compiled();
        let text = "bde shift(1) { head = 7; tail = y1; }\n\
                    bde sq(1) { head = x1 * x1 + 1; tail = plus(f(z1), rho(x1)); }\n\
                    bde ones(0) { head = 1; tail = f; }";
        s.compile_file(text).unwrap();
        for c in &s.compiled {
            let r = check_equations(&s, &c.spec, &c.lifted, DEPTH).unwrap();
            assert!(r.holds(), "{r}");
        }
        let shift = &s.get("shift").unwrap().guarded;
        let nats = load_prelude().get("nats").unwrap().term.clone();
        assert_eq!(
            prefix(&Term::app(shift.clone(), nats)),
            vec![7, 0, 1, 2, 3, 4, 5, 6]
        );
        assert_eq!(prefix(&s.get("ones").unwrap().guarded), vec![1; DEPTH]);
    });
}

#[test]
fn wrong_implementations_are_caught() {
    common::big_stack(|| {
        let s = compiled();
        let spec = s.get("plus").unwrap().spec.clone();
        let swapped = parse_specs("bde plus(2) { head = x1 + x2; tail = f(z1, y2); }").unwrap();
        let bad = Session::new().compile_detached(&swapped[0]).unwrap();
        let r = check_equations(&s, &spec, &bad.lifted, DEPTH).unwrap();
        let m = r.mismatch.expect("mismatch");
        assert_eq!(m.equation, "tail");
        assert!(m.position >= 1);
    });
}
