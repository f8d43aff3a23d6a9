//! The acceptance criteria, one PASS/FAIL line each. Runs without the test
//! harness so the lines always reach the terminal; exits non-zero if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use glc::adequacy::{check_adequacy_nat, MetricStats, Relation};
use glc::bde::{check_equations, check_lift, sample_streams, Session, STREAMS_BDE};
use glc::denote::{denote_closed, sem_equal, Mode};
use glc::eval::{
    decompose, eval, force_coinductive_stream, force_guarded_stream, trace, Budget, Decomposition,
};
use glc::gen::{gen_closed, Gen, DEFAULT_MAX_SIZE};
use glc::parser::{parse_program_with, parse_type};
use glc::prelude::{PRELUDE_FILE, PRELUDE_SOURCE, STREAMS_FILE, STREAMS_SOURCE};
use glc::samples::{elaborate, nat_probes, Sampler};
use glc::syntax::guarded_in;
use glc::typecheck::{check_program_with, infer_closed, ErrorKind, Program};
use glc::{Term, Type};

const BUDGET: u64 = 1_000_000;
const GENERATED: u64 = 600;
const DETERMINISM_TERMS: u64 = 1000;
const TYPE_PAIRS: usize = 1000;
const PREFIX: usize = 16;
const BDE_DEPTH: usize = 8;

type Outcome = Result<String, String>;

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Option<Duration>,
    run: fn(&mut Shared) -> Outcome,
}

/// State threaded through the criteria: the checked prelude, the corpus
/// terms and the metric counts of every relation check.
struct Shared {
    prelude: Program,
    corpus: Vec<(String, Term, Type)>,
    metric: MetricStats,
}

fn check_sources() -> Result<Program, String> {
    let mut p = Program::default();
    for (text, file) in [
        (STREAMS_SOURCE, STREAMS_FILE),
        (PRELUDE_SOURCE, PRELUDE_FILE),
    ] {
        let src = parse_program_with(text, file, &p.aliases).map_err(|e| format!("{file}: {e}"))?;
        p = check_program_with(&p, &src).map_err(|e| e.render(file))?;
    }
    Ok(p)
}

fn expect_rejection(p: &Program, src: &str, kind: ErrorKind) -> Result<(), String> {
    let parsed = parse_program_with(src, "<negative>", &p.aliases).map_err(|e| e.to_string())?;
    match check_program_with(p, &parsed) {
        Ok(_) => Err(format!("accepted: {src}")),
        Err(e) if e.kind == kind => Ok(()),
        Err(e) => Err(format!(
            "{src}: expected {}, got {}",
            kind.as_str(),
            e.render("<negative>")
        )),
    }
}

const STATED_TYPES: &[(&str, &str)] = &[
    ("cons", "Nat -> |>StrG -> StrG"),
    ("hdg", "StrG -> Nat"),
    ("tlg", "StrG -> |>StrG"),
    ("second_g", "StrG -> |>Nat"),
    ("third_g", "StrG -> |>|>Nat"),
    ("iterate", "|>(Nat -> Nat) -> Nat -> StrG"),
    ("nats", "StrG"),
    ("interleave", "StrG -> |>StrG -> StrG"),
    ("toggle", "StrG"),
    ("paperfolds", "StrG"),
    ("foldr", "((Nat * |>StrG) -> StrG) -> StrG -> StrG"),
    ("mapg", "(Nat -> Nat) -> StrG -> StrG"),
    ("hd", "Str -> Nat"),
    ("tl", "Str -> Str"),
    ("second", "Str -> Nat"),
    ("lim", "#(StrG -> StrG) -> Str -> Str"),
    ("every2nd", "Str -> StrG"),
    ("every2nd_box", "Str -> Str"),
    ("plusg", "StrG -> StrG -> StrG"),
    ("timesg", "StrG -> StrG -> StrG"),
];

fn typing(sh: &mut Shared) -> Outcome {
    let p = check_sources()?;
    for (name, stated) in STATED_TYPES {
        let want = parse_type(stated, &p.aliases).map_err(|e| format!("{stated}: {e}"))?;
        let d = p.get(name).ok_or_else(|| format!("{name} is missing"))?;
        if d.ty != want {
            return Err(format!("{name} : {} but expected {stated}", d.ty));
        }
    }
    expect_rejection(
        &p,
        "def bad : StrG = fix s. interleave s (next toggle);",
        ErrorKind::Mismatch,
    )?;
    expect_rejection(
        &p,
        "def bad : StrG = fix s. interleave (prev iota. s) (next toggle);",
        ErrorKind::NonconstantContext,
    )?;
    let n = p.defs.len();
    sh.prelude = p;
    Ok(format!(
        "{n} definitions checked, {} stated types match, 2 rejections",
        STATED_TYPES.len()
    ))
}

fn corpus(p: &Program) -> Result<Vec<(String, Term, Type)>, String> {
    let mut out: Vec<_> = p
        .defs
        .iter()
        .map(|d| (d.name.to_string(), d.term.clone(), d.ty.clone()))
        .collect();
    for src in nat_probes() {
        let (t, ty) = elaborate(p, &src)?;
        out.push((src, t, ty));
    }
    Ok(out)
}

fn normalization(sh: &mut Shared) -> Outcome {
    sh.corpus = corpus(&sh.prelude)?;
    for (name, t, _) in &sh.corpus {
        let v = eval(t, BUDGET).map_err(|e| format!("{name}: {e}"))?;
        if !common::is_value(&v.value) {
            return Err(format!("{name}: result {} is not a value", v.value));
        }
    }
    let mut max_steps = 0;
    for seed in 0..GENERATED {
        let g = gen_closed(seed, DEFAULT_MAX_SIZE);
        if g.size > DEFAULT_MAX_SIZE {
            return Err(format!(
                "seed {seed}: size {} exceeds {DEFAULT_MAX_SIZE}",
                g.size
            ));
        }
        let v = eval(&g.term, BUDGET).map_err(|e| format!("seed {seed}: {}: {e}", g.term))?;
        if !common::is_value(&v.value) {
            return Err(format!("seed {seed}: {} is not a value", v.value));
        }
        max_steps = max_steps.max(v.steps);
    }
    Ok(format!(
        "{} corpus terms and {GENERATED} generated terms reach values, at most {max_steps} steps",
        sh.corpus.len()
    ))
}

fn unique_decomposition(t: &Term) -> Result<bool, String> {
    let alts = common::all_decompositions(t);
    match decompose(t) {
        Decomposition::Value if common::is_value(t) && alts.is_empty() => Ok(false),
        Decomposition::Value => Err(format!("{t}: value with a redex")),
        Decomposition::Redex { context, redex, .. } => {
            if alts.len() == 1 && alts[0].0 == context.frames.len() && alts[0].1 == redex {
                Ok(true)
            } else {
                Err(format!("{t}: {} decompositions", alts.len()))
            }
        }
        Decomposition::Stuck(info) => Err(format!("{t}: stuck: {info}")),
    }
}

fn determinism(_: &mut Shared) -> Outcome {
    let mut redexes = 0;
    for seed in 0..DETERMINISM_TERMS {
        let g = gen_closed(1_000_000 + seed, DEFAULT_MAX_SIZE);
        for t in &trace(&g.term, 40).terms {
            redexes += unique_decomposition(t)? as usize;
        }
    }
    Ok(format!(
        "{DETERMINISM_TERMS} terms and their traces, {redexes} non-values with exactly one redex"
    ))
}

fn corpus_traces(sh: &Shared) -> Result<Vec<(String, Type, Vec<Term>)>, String> {
    sh.corpus
        .iter()
        .map(|(name, t, ty)| {
            let tr = trace(t, BUDGET);
            tr.outcome.map_err(|e| format!("{name}: {e}"))?;
            Ok((name.clone(), ty.clone(), tr.terms))
        })
        .collect()
}

fn subject_reduction(sh: &mut Shared) -> Outcome {
    let mut steps = 0;
    for (name, ty, terms) in corpus_traces(sh)? {
        for (k, t) in terms.iter().enumerate() {
            let got = infer_closed(t).map_err(|e| format!("{name} step {k}: {}", e.message))?;
            if got != ty {
                return Err(format!("{name} step {k}: {got} instead of {ty}"));
            }
        }
        steps += terms.len() - 1;
    }
    Ok(format!("{steps} corpus steps keep their type"))
}

fn soundness(sh: &mut Shared) -> Outcome {
    let sampler = Sampler::new();
    let (mut pairs, mut exact) = (0, 0);
    for (name, ty, terms) in corpus_traces(sh)? {
        for i in 1..=4 {
            let dens = terms
                .iter()
                .map(|t| denote_closed(t, i))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| format!("{name} at {i}: {e}"))?;
            for (k, w) in dens.windows(2).enumerate() {
                let v = sem_equal(&ty, i, &w[0], &w[1], &sampler);
                if !v.holds {
                    return Err(format!(
                        "{name} step {k} at {i}: {}",
                        v.witness.unwrap_or_default()
                    ));
                }
                pairs += 1;
                exact += (v.mode == Mode::Exact) as usize;
            }
        }
    }
    Ok(format!(
        "{pairs} consecutive denotations equal at indices 1..4, {exact} decided exactly"
    ))
}

fn adequacy(sh: &mut Shared) -> Outcome {
    let probes: Vec<_> = sh
        .corpus
        .iter()
        .filter(|(name, _, ty)| *ty == Type::Nat && name.contains(' '))
        .collect();
    if probes.len() < 50 {
        return Err(format!("only {} probes", probes.len()));
    }
    for (name, t, _) in &probes {
        for i in 1..=4 {
            let r = check_adequacy_nat(t, i);
            if !r.holds() {
                return Err(format!(
                    "{name} at {i}: denotation {:?}, value {:?}",
                    r.denotation, r.value
                ));
            }
        }
    }
    Ok(format!(
        "{} Nat probes agree with their values at indices 1..4",
        probes.len()
    ))
}

fn fundamental(sh: &mut Shared) -> Outcome {
    let sampler = Sampler::new();
    let mut rel = Relation::new(&sampler).with_budget(BUDGET);
    let mut sampled = 0;
    let defs: Vec<_> = sh
        .prelude
        .defs
        .iter()
        .map(|d| (d.name.clone(), d.term.clone(), d.ty.clone()))
        .collect();
    for (name, t, ty) in &defs {
        for i in 1..=3 {
            let a = denote_closed(t, i).map_err(|e| format!("{name} at {i}: {e}"))?;
            let v = rel.rel(&a, t, ty, i);
            if v.inconclusive {
                return Err(format!("{name} at {i}: budget exhausted"));
            }
            if !v.holds {
                return Err(format!("{name} at {i}: {}", v.witness.unwrap_or_default()));
            }
            sampled += (v.mode == Mode::Sampled) as usize;
        }
    }
    sh.metric.absorb(&rel.stats);
    Ok(format!(
        "{} definitions related to their denotations at indices 1..3, {sampled} sampled",
        defs.len()
    ))
}

fn prefixes(sh: &mut Shared) -> Outcome {
    let p = &sh.prelude;
    let guarded = |src: &str| -> Result<Vec<u64>, String> {
        let (t, _) = elaborate(p, src)?;
        force_guarded_stream(&t, PREFIX, &mut Budget::new(BUDGET))
            .map_err(|e| format!("{src}: {e}"))
    };
    let check = |what: &str, got: Vec<u64>, want: Vec<u64>| {
        if got == want {
            Ok(())
        } else {
            Err(format!("{what}: {got:?} instead of {want:?}"))
        }
    };
    let n = PREFIX as u64;
    check(
        "paperfolds",
        guarded("paperfolds")?,
        (0..PREFIX).map(common::paperfolds).collect(),
    )?;
    check(
        "toggle",
        guarded("toggle")?,
        (0..n).map(|k| (k % 2 == 0) as u64).collect(),
    )?;
    check("nats", guarded("nats")?, (0..n).collect())?;
    let (e, _) = elaborate(p, "every2nd_box (box nats)")?;
    let every = force_coinductive_stream(&e, PREFIX, &mut Budget::new(BUDGET))
        .map_err(|e| e.to_string())?;
    check("every2nd", every, (0..n).map(|k| 2 * k).collect())?;
    Ok(format!(
        "paperfolds, toggle, nats and every2nd agree on {PREFIX} elements"
    ))
}

fn bde(_: &mut Shared) -> Outcome {
    let mut s = Session::new();
    s.compile_file(STREAMS_BDE).map_err(|e| e.to_string())?;
    let mut tuples = 0;
    for c in &s.compiled {
        let r = check_equations(&s, &c.spec, &c.lifted, BDE_DEPTH).map_err(|e| e.to_string())?;
        if !r.holds() {
            return Err(r.to_string());
        }
        tuples += r.tuples;
        if let Some(diff) =
            check_lift(&c.guarded, c.spec.arity, BDE_DEPTH).map_err(|e| e.to_string())?
        {
            return Err(format!(
                "{}: lifting disagrees: {}",
                c.spec.name,
                diff.join("; ")
            ));
        }
    }
    let plus = &s.get("plus").ok_or("plus is missing")?.lifted;
    let samples = sample_streams();
    for (nx, x) in &samples {
        for (ny, y) in &samples {
            let mut b = Budget::new(BUDGET);
            let mut run = |a: &Term, c: &Term| {
                force_coinductive_stream(
                    &Term::apps(plus.clone(), [a.clone(), c.clone()]),
                    BDE_DEPTH,
                    &mut b,
                )
                .map_err(|e| e.to_string())
            };
            let (xy, yx) = (run(x, y)?, run(y, x)?);
            if xy != yx {
                return Err(format!("plus ({nx}) ({ny}) = {xy:?} but swapped {yx:?}"));
            }
        }
    }
    Ok(format!(
        "{} specs hold on {tuples} tuples to depth {BDE_DEPTH}, plus commutes, lifting agrees",
        s.compiled.len()
    ))
}

fn metric(sh: &mut Shared) -> Outcome {
    let m = &sh.metric;
    if m.checks == 0 {
        return Err("no relation checks were recorded".into());
    }
    if m.violations > 0 {
        return Err(format!(
            "{} of {} recursive calls did not decrease, first: {}",
            m.violations,
            m.checks,
            m.first_violation.clone().unwrap_or_default()
        ));
    }
    let (mut guarded, mut shallower, mut seed) = (0, 0, 0u64);
    while guarded < TYPE_PAIRS || shallower < TYPE_PAIRS {
        let mut g = Gen::new(seed, 0);
        seed += 1;
        let a = g.open_type("a", 3);
        let b = g.ty(2);
        let s = a.subst("a", &b);
        if guarded_in("a", &a) {
            if s.usize() > a.usize() {
                return Err(format!("unguarded size grows: {a} [{b} / a]"));
            }
            guarded += 1;
        }
        if b.box_depth() <= a.box_depth() {
            if s.box_depth() > a.box_depth() {
                return Err(format!("box depth grows: {a} [{b} / a]"));
            }
            shallower += 1;
        }
        if seed > 100 * TYPE_PAIRS as u64 {
            return Err("type generator rarely meets the premises".into());
        }
    }
    Ok(format!(
        "{} recursive calls decrease; substitution bounds hold on {guarded} and {shallower} type pairs",
        m.checks
    ))
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "typing corpus",
        limit: Some(Duration::from_secs(1)),
        run: typing,
    },
    Criterion {
        id: 2,
        name: "normalization",
        limit: Some(Duration::from_secs(60)),
        run: normalization,
    },
    Criterion {
        id: 3,
        name: "determinism",
        limit: Some(Duration::from_secs(30)),
        run: determinism,
    },
    Criterion {
        id: 4,
        name: "subject reduction",
        limit: None,
        run: subject_reduction,
    },
    Criterion {
        id: 5,
        name: "soundness",
        limit: Some(Duration::from_secs(60)),
        run: soundness,
    },
    Criterion {
        id: 6,
        name: "adequacy",
        limit: None,
        run: adequacy,
    },
    Criterion {
        id: 7,
        name: "fundamental lemma",
        limit: None,
        run: fundamental,
    },
    Criterion {
        id: 8,
        name: "stream prefixes",
        limit: None,
        run: prefixes,
    },
    Criterion {
        id: 9,
        name: "stream equations",
        limit: Some(Duration::from_secs(60)),
        run: bde,
    },
    Criterion {
        id: 10,
        name: "metric",
        limit: None,
        run: metric,
    },
];

fn main() {
    let failed = common::big_stack(|| {
        let mut sh = Shared {
            prelude: Program::default(),
            corpus: Vec::new(),
            metric: MetricStats::default(),
        };
        let mut failed = 0;
        for c in CRITERIA {
            let start = Instant::now();
            let mut out = (c.run)(&mut sh);
            let took = start.elapsed();
            if let (Ok(msg), Some(limit)) = (&out, c.limit) {
                if took > limit {
                    out = Err(format!("{msg}, but took {took:.2?} (limit {limit:?})"));
                }
            }
            match out {
                Ok(msg) => println!("PASS {:>2} {}: {msg} [{took:.2?}]", c.id, c.name),
                Err(msg) => {
                    failed += 1;
                    println!("FAIL {:>2} {}: {msg} [{took:.2?}]", c.id, c.name);
                }
            }
        }
        failed
    });
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
