//! Behavioural differential equations: stream functions specified by their
//! head and tail, compiled to guarded fixed points and lifted to
//! coinductive streams.
//!
//! A specification file holds entries of the form
//!
//! ```text
//! bde plus(2) { head = x1 + x2; tail = f(z1, z2); }
//! ```
//!
//! The head is an arithmetic expression over `x1..xk`. The tail is a
//! stream expression over `x1..xk` (a head read as the stream `rho(x)`),
//! `y1..yk` (the arguments), `z1..zk` (their tails), `rho(h)` for an
//! arithmetic `h`, the function being defined `f`, and earlier entries.

use std::collections::BTreeMap;
use std::fmt;

use crate::eval::{
    force_coinductive_stream, force_guarded_stream, Budget, EvalError, DEFAULT_BUDGET,
};
use crate::parser::lexer::{tokenize, Kw, Sym, Tok, Token};
use crate::parser::{parse_program_with, pretty_term, pretty_term_annotated, ParseError, Span};
use crate::prelude::{load_prelude, load_streams};
use crate::stdlib;
use crate::syntax::{Name, PrimOp, Term, Type};
use crate::typecheck::{check_program_with, Program, TypeError};

/// Arithmetic over the heads of the arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeadExpr {
    Num(u64),
    /// `x_i`, one-based.
    X(usize),
    Prim(PrimOp, Box<HeadExpr>, Box<HeadExpr>),
}

impl HeadExpr {
    pub fn eval(&self, xs: &[u64]) -> u64 {
        match self {
            HeadExpr::Num(n) => *n,
            HeadExpr::X(i) => xs[i - 1],
            HeadExpr::Prim(op, a, b) => op.apply(a.eval(xs), b.eval(xs)),
        }
    }
}

/// A stream-valued tail expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailExpr {
    /// The stream with the given head followed by zeros.
    Rho(HeadExpr),
    /// `y_i`
    Y(usize),
    /// `z_i`
    Z(usize),
    /// A recursive call of the function being defined.
    Rec(Vec<TailExpr>),
    /// A call of an earlier entry.
    Call(Name, Vec<TailExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BdeSpec {
    pub name: Name,
    pub arity: usize,
    pub head: HeadExpr,
    pub tail: TailExpr,
    pub span: Span,
}

/// Unchecked syntax of one entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSpec {
    pub name: Name,
    pub arity: usize,
    pub head: Raw,
    pub tail: Raw,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Raw {
    Num(u64, Span),
    Var(Name, Span),
    Prim(PrimOp, Box<Raw>, Box<Raw>),
    Call(Name, Vec<Raw>, Span),
}

impl Raw {
    fn span(&self) -> Span {
        match self {
            Raw::Num(_, s) | Raw::Var(_, s) | Raw::Call(_, _, s) => *s,
            Raw::Prim(_, a, _) => a.span(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct SpecError {
    pub span: Span,
    /// The offending variable or symbol.
    pub symbol: String,
    pub message: String,
}

fn spec_error(span: Span, symbol: &str, message: String) -> SpecError {
    SpecError {
        span,
        symbol: symbol.to_string(),
        message,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BdeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("compiled term is ill-typed: {}", .0.message)]
    Internal(TypeError),
}

// Parsing

struct P {
    toks: Vec<Token>,
    pos: usize,
}

impl P {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: &[&str]) -> ParseError {
        ParseError::new(
            self.span(),
            expected.iter().map(|s| s.to_string()).collect(),
            &self.peek().to_string(),
        )
    }

    fn sym(&mut self, s: Sym) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(s) {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(&[&format!("`{}`", s.text())]))
        }
    }

    fn word(&mut self, w: &str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Ident(w.to_string()) {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(&[&format!("`{w}`")]))
        }
    }

    fn ident(&mut self) -> Result<(Name, Span), ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok((x.into(), span))
            }
            _ => Err(self.fail(&["an identifier"])),
        }
    }

    fn entry(&mut self) -> Result<RawSpec, ParseError> {
        let span = self.span();
        self.word("bde")?;
        let (name, _) = self.ident()?;
        self.sym(Sym::LParen)?;
        let arity = match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                n as usize
            }
            _ => return Err(self.fail(&["an arity"])),
        };
        self.sym(Sym::RParen)?;
        self.sym(Sym::LBrace)?;
        self.word("head")?;
        self.sym(Sym::Eq)?;
        let head = self.sum()?;
        self.sym(Sym::Semi)?;
        self.word("tail")?;
        self.sym(Sym::Eq)?;
        let tail = self.sum()?;
        self.sym(Sym::Semi)?;
        self.sym(Sym::RBrace)?;
        Ok(RawSpec {
            name,
            arity,
            head,
            tail,
            span,
        })
    }

    fn sum(&mut self) -> Result<Raw, ParseError> {
        let mut acc = self.product()?;
        while *self.peek() == Tok::Sym(Sym::Plus) {
            self.bump();
            acc = Raw::Prim(PrimOp::Add, Box::new(acc), Box::new(self.product()?));
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Raw, ParseError> {
        let mut acc = self.atom()?;
        while *self.peek() == Tok::Sym(Sym::Star) {
            self.bump();
            acc = Raw::Prim(PrimOp::Mul, Box::new(acc), Box::new(self.atom()?));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Raw::Num(n, span))
            }
            Tok::Kw(Kw::Zero) => {
                self.bump();
                Ok(Raw::Num(0, span))
            }
            Tok::Sym(Sym::LParen) => {
                self.bump();
                let e = self.sum()?;
                self.sym(Sym::RParen)?;
                Ok(e)
            }
            Tok::Ident(x) => {
                self.bump();
                if *self.peek() != Tok::Sym(Sym::LParen) {
                    return Ok(Raw::Var(x.into(), span));
                }
                self.bump();
                let mut args = vec![self.sum()?];
                while *self.peek() == Tok::Sym(Sym::Comma) {
                    self.bump();
                    args.push(self.sum()?);
                }
                self.sym(Sym::RParen)?;
                Ok(Raw::Call(x.into(), args, span))
            }
            _ => Err(self.fail(&["a numeral", "a variable", "a call", "`(`"])),
        }
    }
}

/// Parse a specification file.
pub fn parse_specs(text: &str) -> Result<Vec<RawSpec>, ParseError> {
    let mut p = P {
        toks: tokenize(text)?,
        pos: 0,
    };
    let mut out = Vec::new();
    while *p.peek() != Tok::Eof {
        out.push(p.entry()?);
    }
    Ok(out)
}

// Validation

/// Variable `x_i`, `y_i` or `z_i` with `1 <= i <= k`.
fn indexed_var(x: &str) -> Option<(char, usize)> {
    let mut chars = x.chars();
    let c = chars.next()?;
    if !matches!(c, 'x' | 'y' | 'z') {
        return None;
    }
    let rest = chars.as_str();
    if rest.is_empty() || rest.starts_with('0') || !rest.chars().all(|d| d.is_ascii_digit()) {
        return None;
    }
    Some((c, rest.parse().ok()?))
}

const RESERVED: &[&str] = &["f", "rho"];

/// Stream operations available to tail expressions, with their arities.
pub type Signature = BTreeMap<Name, usize>;

pub fn validate(
    raw: &RawSpec,
    sigma: &Signature,
    taken: &dyn Fn(&str) -> bool,
) -> Result<BdeSpec, SpecError> {
    let name = &raw.name;
    if RESERVED.contains(&&**name)
        || indexed_var(name).is_some()
        || name.starts_with('s') && name[1..].parse::<usize>().is_ok()
    {
        return Err(spec_error(raw.span, name, format!("`{name}` is reserved")));
    }
    if sigma.contains_key(name) || taken(name) || taken(&guarded_name(name)) {
        return Err(spec_error(
            raw.span,
            name,
            format!("`{name}` is already defined"),
        ));
    }
    let k = raw.arity;
    let head = validate_head(&raw.head, k)?;
    let tail = validate_tail(&raw.tail, k, sigma)?;
    Ok(BdeSpec {
        name: name.clone(),
        arity: k,
        head,
        tail,
        span: raw.span,
    })
}

fn validate_head(r: &Raw, k: usize) -> Result<HeadExpr, SpecError> {
    match r {
        Raw::Num(n, _) => Ok(HeadExpr::Num(*n)),
        Raw::Prim(op, a, b) => Ok(HeadExpr::Prim(
            *op,
            Box::new(validate_head(a, k)?),
            Box::new(validate_head(b, k)?),
        )),
        Raw::Var(x, span) => match indexed_var(x) {
            Some(('x', i)) if i <= k => Ok(HeadExpr::X(i)),
            Some(('x', _)) => Err(spec_error(*span, x, format!("`{x}` exceeds the arity {k}"))),
            Some(_) => Err(spec_error(
                *span,
                x,
                format!("the head may only mention the heads x1..x{k}, not `{x}`"),
            )),
            None => Err(spec_error(
                *span,
                x,
                format!("unknown variable `{x}` in the head"),
            )),
        },
        Raw::Call(g, _, span) => Err(spec_error(
            *span,
            g,
            format!("the head may only use `+` and `*`, not `{g}`"),
        )),
    }
}

fn validate_tail(r: &Raw, k: usize, sigma: &Signature) -> Result<TailExpr, SpecError> {
    let args = |rs: &[Raw]| {
        rs.iter()
            .map(|a| validate_tail(a, k, sigma))
            .collect::<Result<Vec<_>, _>>()
    };
    match r {
        Raw::Var(x, span) => match indexed_var(x) {
            Some((_, i)) if i > k => {
                Err(spec_error(*span, x, format!("`{x}` exceeds the arity {k}")))
            }
            Some(('x', i)) => Ok(TailExpr::Rho(HeadExpr::X(i))),
            Some(('y', i)) => Ok(TailExpr::Y(i)),
            Some((_, i)) => Ok(TailExpr::Z(i)),
            None if &**x == "f" => call_rec(vec![], k, *span),
            None => call(x, vec![], sigma, *span),
        },
        Raw::Call(g, rs, span) => match &**g {
            "f" => call_rec(args(rs)?, k, *span),
            "rho" => match rs.as_slice() {
                [h] => Ok(TailExpr::Rho(validate_head(h, k)?)),
                _ => Err(spec_error(*span, g, "`rho` takes one argument".into())),
            },
            _ => call(g, args(rs)?, sigma, *span),
        },
        Raw::Num(..) | Raw::Prim(..) => Err(spec_error(
            r.span(),
            "+",
            "the tail must be a stream; wrap arithmetic in `rho(...)`".into(),
        )),
    }
}

fn call_rec(args: Vec<TailExpr>, k: usize, span: Span) -> Result<TailExpr, SpecError> {
    if args.len() == k {
        Ok(TailExpr::Rec(args))
    } else {
        Err(spec_error(
            span,
            "f",
            format!("`f` takes {k} arguments, given {}", args.len()),
        ))
    }
}

fn call(
    g: &Name,
    args: Vec<TailExpr>,
    sigma: &Signature,
    span: Span,
) -> Result<TailExpr, SpecError> {
    match sigma.get(g) {
        Some(&m) if m == args.len() => Ok(TailExpr::Call(g.clone(), args)),
        Some(&m) => Err(spec_error(
            span,
            g,
            format!("`{g}` takes {m} arguments, given {}", args.len()),
        )),
        None => Err(spec_error(
            span,
            g,
            format!("unknown stream operation `{g}`"),
        )),
    }
}

// Compilation

pub fn guarded_name(name: &str) -> String {
    format!("{name}g")
}

fn stream_arrows(k: usize, elem: &Type) -> Type {
    Type::arrows(std::iter::repeat_n(elem.clone(), k), elem.clone())
}

fn s_var(i: usize) -> Term {
    Term::var(&format!("s{i}"))
}

fn head_term(h: &HeadExpr) -> Term {
    match h {
        HeadExpr::Num(n) => Term::numeral(*n),
        HeadExpr::X(i) => Term::app(Term::var("hdg"), s_var(*i)),
        HeadExpr::Prim(op, a, b) => Term::prim(*op, head_term(a), head_term(b)),
    }
}

fn ap_chain(f: Term, args: &[TailExpr]) -> Term {
    args.iter()
        .fold(f, |acc, a| Term::later_app(acc, tail_term(a)))
}

/// The guarded translation of a tail, of type `|>StrG`.
fn tail_term(t: &TailExpr) -> Term {
    match t {
        TailExpr::Rho(h) => Term::next(Term::app(Term::var("rho"), head_term(h))),
        TailExpr::Y(i) => Term::next(s_var(*i)),
        TailExpr::Z(i) => Term::app(Term::var("tlg"), s_var(*i)),
        TailExpr::Rec(args) => ap_chain(Term::var("f"), args),
        TailExpr::Call(g, args) => ap_chain(Term::next(Term::var(&guarded_name(g))), args),
    }
}

/// The body of the guarded fixed point, `\s1..sk. cons h t`, mentioning the
/// recursion variable `f` and base-library names free.
pub fn guarded_body(spec: &BdeSpec) -> Term {
    let sg = Type::guarded_stream();
    let names: Vec<String> = (1..=spec.arity).map(|i| format!("s{i}")).collect();
    let params: Vec<(&str, Option<Type>)> = names
        .iter()
        .map(|n| (n.as_str(), Some(sg.clone())))
        .collect();
    let body = Term::apps(
        Term::var("cons"),
        [head_term(&spec.head), tail_term(&spec.tail)],
    );
    Term::lams(&params, body)
}

/// `L_k(g)`: lift a guarded stream function of arity `k` to coinductive
/// streams by iterating `lim`.
pub fn lift_lk(g: Term, k: usize) -> Term {
    let sg = Type::guarded_stream();
    let names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    let mut acc = Term::boxi(vec![], g);
    for (m, x) in names.iter().enumerate() {
        let rest = stream_arrows(k - m - 1, &sg);
        acc = Term::apps(stdlib::lim(&sg, &rest), [acc, Term::var(x)]);
    }
    let params: Vec<(&str, Option<Type>)> = names
        .iter()
        .map(|n| (n.as_str(), Some(Type::stream())))
        .collect();
    Term::lams(&params, acc)
}

/// Surface definitions of the guarded and lifted functions.
pub fn emit(spec: &BdeSpec) -> String {
    let k = spec.arity;
    let gname = guarded_name(&spec.name);
    let body = pretty_term(&guarded_body(spec));
    let lifted = pretty_term_annotated(&lift_lk(Term::var(&gname), k));
    let text = format!(
        "def {gname} : {} =\n  fix f. {body};\ndef {} : {} =\n  {lifted};\n",
        stream_arrows(k, &Type::guarded_stream()),
        spec.name,
        stream_arrows(k, &Type::stream()),
    );
    with_aliases(&text)
}

/// Print the stream types by their base-library names.
fn with_aliases(text: &str) -> String {
    let sg = Type::guarded_stream().to_string();
    text.replace(&format!("#({sg})"), "Str")
        .replace(&format!("({sg})"), "StrG")
        .replace(&sg, "StrG")
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub spec: BdeSpec,
    /// Closed term at `StrG -> ... -> StrG`.
    pub guarded: Term,
    /// Closed term at `Str -> ... -> Str`.
    pub lifted: Term,
    pub source: String,
}

/// Entries compiled so far, on top of the stream base library.
pub struct Session {
    pub program: Program,
    pub compiled: Vec<Compiled>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    pub fn new() -> Session {
        Session {
            program: load_streams(),
            compiled: Vec::new(),
        }
    }

    pub fn signature(&self) -> Signature {
        self.compiled
            .iter()
            .map(|c| (c.spec.name.clone(), c.spec.arity))
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&Compiled> {
        self.compiled.iter().find(|c| &*c.spec.name == name)
    }

    pub fn validate(&self, raw: &RawSpec) -> Result<BdeSpec, SpecError> {
        let program = &self.program;
        validate(raw, &self.signature(), &|x| program.get(x).is_some())
    }

    /// Validate, emit and typecheck one entry.
    pub fn compile(&mut self, raw: &RawSpec) -> Result<&Compiled, BdeError> {
        let spec = self.validate(raw)?;
        let compiled = self.compile_spec(spec)?;
        self.program = compiled.1;
        self.compiled.push(compiled.0);
        Ok(self.compiled.last().unwrap())
    }

    fn compile_spec(&self, spec: BdeSpec) -> Result<(Compiled, Program), BdeError> {
        let source = emit(&spec);
        let parsed =
            parse_program_with(&source, &spec.name, &self.program.aliases).map_err(|e| {
                BdeError::Internal(TypeError::new(
                    crate::typecheck::ErrorKind::Mismatch,
                    e.span,
                    e.to_string(),
                ))
            })?;
        let program = check_program_with(&self.program, &parsed).map_err(BdeError::Internal)?;
        let guarded = program.get(&guarded_name(&spec.name)).unwrap().term.clone();
        let lifted = program.get(&spec.name).unwrap().term.clone();
        Ok((
            Compiled {
                spec,
                guarded,
                lifted,
                source,
            },
            program,
        ))
    }

    /// Compile an entry without recording it, for checking alternative
    /// implementations.
    pub fn compile_detached(&self, raw: &RawSpec) -> Result<Compiled, BdeError> {
        let spec = self.validate(raw)?;
        Ok(self.compile_spec(spec)?.0)
    }

    /// Compile every entry of a file in order.
    pub fn compile_file(&mut self, text: &str) -> Result<(), BdeError> {
        for raw in parse_specs(text)? {
            self.compile(&raw)?;
        }
        Ok(())
    }
}

/// The closed guarded term of a compiled entry.
pub fn compile_guarded(session: &Session, raw: &RawSpec) -> Result<Term, BdeError> {
    Ok(session.compile_detached(raw)?.guarded)
}

// Checking

/// Coinductive sample streams: `box` of prelude streams.
pub const EQUATION_SAMPLES: &[&str] = &["nats", "toggle", "paperfolds", "zeros", "twos"];

pub fn sample_streams() -> Vec<(String, Term)> {
    let p = load_prelude();
    EQUATION_SAMPLES
        .iter()
        .map(|n| {
            (
                format!("box {n}"),
                Term::boxi(vec![], p.get(n).unwrap().term.clone()),
            )
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub args: Vec<String>,
    /// `head` or `tail`.
    pub equation: &'static str,
    /// Position in the stream `f(args)`: 0 is the head.
    pub position: usize,
    pub expected: u64,
    pub found: u64,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} equation fails at position {} for ({}): expected {}, found {}",
            self.equation,
            self.position,
            self.args.join(", "),
            self.expected,
            self.found
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationReport {
    pub name: Name,
    pub tuples: usize,
    pub depth: usize,
    pub mismatch: Option<Mismatch>,
}

impl EquationReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for EquationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            None => write!(
                f,
                "{}: head and tail equations hold on {} argument tuples to depth {}",
                self.name, self.tuples, self.depth
            ),
            Some(m) => write!(f, "{}: {m}", self.name),
        }
    }
}

pub fn tuples<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    (0..k).fold(vec![vec![]], |acc, _| {
        acc.iter()
            .flat_map(|prefix| {
                items.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

/// Check that `lifted` satisfies the equations of `spec` on every tuple of
/// sample streams: the head directly, the tail to `depth` elements.
pub fn check_equations(
    session: &Session,
    spec: &BdeSpec,
    lifted: &Term,
    depth: usize,
) -> Result<EquationReport, EvalError> {
    let samples = sample_streams();
    let rho = session.program.get("rho").unwrap().term.clone();
    let all = tuples(&samples, spec.arity);
    let mut budget = Budget::new(u64::MAX);
    for tuple in &all {
        let args: Vec<Term> = tuple.iter().map(|(_, t)| t.clone()).collect();
        let names: Vec<String> = tuple.iter().map(|(n, _)| n.clone()).collect();
        let heads = args
            .iter()
            .map(|a| budget.eval_nat(&Term::app(stdlib::hd(), a.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let applied = Term::apps(lifted.clone(), args.iter().cloned());
        let found = budget.eval_nat(&Term::app(stdlib::hd(), applied.clone()))?;
        let expected = spec.head.eval(&heads);
        if found != expected {
            return Ok(mismatch(
                spec,
                all.len(),
                depth,
                names,
                "head",
                0,
                expected,
                found,
            ));
        }
        let ctx = TailCtx {
            session,
            lifted,
            args: &args,
            heads: &heads,
            rho: &rho,
        };
        let rhs = ctx.term(&spec.tail);
        let lhs = Term::app(stdlib::tl(), applied);
        let want = force_coinductive_stream(&rhs, depth, &mut budget)?;
        let got = force_coinductive_stream(&lhs, depth, &mut budget)?;
        if let Some(p) = (0..depth).find(|&p| want[p] != got[p]) {
            return Ok(mismatch(
                spec,
                all.len(),
                depth,
                names,
                "tail",
                p + 1,
                want[p],
                got[p],
            ));
        }
    }
    Ok(EquationReport {
        name: spec.name.clone(),
        tuples: all.len(),
        depth,
        mismatch: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn mismatch(
    spec: &BdeSpec,
    tuples: usize,
    depth: usize,
    args: Vec<String>,
    equation: &'static str,
    position: usize,
    expected: u64,
    found: u64,
) -> EquationReport {
    EquationReport {
        name: spec.name.clone(),
        tuples,
        depth,
        mismatch: Some(Mismatch {
            args,
            equation,
            position,
            expected,
            found,
        }),
    }
}

/// The right-hand side of a tail equation on coinductive streams.
struct TailCtx<'a> {
    session: &'a Session,
    lifted: &'a Term,
    args: &'a [Term],
    heads: &'a [u64],
    rho: &'a Term,
}

impl TailCtx<'_> {
    fn term(&self, t: &TailExpr) -> Term {
        match t {
            TailExpr::Rho(h) => Term::boxi(
                vec![],
                Term::app(self.rho.clone(), Term::numeral(h.eval(self.heads))),
            ),
            TailExpr::Y(i) => self.args[i - 1].clone(),
            TailExpr::Z(i) => Term::app(stdlib::tl(), self.args[i - 1].clone()),
            TailExpr::Rec(xs) => Term::apps(self.lifted.clone(), xs.iter().map(|x| self.term(x))),
            TailExpr::Call(g, xs) => {
                let lifted = self.session.get(g).expect("validated").lifted.clone();
                Term::apps(lifted, xs.iter().map(|x| self.term(x)))
            }
        }
    }
}

/// Compare `unbox (L_k(g) x1 .. xk)` with `g (unbox x1) .. (unbox xk)` on
/// every tuple of sample streams, to `depth` elements. Returns the first
/// disagreeing argument tuple.
pub fn check_lift(g: &Term, k: usize, depth: usize) -> Result<Option<Vec<String>>, EvalError> {
    let lifted = lift_lk(g.clone(), k);
    let samples = sample_streams();
    let mut budget = Budget::new(u64::MAX);
    for tuple in tuples(&samples, k) {
        let args: Vec<Term> = tuple.iter().map(|(_, t)| t.clone()).collect();
        let lhs = Term::unbox(Term::apps(lifted.clone(), args.iter().cloned()));
        let rhs = Term::apps(g.clone(), args.iter().map(|a| Term::unbox(a.clone())));
        if force_guarded_stream(&lhs, depth, &mut budget)?
            != force_guarded_stream(&rhs, depth, &mut budget)?
        {
            return Ok(Some(tuple.into_iter().map(|(n, _)| n).collect()));
        }
    }
    Ok(None)
}

/// Prefix of `lifted` applied to named sample streams.
pub fn force_lifted(lifted: &Term, args: &[Term], depth: usize) -> Result<Vec<u64>, EvalError> {
    let applied = Term::apps(lifted.clone(), args.iter().cloned());
    force_coinductive_stream(&applied, depth, &mut Budget::new(DEFAULT_BUDGET))
}

/// The shipped specification of stream sum and product.
pub const STREAMS_BDE: &str = include_str!("../prelude/streams.bde");

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecheck::infer_closed;

    fn session() -> Session {
        let mut s = Session::new();
        s.compile_file(STREAMS_BDE).unwrap();
        s
    }

    fn raw(src: &str) -> RawSpec {
        parse_specs(src).unwrap().remove(0)
    }

    #[test]
    fn parses_entries() {
        let specs = parse_specs(STREAMS_BDE).unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(&*specs[0].name, "plus");
        assert_eq!(specs[1].arity, 2);
    }

    #[test]
    fn validation_errors() {
        let s = Session::new();
        let e = s
            .validate(&raw("bde p(2) { head = x1 + y1; tail = f(z1, z2); }"))
            .unwrap_err();
        assert_eq!(e.symbol, "y1");
        let e = s
            .validate(&raw("bde p(2) { head = x1; tail = f(z1); }"))
            .unwrap_err();
        assert_eq!(e.symbol, "f");
        let e = s
            .validate(&raw("bde p(1) { head = x1; tail = q(z1); }"))
            .unwrap_err();
        assert_eq!(e.symbol, "q");
        let e = s
            .validate(&raw("bde p(1) { head = x3; tail = z1; }"))
            .unwrap_err();
        assert_eq!(e.symbol, "x3");
        let e = s
            .validate(&raw("bde cons(1) { head = x1; tail = z1; }"))
            .unwrap_err();
        assert_eq!(e.symbol, "cons");
    }

    #[test]
    fn compiled_terms_match_the_prelude() {
        let s = session();
        let p = load_prelude();
        assert_eq!(s.get("plus").unwrap().guarded, p.get("plusg").unwrap().term);
        assert_eq!(
            s.get("times").unwrap().guarded,
            p.get("timesg").unwrap().term
        );
        let sg = Type::guarded_stream();
        let st = Type::stream();
        assert_eq!(
            infer_closed(&s.get("times").unwrap().guarded).unwrap(),
            stream_arrows(2, &sg)
        );
        assert_eq!(
            infer_closed(&s.get("times").unwrap().lifted).unwrap(),
            stream_arrows(2, &st)
        );
    }

    #[test]
    fn constant_stream() {
        let mut s = Session::new();
        let c = s
            .compile(&raw("bde nulls(0) { head = 0; tail = f; }"))
            .unwrap();
        let prefix = force_guarded_stream(&c.guarded, 5, &mut Budget::new(DEFAULT_BUDGET)).unwrap();
        assert_eq!(prefix, vec![0; 5]);
    }

    #[test]
    fn lifted_sum_of_samples() {
        let s = session();
        let p = load_prelude();
        let b = |n: &str| Term::boxi(vec![], p.get(n).unwrap().term.clone());
        let plus = &s.get("plus").unwrap().lifted;
        assert_eq!(
            force_lifted(plus, &[b("nats"), b("toggle")], 4).unwrap(),
            vec![1, 1, 3, 3]
        );
        let map_succ = p.get("mapg").unwrap().term.clone();
        let succ = Term::lam("n", Some(Type::Nat), Term::succ(Term::var("n")));
        let l1 = lift_lk(Term::app(map_succ, succ), 1);
        assert_eq!(force_lifted(&l1, &[b("toggle")], 2).unwrap(), vec![2, 1]);
    }

    #[test]
    fn lift_one_is_lim() {
        let g = Term::var("g");
        let l1 = lift_lk(g.clone(), 1);
        let sg = Type::guarded_stream();
        let lim = Term::lam(
            "x1",
            Some(Type::stream()),
            Term::apps(
                stdlib::lim(&sg, &sg),
                [Term::boxi(vec![], g), Term::var("x1")],
            ),
        );
        assert_eq!(l1, lim);
    }

    #[test]
    fn plus_equations_hold() {
        let s = session();
        let c = s.get("plus").unwrap();
        let r = check_equations(&s, &c.spec, &c.lifted, 8).unwrap();
        assert!(r.holds(), "{r}");
        assert_eq!(r.tuples, 25);
    }

    #[test]
    fn corrupted_head_is_reported() {
        let s = Session::new();
        let good = s
            .validate(&raw("bde plus(2) { head = x1 + x2; tail = f(z1, z2); }"))
            .unwrap();
        let bad = s
            .compile_detached(&raw("bde plus(2) { head = x1; tail = f(z1, z2); }"))
            .unwrap();
        let r = check_equations(&s, &good, &bad.lifted, 8).unwrap();
        let m = r.mismatch.expect("mismatch");
        assert_eq!((m.equation, m.position), ("head", 0));
    }

    #[test]
    fn emitted_source_reads_back() {
        let s = session();
        let src = &s.get("times").unwrap().source;
        assert!(
            src.starts_with("def timesg : StrG -> StrG -> StrG =\n  fix f."),
            "{src}"
        );
        assert!(src.contains("next plusg"), "{src}");
    }
}
