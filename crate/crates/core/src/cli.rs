//! The `glc` command-line driver.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::adequacy::{check_fundamental, MetricStats};
use crate::bde::{self, check_equations, BdeError, Session};
use crate::denote::{denote_closed, render};
use crate::eval::{
    eval, force_coinductive_stream, force_guarded_stream, trace, Budget, EvalError, DEFAULT_BUDGET,
};
use crate::parser::{parse_program_with, pretty_term, ParseError, Span};
use crate::prelude::{load_prelude, PRELUDE_FILE};
use crate::samples::{elaborate, Sampler};
use crate::syntax::{Term, Type, WithAliases};
use crate::typecheck::{check_program_with, lower_program_with, ErrorKind, Program, TypeError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TYPE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PROPERTY: i32 = 4;

/// Name of the shipped prelude when given as a file argument.
pub const PRELUDE_ARG: &str = "prelude";

#[derive(Parser, Debug)]
#[command(name = "glc", version, about = "Guarded lambda calculus toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report diagnostics as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Step budget for evaluation.
    #[arg(long, global = true, env = "GLC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub steps: u64,
}

#[derive(clap::Args, Debug)]
pub struct Source {
    /// Program file, checked on top of the prelude, or `prelude` itself.
    pub file: PathBuf,
    /// Skip type checking.
    #[arg(long)]
    pub no_typecheck: bool,
}

#[derive(clap::Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Target {
    /// Name of a definition.
    #[arg(long)]
    pub term: Option<String>,
    /// A closed expression over the program's definitions.
    #[arg(long)]
    pub expr: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type check a program and list its definitions.
    Check {
        #[command(flatten)]
        source: Source,
    },
    /// Evaluate a term to a value.
    Eval {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: Target,
        /// Print every step.
        #[arg(long)]
        trace: bool,
    },
    /// Print a prefix of a stream.
    Take {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Print the denotation of a term at a finite index.
    Denote {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        index: u64,
    },
    /// Check that a term is related to its own denotation.
    Adequacy {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        index: u64,
    },
    /// Compile stream equations.
    Bde {
        /// Specification file, or `prelude` for the shipped one.
        spec: PathBuf,
        /// Print the compiled definitions.
        #[arg(long)]
        emit: bool,
        /// Check the equations on sample streams to this depth.
        #[arg(long)]
        check_depth: Option<usize>,
    },
}

/// Exit code and rendered streams of one command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    json: bool,
    steps: u64,
    out: Outcome,
}

/// A failure already rendered into the outcome.
struct Fail;

type R<T> = Result<T, Fail>;

impl Ctx {
    fn print(&mut self, line: impl AsRef<str>) {
        self.out.stdout.push_str(line.as_ref());
        self.out.stdout.push('\n');
    }

    fn fail(&mut self, code: i32, kind: &str, location: &str, message: &str) -> Fail {
        self.out.code = code;
        if self.json {
            let v = json!({ "kind": kind, "location": location, "message": message });
            self.out.stderr.push_str(&v.to_string());
        } else {
            let _ = write!(self.out.stderr, "{location}: [{kind}] {message}");
        }
        self.out.stderr.push('\n');
        Fail
    }

    fn parse_error(&mut self, file: &str, e: &ParseError) -> Fail {
        self.fail(EXIT_PARSE, "parse", &location(file, e.span), &e.to_string())
    }

    fn type_error(&mut self, file: &str, e: &TypeError) -> Fail {
        self.out.code = EXIT_TYPE;
        if self.json {
            self.out.stderr.push_str(&e.to_json(file).to_string());
        } else {
            self.out.stderr.push_str(&e.render(file));
        }
        self.out.stderr.push('\n');
        Fail
    }

    fn eval_error(&mut self, what: &str, e: &EvalError) -> Fail {
        match e {
            EvalError::BudgetExceeded { budget, .. } => self.fail(
                EXIT_BUDGET,
                "budget",
                what,
                &format!("no value within {budget} steps"),
            ),
            EvalError::Stuck(info) => self.fail(EXIT_TYPE, "stuck", what, &info.to_string()),
        }
    }
}

fn location(file: &str, span: Span) -> String {
    if span.is_none() {
        file.to_string()
    } else {
        format!("{file}:{span}")
    }
}

/// Parse arguments and run, catching usage errors.
pub fn run_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let mut ctx = Ctx {
        json: cli.json,
        steps: cli.steps,
        out: Outcome::default(),
    };
    let _ = dispatch(&mut ctx, cli.command);
    ctx.out
}

fn dispatch(ctx: &mut Ctx, cmd: Command) -> R<()> {
    match cmd {
        Command::Check { source } => check(ctx, &source),
        Command::Eval {
            source,
            target,
            trace,
        } => run_eval(ctx, &source, &target, trace),
        Command::Take { source, target, n } => take(ctx, &source, &target, n),
        Command::Denote {
            source,
            target,
            index,
        } => run_denote(ctx, &source, &target, index as usize),
        Command::Adequacy {
            source,
            target,
            index,
        } => run_adequacy(ctx, &source, &target, index as usize),
        Command::Bde {
            spec,
            emit,
            check_depth,
        } => run_bde(ctx, &spec, emit, check_depth),
    }
}

fn read(ctx: &mut Ctx, path: &PathBuf) -> R<String> {
    std::fs::read_to_string(path).map_err(|e| {
        let file = path.display().to_string();
        ctx.fail(EXIT_PARSE, "io", &file, &e.to_string())
    })
}

/// The checked program and the names it defines beyond the prelude.
fn load(ctx: &mut Ctx, source: &Source) -> R<(Program, Vec<String>)> {
    let prelude = load_prelude();
    if source.file.as_os_str() == PRELUDE_ARG {
        let names = prelude.names().map(|n| n.to_string()).collect();
        return Ok((prelude, names));
    }
    let file = source.file.display().to_string();
    let text = read(ctx, &source.file)?;
    let parsed = parse_program_with(&text, &file, &prelude.aliases)
        .map_err(|e| ctx.parse_error(&file, &e))?;
    let program = if source.no_typecheck {
        lower_program_with(&prelude, &parsed)
    } else {
        check_program_with(&prelude, &parsed)
    }
    .map_err(|e| ctx.type_error(&file, &e))?;
    let names = parsed
        .definitions
        .iter()
        .map(|d| d.name.to_string())
        .collect();
    Ok((program, names))
}

fn file_name(source: &Source) -> String {
    if source.file.as_os_str() == PRELUDE_ARG {
        PRELUDE_FILE.to_string()
    } else {
        source.file.display().to_string()
    }
}

/// The selected term with its type, and a label for diagnostics.
fn select(ctx: &mut Ctx, source: &Source, target: &Target) -> R<(Program, Term, Type, String)> {
    let (program, _) = load(ctx, source)?;
    let file = file_name(source);
    if let Some(name) = &target.term {
        return match program.get(name) {
            Some(d) => {
                let (t, ty) = (d.term.clone(), d.ty.clone());
                Ok((program, t, ty, name.clone()))
            }
            None => Err(ctx.type_error(
                &file,
                &TypeError::new(
                    ErrorKind::UnboundVariable,
                    Span::none(),
                    format!("no definition named `{name}`"),
                ),
            )),
        };
    }
    let src = target.expr.clone().unwrap_or_default();
    match crate::parser::parse_expr(&src, &program.aliases) {
        Err(e) => Err(ctx.parse_error("<expr>", &e)),
        Ok(_) => match elaborate(&program, &src) {
            Ok((t, ty)) => Ok((program, t, ty, src)),
            Err(msg) => Err(ctx.fail(EXIT_TYPE, "type", "<expr>", &msg)),
        },
    }
}

fn show_type(program: &Program, ty: &Type) -> String {
    WithAliases(ty, &program.aliases).to_string()
}

fn check(ctx: &mut Ctx, source: &Source) -> R<()> {
    let (program, names) = load(ctx, source)?;
    for name in names {
        let d = program.get(&name).unwrap();
        let line = format!("{name} : {}", show_type(&program, &d.ty));
        ctx.print(line);
    }
    Ok(())
}

/// Values of type Nat print in unary.
fn show_value(t: &Term) -> String {
    match t.as_numeral() {
        Some(n) => format!("{}zero", "succ ".repeat(n as usize)),
        None => pretty_term(t),
    }
}

fn run_eval(ctx: &mut Ctx, source: &Source, target: &Target, show_trace: bool) -> R<()> {
    let (_, t, _, label) = select(ctx, source, target)?;
    if show_trace {
        let tr = trace(&t, ctx.steps);
        for (k, term) in tr.terms.iter().enumerate() {
            let line = match k {
                0 => format!("0: {}", pretty_term(term)),
                _ => format!("{k} [{}]: {}", tr.rules[k - 1].name(), pretty_term(term)),
            };
            ctx.print(line);
        }
        return match &tr.outcome {
            Ok(()) => Ok(()),
            Err(e) => Err(ctx.eval_error(&label, e)),
        };
    }
    match eval(&t, ctx.steps) {
        Ok(ev) => {
            ctx.print(show_value(&ev.value));
            Ok(())
        }
        Err(e) => Err(ctx.eval_error(&label, &e)),
    }
}

fn take(ctx: &mut Ctx, source: &Source, target: &Target, n: usize) -> R<()> {
    let (program, t, ty, label) = select(ctx, source, target)?;
    let mut budget = Budget::new(ctx.steps);
    let prefix = if ty == Type::guarded_stream() {
        force_guarded_stream(&t, n, &mut budget)
    } else if ty == Type::stream() {
        force_coinductive_stream(&t, n, &mut budget)
    } else {
        let msg = format!(
            "`{label}` has type {}, not a stream",
            show_type(&program, &ty)
        );
        return Err(ctx.fail(EXIT_TYPE, "not-a-stream", &file_name(source), &msg));
    };
    match prefix {
        Ok(p) => {
            let items: Vec<String> = p.iter().map(u64::to_string).collect();
            ctx.print(items.join(" "));
            Ok(())
        }
        Err(e) => Err(ctx.eval_error(&label, &e)),
    }
}

fn run_denote(ctx: &mut Ctx, source: &Source, target: &Target, index: usize) -> R<()> {
    let (_, t, _, label) = select(ctx, source, target)?;
    match denote_closed(&t, index) {
        Ok(a) => {
            ctx.print(render(&a, index));
            Ok(())
        }
        Err(e) => Err(ctx.fail(EXIT_TYPE, "semantics", &label, &e.to_string())),
    }
}

fn run_adequacy(ctx: &mut Ctx, source: &Source, target: &Target, index: usize) -> R<()> {
    let (_, t, ty, label) = select(ctx, source, target)?;
    let sampler = Sampler::new();
    let v = check_fundamental(&t, &ty, index, &sampler);
    let verdict = if v.holds {
        "holds"
    } else if v.inconclusive {
        "inconclusive"
    } else {
        "fails"
    };
    ctx.print(format!("verdict: {verdict}"));
    ctx.print(format!("mode: {}", v.mode.name()));
    let MetricStats {
        checks, violations, ..
    } = v.metric;
    ctx.print(format!("metric: {checks} checks, {violations} increases"));
    if let Some(w) = &v.witness {
        ctx.print(format!("witness: {w}"));
    }
    if v.inconclusive {
        Err(ctx.fail(
            EXIT_BUDGET,
            "budget",
            &label,
            "evaluation exhausted its budget",
        ))
    } else if !v.holds {
        Err(ctx.fail(
            EXIT_PROPERTY,
            "adequacy",
            &label,
            "the term is not related to its denotation",
        ))
    } else {
        Ok(())
    }
}

fn run_bde(ctx: &mut Ctx, spec: &PathBuf, emit: bool, check_depth: Option<usize>) -> R<()> {
    let (file, text) = if spec.as_os_str() == PRELUDE_ARG {
        ("streams.bde".to_string(), bde::STREAMS_BDE.to_string())
    } else {
        (spec.display().to_string(), read(ctx, spec)?)
    };
    let mut session = Session::new();
    let raws = bde::parse_specs(&text).map_err(|e| ctx.parse_error(&file, &e))?;
    for raw in &raws {
        match session.compile(raw) {
            Ok(_) => {}
            Err(BdeError::Spec(e)) => {
                return Err(ctx.fail(EXIT_TYPE, "spec", &location(&file, e.span), &e.message));
            }
            Err(BdeError::Parse(e)) => return Err(ctx.parse_error(&file, &e)),
            Err(BdeError::Internal(e)) => return Err(ctx.type_error(&file, &e)),
        }
    }
    for c in &session.compiled {
        if emit {
            ctx.out.stdout.push_str(&c.source);
        } else if check_depth.is_none() {
            let ty = show_type(
                &session.program,
                &session.program.get(&c.spec.name).unwrap().ty,
            );
            ctx.print(format!("{} : {ty}", c.spec.name));
        }
    }
    let Some(depth) = check_depth else {
        return Ok(());
    };
    let mut failed = false;
    for c in &session.compiled {
        match check_equations(&session, &c.spec, &c.lifted, depth) {
            Ok(report) => {
                failed |= !report.holds();
                ctx.print(report.to_string());
            }
            Err(e) => return Err(ctx.eval_error(&c.spec.name, &e)),
        }
    }
    if failed {
        Err(ctx.fail(
            EXIT_PROPERTY,
            "equation",
            &file,
            "a compiled function violates its equations",
        ))
    } else {
        Ok(())
    }
}

/// Stack size for the evaluation thread.
pub const STACK_SIZE: usize = 512 * 1024 * 1024;

/// Run on a thread with a large stack; deep terms recurse deeply.
pub fn run_args_threaded(args: Vec<std::ffi::OsString>) -> Outcome {
    std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || run_args(args))
        .expect("spawn")
        .join()
        .unwrap_or_else(|_| Outcome {
            code: 101,
            stdout: String::new(),
            stderr: "internal error\n".into(),
        })
}
