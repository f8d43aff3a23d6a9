//! Recursive-descent parser.
//!
//! Term precedence, loosest first: binding forms (`\`, `fix`, `case`, and
//! `prev`/`box`/`boxplus` with a substitution or dot) extend as far right as
//! possible; then `<*>`, `+`, `*` (all left associative); then application;
//! then the prefix keywords, each taking one prefix-level argument.

use crate::syntax::{Name, PrimOp, Type};

use super::ast::{Definition, Expr, ExprKind, SourceProgram, SubstSpec};
use super::lexer::{tokenize, Kw, Sym, Tok, Token};
use super::{ParseError, Span};

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    aliases: Vec<(Name, Type)>,
    expected: Vec<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(src: &str, aliases: &[(Name, Type)]) -> PResult<Parser> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            aliases: aliases.to_vec(),
            expected: Vec::new(),
        })
    }

    pub fn aliases(&self) -> &[(Name, Type)] {
        &self.aliases
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    fn expect_note(&mut self, what: &str) {
        if !self.expected.iter().any(|e| e == what) {
            self.expected.push(what.to_string());
        }
    }

    pub fn error(&mut self, what: &str) -> ParseError {
        self.expect_note(what);
        let found = self.peek().to_string();
        ParseError::new(self.span(), std::mem::take(&mut self.expected), &found)
    }

    fn eat_sym(&mut self, s: Sym) -> bool {
        if *self.peek() == Tok::Sym(s) {
            self.bump();
            true
        } else {
            self.expect_note(&format!("`{}`", s.text()));
            false
        }
    }

    pub fn expect_sym(&mut self, s: Sym) -> PResult<Span> {
        let span = self.span();
        if self.eat_sym(s) {
            Ok(span)
        } else {
            Err(self.error(&format!("`{}`", s.text())))
        }
    }

    fn eat_kw(&mut self, k: Kw) -> bool {
        if *self.peek() == Tok::Kw(k) {
            self.bump();
            true
        } else {
            self.expect_note(&format!("`{}`", k.text()));
            false
        }
    }

    fn expect_kw(&mut self, k: Kw) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            Err(self.error(&format!("`{}`", k.text())))
        }
    }

    pub fn ident(&mut self) -> PResult<Name> {
        if let Tok::Ident(s) = self.peek() {
            let s: Name = s.as_str().into();
            self.bump();
            Ok(s)
        } else {
            Err(self.error("an identifier"))
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn expect_eof(&mut self) -> PResult<()> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    // ---- programs ----

    pub fn program(&mut self, file: &str) -> PResult<SourceProgram> {
        let mut prog = SourceProgram {
            file: file.to_string(),
            ..Default::default()
        };
        loop {
            if self.eat_kw(Kw::Type) {
                let name = self.ident()?;
                self.expect_sym(Sym::Eq)?;
                let ty = self.ty()?;
                self.expect_sym(Sym::Semi)?;
                self.aliases.push((name.clone(), ty.clone()));
                prog.aliases.push((name, ty));
            } else if *self.peek() == Tok::Kw(Kw::Def) {
                let span = self.bump().span;
                let name = self.ident()?;
                self.expect_sym(Sym::Colon)?;
                let ty = self.ty()?;
                self.expect_sym(Sym::Eq)?;
                let body = self.expr()?;
                self.expect_sym(Sym::Semi)?;
                prog.definitions.push(Definition {
                    name,
                    ty,
                    body,
                    span,
                });
            } else if self.at_eof() {
                return Ok(prog);
            } else {
                return Err(self.error("end of input"));
            }
        }
    }

    // ---- types ----

    pub fn ty(&mut self) -> PResult<Type> {
        self.ty_in(&mut Vec::new())
    }

    fn ty_in(&mut self, mus: &mut Vec<Name>) -> PResult<Type> {
        let lhs = self.ty_sum(mus)?;
        if self.eat_sym(Sym::Arrow) {
            let rhs = self.ty_in(mus)?;
            Ok(Type::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_sum(&mut self, mus: &mut Vec<Name>) -> PResult<Type> {
        let mut lhs = self.ty_prod(mus)?;
        while self.eat_sym(Sym::Plus) {
            let rhs = self.ty_prod(mus)?;
            lhs = Type::sum(lhs, rhs);
        }
        Ok(lhs)
    }

    fn ty_prod(&mut self, mus: &mut Vec<Name>) -> PResult<Type> {
        let mut lhs = self.ty_unary(mus)?;
        while self.eat_sym(Sym::Star) {
            let rhs = self.ty_unary(mus)?;
            lhs = Type::prod(lhs, rhs);
        }
        Ok(lhs)
    }

    fn ty_unary(&mut self, mus: &mut Vec<Name>) -> PResult<Type> {
        if self.eat_sym(Sym::Later) {
            return Ok(Type::later(self.ty_unary(mus)?));
        }
        if self.eat_sym(Sym::Hash) {
            return Ok(Type::boxed(self.ty_unary(mus)?));
        }
        match self.peek().clone() {
            Tok::Num(1) => {
                self.bump();
                Ok(Type::Unit)
            }
            Tok::Num(0) => {
                self.bump();
                Ok(Type::Empty)
            }
            Tok::Kw(Kw::Nat) => {
                self.bump();
                Ok(Type::Nat)
            }
            Tok::Kw(Kw::Mu) => {
                self.bump();
                let x = self.ident()?;
                self.expect_sym(Sym::Dot)?;
                mus.push(x.clone());
                let body = self.ty_in(mus);
                mus.pop();
                Ok(Type::Mu(x, body?.into()))
            }
            Tok::Ident(s) => {
                self.bump();
                let name: Name = s.as_str().into();
                if mus.contains(&name) {
                    return Ok(Type::Var(name));
                }
                match self.aliases.iter().rev().find(|(a, _)| *a == name) {
                    Some((_, ty)) => Ok(ty.clone()),
                    None => Ok(Type::Var(name)),
                }
            }
            Tok::Sym(Sym::LParen) => {
                self.bump();
                let t = self.ty_in(mus)?;
                self.expect_sym(Sym::RParen)?;
                Ok(t)
            }
            _ => Err(self.error("a type")),
        }
    }

    // ---- terms ----

    fn starts_binder(&self) -> bool {
        match self.peek() {
            Tok::Sym(Sym::Backslash) | Tok::Kw(Kw::Fix) | Tok::Kw(Kw::Case) => true,
            Tok::Kw(Kw::Boxplus) => true,
            Tok::Kw(Kw::Prev) | Tok::Kw(Kw::Box) => matches!(
                self.peek_at(1),
                Tok::Sym(Sym::LBracket) | Tok::Sym(Sym::Dot) | Tok::Kw(Kw::Iota)
            ),
            _ => false,
        }
    }

    fn starts_prefix(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Num(_)
                | Tok::Kw(
                    Kw::Zero
                        | Kw::Succ
                        | Kw::Fst
                        | Kw::Snd
                        | Kw::Fold
                        | Kw::Unfold
                        | Kw::Next
                        | Kw::Prev
                        | Kw::Box
                        | Kw::Unbox
                        | Kw::In1
                        | Kw::In2
                        | Kw::Abort
                )
                | Tok::Sym(Sym::LParen | Sym::LAngle)
        )
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        if self.starts_binder() {
            return self.binder();
        }
        let mut lhs = self.sum()?;
        while *self.peek() == Tok::Sym(Sym::Ap) {
            let span = self.bump().span;
            let rhs = self.operand(Self::sum)?;
            lhs = Expr::new(ExprKind::LaterApp(lhs.into(), rhs.into()), span);
        }
        self.expect_note("`<*>`");
        Ok(lhs)
    }

    fn operand(&mut self, level: fn(&mut Self) -> PResult<Expr>) -> PResult<Expr> {
        if self.starts_binder() {
            self.binder()
        } else {
            level(self)
        }
    }

    fn sum(&mut self) -> PResult<Expr> {
        let mut lhs = self.prod()?;
        while *self.peek() == Tok::Sym(Sym::Plus) {
            let span = self.bump().span;
            let rhs = self.operand(Self::prod)?;
            lhs = Expr::new(ExprKind::Prim(PrimOp::Add, lhs.into(), rhs.into()), span);
        }
        self.expect_note("`+`");
        Ok(lhs)
    }

    fn prod(&mut self) -> PResult<Expr> {
        let mut lhs = self.app()?;
        while *self.peek() == Tok::Sym(Sym::Star) {
            let span = self.bump().span;
            let rhs = self.operand(Self::app)?;
            lhs = Expr::new(ExprKind::Prim(PrimOp::Mul, lhs.into(), rhs.into()), span);
        }
        self.expect_note("`*`");
        Ok(lhs)
    }

    fn app(&mut self) -> PResult<Expr> {
        let mut head = self.prefix()?;
        loop {
            if self.starts_binder() {
                let span = head.span;
                let arg = self.binder()?;
                return Ok(Expr::new(ExprKind::App(head.into(), arg.into()), span));
            }
            if !self.starts_prefix() {
                self.expect_note("an argument");
                return Ok(head);
            }
            let span = head.span;
            let arg = self.prefix()?;
            head = Expr::new(ExprKind::App(head.into(), arg.into()), span);
        }
    }

    fn prefix(&mut self) -> PResult<Expr> {
        if self.starts_binder() {
            return self.binder();
        }
        let span = self.span();
        let mk = Expr::at(span);
        let kw = match self.peek() {
            Tok::Kw(k) => *k,
            _ => return self.atom(),
        };
        let wrap: fn(Box<Expr>) -> ExprKind = match kw {
            Kw::Succ => ExprKind::Succ,
            Kw::Fst => |e| ExprKind::Proj(1, e),
            Kw::Snd => |e| ExprKind::Proj(2, e),
            Kw::Fold => ExprKind::Fold,
            Kw::Unfold => ExprKind::Unfold,
            Kw::Next => ExprKind::Next,
            Kw::Unbox => ExprKind::Unbox,
            Kw::In1 => |e| ExprKind::Inj(1, e),
            Kw::In2 => |e| ExprKind::Inj(2, e),
            Kw::Abort => ExprKind::Abort,
            Kw::Prev => |e| ExprKind::Prev(SubstSpec::Closed, e),
            Kw::Box => |e| ExprKind::BoxI(SubstSpec::Closed, e),
            _ => return self.atom(),
        };
        self.bump();
        let arg = self.prefix()?;
        Ok(mk(wrap(arg.into())))
    }

    fn atom(&mut self) -> PResult<Expr> {
        let span = self.span();
        let mk = Expr::at(span);
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(mk(ExprKind::Var(s.as_str().into())))
            }
            Tok::Num(n) => {
                self.bump();
                Ok(mk(ExprKind::Num(n)))
            }
            Tok::Kw(Kw::Zero) => {
                self.bump();
                Ok(mk(ExprKind::Num(0)))
            }
            Tok::Sym(Sym::LParen) => {
                self.bump();
                if self.eat_sym(Sym::RParen) {
                    return Ok(mk(ExprKind::Unit));
                }
                let e = self.expr()?;
                if self.eat_sym(Sym::Colon) {
                    let ty = self.ty()?;
                    self.expect_sym(Sym::RParen)?;
                    return Ok(mk(ExprKind::Ann(e.into(), ty)));
                }
                self.expect_sym(Sym::RParen)?;
                Ok(e)
            }
            Tok::Sym(Sym::LAngle) => {
                self.bump();
                let a = self.expr()?;
                self.expect_sym(Sym::Comma)?;
                let b = self.expr()?;
                self.expect_sym(Sym::RAngle)?;
                Ok(mk(ExprKind::Pair(a.into(), b.into())))
            }
            _ => Err(self.error("a term")),
        }
    }

    fn binder(&mut self) -> PResult<Expr> {
        let span = self.span();
        let mk = Expr::at(span);
        match self.bump().tok {
            Tok::Sym(Sym::Backslash) => {
                let mut params = Vec::new();
                loop {
                    if self.eat_sym(Sym::LParen) {
                        let x = self.ident()?;
                        self.expect_sym(Sym::Colon)?;
                        let ty = self.ty()?;
                        self.expect_sym(Sym::RParen)?;
                        params.push((x, Some(ty)));
                    } else if let Tok::Ident(_) = self.peek() {
                        params.push((self.ident()?, None));
                    } else if params.is_empty() {
                        return Err(self.error("a parameter"));
                    } else {
                        break;
                    }
                }
                self.expect_sym(Sym::Dot)?;
                let body = self.expr()?;
                Ok(params
                    .into_iter()
                    .rev()
                    .fold(body, |acc, (x, ty)| mk(ExprKind::Lam(x, ty, acc.into()))))
            }
            Tok::Kw(Kw::Fix) => {
                let x = self.ident()?;
                self.expect_sym(Sym::Dot)?;
                let body = self.expr()?;
                Ok(mk(ExprKind::Fix(x, body.into())))
            }
            Tok::Kw(Kw::Case) => {
                let scrut = self.expr()?;
                self.expect_kw(Kw::Of)?;
                let x1 = self.ident()?;
                self.expect_sym(Sym::Dot)?;
                let b1 = self.expr()?;
                self.expect_sym(Sym::Semi)?;
                let x2 = self.ident()?;
                self.expect_sym(Sym::Dot)?;
                let b2 = self.expr()?;
                Ok(mk(ExprKind::Case(
                    scrut.into(),
                    x1,
                    b1.into(),
                    x2,
                    b2.into(),
                )))
            }
            Tok::Kw(k @ (Kw::Prev | Kw::Box | Kw::Boxplus)) => {
                let spec = self.subst_spec()?;
                let body = self.expr()?;
                let body = Box::new(body);
                Ok(mk(match k {
                    Kw::Prev => ExprKind::Prev(spec, body),
                    Kw::Box => ExprKind::BoxI(spec, body),
                    _ => ExprKind::BoxSum(spec, body),
                }))
            }
            _ => unreachable!("starts_binder guards every caller"),
        }
    }

    /// Substitution part of `prev`/`box`/`boxplus`, including the final dot.
    fn subst_spec(&mut self) -> PResult<SubstSpec> {
        let spec = if self.eat_kw(Kw::Iota) {
            SubstSpec::Iota
        } else if self.eat_sym(Sym::LBracket) {
            let mut entries = Vec::new();
            if !self.eat_sym(Sym::RBracket) {
                loop {
                    let x = self.ident()?;
                    self.expect_sym(Sym::LeftArrow)?;
                    let e = self.expr()?;
                    entries.push((x, e));
                    if self.eat_sym(Sym::Comma) {
                        continue;
                    }
                    self.expect_sym(Sym::RBracket)?;
                    break;
                }
            }
            SubstSpec::Explicit(entries)
        } else {
            SubstSpec::Closed
        };
        self.expect_sym(Sym::Dot)?;
        Ok(spec)
    }
}
