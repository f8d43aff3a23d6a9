//! Whole programs: definitions checked in order and inlined into later ones.

use std::collections::HashMap;

use crate::parser::{SourceProgram, Span};
use crate::syntax::{Name, Term, Type};

use super::elab::{lower, Elab};
use super::error::{ErrorKind, TypeError};
use super::infer::check_annotation;

#[derive(Clone, Debug)]
pub struct CheckedDef {
    pub name: Name,
    pub ty: Type,
    /// Closed core term with every earlier definition inlined.
    pub term: Term,
    pub span: Span,
}

/// An elaborated program, together with the type aliases that were in
/// scope so that further source can be parsed against it.
#[derive(Clone, Debug, Default)]
pub struct Program {
    pub defs: Vec<CheckedDef>,
    pub aliases: Vec<(Name, Type)>,
    index: HashMap<Name, usize>,
}

impl Program {
    pub fn get(&self, name: &str) -> Option<&CheckedDef> {
        self.index.get(name).map(|&i| &self.defs[i])
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.defs.iter().map(|d| &d.name)
    }

    fn push(&mut self, def: CheckedDef) {
        self.index.insert(def.name.clone(), self.defs.len());
        self.defs.push(def);
    }
}

fn with_def(err: TypeError, name: &Name) -> TypeError {
    TypeError {
        definition: Some(name.clone()),
        ..err
    }
}

/// Check `prog` with the definitions of `base` in scope. The result holds
/// both the base definitions and the new ones.
pub fn check_program_with(base: &Program, prog: &SourceProgram) -> Result<Program, TypeError> {
    let mut out = base.clone();
    out.aliases.extend(prog.aliases.iter().cloned());
    let mut seen: Vec<&Name> = Vec::new();
    for def in &prog.definitions {
        if seen.contains(&&def.name) {
            return Err(TypeError::new(
                ErrorKind::DuplicateDefinition,
                def.span,
                format!("`{}` is defined twice", def.name),
            ));
        }
        seen.push(&def.name);
        check_annotation(&def.ty, def.span).map_err(|e| with_def(e, &def.name))?;
        let term = Elab::new(&out)
            .check_closed(&def.body, &def.ty)
            .map_err(|e| with_def(e, &def.name))?;
        out.push(CheckedDef {
            name: def.name.clone(),
            ty: def.ty.clone(),
            term,
            span: def.span,
        });
    }
    Ok(out)
}

pub fn check_program(prog: &SourceProgram) -> Result<Program, TypeError> {
    check_program_with(&Program::default(), prog)
}

/// Translate definitions without checking them; declared types are recorded
/// but not verified.
pub fn lower_program_with(base: &Program, prog: &SourceProgram) -> Result<Program, TypeError> {
    let mut out = base.clone();
    out.aliases.extend(prog.aliases.iter().cloned());
    for def in &prog.definitions {
        let term = lower(&out, &def.body).map_err(|e| with_def(e, &def.name))?;
        out.push(CheckedDef {
            name: def.name.clone(),
            ty: def.ty.clone(),
            term,
            span: def.span,
        });
    }
    Ok(out)
}
