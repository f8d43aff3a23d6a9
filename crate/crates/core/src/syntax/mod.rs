//! Abstract syntax shared by every other module.

pub mod term;
pub mod types;

use std::rc::Rc;

/// Interned-by-refcount identifier.
pub type Name = Rc<str>;

pub use term::{Binder, PrimOp, Subst, Term, TermKind};
pub use types::{
    check_wf, guarded_in, is_constant, is_total_inhabited_syntactic, wf_type, OpenType, Type,
    WfError, WithAliases,
};
