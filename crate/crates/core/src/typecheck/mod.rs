//! Typing judgment, elaboration of sugar, and the fixed-point encoding.

pub mod elab;
pub mod error;
pub mod infer;
pub mod program;
pub mod theta;

pub use elab::{lower, Elab};
pub use error::{ErrorKind, TypeError};
pub use infer::{infer, infer_closed, TypingCtx};
pub use program::{check_program, check_program_with, lower_program_with, CheckedDef, Program};
pub use theta::{elaborate_fix, theta, w_type};
