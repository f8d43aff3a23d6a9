//! The standard corpus, compiled from a surface-syntax asset.

use crate::parser::{parse_program_with, SourceProgram};
use crate::typecheck::{check_program_with, Program};

pub const STREAMS_FILE: &str = "streams.glc";
pub const STREAMS_SOURCE: &str = include_str!("../prelude/streams.glc");
pub const PRELUDE_FILE: &str = "prelude.glc";
pub const PRELUDE_SOURCE: &str = include_str!("../prelude/prelude.glc");

fn parse_asset(text: &str, file: &str, base: &Program) -> SourceProgram {
    parse_program_with(text, file, &base.aliases)
        .unwrap_or_else(|e| panic!("{file}:{}: {e}", e.span))
}

fn check_asset(text: &str, file: &str, base: &Program) -> Program {
    check_program_with(base, &parse_asset(text, file, base))
        .unwrap_or_else(|e| panic!("{}", e.render(file)))
}

thread_local! {
    static STREAMS: Program = check_asset(STREAMS_SOURCE, STREAMS_FILE, &Program::default());
    static PRELUDE: Program = STREAMS.with(|base| check_asset(PRELUDE_SOURCE, PRELUDE_FILE, base));
}

/// The stream base library: aliases `StrG` and `Str`, `cons`, `hdg`, `tlg`,
/// `hd`, `tl`, `zeros` and `rho`.
pub fn load_streams() -> Program {
    STREAMS.with(Program::clone)
}

/// The checked prelude, including the stream base library. Panics if a
/// shipped asset is corrupt.
pub fn load_prelude() -> Program {
    PRELUDE.with(Program::clone)
}

/// Source of the prelude definitions that are not part of the base library.
pub fn prelude_source() -> SourceProgram {
    parse_asset(PRELUDE_SOURCE, PRELUDE_FILE, &load_streams())
}
