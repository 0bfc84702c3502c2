use thiserror::Error;

use crate::rlslp::SymbolId;
use crate::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("position {pos} outside 1..={len}")]
    OutOfRange { pos: usize, len: usize },

    #[error("empty input")]
    Empty,

    #[error("rule graph has a cycle through symbol {0}")]
    Cycle(SymbolId),

    #[error("symbol {0} is referenced but has no rule")]
    Dangling(SymbolId),

    #[error("symbol {0} has more than one rule")]
    DuplicateRule(SymbolId),

    #[error("run-length rule for {sym} has k = {k}, need k >= 2")]
    Arity { sym: SymbolId, k: u64 },

    #[error("expansion length of symbol {0} overflows")]
    Overflow(SymbolId),

    #[error("grammar has no start symbol")]
    MissingStart,

    #[error("parse cannot be decoded: referencing chain from position {0} never reaches an explicit phrase")]
    Undecodable(usize),

    #[error("invalid parse: {0}")]
    InvalidParse(String),

    #[error("parse is not {alpha}-contracting (needs {actual})")]
    NotContracting { alpha: Rational, actual: Rational },

    #[error("key {key} does not fit in {digits} base-{base} digits")]
    KeyOutOfUniverse { key: u64, base: u32, digits: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}
