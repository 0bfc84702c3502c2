//! Incongruity-sensitive random access to compressed strings.
//!
//! A string stored as a run-length straight-line program, a block tree or a
//! bidirectional parse is accessed at position `q` in time governed by the
//! length of the longest repeated substring through `q` (and, for parses, by
//! the length of the referencing chain of `q`). Every accessor reports the
//! work it performed so the cost bounds can be checked against brute force.
//!
//! Positions are 1-based everywhere.

pub mod balance;
pub mod bench;
pub mod blocktree;
pub mod contract;
pub mod dspred;
mod error;
pub mod format;
pub mod gen;
pub mod grammar_access;
pub mod parse;
pub mod rlslp;
pub mod text;

pub use error::{Error, Result};
pub use text::{Rational, RepeatProfile, Text};

/// `max(1, log_base(x))`, the logarithm convention used by all cost bounds.
pub fn log_at_least_one(base: f64, x: f64) -> f64 {
    if x <= base {
        1.0
    } else {
        x.ln() / base.ln()
    }
}
