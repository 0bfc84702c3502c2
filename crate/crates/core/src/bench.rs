//! Per-query instrumentation records and their CSV form.

use std::fmt::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocktree::BlockTreeAccessor;
use crate::dspred::ZFastTrie;
use crate::grammar_access::GrammarAccessor;
use crate::parse::{HeightProfile, ParseAccessor};
use crate::{RepeatProfile, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Grammar,
    BlockTree,
    Parse,
}

impl Structure {
    pub fn name(self) -> &'static str {
        match self {
            Structure::Grammar => "grammar",
            Structure::BlockTree => "blocktree",
            Structure::Parse => "parse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Queries {
    All,
    /// `count` positions drawn uniformly with the given seed.
    Sample {
        count: usize,
        seed: u64,
    },
}

impl Queries {
    pub fn positions(self, n: usize) -> Vec<usize> {
        match self {
            Queries::All => (1..=n).collect(),
            Queries::Sample { count, seed } => {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                (0..count).map(|_| r.gen_range(1..=n)).collect()
            }
        }
    }
}

/// One query. `descent_steps` is rules applied for grammars, moves for
/// block trees and loop iterations for parses; `trie_edges` is zero except
/// for parses; `h_q` is only set for parses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub structure: Structure,
    pub q: usize,
    pub symbol: u8,
    pub ell_q: usize,
    pub h_q: Option<u32>,
    pub pred_k: u32,
    pub trie_edges: u32,
    pub descent_steps: u32,
    pub wall_nanos: u128,
}

pub const CSV_HEADER: &str = "structure,q,symbol,ell_q,h_q,pred_k,trie_edges,descent_steps,wall_nanos";

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let h = r.h_q.map_or(String::new(), |h| h.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.structure.name(),
            r.q,
            r.symbol,
            r.ell_q,
            h,
            r.pred_k,
            r.trie_edges,
            r.descent_steps,
            r.wall_nanos
        )
        .unwrap();
    }
    out
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u128)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_nanos()))
}

pub fn bench_grammar(a: &GrammarAccessor, ell: &RepeatProfile, queries: Queries) -> Result<Vec<BenchRecord>> {
    queries
        .positions(a.len())
        .into_iter()
        .map(|q| {
            let ((symbol, c), wall_nanos) = timed(|| a.access(q))?;
            Ok(BenchRecord {
                structure: Structure::Grammar,
                q,
                symbol,
                ell_q: ell.at(q),
                h_q: None,
                pred_k: c.pred_k,
                trie_edges: 0,
                descent_steps: c.descent_steps,
                wall_nanos,
            })
        })
        .collect()
}

pub fn bench_blocktree(a: &BlockTreeAccessor, ell: &RepeatProfile, queries: Queries) -> Result<Vec<BenchRecord>> {
    queries
        .positions(a.tree().n())
        .into_iter()
        .map(|q| {
            let ((symbol, c), wall_nanos) = timed(|| a.access(q))?;
            Ok(BenchRecord {
                structure: Structure::BlockTree,
                q,
                symbol,
                ell_q: ell.at(q),
                h_q: None,
                pred_k: c.pred_k,
                trie_edges: 0,
                descent_steps: c.steps,
                wall_nanos,
            })
        })
        .collect()
}

pub fn bench_parse(
    a: &ParseAccessor,
    ell: &RepeatProfile,
    heights: &HeightProfile,
    queries: Queries,
) -> Result<Vec<BenchRecord>> {
    queries
        .positions(a.parse().n())
        .into_iter()
        .map(|q| {
            let ((symbol, c), wall_nanos) = timed(|| a.access(q))?;
            Ok(BenchRecord {
                structure: Structure::Parse,
                q,
                symbol,
                ell_q: ell.at(q),
                h_q: Some(heights.at(q)),
                pred_k: c.pred_k,
                trie_edges: c.trie_edges,
                descent_steps: c.iterations,
                wall_nanos,
            })
        })
        .collect()
}

/// `delta,k,fat_steps` per query, `delta = q - pred(q)`.
pub fn bench_pred(t: &ZFastTrie, queries: &[u64]) -> Result<String> {
    let mut out = String::from("q,pred,delta,k,fat_steps\n");
    for &q in queries {
        let a = t.pred(q)?;
        writeln!(out, "{q},{},{},{},{}", a.value, q - a.value, a.k, a.fat_steps).unwrap();
    }
    Ok(out)
}
