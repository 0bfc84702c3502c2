//! Access over a locally balanced RLSLP: a distance-sensitive predecessor
//! search locates the grammar-tree leaf containing `q`, then a parse-tree
//! descent inside that leaf extracts the symbol.

use crate::balance::{balance, C_BAL_HEIGHT};
use crate::dspred::ZFastTrie;
use crate::rlslp::{LeafPartition, NodeLabel, Rlslp};
use crate::{Error, Result};

/// Default trie word size for position keys.
pub const DEFAULT_W: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AccessCost {
    /// Exponential-search iterations of the predecessor query.
    pub pred_k: u32,
    /// Rules applied while descending inside the leaf.
    pub descent_steps: u32,
}

#[derive(Debug, Clone)]
pub struct GrammarAccessor {
    grammar: Rlslp,
    partition: LeafPartition,
    pred: ZFastTrie,
    c_bal: f64,
    rebalanced: bool,
}

impl GrammarAccessor {
    /// Balances `g` first unless it is already locally balanced with [`C_BAL_HEIGHT`].
    pub fn build(g: &Rlslp) -> Result<Self> {
        Self::build_with(g, DEFAULT_W)
    }

    pub fn build_with(g: &Rlslp, w: u32) -> Result<Self> {
        let (grammar, rebalanced) =
            if g.is_locally_balanced(C_BAL_HEIGHT) { (g.clone(), false) } else { (balance(g)?, true) };
        let partition = grammar.leaf_partition();
        let keys: Vec<u64> = partition.starts[..partition.len()].iter().map(|&x| x as u64).collect();
        let pred = ZFastTrie::build(&keys, w)?;
        Ok(GrammarAccessor { grammar, partition, pred, c_bal: C_BAL_HEIGHT, rebalanced })
    }

    pub fn grammar(&self) -> &Rlslp {
        &self.grammar
    }

    pub fn partition(&self) -> &LeafPartition {
        &self.partition
    }

    pub fn c_bal(&self) -> f64 {
        self.c_bal
    }

    /// Whether the input had to be balanced.
    pub fn rebalanced(&self) -> bool {
        self.rebalanced
    }

    pub fn len(&self) -> usize {
        self.grammar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grammar.is_empty()
    }

    /// Index of the leaf containing `q` (0-based) and the predecessor cost.
    pub fn locate(&self, q: usize) -> Result<(usize, u32)> {
        if q == 0 || q > self.len() {
            return Err(Error::OutOfRange { pos: q, len: self.len() });
        }
        let ans = self.pred.pred(q as u64)?;
        let i = self.partition.starts.binary_search(&(ans.value as usize)).expect("predecessor is a leaf start");
        Ok((i, ans.k))
    }

    pub fn access(&self, q: usize) -> Result<(u8, AccessCost)> {
        let (i, pred_k) = self.locate(q)?;
        let offset = (q - self.partition.starts[i] + 1) as u64;
        let (sym, pos) = match self.partition.labels[i] {
            NodeLabel::Internal(s) | NodeLabel::Terminal(s) | NodeLabel::Pruned(s) => (s, offset),
            NodeLabel::Iteration { base, .. } => {
                let b = self.grammar.explen(base);
                (base, 1 + (offset - 1) % b)
            }
        };
        let (c, descent_steps) = self.grammar.descend(sym, pos);
        Ok((c, AccessCost { pred_k, descent_steps }))
    }

    /// Words used by rules, partition and trie.
    pub fn space_words(&self) -> usize {
        3 * self.grammar.size() + 2 * self.partition.len() + self.pred.space_words()
    }
}
