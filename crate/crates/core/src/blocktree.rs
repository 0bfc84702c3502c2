//! Block trees: recursive halving of the (padded) text, with blocks whose
//! length-2m contexts occur earlier pruned into pointers to their leftmost
//! occurrence.

use std::collections::HashMap;

use crate::dspred::ZFastTrie;
use crate::grammar_access::DEFAULT_W;
use crate::text::{lcp_array, suffix_array};
use crate::{Error, Result, Text};

pub const DEFAULT_LEAF_THRESHOLD: usize = 4;

pub type BlockId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    Internal {
        left: BlockId,
        right: Option<BlockId>,
    },
    /// Leftmost occurrence starts `offset` symbols into `source`; it may spill into `next`.
    Pruned {
        source: BlockId,
        next: Option<BlockId>,
        offset: usize,
    },
    Explicit(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// 1-based start in the padded text.
    pub start: usize,
    /// Nominal length, a power of two.
    pub len: usize,
    pub level: u32,
    pub kind: BlockKind,
}

#[derive(Debug, Clone)]
pub struct BlockTree {
    n: usize,
    leaf_threshold: usize,
    blocks: Vec<Block>,
    /// Block ids per level, left to right.
    levels: Vec<Vec<BlockId>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Down,
    Shift,
    Read,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BtCost {
    pub pred_k: u32,
    /// Downs, shifts and the final literal read.
    pub steps: u32,
    pub shifts: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BtStats {
    pub n: usize,
    /// Pruned plus explicit leaves.
    pub leaves: usize,
    pub levels: usize,
    pub blocks: usize,
    pub pruned: usize,
    pub explicit: usize,
    pub pruning_ratio: f64,
}

/// Leftmost start (0-based) of every length-`len` substring, indexed by its
/// own 0-based start; `usize::MAX` where no such substring fits.
pub fn leftmost_table(sa: &[usize], lcp: &[usize], len: usize) -> Vec<usize> {
    let n = sa.len();
    let mut out = vec![usize::MAX; n];
    let mut r = 0;
    while r < n {
        let mut e = r + 1;
        while e < n && lcp[e] >= len {
            e += 1;
        }
        let m = sa[r..e].iter().copied().min().unwrap();
        for &i in &sa[r..e] {
            if i + len <= n {
                out[i] = m;
            }
        }
        r = e;
    }
    out
}

/// Brute-force leftmost start of `s[start..start + len]` (0-based).
pub fn leftmost_naive(s: &[u8], start: usize, len: usize) -> usize {
    let pat = &s[start..start + len];
    s.windows(len).position(|w| w == pat).unwrap()
}

struct Occurrences<'a> {
    s: &'a [u8],
    sa: Vec<usize>,
    lcp: Vec<usize>,
    tables: HashMap<usize, Vec<usize>>,
}

impl<'a> Occurrences<'a> {
    fn new(s: &'a [u8]) -> Self {
        let sa = suffix_array(s);
        let lcp = lcp_array(s, &sa);
        Occurrences { s, sa, lcp, tables: HashMap::new() }
    }

    /// Leftmost 0-based start of `s[i..i + len]`.
    fn leftmost(&mut self, i: usize, len: usize) -> usize {
        let (sa, lcp) = (&self.sa, &self.lcp);
        let t = self.tables.entry(len).or_insert_with(|| leftmost_table(sa, lcp, len));
        debug_assert!(i + len <= self.s.len());
        t[i]
    }

    /// Does `s[i..i + len]` occur ending strictly before 0-based `limit`?
    fn occurs_before(&mut self, i: usize, len: usize, limit: usize) -> bool {
        self.leftmost(i, len) + len <= limit
    }
}

impl BlockTree {
    pub fn build(text: &Text, leaf_threshold: usize) -> Result<Self> {
        let n = text.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if leaf_threshold == 0 {
            return Err(Error::InvalidArgument("leaf threshold must be positive".into()));
        }
        let s = text.as_bytes();
        let mut occ = Occurrences::new(s);
        let mut t = BlockTree { n, leaf_threshold, blocks: Vec::new(), levels: Vec::new() };
        let root_len = n.next_power_of_two();
        let mut frontier = vec![t.push(1, root_len, 0, s)];
        let mut m = root_len;
        let mut level = 0;
        loop {
            t.levels.push(frontier.clone());
            if m <= leaf_threshold {
                break;
            }
            // prune left to right; sources always lie to the left
            let mut pos_of: HashMap<usize, BlockId> = HashMap::new();
            for (j, &b) in frontier.iter().enumerate() {
                let start = t.blocks[b].start;
                pos_of.insert(start, b);
                if j == 0 && level == 0 {
                    continue;
                }
                if let Some(kind) = t.prune_target(&mut occ, start, m, &pos_of) {
                    t.blocks[b].kind = kind;
                }
            }
            let mut next = Vec::new();
            let half = m / 2;
            level += 1;
            for &b in &frontier {
                if t.blocks[b].kind != (BlockKind::Internal { left: 0, right: None }) {
                    continue;
                }
                let start = t.blocks[b].start;
                let left = t.push(start, half, level, s);
                next.push(left);
                let right = (start + half <= n).then(|| t.push(start + half, half, level, s));
                next.extend(right);
                t.blocks[b].kind = BlockKind::Internal { left, right };
            }
            frontier = next;
            m = half;
        }
        Ok(t)
    }

    fn push(&mut self, start: usize, len: usize, level: u32, s: &[u8]) -> BlockId {
        let kind = if len <= self.leaf_threshold {
            BlockKind::Explicit(s[start - 1..(start + len - 1).min(self.n)].to_vec())
        } else {
            // placeholder until children are attached
            BlockKind::Internal { left: 0, right: None }
        };
        self.blocks.push(Block { start, len, level, kind });
        self.blocks.len() - 1
    }

    /// Pruning decision for the full block `[start, start + m)`.
    fn prune_target(
        &self,
        occ: &mut Occurrences,
        start: usize,
        m: usize,
        pos_of: &HashMap<usize, BlockId>,
    ) -> Option<BlockKind> {
        let n = self.n;
        if start + m - 1 > n {
            return None;
        }
        let i = start - 1;
        // context starting with the block, clipped at the right end
        let fwd = (2 * m).min(n - i);
        if !occ.occurs_before(i, fwd, i) {
            return None;
        }
        // context ending with the block, clipped at the left end
        let back_start = i.saturating_sub(m);
        let back = i + m - back_start;
        if !occ.occurs_before(back_start, back, i) {
            return None;
        }
        let p = occ.leftmost(i, m) + 1;
        let src_start = (p - 1) / m * m + 1;
        let source = *pos_of.get(&src_start)?;
        if !matches!(self.blocks[source].kind, BlockKind::Internal { .. }) {
            return None;
        }
        let offset = p - src_start;
        let next = if offset > 0 {
            let nb = *pos_of.get(&(src_start + m))?;
            if !matches!(self.blocks[nb].kind, BlockKind::Internal { .. }) {
                return None;
            }
            Some(nb)
        } else {
            None
        };
        Some(BlockKind::Pruned { source, next, offset })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leaf_threshold(&self) -> usize {
        self.leaf_threshold
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, id: BlockId) -> &Block {
        &self.blocks[id]
    }

    pub fn levels(&self) -> &[Vec<BlockId>] {
        &self.levels
    }

    pub fn root(&self) -> BlockId {
        0
    }

    /// Pruned and explicit blocks in text order.
    pub fn leaves(&self) -> Vec<BlockId> {
        let mut out = Vec::new();
        let mut stack = vec![self.root()];
        while let Some(b) = stack.pop() {
            match self.blocks[b].kind {
                BlockKind::Internal { left, right } => {
                    stack.extend(right);
                    stack.push(left);
                }
                _ => out.push(b),
            }
        }
        out
    }

    /// Length of a leaf with padding removed.
    pub fn leaf_len(&self, id: BlockId) -> usize {
        let b = &self.blocks[id];
        (b.start + b.len - 1).min(self.n) - b.start + 1
    }

    /// Symbol at 1-based offset `pos` inside block `id`, with the moves taken.
    pub fn extract(&self, mut id: BlockId, mut pos: usize, trace: &mut Vec<Move>) -> u8 {
        loop {
            let b = &self.blocks[id];
            match &b.kind {
                BlockKind::Explicit(bytes) => {
                    trace.push(Move::Read);
                    return bytes[pos - 1];
                }
                BlockKind::Internal { left, right } => {
                    trace.push(Move::Down);
                    let half = b.len / 2;
                    if pos <= half {
                        id = *left;
                    } else {
                        pos -= half;
                        id = right.expect("position inside the text");
                    }
                }
                BlockKind::Pruned { source, next, offset } => {
                    trace.push(Move::Shift);
                    let p = pos + offset;
                    if p <= b.len {
                        id = *source;
                        pos = p;
                    } else {
                        id = next.expect("spill block");
                        pos = p - b.len;
                    }
                }
            }
        }
    }

    /// `S[q]` from the root.
    pub fn access_naive(&self, q: usize) -> Result<u8> {
        if q == 0 || q > self.n {
            return Err(Error::OutOfRange { pos: q, len: self.n });
        }
        Ok(self.extract(self.root(), q, &mut Vec::new()))
    }

    pub fn decode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.n);
        for id in self.leaves() {
            let b = &self.blocks[id];
            for pos in 1..=self.leaf_len(id) {
                out.push(match &b.kind {
                    BlockKind::Explicit(bytes) => bytes[pos - 1],
                    _ => self.extract(id, pos, &mut Vec::new()),
                });
            }
        }
        out
    }

    pub fn stats(&self) -> BtStats {
        let pruned = self.blocks.iter().filter(|b| matches!(b.kind, BlockKind::Pruned { .. })).count();
        let explicit = self.blocks.iter().filter(|b| matches!(b.kind, BlockKind::Explicit(_))).count();
        BtStats {
            n: self.n,
            leaves: pruned + explicit,
            levels: self.levels.len(),
            blocks: self.blocks.len(),
            pruned,
            explicit,
            pruning_ratio: pruned as f64 / self.blocks.len() as f64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BlockTreeAccessor {
    tree: BlockTree,
    leaves: Vec<BlockId>,
    starts: Vec<usize>,
    pred: ZFastTrie,
}

impl BlockTreeAccessor {
    pub fn build(tree: BlockTree) -> Result<Self> {
        let leaves = tree.leaves();
        let mut starts: Vec<usize> = leaves.iter().map(|&b| tree.block(b).start).collect();
        starts.push(tree.n() + 1);
        let keys: Vec<u64> = starts[..leaves.len()].iter().map(|&x| x as u64).collect();
        let pred = ZFastTrie::build(&keys, DEFAULT_W)?;
        Ok(BlockTreeAccessor { tree, leaves, starts, pred })
    }

    pub fn tree(&self) -> &BlockTree {
        &self.tree
    }

    /// Leaf starts `x_1..x_L` followed by `n + 1`.
    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn leaf_ids(&self) -> &[BlockId] {
        &self.leaves
    }

    /// Index of the leaf containing `q` and the predecessor cost.
    pub fn locate(&self, q: usize) -> Result<(usize, u32)> {
        let n = self.tree.n();
        if q == 0 || q > n {
            return Err(Error::OutOfRange { pos: q, len: n });
        }
        let ans = self.pred.pred(q as u64)?;
        let i = self.starts.binary_search(&(ans.value as usize)).expect("leaf start");
        Ok((i, ans.k))
    }

    pub fn access_traced(&self, q: usize) -> Result<(u8, BtCost, Vec<Move>)> {
        let (i, pred_k) = self.locate(q)?;
        let mut trace = Vec::new();
        let c = self.tree.extract(self.leaves[i], q - self.starts[i] + 1, &mut trace);
        let shifts = trace.iter().filter(|&&m| m == Move::Shift).count() as u32;
        let cost = BtCost { pred_k, steps: trace.len() as u32, shifts };
        Ok((c, cost, trace))
    }

    pub fn access(&self, q: usize) -> Result<(u8, BtCost)> {
        self.access_traced(q).map(|(c, cost, _)| (c, cost))
    }

    pub fn space_words(&self) -> usize {
        4 * self.tree.blocks.len() + self.starts.len() + self.pred.space_words()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(t: &BlockTree, level: usize) -> String {
        t.levels()[level]
            .iter()
            .map(|&b| match t.block(b).kind {
                BlockKind::Internal { .. } => 'I',
                BlockKind::Pruned { .. } => 'P',
                BlockKind::Explicit(_) => 'E',
            })
            .collect()
    }

    #[test]
    fn leftmost_table_matches_naive() {
        let s = b"abracadabraabracadabrarbrbrbra";
        let sa = suffix_array(s);
        let lcp = lcp_array(s, &sa);
        for len in 1..=s.len() {
            let t = leftmost_table(&sa, &lcp, len);
            for (i, &x) in t.iter().enumerate().take(s.len() - len + 1) {
                assert_eq!(x, leftmost_naive(s, i, len));
            }
        }
    }

    #[test]
    fn abababab_prunes_tail() {
        let t = BlockTree::build(&Text::from("abababab"), 1).unwrap();
        assert_eq!(kinds(&t, 1), "II");
        assert_eq!(kinds(&t, 2), "IIPP");
        let b = t.levels()[2][2];
        assert_eq!(t.block(b).kind, BlockKind::Pruned { source: t.levels()[2][0], next: None, offset: 0 });
        assert_eq!(t.decode(), b"abababab");
    }

    #[test]
    fn abab_keeps_right_half() {
        // its left context "abab" has no earlier occurrence
        let t = BlockTree::build(&Text::from("abab"), 1).unwrap();
        assert_eq!(kinds(&t, 1), "II");
        assert_eq!(t.decode(), b"abab");
    }

    #[test]
    fn distinct_symbols_never_prune() {
        let t = BlockTree::build(&Text::from("abcd"), 1).unwrap();
        assert_eq!(t.stats().pruned, 0);
        assert_eq!(kinds(&t, 2), "EEEE");
    }

    #[test]
    fn unary_text_is_logarithmic() {
        let t = BlockTree::build(&Text::new(vec![b'a'; 64]), 4).unwrap();
        let st = t.stats();
        assert!(st.leaves <= 4 * 6, "{st:?}");
        for level in 2..t.levels().len() - 1 {
            let k = kinds(&t, level);
            assert!(k[2..].chars().all(|c| c == 'P'), "{k}");
        }
        assert_eq!(t.decode(), vec![b'a'; 64]);
    }

    #[test]
    fn padded_lengths_decode() {
        for s in ["a", "ab", "abracadabra", "abcabcabcabcabcx", "aaaaaaaaaaaaaaaaaab"] {
            for thr in [1, 2, 4] {
                let t = BlockTree::build(&Text::from(s), thr).unwrap();
                assert_eq!(t.decode(), s.as_bytes(), "{s} {thr}");
                let a = BlockTreeAccessor::build(t).unwrap();
                for q in 1..=s.len() {
                    assert_eq!(a.access(q).unwrap().0, s.as_bytes()[q - 1]);
                }
            }
        }
    }

    #[test]
    fn explicit_leaf_costs_one_read() {
        let a = BlockTreeAccessor::build(BlockTree::build(&Text::from("abcdefgh"), 4).unwrap()).unwrap();
        let (c, cost, trace) = a.access_traced(6).unwrap();
        assert_eq!(c, b'f');
        assert_eq!(trace, vec![Move::Read]);
        assert_eq!(cost.steps, 1);
    }
}
