//! Parses: phrases that are either explicit literals or copies of an
//! earlier or later substring, the referencing function `f`, heights and the
//! contracting parameter.

mod accessor;
pub mod ibst;
pub mod nav;

pub use accessor::{ParseAccessor, ParseCost};

use crate::blocktree::{BlockKind, BlockTree};
use crate::rlslp::{leaf_len, NodeLabel, Rlslp};
use crate::{Error, Rational, Result, Text};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phrase {
    Explicit(Vec<u8>),
    /// Copy of `S[src..src + len)`.
    Copy {
        src: usize,
        len: usize,
    },
}

impl Phrase {
    pub fn len(&self) -> usize {
        match self {
            Phrase::Explicit(b) => b.len(),
            Phrase::Copy { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, Phrase::Explicit(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Every source starts left of its phrase.
    Left,
    /// Every source starts right of its phrase.
    Right,
    Bidirectional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parse {
    phrases: Vec<Phrase>,
    /// `starts[i]` is `x_(i+1)`; the last entry is `n + 1`.
    starts: Vec<usize>,
}

/// `max(1, floor(log_sigma n))`, the default bound on explicit phrase length.
pub fn default_explicit_cap(n: usize, sigma: usize) -> usize {
    if sigma < 2 {
        return 1.max(n.ilog2() as usize);
    }
    let mut k = 0;
    let mut p = 1usize;
    while p.saturating_mul(sigma) <= n {
        p *= sigma;
        k += 1;
    }
    k.max(1)
}

/// `h[q]` for every position, plus the explicit position each chain ends at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightProfile {
    /// `h[q - 1] = h_q`.
    pub h: Vec<u32>,
    /// `root[q - 1] = f^(h_q)(q)`.
    pub root: Vec<usize>,
}

impl HeightProfile {
    pub fn at(&self, q: usize) -> u32 {
        self.h[q - 1]
    }

    pub fn max(&self) -> u32 {
        self.h.iter().copied().max().unwrap_or(0)
    }
}

impl Parse {
    /// Checks phrase lengths and source bounds; decodability is checked separately.
    pub fn new(phrases: Vec<Phrase>) -> Result<Self> {
        if phrases.is_empty() {
            return Err(Error::Empty);
        }
        let mut starts = Vec::with_capacity(phrases.len() + 1);
        let mut x = 1usize;
        for (i, p) in phrases.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::InvalidParse(format!("phrase {} is empty", i + 1)));
            }
            starts.push(x);
            x += p.len();
        }
        starts.push(x);
        let n = x - 1;
        for (i, p) in phrases.iter().enumerate() {
            if let Phrase::Copy { src, len } = *p {
                if src == 0 || src + len - 1 > n {
                    return Err(Error::InvalidParse(format!(
                        "phrase {} copies [{src}, {}] outside [1, {n}]",
                        i + 1,
                        src + len - 1
                    )));
                }
            }
        }
        Ok(Parse { phrases, starts })
    }

    pub fn phrases(&self) -> &[Phrase] {
        &self.phrases
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    /// Number of phrases.
    pub fn size(&self) -> usize {
        self.phrases.len()
    }

    pub fn n(&self) -> usize {
        self.starts[self.phrases.len()] - 1
    }

    pub fn phrase_len(&self, i: usize) -> usize {
        self.starts[i + 1] - self.starts[i]
    }

    /// 0-based index of the phrase containing `q`.
    pub fn phrase_of(&self, q: usize) -> usize {
        self.starts.partition_point(|&x| x <= q) - 1
    }

    pub fn f_of(&self, q: usize) -> Result<usize> {
        if q == 0 || q > self.n() {
            return Err(Error::OutOfRange { pos: q, len: self.n() });
        }
        let i = self.phrase_of(q);
        Ok(match self.phrases[i] {
            Phrase::Explicit(_) => q,
            Phrase::Copy { src, .. } => src + q - self.starts[i],
        })
    }

    pub fn max_explicit_len(&self) -> usize {
        self.phrases.iter().filter(|p| p.is_explicit()).map(Phrase::len).max().unwrap_or(0)
    }

    pub fn direction(&self) -> Direction {
        let mut left = false;
        let mut right = false;
        for (i, p) in self.phrases.iter().enumerate() {
            if let Phrase::Copy { src, .. } = *p {
                if src < self.starts[i] {
                    left = true;
                } else {
                    right = true;
                }
            }
        }
        match (left, right) {
            (_, false) => Direction::Left,
            (false, true) => Direction::Right,
            (true, true) => Direction::Bidirectional,
        }
    }

    pub fn height_profile(&self) -> Result<HeightProfile> {
        let n = self.n();
        const UNSEEN: u32 = u32::MAX;
        const ACTIVE: u32 = u32::MAX - 1;
        let mut h = vec![UNSEEN; n + 1];
        let mut root = vec![0usize; n + 1];
        let mut chain = Vec::new();
        for q0 in 1..=n {
            if h[q0] != UNSEEN {
                continue;
            }
            let mut q = q0;
            // walk until a resolved or explicit position
            loop {
                if h[q] == ACTIVE {
                    return Err(Error::Undecodable(q0));
                }
                if h[q] != UNSEEN {
                    break;
                }
                let fq = self.f_of(q)?;
                if fq == q {
                    h[q] = 0;
                    root[q] = q;
                    break;
                }
                h[q] = ACTIVE;
                chain.push(q);
                q = fq;
            }
            let (mut hh, r) = (h[q], root[q]);
            while let Some(p) = chain.pop() {
                hh += 1;
                h[p] = hh;
                root[p] = r;
            }
        }
        Ok(HeightProfile { h: h[1..].to_vec(), root: root[1..].to_vec() })
    }

    pub fn decode(&self) -> Result<Text> {
        let hp = self.height_profile()?;
        let lit = |q: usize| {
            let i = self.phrase_of(q);
            match &self.phrases[i] {
                Phrase::Explicit(b) => b[q - self.starts[i]],
                Phrase::Copy { .. } => unreachable!("roots lie in explicit phrases"),
            }
        };
        Ok(Text::new(hp.root.iter().map(|&r| lit(r)).collect()))
    }

    /// Smallest `alpha` making the parse alpha-contracting: the largest ratio
    /// `|P| / |source|` over sources and the phrases `P` they overlap. Zero
    /// when there are no copies.
    pub fn min_alpha(&self) -> Rational {
        let lens: Vec<usize> = (0..self.size()).map(|i| self.phrase_len(i)).collect();
        let rmq = SparseMax::new(&lens);
        let mut best = Rational::new(0, 1);
        for p in &self.phrases {
            if let Phrase::Copy { src, len } = *p {
                let a = self.phrase_of(src);
                let b = self.phrase_of(src + len - 1);
                let r = Rational::new(rmq.max(a, b) as u64, len as u64);
                if r > best {
                    best = r;
                }
            }
        }
        best
    }

    /// Parse induced by the grammar-tree leaves: terminals are explicit,
    /// pruned leaves copy the first occurrence of their symbol and `B^(k-1)`
    /// copies the text starting at its left sibling `B`.
    pub fn from_grammar(g: &Rlslp) -> Self {
        let tree = g.grammar_tree();
        let mut first = std::collections::HashMap::new();
        let mut phrases = Vec::new();
        // (node, start position)
        let mut stack = vec![(0usize, 1usize)];
        while let Some((v, x)) = stack.pop() {
            let node = &tree.nodes[v];
            match node.label {
                NodeLabel::Internal(s) => {
                    first.insert(s, x);
                    let mut pos = x;
                    let mut kids = Vec::new();
                    for &c in &node.children {
                        kids.push((c, pos));
                        pos += leaf_len(g, tree.nodes[c].label) as usize;
                    }
                    stack.extend(kids.into_iter().rev());
                }
                NodeLabel::Terminal(s) => phrases.push(Phrase::Explicit(g.expand_symbol(s))),
                NodeLabel::Pruned(s) => phrases.push(Phrase::Copy { src: first[&s], len: g.explen(s) as usize }),
                NodeLabel::Iteration { base, count } => {
                    let b = g.explen(base) as usize;
                    phrases.push(Phrase::Copy { src: x - b, len: b * count as usize });
                }
            }
        }
        Parse::new(phrases).expect("grammar tree leaves tile the text")
    }

    /// Parse induced by block-tree leaves.
    pub fn from_blocktree(t: &BlockTree) -> Self {
        let phrases = t
            .leaves()
            .into_iter()
            .map(|id| match &t.block(id).kind {
                BlockKind::Explicit(b) => Phrase::Explicit(b.clone()),
                BlockKind::Pruned { source, offset, .. } => {
                    Phrase::Copy { src: t.block(*source).start + offset, len: t.block(id).len }
                }
                BlockKind::Internal { .. } => unreachable!(),
            })
            .collect();
        Parse::new(phrases).expect("block-tree leaves tile the text")
    }
}

/// Range maximum by sparse table.
pub(crate) struct SparseMax {
    table: Vec<Vec<usize>>,
}

impl SparseMax {
    pub(crate) fn new(v: &[usize]) -> Self {
        let mut table = vec![v.to_vec()];
        let mut k = 1;
        while 2 * k <= v.len() {
            let prev = table.last().unwrap();
            let next = (0..=v.len() - 2 * k).map(|i| prev[i].max(prev[i + k])).collect();
            table.push(next);
            k *= 2;
        }
        SparseMax { table }
    }

    /// Maximum over `a..=b`.
    pub(crate) fn max(&self, a: usize, b: usize) -> usize {
        let lvl = (b - a + 1).ilog2() as usize;
        self.table[lvl][a].max(self.table[lvl][b + 1 - (1 << lvl)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rlslp::tests::{abracadabra, ABRA};

    fn abab() -> Parse {
        Parse::new(vec![Phrase::Explicit(b"ab".to_vec()), Phrase::Copy { src: 1, len: 2 }]).unwrap()
    }

    #[test]
    fn minimal_copy() {
        let p = abab();
        assert_eq!(p.decode().unwrap().as_bytes(), b"abab");
        assert_eq!(p.f_of(3).unwrap(), 1);
        let hp = p.height_profile().unwrap();
        assert_eq!((hp.at(3), hp.at(1)), (1, 0));
    }

    #[test]
    fn chain_height_two() {
        let p = Parse::new(vec![
            Phrase::Explicit(b"ab".to_vec()),
            Phrase::Copy { src: 1, len: 2 },
            Phrase::Copy { src: 3, len: 2 },
        ])
        .unwrap();
        assert_eq!(p.decode().unwrap().as_bytes(), b"ababab");
        assert_eq!(p.height_profile().unwrap().h, vec![0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn cycle_is_undecodable() {
        let p = Parse::new(vec![Phrase::Copy { src: 3, len: 2 }, Phrase::Copy { src: 1, len: 2 }]).unwrap();
        assert!(matches!(p.decode(), Err(Error::Undecodable(_))));
    }

    #[test]
    fn overlapping_self_copy() {
        let p = Parse::new(vec![Phrase::Explicit(b"a".to_vec()), Phrase::Copy { src: 1, len: 5 }]).unwrap();
        assert_eq!(p.decode().unwrap().as_bytes(), b"aaaaaa");
        assert_eq!(p.height_profile().unwrap().h, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn rejects_bad_sources() {
        assert!(Parse::new(vec![Phrase::Explicit(b"a".to_vec()), Phrase::Copy { src: 3, len: 2 }]).is_err());
        assert!(Parse::new(vec![Phrase::Copy { src: 0, len: 1 }]).is_err());
        assert!(Parse::new(vec![]).is_err());
    }

    #[test]
    fn min_alpha_ratio() {
        let p = Parse::new(vec![
            Phrase::Explicit(b"a".to_vec()),
            Phrase::Copy { src: 3, len: 1 },
            Phrase::Explicit(b"aaaaaaaa".to_vec()),
        ])
        .unwrap();
        assert_eq!(p.min_alpha(), Rational::new(8, 1));
    }

    #[test]
    fn grammar_parse_is_one_contracting() {
        let p = Parse::from_grammar(&abracadabra());
        assert_eq!(p.decode().unwrap().as_bytes(), ABRA.as_bytes());
        assert!(p.min_alpha() <= Rational::new(1, 1));
        assert_eq!(p.direction(), Direction::Left);
    }

    #[test]
    fn blocktree_parse_is_half_contracting() {
        for s in ["abababab", "abracadabraabracadabra", "aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaab"] {
            let t = BlockTree::build(&Text::from(s), 1).unwrap();
            let p = Parse::from_blocktree(&t);
            assert_eq!(p.decode().unwrap().as_bytes(), s.as_bytes());
            assert!(p.min_alpha() <= Rational::new(1, 2), "{s}");
        }
    }

    #[test]
    fn explicit_cap() {
        assert_eq!(default_explicit_cap(16, 2), 4);
        assert_eq!(default_explicit_cap(15, 4), 1);
        assert_eq!(default_explicit_cap(3, 4), 1);
    }
}
