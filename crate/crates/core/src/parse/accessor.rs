use super::ibst::IntervalBiasedTrie;
use super::nav::NavigationIndex;
use super::{Parse, Phrase};
use crate::dspred::ZFastTrie;
use crate::grammar_access::DEFAULT_W;
use crate::{Error, Rational, Result};

/// Work done by one access.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParseCost {
    pub pred_k: u32,
    /// Passes through the explicit-or-copy test; `h_q + 1`.
    pub iterations: u32,
    pub trie_edges: u32,
    pub compact_edges: u32,
    pub comparisons: u32,
    /// Phrases visited, starting with the one containing `q`.
    pub chain: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ParseAccessor {
    parse: Parse,
    trie: IntervalBiasedTrie,
    nav: NavigationIndex,
    pred: ZFastTrie,
    /// Navigation entry per phrase, `None` for explicit ones.
    source_of: Vec<Option<usize>>,
    alpha: Rational,
}

impl ParseAccessor {
    /// Trie arity `d` (the word size in the analysis; [`DEFAULT_W`] in
    /// practice). Fails when the parse is not `alpha`-contracting or cannot be decoded.
    pub fn build(parse: Parse, d: u32, alpha: Rational) -> Result<Self> {
        parse.height_profile()?;
        let actual = parse.min_alpha();
        if actual > alpha {
            return Err(Error::NotContracting { alpha, actual });
        }
        let t = parse.size();
        let starts = &parse.starts()[..t];
        let trie = IntervalBiasedTrie::build(starts, parse.n() + 1, d)?;
        let mut sources = Vec::new();
        let mut source_of = vec![None; t];
        for (i, p) in parse.phrases().iter().enumerate() {
            if let Phrase::Copy { src, len } = *p {
                source_of[i] = Some(sources.len());
                sources.push((src, src + len));
            }
        }
        let nav = NavigationIndex::build(&trie, &sources)?;
        let keys: Vec<u64> = starts.iter().map(|&x| x as u64).collect();
        let pred = ZFastTrie::build(&keys, DEFAULT_W)?;
        Ok(ParseAccessor { parse, trie, nav, pred, source_of, alpha })
    }

    pub fn parse(&self) -> &Parse {
        &self.parse
    }

    pub fn trie(&self) -> &IntervalBiasedTrie {
        &self.trie
    }

    pub fn nav(&self) -> &NavigationIndex {
        &self.nav
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    pub fn d(&self) -> u32 {
        self.trie.d()
    }

    pub fn access(&self, q: usize) -> Result<(u8, ParseCost)> {
        let n = self.parse.n();
        if q == 0 || q > n {
            return Err(Error::OutOfRange { pos: q, len: n });
        }
        let ans = self.pred.pred(q as u64)?;
        let starts = self.parse.starts();
        let mut i = starts.partition_point(|&x| x <= ans.value as usize) - 1;
        debug_assert_eq!(starts[i], ans.value as usize);
        let mut q = q;
        let mut cost = ParseCost { pred_k: ans.k, ..Default::default() };
        loop {
            cost.iterations += 1;
            cost.chain.push(i);
            match &self.parse.phrases()[i] {
                Phrase::Explicit(b) => return Ok((b[q - starts[i]], cost)),
                Phrase::Copy { src, .. } => {
                    q = q - starts[i] + src;
                    let e = self.source_of[i].expect("copy phrase has a source entry");
                    let loc = self.nav.locate(&self.trie, e, q)?;
                    cost.trie_edges += loc.edges;
                    cost.compact_edges += loc.compact_edges;
                    cost.comparisons += loc.comparisons;
                    i = loc.j;
                }
            }
        }
    }

    pub fn space_words(&self) -> usize {
        self.trie.space_words() + self.nav.space_words() + self.pred.space_words() + 2 * self.parse.size()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocktree::BlockTree;
    use crate::rlslp::tests::abracadabra;
    use crate::Text;

    #[test]
    fn abab_copy_then_read() {
        let p = Parse::new(vec![Phrase::Explicit(b"ab".to_vec()), Phrase::Copy { src: 1, len: 2 }]).unwrap();
        let a = ParseAccessor::build(p, 16, Rational::new(1, 1)).unwrap();
        let (c, cost) = a.access(4).unwrap();
        assert_eq!((c, cost.iterations), (b'b', 2));
        let (c, cost) = a.access(2).unwrap();
        assert_eq!((c, cost.iterations, cost.trie_edges), (b'b', 1, 0));
    }

    #[test]
    fn rejects_loose_parse() {
        let p = Parse::new(vec![
            Phrase::Explicit(b"a".to_vec()),
            Phrase::Copy { src: 3, len: 1 },
            Phrase::Explicit(b"aaaaaaaa".to_vec()),
        ])
        .unwrap();
        assert!(matches!(ParseAccessor::build(p, 4, Rational::new(4, 1)), Err(Error::NotContracting { .. })));
    }

    #[test]
    fn induced_parses_exhaustive() {
        let g = abracadabra();
        let s = g.expand();
        let t = BlockTree::build(&Text::from("abracadabraabracadabrabrabra"), 2).unwrap();
        let bt_text = t.decode();
        for (p, text) in [(Parse::from_grammar(&g), s.as_bytes().to_vec()), (Parse::from_blocktree(&t), bt_text)] {
            let hp = p.height_profile().unwrap();
            for w in [2, 4, 64] {
                let a = ParseAccessor::build(p.clone(), w, Rational::new(1, 1)).unwrap();
                for q in 1..=text.len() {
                    let (c, cost) = a.access(q).unwrap();
                    assert_eq!(c, text[q - 1]);
                    assert_eq!(cost.iterations, hp.at(q) + 1);
                }
            }
        }
    }
}
