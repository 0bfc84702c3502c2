//! Interval-biased d-ary trie: key `x_i` sits at depth
//! `floor(log_d(n / (x_(i+1) - x_i))) + 2`, so long intervals are shallow.

use crate::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrieNode {
    pub parent: Option<NodeId>,
    pub depth: u32,
    /// Digit on the edge from the parent.
    pub digit: u32,
    /// Children in digit order.
    pub children: Vec<NodeId>,
    pub leaf: Option<usize>,
    /// Leftmost and rightmost key index below.
    pub first: usize,
    pub last: usize,
}

#[derive(Debug, Clone)]
pub struct IntervalBiasedTrie {
    d: u32,
    n: usize,
    /// `x_1..x_s` followed by `n`.
    bounds: Vec<usize>,
    nodes: Vec<TrieNode>,
    leaf_node: Vec<NodeId>,
    /// Compacted children `(node, T-edges)` of nodes kept in the compacted trie.
    compact: Vec<Vec<(NodeId, u32)>>,
    /// Deepest descendant that is an ancestor of all leaves below.
    down: Vec<NodeId>,
}

/// Result of a descent to a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Descent {
    pub key: usize,
    pub edges: u32,
    /// Comparisons made choosing children at branching nodes.
    pub comparisons: u32,
}

/// `floor(log_d(n / len))`, exact.
pub fn floor_log_ratio(d: u32, n: usize, len: usize) -> u32 {
    let mut k = 0;
    let mut p = len as u128;
    while p * d as u128 <= n as u128 {
        p *= d as u128;
        k += 1;
    }
    k
}

/// First `count` base-`d` digits of `num / (d * n)`.
pub fn fraction_digits(num: usize, d: u32, n: usize, count: u32) -> Vec<u32> {
    let den = d as u128 * n as u128;
    let mut r = num as u128 % den;
    (0..count)
        .map(|_| {
            r *= d as u128;
            let digit = (r / den) as u32;
            r %= den;
            digit
        })
        .collect()
}

impl IntervalBiasedTrie {
    /// `starts` are `x_1 < ... < x_s`, all below `n`; the last interval is `[x_s, n)`.
    pub fn build(starts: &[usize], n: usize, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("arity must be at least 2, got {d}")));
        }
        if starts.is_empty() {
            return Err(Error::Empty);
        }
        if starts.windows(2).any(|w| w[0] >= w[1]) || starts[0] == 0 || *starts.last().unwrap() >= n {
            return Err(Error::InvalidArgument("starts must increase strictly within [1, n)".into()));
        }
        let mut bounds = starts.to_vec();
        bounds.push(n);
        let root = TrieNode {
            parent: None,
            depth: 0,
            digit: 0,
            children: Vec::new(),
            leaf: None,
            first: 0,
            last: starts.len() - 1,
        };
        let mut t = IntervalBiasedTrie {
            d,
            n,
            bounds,
            nodes: vec![root],
            leaf_node: Vec::with_capacity(starts.len()),
            compact: Vec::new(),
            down: Vec::new(),
        };
        for i in 0..starts.len() {
            let beta = t.beta(i);
            let mut v = 0;
            for (k, &c) in beta.iter().enumerate() {
                // keys arrive in increasing order, so only the last child can match
                let hit = t.nodes[v].children.last().copied().filter(|&u| t.nodes[u].digit == c);
                v = match hit {
                    Some(u) => {
                        t.nodes[u].last = i;
                        u
                    }
                    None => {
                        if let Some(&u) = t.nodes[v].children.last() {
                            assert!(t.nodes[u].digit < c, "beta strings out of order");
                        }
                        let u = t.nodes.len();
                        t.nodes.push(TrieNode {
                            parent: Some(v),
                            depth: k as u32 + 1,
                            digit: c,
                            children: Vec::new(),
                            leaf: None,
                            first: i,
                            last: i,
                        });
                        t.nodes[v].children.push(u);
                        u
                    }
                };
                assert!(t.nodes[v].leaf.is_none(), "beta strings not prefix-free");
            }
            assert!(t.nodes[v].children.is_empty(), "beta strings not prefix-free");
            t.nodes[v].leaf = Some(i);
            t.leaf_node.push(v);
        }
        t.finish();
        Ok(t)
    }

    fn finish(&mut self) {
        let m = self.nodes.len();
        self.down = (0..m)
            .map(|mut v| {
                while self.nodes[v].children.len() == 1 {
                    v = self.nodes[v].children[0];
                }
                v
            })
            .collect();
        self.compact = vec![Vec::new(); m];
        for v in 0..m {
            if !self.is_kept(v) {
                continue;
            }
            self.compact[v] = self.nodes[v]
                .children
                .iter()
                .map(|&c| {
                    let end = self.down[c];
                    (end, self.nodes[end].depth - self.nodes[v].depth)
                })
                .collect();
        }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of keys `s`.
    pub fn len(&self) -> usize {
        self.leaf_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaf_node.is_empty()
    }

    pub fn key(&self, i: usize) -> usize {
        self.bounds[i]
    }

    pub fn interval_len(&self, i: usize) -> usize {
        self.bounds[i + 1] - self.bounds[i]
    }

    /// `floor(log_d(n / (x_(i+1) - x_i))) + 2`.
    pub fn depth_formula(&self, i: usize) -> u32 {
        floor_log_ratio(self.d, self.n, self.interval_len(i)) + 2
    }

    /// Digits of `(x_i + x_(i+1)) / (d n)` truncated to the formula depth.
    pub fn beta(&self, i: usize) -> Vec<u32> {
        fraction_digits(self.bounds[i] + self.bounds[i + 1], self.d, self.n, self.depth_formula(i))
    }

    pub fn node(&self, v: NodeId) -> &TrieNode {
        &self.nodes[v]
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf(&self, i: usize) -> NodeId {
        self.leaf_node[i]
    }

    /// Nodes surviving compaction: the root and every node whose out-degree is not one.
    pub fn is_kept(&self, v: NodeId) -> bool {
        v == 0 || self.nodes[v].children.len() != 1
    }

    pub fn compact_node_count(&self) -> usize {
        (0..self.nodes.len()).filter(|&v| self.is_kept(v)).count()
    }

    pub fn compact_children(&self, v: NodeId) -> &[(NodeId, u32)] {
        &self.compact[v]
    }

    pub fn down(&self, v: NodeId) -> NodeId {
        self.down[v]
    }

    pub fn lca(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        while self.nodes[a].depth > self.nodes[b].depth {
            a = self.nodes[a].parent.unwrap();
        }
        while self.nodes[b].depth > self.nodes[a].depth {
            b = self.nodes[b].parent.unwrap();
        }
        while a != b {
            a = self.nodes[a].parent.unwrap();
            b = self.nodes[b].parent.unwrap();
        }
        a
    }

    /// Ancestor of `v` at depth `depth`.
    pub fn ancestor_at(&self, mut v: NodeId, depth: u32) -> NodeId {
        while self.nodes[v].depth > depth {
            v = self.nodes[v].parent.unwrap();
        }
        v
    }

    /// Child of `v` whose subtree holds the interval containing `q`, by
    /// binary search on the smallest key below each child.
    pub fn child_for(&self, v: NodeId, q: usize) -> (NodeId, u32) {
        let kids = &self.nodes[v].children;
        let (mut lo, mut hi, mut cmps) = (0usize, kids.len(), 0u32);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            cmps += 1;
            if self.key(self.nodes[kids[mid]].first) <= q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (kids[lo], cmps)
    }

    /// Descend from `v` to the leaf whose interval contains `q`.
    pub fn descend(&self, mut v: NodeId, q: usize) -> Descent {
        let (mut edges, mut comparisons) = (0, 0);
        while self.nodes[v].leaf.is_none() {
            let (c, k) = self.child_for(v, q);
            v = c;
            edges += 1;
            comparisons += k;
        }
        Descent { key: self.nodes[v].leaf.unwrap(), edges, comparisons }
    }

    /// Same as [`descend`](Self::descend) on the compacted trie; `v` must be kept.
    pub fn descend_compact(&self, mut v: NodeId, q: usize) -> Descent {
        assert!(self.is_kept(v), "start node removed by compaction");
        let (mut edges, mut comparisons) = (0, 0);
        while self.nodes[v].leaf.is_none() {
            let (c, k) = self.child_for(v, q);
            v = self.down[c];
            edges += 1;
            comparisons += k;
        }
        Descent { key: self.nodes[v].leaf.unwrap(), edges, comparisons }
    }

    /// Words: one per node for parent, depth, key range and down link, plus child lists.
    pub fn space_words(&self) -> usize {
        let kept: usize = (0..self.nodes.len()).filter(|&v| self.is_kept(v)).map(|v| 4 + self.compact[v].len()).sum();
        kept + self.bounds.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn digits(v: &[u32]) -> String {
        v.iter().map(|d| char::from_digit(*d, 36).unwrap()).collect()
    }

    #[test]
    fn two_interval_betas() {
        let t = IntervalBiasedTrie::build(&[1, 5], 8, 2).unwrap();
        assert_eq!(digits(&t.beta(0)), "011");
        assert_eq!(digits(&t.beta(1)), "110");
        assert_eq!(t.node(t.leaf(0)).depth, 3);
    }

    #[test]
    fn half_interval_depth() {
        let t = IntervalBiasedTrie::build(&[1, 9], 16, 2).unwrap();
        assert_eq!(t.depth_formula(0), 3);
        assert_eq!(t.node(t.leaf(0)).depth, 3);
    }

    #[test]
    fn single_interval() {
        let t = IntervalBiasedTrie::build(&[1], 10, 3).unwrap();
        assert_eq!(t.node(t.leaf(0)).depth, 2);
        assert_eq!(t.descend(0, 7).key, 0);
    }

    #[test]
    fn random_partitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let d = [2u32, 3, 4, 16][rng.gen_range(0..4)];
            let n = rng.gen_range(2..600usize);
            let mut starts: Vec<usize> = (2..n).filter(|_| rng.gen_bool(0.2)).collect();
            starts.insert(0, 1);
            let t = IntervalBiasedTrie::build(&starts, n, d).unwrap();
            for i in 0..starts.len() {
                assert_eq!(t.node(t.leaf(i)).depth, t.depth_formula(i));
            }
            for q in 1..n {
                let j = starts.partition_point(|&x| x <= q) - 1;
                let a = t.descend(0, q);
                let b = t.descend_compact(0, q);
                assert_eq!((a.key, b.key), (j, j));
                assert!(b.edges <= a.edges);
            }
            for v in 0..t.node_count() {
                if t.is_kept(v) && v != 0 {
                    assert_ne!(t.node(v).children.len(), 1);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(IntervalBiasedTrie::build(&[1, 1], 8, 2).is_err());
        assert!(IntervalBiasedTrie::build(&[1, 8], 8, 2).is_err());
        assert!(IntervalBiasedTrie::build(&[1], 8, 1).is_err());
    }
}
