//! Locating the phrase that contains a position inside a source interval
//! by starting the trie descent at a deep node that covers the interval.

use super::ibst::{IntervalBiasedTrie, NodeId};
use crate::{Error, Result};

/// Nodes stored for a source whose fully contained phrases are `l..=r`, `l < r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cover {
    pub l: usize,
    pub r: usize,
    /// Lowest common ancestor of leaves `l` and `r`.
    pub u: NodeId,
    /// Children of `u` above leaves `l` and `r`.
    pub ul: NodeId,
    pub ur: NodeId,
    pub v1: NodeId,
    pub vd: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceEntry {
    pub y: usize,
    pub z: usize,
    /// Smallest key index with `x >= y` (may equal `s`).
    pub first_inside: usize,
    /// Largest key index with `x < z`.
    pub last_before: usize,
    pub cover: Option<Cover>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Located {
    pub j: usize,
    /// Edges of the uncompacted trie.
    pub edges: u32,
    /// Edges of the compacted trie along the same route.
    pub compact_edges: u32,
    /// Child-predecessor comparisons, counted apart from edges.
    pub comparisons: u32,
}

#[derive(Debug, Clone)]
pub struct NavigationIndex {
    entries: Vec<SourceEntry>,
}

impl NavigationIndex {
    /// `sources[i] = (y_i, z_i)`, half-open, inside `[x_1, n)`.
    pub fn build(t: &IntervalBiasedTrie, sources: &[(usize, usize)]) -> Result<Self> {
        let s = t.len();
        let keys: Vec<usize> = (0..s).map(|i| t.key(i)).collect();
        let mut entries = Vec::with_capacity(sources.len());
        for &(y, z) in sources {
            if y >= z || y < keys[0] || z > t.n() {
                return Err(Error::InvalidArgument(format!("source [{y}, {z}) outside [{}, {})", keys[0], t.n())));
            }
            let first_inside = keys.partition_point(|&x| x < y);
            let last_before = keys.partition_point(|&x| x < z) - 1;
            let cover = (last_before >= first_inside + 2).then(|| {
                let (l, r) = (first_inside, last_before - 1);
                let (a, b) = (t.leaf(l), t.leaf(r));
                let u = t.lca(a, b);
                let du = t.node(u).depth + 1;
                let (ul, ur) = (t.ancestor_at(a, du), t.ancestor_at(b, du));
                let v1 = t.lca(a, t.leaf(t.node(ul).last));
                let vd = t.lca(b, t.leaf(t.node(ur).first));
                Cover { l, r, u, ul, ur, v1, vd }
            });
            entries.push(SourceEntry { y, z, first_inside, last_before, cover });
        }
        Ok(NavigationIndex { entries })
    }

    pub fn entry(&self, i: usize) -> &SourceEntry {
        &self.entries[i]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Start nodes `v_1, ..., v_d'` of a cover.
    pub fn cover_nodes(&self, t: &IntervalBiasedTrie, c: &Cover) -> Vec<NodeId> {
        let kids = &t.node(c.u).children;
        let a = kids.iter().position(|&k| k == c.ul).unwrap();
        let b = kids.iter().position(|&k| k == c.ur).unwrap();
        let mut out = vec![c.v1];
        out.extend(kids[a + 1..b].iter().map(|&k| t.down(k)));
        out.push(c.vd);
        out
    }

    /// `d^depth(v) * (x_r + x_(r+1) - x_l - x_(l+1)) >= n` for every cover node.
    pub fn depth_bound_holds(&self, t: &IntervalBiasedTrie, i: usize) -> bool {
        let Some(c) = self.entries[i].cover else {
            return true;
        };
        let span = (t.key(c.r) + t.key(c.r + 1) - t.key(c.l) - t.key(c.l + 1)) as u128;
        self.cover_nodes(t, &c).into_iter().all(|v| {
            let mut p = span;
            for _ in 0..t.node(v).depth {
                p = p.saturating_mul(t.d() as u128);
                if p >= t.n() as u128 {
                    return true;
                }
            }
            p >= t.n() as u128
        })
    }

    pub fn locate(&self, t: &IntervalBiasedTrie, i: usize, q: usize) -> Result<Located> {
        let e = &self.entries[i];
        if q < e.y || q >= e.z {
            return Err(Error::InvalidArgument(format!("{q} outside [{}, {})", e.y, e.z)));
        }
        let direct = |j| Ok(Located { j, ..Default::default() });
        if e.first_inside >= t.len() || q < t.key(e.first_inside) {
            return direct(e.first_inside - 1);
        }
        if q >= t.key(e.last_before) {
            return direct(e.last_before);
        }
        let Some(c) = e.cover else {
            return direct(e.first_inside);
        };
        let (up, k) = t.child_for(c.u, q);
        let start = if up == c.ul {
            c.v1
        } else if up == c.ur {
            c.vd
        } else {
            t.down(up)
        };
        let full = t.descend(start, q);
        let compact = t.descend_compact(start, q);
        debug_assert_eq!(full.key, compact.key);
        Ok(Located {
            j: full.key,
            edges: full.edges,
            compact_edges: compact.edges,
            comparisons: k + compact.comparisons,
        })
    }

    pub fn space_words(&self) -> usize {
        11 * self.entries.len()
    }
}
