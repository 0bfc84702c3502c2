//! Distance-sensitive predecessor search with a w-ary z-fast trie.
//!
//! Keys are read as base-`w` strings of fixed length `H`. A query first runs
//! an exponential search over the prefixes `q_k = q[1, H - 2^k + 1]` and then
//! a fat binary search over handle lengths, so the work done is governed by
//! `log log_w (q - pred(q))`.
//!
//! Perfect hashing is a [`HashMap`]; the constant-time small-set predecessor
//! over the children of an edge is a binary search over a sorted array.

use std::collections::HashMap;

use crate::{Error, Result};

/// Largest supported arity.
pub const MAX_W: u32 = 256;

/// Unique number in `[l, r]` with the most trailing zeros.
pub fn two_fattest(l: u64, r: u64) -> Result<u64> {
    if l == 0 || l > r {
        return Err(Error::InvalidArgument(format!("empty interval [{l}, {r}]")));
    }
    if l == r {
        return Ok(l);
    }
    let d = 63 - (l ^ r).leading_zeros();
    let low = r >> (d + 1) << (d + 1);
    Ok(if low == l { l } else { r >> d << d })
}

/// Smallest power of two `H` with `w^H >= 2^w`.
pub fn digits_for(w: u32) -> u32 {
    let need = w as f64 / (w as f64).log2();
    let mut h = 1u32;
    while (h as f64) < need - 1e-9 {
        h *= 2;
    }
    h
}

/// A key together with its base-`w` digits, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitKey {
    pub value: u64,
    pub digits: Vec<u8>,
}

impl DigitKey {
    pub fn new(value: u64, w: u32, h: u32) -> Self {
        let mut digits = vec![0u8; h as usize];
        let mut v = value as u128;
        for d in digits.iter_mut().rev() {
            *d = (v % w as u128) as u8;
            v /= w as u128;
        }
        DigitKey { value, digits }
    }

    pub fn to_string_digits(&self) -> String {
        digit_string(&self.digits)
    }
}

fn digit_string(d: &[u8]) -> String {
    d.iter().map(|&c| std::char::from_digit(c as u32, 36).unwrap_or('?')).collect()
}

/// Prefix of a key: its first `len` digits read as an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prefix {
    pub len: u32,
    pub value: u128,
}

#[derive(Debug, Clone)]
struct Edge {
    l: u32,
    r: u32,
    /// `x_i[1, r]`.
    label: u128,
    /// Children sorted by their first digit (`C_e`).
    children: Vec<(u8, usize)>,
    /// Strict predecessor of the smallest key below this edge.
    xminus: u64,
    /// Largest key below this edge (`x^+(ε)`).
    xplus: u64,
}

/// Result of a predecessor query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredAnswer {
    pub value: u64,
    /// Exponential-search iterations; `log H + 1` when no prefix of `q`
    /// of length at least one qualifies.
    pub k: u32,
    /// Handle probes in the fat binary search plus edge steps after it.
    pub fat_steps: u32,
}

/// Outcome of [`ZFastTrie::exp_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpSearch {
    Found { k: u32, q: Prefix, exact: bool },
    NotFound,
}

#[derive(Debug, Clone)]
pub struct ZFastTrie {
    w: u32,
    h: u32,
    log_h: u32,
    pow: Vec<u128>,
    keys: Vec<u64>,
    edges: Vec<Edge>,
    root: Vec<(u8, usize)>,
    z: HashMap<Prefix, usize>,
    hmap: HashMap<Prefix, u32>,
}

impl ZFastTrie {
    pub fn build(keys: &[u64], w: u32) -> Result<Self> {
        if !(2..=MAX_W).contains(&w) {
            return Err(Error::InvalidArgument(format!("w must lie in [2, {MAX_W}], got {w}")));
        }
        if keys.is_empty() {
            return Err(Error::Empty);
        }
        let h = digits_for(w);
        let pow: Vec<u128> = (0..=h).map(|i| (w as u128).checked_pow(i).unwrap_or(u128::MAX)).collect();
        let mut sorted = keys.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::InvalidArgument("duplicate key".into()));
        }
        if let Some(&bad) = sorted.iter().find(|&&x| x == 0 || x as u128 >= pow[h as usize]) {
            return Err(Error::KeyOutOfUniverse { key: bad, base: w, digits: h });
        }
        let mut t = ZFastTrie {
            w,
            h,
            log_h: h.trailing_zeros(),
            pow,
            keys: sorted,
            edges: Vec::new(),
            root: Vec::new(),
            z: HashMap::new(),
            hmap: HashMap::new(),
        };
        t.root = t.build_children(0, t.keys.len(), 0);
        for (i, e) in t.edges.iter().enumerate() {
            let f = two_fattest(e.l as u64, e.r as u64)? as u32;
            let handle = Prefix { len: f, value: e.label / t.pow[(e.r - f) as usize] };
            t.z.insert(handle, i);
        }
        t.build_hmap();
        Ok(t)
    }

    /// Children of the node at depth `depth` covering sorted keys `[lo, hi)`.
    fn build_children(&mut self, lo: usize, hi: usize, depth: u32) -> Vec<(u8, usize)> {
        let mut out = Vec::new();
        let mut i = lo;
        while i < hi {
            let c = self.digit(self.keys[i], depth + 1);
            let mut j = i + 1;
            while j < hi && self.digit(self.keys[j], depth + 1) == c {
                j += 1;
            }
            out.push((c, self.build_edge(i, j, depth + 1)));
            i = j;
        }
        out
    }

    fn build_edge(&mut self, lo: usize, hi: usize, l: u32) -> usize {
        let (first, last) = (self.keys[lo], self.keys[hi - 1]);
        let mut r = l;
        while r < self.h && self.digit(first, r + 1) == self.digit(last, r + 1) {
            r += 1;
        }
        let idx = self.edges.len();
        self.edges.push(Edge {
            l,
            r,
            label: self.prefix(first, r).value,
            children: Vec::new(),
            xminus: if lo == 0 { 0 } else { self.keys[lo - 1] },
            xplus: last,
        });
        if r < self.h {
            let ch = self.build_children(lo, hi, r);
            self.edges[idx].children = ch;
        }
        idx
    }

    fn build_hmap(&mut self) {
        for ki in 0..self.keys.len() {
            let x = self.keys[ki];
            // handle lengths along the root-to-leaf path of x, increasing
            let mut handles = Vec::new();
            let mut e = self.child(&self.root, self.digit(x, 1));
            while let Some(i) = e {
                let edge = &self.edges[i];
                handles.push(two_fattest(edge.l as u64, edge.r as u64).unwrap() as u32);
                e = if edge.r < self.h { self.child(&edge.children, self.digit(x, edge.r + 1)) } else { None };
            }
            for k in 0..=self.log_h {
                let p = self.prefix(x, self.h - (1 << k) + 1);
                let best = handles.iter().copied().filter(|&f| f <= p.len).max().unwrap_or(0);
                self.hmap.insert(p, best);
            }
        }
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    /// Key length `H` in digits.
    pub fn key_digits(&self) -> u32 {
        self.h
    }

    /// `w^H`, saturated at `u128::MAX`.
    pub fn universe(&self) -> u128 {
        self.pow[self.h as usize]
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn handle_count(&self) -> usize {
        self.z.len()
    }

    pub fn hmap_len(&self) -> usize {
        self.hmap.len()
    }

    /// Machine words used: five per edge, two per child entry, two per
    /// `Hmap` entry, one per key.
    pub fn space_words(&self) -> usize {
        let children: usize = self.edges.iter().map(|e| e.children.len()).sum::<usize>() + self.root.len();
        5 * self.edges.len() + 2 * children + 2 * self.hmap.len() + 2 * self.z.len() + self.keys.len()
    }

    /// Digit strings of the edges leaving the root, in digit order.
    pub fn root_edge_labels(&self) -> Vec<String> {
        self.root.iter().map(|&(_, i)| self.edge_label(i)).collect()
    }

    /// Digits `l..=r` of edge `i`.
    fn edge_label(&self, i: usize) -> String {
        let e = &self.edges[i];
        let digits: Vec<u8> = (e.l..=e.r).map(|p| self.label_digit(e, p)).collect();
        digit_string(&digits)
    }

    /// Labels of the children of the edge whose path label is `path`.
    pub fn child_labels(&self, path: &str) -> Option<Vec<String>> {
        let p = self.parse_digits(path)?;
        let (i, at_end) = self.locate(p)?;
        if !at_end {
            return None;
        }
        Some(self.edges[i].children.iter().map(|&(_, c)| self.edge_label(c)).collect())
    }

    /// Prefix of a digit string written in base 36 characters.
    pub fn parse_digits(&self, s: &str) -> Option<Prefix> {
        let mut value = 0u128;
        for ch in s.chars() {
            let d = ch.to_digit(36)?;
            if d >= self.w {
                return None;
            }
            value = value * self.w as u128 + d as u128;
        }
        Some(Prefix { len: s.chars().count() as u32, value })
    }

    fn digit(&self, x: u64, pos: u32) -> u8 {
        ((x as u128 / self.pow[(self.h - pos) as usize]) % self.w as u128) as u8
    }

    fn label_digit(&self, e: &Edge, pos: u32) -> u8 {
        ((e.label / self.pow[(e.r - pos) as usize]) % self.w as u128) as u8
    }

    /// First `len` digits of `x`.
    pub fn prefix(&self, x: u64, len: u32) -> Prefix {
        Prefix { len, value: x as u128 / self.pow[(self.h - len) as usize] }
    }

    /// `q_k`.
    pub fn q_k(&self, q: u64, k: u32) -> Prefix {
        self.prefix(q, self.h - (1 << k) + 1)
    }

    fn child(&self, children: &[(u8, usize)], c: u8) -> Option<usize> {
        children.binary_search_by_key(&c, |&(d, _)| d).ok().map(|j| children[j].1)
    }

    /// Child with the largest first digit `<= c`.
    fn child_pred(&self, children: &[(u8, usize)], c: u8) -> Option<usize> {
        let j = children.partition_point(|&(d, _)| d <= c);
        (j > 0).then(|| children[j - 1].1)
    }

    fn label_prefix(&self, e: &Edge, len: u32) -> u128 {
        e.label / self.pow[(e.r - len) as usize]
    }

    /// Whether `p` prefixes some key, with `|p| = H - 2^k + 1`.
    pub fn prefix_member(&self, p: Prefix, k: u32) -> Result<bool> {
        if k > self.log_h || p.len != self.h - (1 << k) + 1 {
            return Err(Error::InvalidArgument(format!("prefix of length {} does not match k = {k}", p.len)));
        }
        Ok(self.locate(p).is_some())
    }

    /// Edge on which `p` ends (`l <= |p| <= r`) if `p` prefixes some key,
    /// and whether it ends exactly at the edge's lower node.
    fn locate(&self, p: Prefix) -> Option<(usize, bool)> {
        if p.len == 0 || p.len > self.h {
            return None;
        }
        let first = (p.value / self.pow[(p.len - 1) as usize]) as u8;
        let hm = self.hmap.get(&p).copied().unwrap_or(0);
        let e = if hm == 0 {
            self.child(&self.root, first)?
        } else {
            if hm > p.len {
                return None; // collision
            }
            let handle = Prefix { len: hm, value: p.value / self.pow[(p.len - hm) as usize] };
            let i = *self.z.get(&handle)?;
            let e = &self.edges[i];
            if self.label_prefix(e, hm) != handle.value {
                return None; // collision
            }
            if p.len <= e.r {
                i
            } else {
                let c = ((p.value / self.pow[(p.len - e.r - 1) as usize]) % self.w as u128) as u8;
                self.child(&e.children, c)?
            }
        };
        let edge = &self.edges[e];
        if p.len > edge.r || p.len < edge.l || self.label_prefix(edge, p.len) != p.value {
            return None;
        }
        Some((e, p.len == edge.r))
    }

    /// Smallest `k` with `P_k = {q_k, q_k - 1} ∩ (pref(X) ∪ {0})` nonempty,
    /// and `max P_k`. `exact` tells whether the maximum is `q_k` itself.
    pub fn exp_search(&self, q: u64) -> ExpSearch {
        for k in 0..=self.log_h {
            let qk = self.q_k(q, k);
            if qk.value == 0 || self.locate(qk).is_some() {
                return ExpSearch::Found { k, q: qk, exact: true };
            }
            let below = Prefix { len: qk.len, value: qk.value - 1 };
            if below.value == 0 || self.locate(below).is_some() {
                return ExpSearch::Found { k, q: below, exact: false };
            }
        }
        ExpSearch::NotFound
    }

    /// Predecessor of `q` given the smallest `k` with `q_k ∈ pref(X)`.
    /// Returns the answer and the number of handle probes and edge steps.
    pub fn fat_search_with_hint(&self, q: u64, k: u32) -> Result<(u64, u32)> {
        if k == 0 {
            return if self.keys.binary_search(&q).is_ok() {
                Ok((q, 0))
            } else {
                Err(Error::InvalidArgument(format!("hint 0 but {q} is not a key")))
            };
        }
        let qk = self.q_k(q, k);
        let (mut best, _) =
            self.locate(qk).ok_or_else(|| Error::InvalidArgument(format!("hint {k}: q_k not a prefix of any key")))?;
        let mut steps = 0;
        // start at an edge boundary so no path edge straddles the interval
        let mut a = (self.h - (1 << k) + 2).max(self.edges[best].r + 1);
        let mut b = self.h - 1;
        while a <= b {
            let f = two_fattest(a as u64, b as u64)? as u32;
            steps += 1;
            match self.z.get(&self.prefix(q, f)) {
                Some(&i) => {
                    best = i;
                    a = self.edges[i].r + 1;
                }
                None => b = f - 1,
            }
        }
        // descend to the edge on which lcp(q, X) ends
        loop {
            let e = &self.edges[best];
            let qr = self.prefix(q, e.r).value;
            if e.label < qr {
                return Ok((e.xplus, steps));
            }
            if e.label > qr {
                return Ok((e.xminus, steps));
            }
            if e.r == self.h {
                return Ok((q, steps));
            }
            let c = self.digit(q, e.r + 1);
            match self.child(&e.children, c) {
                Some(ch) => {
                    steps += 1;
                    best = ch;
                }
                None => {
                    let v = self.child_pred(&e.children, c).map_or(e.xminus, |ch| self.edges[ch].xplus);
                    return Ok((v, steps));
                }
            }
        }
    }

    /// Predecessor of `q` in `X ∪ {0}`.
    pub fn pred(&self, q: u64) -> Result<PredAnswer> {
        if q as u128 >= self.universe() {
            return Err(Error::KeyOutOfUniverse { key: q, base: self.w, digits: self.h });
        }
        if q == 0 {
            return Ok(PredAnswer { value: 0, k: 0, fat_steps: 0 });
        }
        match self.exp_search(q) {
            ExpSearch::Found { k, q: p, exact } => {
                let located = self.locate(p);
                let value = match (exact, located) {
                    (_, None) => 0,
                    (false, Some((e, _))) => self.edges[e].xplus,
                    (true, Some(_)) => {
                        let (v, steps) = self.fat_search_with_hint(q, k)?;
                        return Ok(PredAnswer { value: v, k, fat_steps: steps });
                    }
                };
                Ok(PredAnswer { value, k, fat_steps: 0 })
            }
            ExpSearch::NotFound => {
                let value = self.child_pred(&self.root, self.digit(q, 1)).map_or(0, |e| self.edges[e].xplus);
                Ok(PredAnswer { value, k: self.log_h + 1, fat_steps: 0 })
            }
        }
    }

    /// `1 + log2(1 + log_w delta)`, the bound on [`PredAnswer::k`].
    pub fn k_bound(&self, delta: u64) -> f64 {
        let lw = if delta == 0 { 0.0 } else { (delta as f64).ln() / (self.w as f64).ln() };
        1.0 + (1.0 + lw).log2()
    }
}
