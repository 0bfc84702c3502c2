//! Texts, the longest-repeat profile and substring complexity.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use crate::{Error, Result};

/// An immutable byte string addressed with 1-based positions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Text {
    bytes: Vec<u8>,
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Text({:?})", String::from_utf8_lossy(&self.bytes))
    }
}

impl From<&str> for Text {
    fn from(s: &str) -> Self {
        Text::new(s.as_bytes().to_vec())
    }
}

impl From<Vec<u8>> for Text {
    fn from(bytes: Vec<u8>) -> Self {
        Text::new(bytes)
    }
}

impl Text {
    pub fn new(bytes: Vec<u8>) -> Self {
        Text { bytes }
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    /// Symbol at 1-based position `q`.
    pub fn at(&self, q: usize) -> Result<u8> {
        self.check(q)?;
        Ok(self.bytes[q - 1])
    }

    /// Substring `S[i..=j]` (1-based, inclusive).
    pub fn slice(&self, i: usize, j: usize) -> &[u8] {
        &self.bytes[i - 1..j]
    }

    /// Number of distinct symbols.
    pub fn sigma(&self) -> usize {
        let mut seen = [false; 256];
        self.bytes.iter().for_each(|&b| seen[b as usize] = true);
        seen.iter().filter(|&&s| s).count()
    }

    pub(crate) fn check(&self, q: usize) -> Result<()> {
        if q == 0 || q > self.len() {
            return Err(Error::OutOfRange { pos: q, len: self.len() });
        }
        Ok(())
    }

    /// Length of the longest substring that contains position `q` and occurs
    /// at least twice (distinct starts, overlaps allowed). Zero when `S[q]`
    /// is unique.
    pub fn longest_repeat_at(&self, q: usize) -> Result<usize> {
        self.check(q)?;
        let n = self.len();
        // A repeat of length L through q shrinks to one of length L-1 through q,
        // so the feasible lengths form a prefix of 1..n.
        let mut best = 0;
        for len in 1..n {
            let lo = q.saturating_sub(len - 1).max(1);
            let hi = q.min(n - len + 1);
            let found = (lo..=hi).any(|i| occurs_elsewhere(&self.bytes, i - 1, len));
            if !found {
                break;
            }
            best = len;
        }
        Ok(best)
    }

    /// `ell[q]` for every position, computed from the suffix array and LCP array.
    pub fn repeat_profile(&self) -> RepeatProfile {
        let n = self.len();
        if n == 0 {
            return RepeatProfile { ell: Vec::new() };
        }
        let sa = suffix_array(&self.bytes);
        let lcp = lcp_array(&self.bytes, &sa);
        // longest[i]: longest repeated substring starting at 0-based i
        let mut longest = vec![0usize; n];
        for r in 0..n {
            let mut l = lcp[r];
            if r + 1 < n {
                l = l.max(lcp[r + 1]);
            }
            longest[sa[r]] = l;
        }
        let mut ell = vec![0usize; n];
        let mut heap: BinaryHeap<(usize, usize)> = BinaryHeap::new(); // (length, end exclusive)
        for q in 0..n {
            if longest[q] > 0 {
                heap.push((longest[q], q + longest[q]));
            }
            while let Some(&(_, end)) = heap.peek() {
                if end > q {
                    break;
                }
                heap.pop();
            }
            ell[q] = heap.peek().map_or(0, |&(l, _)| l);
        }
        RepeatProfile { ell }
    }

    /// `max_k d_k / k` where `d_k` counts distinct length-k substrings.
    pub fn substring_complexity(&self) -> Result<Rational> {
        self.distinct_kmer_ratios().into_iter().max().ok_or(Error::Empty)
    }

    /// `min_k d_k / k`, the literal reading of the definition. The minimum is
    /// always attained at `k = n` with value `1/n`.
    pub fn substring_complexity_min(&self) -> Result<Rational> {
        self.distinct_kmer_ratios().into_iter().min().ok_or(Error::Empty)
    }

    fn distinct_kmer_ratios(&self) -> Vec<Rational> {
        let n = self.len();
        if n == 0 {
            return Vec::new();
        }
        let sa = suffix_array(&self.bytes);
        let lcp = lcp_array(&self.bytes, &sa);
        (1..=n)
            .map(|k| {
                let d = (0..n).filter(|&r| n - sa[r] >= k && lcp[r] < k).count();
                Rational::new(d as u64, k as u64)
            })
            .collect()
    }
}

fn occurs_elsewhere(s: &[u8], start: usize, len: usize) -> bool {
    let pat = &s[start..start + len];
    s.windows(len).enumerate().any(|(j, w)| j != start && w == pat)
}

/// `ell[q-1] = ℓ_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatProfile {
    pub ell: Vec<usize>,
}

impl RepeatProfile {
    /// ℓ at 1-based position `q`.
    pub fn at(&self, q: usize) -> usize {
        self.ell[q - 1]
    }
}

/// Suffix array by prefix doubling, `O(n log^2 n)`.
pub fn suffix_array(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<usize> = s.iter().map(|&b| b as usize).collect();
    let mut tmp = vec![0usize; n];
    let mut k = 1;
    if n <= 1 {
        return sa;
    }
    loop {
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        sa.sort_by_key(|&i| key(i));
        tmp[sa[0]] = 0;
        for r in 1..n {
            tmp[sa[r]] = tmp[sa[r - 1]] + usize::from(key(sa[r - 1]) != key(sa[r]));
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

/// Kasai's algorithm: `lcp[r]` is the LCP of suffixes `sa[r-1]` and `sa[r]`, `lcp[0] = 0`.
pub fn lcp_array(s: &[u8], sa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut rank = vec![0usize; n];
    for (r, &i) in sa.iter().enumerate() {
        rank[i] = r;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1];
            while i + h < n && j + h < n && s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

/// Non-negative rational number compared by cross multiplication.
#[derive(Debug, Clone, Copy)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Rational { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn reduced(self) -> Self {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(self.num, self.den).max(1);
        Rational::new(self.num / g, self.den / g)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.den == 1 {
            write!(f, "{}", r.num)
        } else {
            write!(f, "{}/{}", r.num, r.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn longest_repeat_examples() {
        assert_eq!(Text::from("abab").longest_repeat_at(1).unwrap(), 2);
        assert_eq!(Text::from("abc").longest_repeat_at(2).unwrap(), 0);
        assert_eq!(Text::from("aaaa").longest_repeat_at(2).unwrap(), 3);
        assert!(Text::from("abc").longest_repeat_at(0).is_err());
        assert!(Text::from("abc").longest_repeat_at(4).is_err());
    }

    #[test]
    fn profile_examples() {
        assert_eq!(Text::from("abab").repeat_profile().ell, vec![2, 2, 2, 2]);
        assert_eq!(Text::from("abc").repeat_profile().ell, vec![0, 0, 0]);
        assert_eq!(Text::from("aaaa").repeat_profile().ell, vec![3, 3, 3, 3]);
        assert_eq!(Text::from("a").repeat_profile().ell, vec![0]);
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(Text::from("aaaa").substring_complexity().unwrap(), Rational::new(1, 1));
        assert_eq!(Text::from("ab").substring_complexity().unwrap(), Rational::new(2, 1));
        assert_eq!(Text::from("a").substring_complexity().unwrap(), Rational::new(1, 1));
        assert_eq!(Text::from("aaaa").substring_complexity_min().unwrap(), Rational::new(1, 4));
        assert!(Text::new(vec![]).substring_complexity().is_err());
    }

    #[test]
    fn suffix_array_sorted() {
        let s = b"mississippi";
        let sa = suffix_array(s);
        for w in sa.windows(2) {
            assert!(s[w[0]..] < s[w[1]..]);
        }
    }
}
