//! Deterministic generators for texts, parses and grammars.

use std::collections::HashMap;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::parse::{Parse, Phrase};
use crate::rlslp::{GrammarBuilder, Rlslp, SymbolId};
use crate::{Error, Result, Text};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextKind {
    Fibonacci,
    ThueMorse,
    Random,
    Periodic,
    MutatedRepeat,
}

impl FromStr for TextKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fibonacci" => TextKind::Fibonacci,
            "thue-morse" => TextKind::ThueMorse,
            "random" => TextKind::Random,
            "periodic" => TextKind::Periodic,
            "mutated-repeat" => TextKind::MutatedRepeat,
            _ => return Err(Error::InvalidArgument(format!("unknown text kind {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseScheme {
    GreedyLz,
    RandomBidirectional,
}

impl FromStr for ParseScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy-lz" => Ok(ParseScheme::GreedyLz),
            "random-bidirectional" => Ok(ParseScheme::RandomBidirectional),
            _ => Err(Error::InvalidArgument(format!("unknown parse scheme {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrammarScheme {
    Doubling,
    RandomMerge,
}

impl FromStr for GrammarScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "doubling" => Ok(GrammarScheme::Doubling),
            "random-merge" => Ok(GrammarScheme::RandomMerge),
            _ => Err(Error::InvalidArgument(format!("unknown grammar scheme {s:?}"))),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn letters(sigma: usize) -> Vec<u8> {
    (0..sigma.clamp(1, 26)).map(|i| b'a' + i as u8).collect()
}

pub fn fibonacci(n: usize) -> Text {
    let (mut a, mut b) = (b"a".to_vec(), b"ab".to_vec());
    while b.len() < n {
        let next = [b.as_slice(), a.as_slice()].concat();
        a = std::mem::replace(&mut b, next);
    }
    b.truncate(n);
    Text::new(b)
}

pub fn thue_morse(n: usize) -> Text {
    Text::new((0..n).map(|i| if i.count_ones() % 2 == 0 { b'a' } else { b'b' }).collect())
}

pub fn random_text(n: usize, sigma: usize, seed: u64) -> Text {
    let mut r = rng(seed);
    let alpha = letters(sigma);
    Text::new((0..n).map(|_| *alpha.choose(&mut r).unwrap()).collect())
}

/// A random word of length 2..=16 repeated to length `n`.
pub fn periodic(n: usize, sigma: usize, seed: u64) -> Text {
    let mut r = rng(seed);
    let alpha = letters(sigma);
    let p = r.gen_range(2..=16);
    let word: Vec<u8> = (0..p).map(|_| *alpha.choose(&mut r).unwrap()).collect();
    Text::new((0..n).map(|i| word[i % p]).collect())
}

/// Bytes that never occur in generated backgrounds.
const MARKERS: &[u8] = b"#$%&*+0123456789@ABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Overwrite 1-based `positions` with distinct marker bytes, each unique in the result.
pub fn mutate(text: &Text, positions: &[usize]) -> Result<Text> {
    if positions.len() > MARKERS.len() {
        return Err(Error::InvalidArgument(format!("at most {} mutations", MARKERS.len())));
    }
    let mut b = text.as_bytes().to_vec();
    for (k, &q) in positions.iter().enumerate() {
        text.check(q)?;
        b[q - 1] = MARKERS[k];
    }
    Ok(Text::new(b))
}

/// Periodic background with about one unique character per 200 positions.
pub fn mutated_repeat(n: usize, sigma: usize, seed: u64) -> Text {
    let base = periodic(n, sigma, seed);
    let mut r = rng(seed ^ 0x5eed);
    let k = (n / 200).clamp(1, MARKERS.len()).min(n);
    let mut pos: Vec<usize> = (1..=n).collect();
    pos.shuffle(&mut r);
    pos.truncate(k);
    mutate(&base, &pos).expect("positions are in range")
}

pub fn text(kind: TextKind, n: usize, sigma: usize, seed: u64) -> Text {
    match kind {
        TextKind::Fibonacci => fibonacci(n),
        TextKind::ThueMorse => thue_morse(n),
        TextKind::Random => random_text(n, sigma, seed),
        TextKind::Periodic => periodic(n, sigma, seed),
        TextKind::MutatedRepeat => mutated_repeat(n, sigma, seed),
    }
}

/// Longest `len` with `s[j..j + len] == s[i..i + len]` for some `j < i`
/// (overlaps allowed), and that `j`.
fn longest_previous(s: &[u8], i: usize) -> (usize, usize) {
    let mut best = (0, 0);
    for j in 0..i {
        let l = s[j..].iter().zip(&s[i..]).take_while(|(a, b)| a == b).count();
        if l > best.0 {
            best = (l, j);
        }
    }
    best
}

/// Greedy left-to-right factorization: the longest previous factor, or a
/// single explicit character when there is none.
pub fn greedy_lz(text: &Text) -> Parse {
    let s = text.as_bytes();
    let mut phrases = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let (len, j) = longest_previous(s, i);
        if len == 0 {
            phrases.push(Phrase::Explicit(vec![s[i]]));
            i += 1;
        } else {
            phrases.push(Phrase::Copy { src: j + 1, len });
            i += len;
        }
    }
    Parse::new(phrases).expect("non-empty text")
}

/// Greedy phrase boundaries, randomly split, with each source drawn from
/// all occurrences on either side that are already decodable. Phrases are
/// resolved in random order, so the parse is acyclic by construction.
pub fn random_bidirectional(text: &Text, seed: u64) -> Parse {
    let s = text.as_bytes();
    let n = s.len();
    let mut r = rng(seed);
    let mut bounds: Vec<(usize, usize)> = Vec::new();
    let mut x = 1;
    for p in greedy_lz(text).phrases() {
        let mut len = p.len();
        while len > 1 && r.gen_bool(0.3) {
            let cut = r.gen_range(1..len);
            bounds.push((x, cut));
            x += cut;
            len -= cut;
        }
        bounds.push((x, len));
        x += len;
    }
    let mut decoded = vec![false; n + 2];
    let mut kind: Vec<Option<Phrase>> = vec![None; bounds.len()];
    let mut order: Vec<usize> = (0..bounds.len()).collect();
    order.shuffle(&mut r);
    let mut pending = order;
    while !pending.is_empty() {
        let mut rest = Vec::new();
        for &k in &pending {
            let (x, len) = bounds[k];
            let pat = &s[x - 1..x - 1 + len];
            let cands: Vec<usize> = (1..=n + 1 - len)
                .filter(|&p| p != x && decoded[p..p + len].iter().all(|&d| d) && &s[p - 1..p - 1 + len] == pat)
                .collect();
            match cands.choose(&mut r) {
                Some(&src) => {
                    kind[k] = Some(Phrase::Copy { src, len });
                    decoded[x..x + len].iter_mut().for_each(|d| *d = true);
                }
                None => rest.push(k),
            }
        }
        if rest.len() == pending.len() {
            // no progress: one single-character phrase unblocks the rest
            let k = rest.remove(0);
            kind[k] = Some(Phrase::Explicit(pat_of(s, bounds[k])));
            decoded[bounds[k].0..bounds[k].0 + bounds[k].1].iter_mut().for_each(|d| *d = true);
        }
        pending = rest;
    }
    // explicit phrases longer than one character are split
    let mut phrases = Vec::new();
    for p in kind.into_iter().map(Option::unwrap) {
        match p {
            Phrase::Explicit(b) => phrases.extend(b.into_iter().map(|c| Phrase::Explicit(vec![c]))),
            c => phrases.push(c),
        }
    }
    Parse::new(phrases).expect("phrases tile the text")
}

fn pat_of(s: &[u8], (x, len): (usize, usize)) -> Vec<u8> {
    s[x - 1..x - 1 + len].to_vec()
}

pub fn parse(text: &Text, scheme: ParseScheme, seed: u64) -> Parse {
    match scheme {
        ParseScheme::GreedyLz => greedy_lz(text),
        ParseScheme::RandomBidirectional => random_bidirectional(text, seed),
    }
}

/// `unit` followed by `copies` phrases, each copying the previous one.
pub fn chain_parse(unit: &[u8], copies: usize) -> Parse {
    let mut phrases: Vec<Phrase> = unit.iter().map(|&c| Phrase::Explicit(vec![c])).collect();
    for k in 0..copies {
        phrases.push(Phrase::Copy { src: 1 + k * unit.len(), len: unit.len() });
    }
    Parse::new(phrases).expect("non-empty unit")
}

struct Interner {
    b: GrammarBuilder,
    terminals: HashMap<u8, SymbolId>,
    pairs: HashMap<(SymbolId, SymbolId), SymbolId>,
    runs: HashMap<(SymbolId, u64), SymbolId>,
}

impl Interner {
    fn new() -> Self {
        Interner { b: GrammarBuilder::new(), terminals: HashMap::new(), pairs: HashMap::new(), runs: HashMap::new() }
    }

    fn terminal(&mut self, c: u8) -> SymbolId {
        let b = &mut self.b;
        *self.terminals.entry(c).or_insert_with(|| b.terminal(c))
    }

    fn pair(&mut self, l: SymbolId, r: SymbolId) -> SymbolId {
        let b = &mut self.b;
        *self.pairs.entry((l, r)).or_insert_with(|| b.binary(l, r))
    }

    fn run(&mut self, s: SymbolId, k: u64) -> SymbolId {
        let b = &mut self.b;
        *self.runs.entry((s, k)).or_insert_with(|| b.run(s, k))
    }
}

/// Recursive halving with identical halves shared; perfectly balanced on
/// power-of-two lengths.
pub fn doubling(text: &Text) -> Result<Rlslp> {
    if text.is_empty() {
        return Err(Error::Empty);
    }
    fn go<'a>(s: &'a [u8], it: &mut Interner, memo: &mut HashMap<&'a [u8], SymbolId>) -> SymbolId {
        if let Some(&v) = memo.get(s) {
            return v;
        }
        let v = if s.len() == 1 {
            it.terminal(s[0])
        } else {
            let h = s.len().next_power_of_two() / 2;
            let h = if h == s.len() { h / 2 } else { h };
            let l = go(&s[..h], it, memo);
            let r = go(&s[h..], it, memo);
            it.pair(l, r)
        };
        memo.insert(s, v);
        v
    }
    let mut it = Interner::new();
    let start = go(text.as_bytes(), &mut it, &mut HashMap::new());
    it.b.build(start)
}

/// Repeatedly merge a random adjacent pair, or collapse a maximal run of
/// equal symbols into a run-length rule, until one symbol remains.
pub fn random_merge(text: &Text, seed: u64) -> Result<Rlslp> {
    if text.is_empty() {
        return Err(Error::Empty);
    }
    let mut r = rng(seed);
    let mut it = Interner::new();
    let mut seq: Vec<SymbolId> = text.as_bytes().iter().map(|&c| it.terminal(c)).collect();
    while seq.len() > 1 {
        let i = r.gen_range(0..seq.len() - 1);
        let mut j = i + 1;
        while j < seq.len() && seq[j] == seq[i] {
            j += 1;
        }
        let k = (j - i) as u64;
        if k >= 2 && r.gen_bool(0.7) {
            let v = it.run(seq[i], k);
            seq.splice(i..j, [v]);
        } else {
            let v = it.pair(seq[i], seq[i + 1]);
            seq.splice(i..i + 2, [v]);
        }
    }
    it.b.build(seq[0])
}

pub fn grammar(text: &Text, scheme: GrammarScheme, seed: u64) -> Result<Rlslp> {
    match scheme {
        GrammarScheme::Doubling => doubling(text),
        GrammarScheme::RandomMerge => random_merge(text, seed),
    }
}

/// Left comb `((c1 c2) c3) ...` (or the mirrored right comb); depth `n - 1`.
pub fn comb(text: &Text, left: bool) -> Result<Rlslp> {
    if text.is_empty() {
        return Err(Error::Empty);
    }
    let mut it = Interner::new();
    let syms: Vec<SymbolId> = text.as_bytes().iter().map(|&c| it.terminal(c)).collect();
    let mut b = it.b;
    let start = if left {
        syms[1..].iter().fold(syms[0], |acc, &s| b.binary(acc, s))
    } else {
        syms[..syms.len() - 1].iter().rev().fold(syms[syms.len() - 1], |acc, &s| b.binary(s, acc))
    };
    b.build(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_prefix() {
        assert_eq!(fibonacci(8).as_bytes(), b"abaababa");
        assert_eq!(thue_morse(8).as_bytes(), b"abbabaab");
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_text(50, 2, 1), random_text(50, 2, 1));
        assert_ne!(random_text(50, 2, 1), random_text(50, 2, 2));
        assert_eq!(mutated_repeat(500, 3, 9), mutated_repeat(500, 3, 9));
    }

    #[test]
    fn planted_mutation_is_unique() {
        let base = Text::from("abra".repeat(100).as_str());
        let t = mutate(&base, &[201]).unwrap();
        assert_eq!(t.at(201).unwrap(), b'#');
        assert_eq!(t.longest_repeat_at(201).unwrap(), 0);
    }

    #[test]
    fn greedy_lz_examples() {
        let p = greedy_lz(&Text::from("aaaa"));
        assert_eq!(p.phrases(), &[Phrase::Explicit(b"a".to_vec()), Phrase::Copy { src: 1, len: 3 }]);
        for t in [fibonacci(300), mutated_repeat(400, 3, 2), random_text(200, 4, 3)] {
            assert_eq!(greedy_lz(&t).decode().unwrap(), t);
        }
    }

    #[test]
    fn random_bidirectional_decodes() {
        let mut saw_right = false;
        for seed in 0..30 {
            let t = text([TextKind::Fibonacci, TextKind::Periodic, TextKind::Random][seed as usize % 3], 200, 3, seed);
            let p = random_bidirectional(&t, seed);
            assert_eq!(p.decode().unwrap(), t);
            saw_right |= p
                .phrases()
                .iter()
                .enumerate()
                .any(|(i, ph)| matches!(ph, Phrase::Copy { src, .. } if *src > p.starts()[i]));
        }
        assert!(saw_right);
    }

    #[test]
    fn grammars_expand() {
        let t = Text::from("abababab");
        let g = doubling(&t).unwrap();
        assert_eq!(g.expand(), t);
        assert!(g.is_locally_balanced(1.0));
        for seed in 0..20 {
            let t = text(TextKind::MutatedRepeat, 300, 2, seed);
            assert_eq!(random_merge(&t, seed).unwrap().expand(), t);
            assert_eq!(doubling(&t).unwrap().expand(), t);
            assert_eq!(comb(&t, seed % 2 == 0).unwrap().expand(), t);
        }
    }
}
