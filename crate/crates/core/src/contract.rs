//! Turning a bidirectional parse into an alpha-contracting one without
//! raising any character's height: attractor gaps are cut into phrases of
//! geometrically growing length, and each phrase copies from the first
//! occurrence along its old referencing chain that touches the attractor.

use std::collections::HashMap;

use crate::parse::Parse;
use crate::parse::{ParseAccessor, Phrase};
use crate::{Error, Rational, Result, Text};

/// Sorted, deduplicated attractor positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attractor {
    pub positions: Vec<usize>,
}

impl Attractor {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Largest distance between consecutive positions.
    pub fn max_gap(&self) -> usize {
        self.positions.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    /// Is some position inside `[i, j]`?
    pub fn crosses(&self, i: usize, j: usize) -> bool {
        let k = self.positions.partition_point(|&g| g < i);
        k < self.positions.len() && self.positions[k] <= j
    }
}

/// Both ends of every phrase, plus `1`, `n` and every multiple of `ceil(n / b)` below `n`.
pub fn attractor_from_parse(p: &Parse) -> Attractor {
    let n = p.n();
    let b = p.size();
    let mut positions = vec![1, n];
    for i in 0..b {
        positions.push(p.starts()[i]);
        positions.push(p.starts()[i + 1] - 1);
    }
    let step = n.div_ceil(b);
    positions.extend((1..b).map(|k| k * step).filter(|&x| x >= 1 && x <= n));
    positions.sort_unstable();
    positions.dedup();
    Attractor { positions }
}

/// Brute force: every substring has an occurrence that crosses a position of `gamma`.
pub fn verify_attractor(text: &Text, gamma: &[usize]) -> bool {
    let s = text.as_bytes();
    let n = s.len();
    let mut sorted = gamma.to_vec();
    sorted.sort_unstable();
    let a = Attractor { positions: sorted };
    for len in 1..=n {
        let mut crossed: HashMap<&[u8], bool> = HashMap::new();
        for i in 0..=n - len {
            let hit = a.crosses(i + 1, i + len);
            *crossed.entry(&s[i..i + len]).or_insert(false) |= hit;
        }
        if crossed.values().any(|&c| !c) {
            return false;
        }
    }
    true
}

/// Summary of one transform.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractReport {
    pub size_in: usize,
    pub size_out: usize,
    pub max_height_in: u32,
    pub max_height_out: u32,
    pub min_alpha_out: Rational,
    pub attractor_len: usize,
}

struct Builder<'a> {
    p: &'a Parse,
    text: &'a [u8],
    gamma: &'a Attractor,
    out: Vec<Phrase>,
}

impl Builder<'_> {
    fn explicit(&mut self, q: usize) {
        self.out.push(Phrase::Explicit(vec![self.text[q - 1]]));
    }

    /// Phrase `[pos, pos + len)`, lying strictly inside one input phrase.
    fn piece(&mut self, pos: usize, len: usize) {
        let i = self.p.phrase_of(pos);
        if self.p.phrases()[i].is_explicit() {
            (pos..pos + len).for_each(|q| self.explicit(q));
            return;
        }
        let mut s = pos;
        loop {
            let i = self.p.phrase_of(s);
            let Phrase::Copy { src, .. } = self.p.phrases()[i] else {
                break;
            };
            s = s - self.p.starts()[i] + src;
            if self.gamma.crosses(s, s + len - 1) {
                break;
            }
        }
        self.out.push(Phrase::Copy { src: s, len });
    }

    /// Open interval `(a, b)` between consecutive attractor positions.
    fn gap(&mut self, a: usize, b: usize, alpha: usize) {
        if b - a <= 1 {
            return;
        }
        let m = (a + b) / 2;
        let (mut pos, mut len) = (a + 1, alpha);
        while pos + len <= m {
            self.piece(pos, len);
            pos += len;
            len = len.saturating_mul(alpha);
        }
        if pos < m {
            self.piece(pos, m - pos);
        }
        self.explicit(m);
        let mut right = Vec::new();
        let (mut end, mut len) = (b - 1, alpha);
        while end >= m + len {
            right.push((end + 1 - len, len));
            end -= len;
            len = len.saturating_mul(alpha);
        }
        if end > m {
            self.piece(m + 1, end - m);
        }
        for (pos, len) in right.into_iter().rev() {
            self.piece(pos, len);
        }
    }
}

/// An `alpha`-contracting parse of the same text in which no height grows.
pub fn make_contracting(p: &Parse, alpha: u64) -> Result<Parse> {
    if alpha < 2 {
        return Err(Error::InvalidArgument(format!("alpha must be at least 2, got {alpha}")));
    }
    let text = p.decode()?;
    let gamma = attractor_from_parse(p);
    let mut b = Builder { p, text: text.as_bytes(), gamma: &gamma, out: Vec::new() };
    let alpha = usize::try_from(alpha).unwrap_or(usize::MAX);
    for (k, &g) in gamma.positions.iter().enumerate() {
        b.explicit(g);
        if let Some(&next) = gamma.positions.get(k + 1) {
            b.gap(g, next, alpha);
        }
    }
    Parse::new(b.out)
}

pub fn contract_report(before: &Parse, after: &Parse) -> Result<ContractReport> {
    Ok(ContractReport {
        size_in: before.size(),
        size_out: after.size(),
        max_height_in: before.height_profile()?.max(),
        max_height_out: after.height_profile()?.max(),
        min_alpha_out: after.min_alpha(),
        attractor_len: attractor_from_parse(before).len(),
    })
}

/// Contract with `alpha = w`, then index with trie arity `w`.
pub fn end_to_end(p: &Parse, w: u32) -> Result<ParseAccessor> {
    let c = make_contracting(p, w as u64)?;
    ParseAccessor::build(c, w, Rational::new(w as u64, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abab() -> Parse {
        Parse::new(vec![Phrase::Explicit(b"ab".to_vec()), Phrase::Copy { src: 1, len: 2 }]).unwrap()
    }

    #[test]
    fn abab_attractor() {
        let g = attractor_from_parse(&abab());
        assert_eq!(g.positions, vec![1, 2, 3, 4]);
        assert!(verify_attractor(&Text::from("abab"), &g.positions));
    }

    #[test]
    fn sampling_positions() {
        let mut phrases = vec![Phrase::Explicit(b"a".to_vec()), Phrase::Explicit(b"b".to_vec())];
        phrases.push(Phrase::Copy { src: 1, len: 19 });
        phrases.push(Phrase::Copy { src: 2, len: 19 });
        let p = Parse::new(phrases).unwrap();
        assert_eq!(p.n(), 40);
        let g = attractor_from_parse(&p);
        for x in [10, 20, 30] {
            assert!(g.positions.contains(&x));
        }
        assert!(g.max_gap() <= 10);
    }

    #[test]
    fn attractor_oracle_examples() {
        let t = Text::from("abc");
        assert!(verify_attractor(&t, &[1, 2, 3]));
        assert!(!verify_attractor(&t, &[2]));
        assert!(verify_attractor(&Text::from("aaa"), &[2]));
    }

    #[test]
    fn abab_contracts() {
        let p = abab();
        let c = make_contracting(&p, 2).unwrap();
        assert_eq!(c.decode().unwrap().as_bytes(), b"abab");
        assert!(c.min_alpha() <= Rational::new(2, 1));
        let (h0, h1) = (p.height_profile().unwrap(), c.height_profile().unwrap());
        assert!(h1.h.iter().zip(&h0.h).all(|(a, b)| a <= b));
        assert!(make_contracting(&p, 1).is_err());
    }

    #[test]
    fn long_run_contracts() {
        let p = Parse::new(vec![Phrase::Explicit(b"a".to_vec()), Phrase::Copy { src: 1, len: 999 }]).unwrap();
        for alpha in [2, 4, 16] {
            let c = make_contracting(&p, alpha).unwrap();
            assert_eq!(c.decode().unwrap().as_bytes(), vec![b'a'; 1000]);
            assert!(c.min_alpha() <= Rational::new(alpha, 1), "{alpha}: {}", c.min_alpha());
            let (h0, h1) = (p.height_profile().unwrap(), c.height_profile().unwrap());
            assert!(h1.h.iter().zip(&h0.h).all(|(a, b)| a <= b));
            let a = end_to_end(&p, alpha as u32).unwrap();
            for q in (1..=1000).step_by(37) {
                assert_eq!(a.access(q).unwrap().0, b'a');
            }
        }
    }
}
