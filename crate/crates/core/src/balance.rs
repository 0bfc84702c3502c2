//! Heavy forests, contracting prefix grammars, and balancing of RLSLPs.
//!
//! Every non-root variable `A` of the heavy forest factors as
//! `rev(left prefix) · exp(B) · right prefix`, where `B` is the root of its
//! heavy tree. The prefixes are derived by contracting grammars over the
//! labeled heavy trees, which makes every rule contracting; Chomsky normal
//! form then costs only a constant factor in height.

use std::collections::{BTreeMap, HashMap};

use crate::rlslp::{Rlslp, Rule, SymbolId};
use crate::{Error, Result};

/// Local-balance constant asserted on every [`balance`] output.
pub const C_BAL_HEIGHT: f64 = 3.0;
/// Size constant: `balance(g).size() <= C_BAL_SIZE * g.size()`.
pub const C_BAL_SIZE: f64 = 8.0;
/// Longest right-hand side produced before Chomsky normal form.
pub const MAX_RHS: usize = 4;

/// The edge from a variable to its heavy child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeavyEdge {
    pub heavy: SymbolId,
    /// Left light child.
    pub lambda: Option<SymbolId>,
    /// Right light child.
    pub rho: Option<SymbolId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyForest {
    /// Outgoing heavy edge of every non-root variable.
    pub edges: BTreeMap<SymbolId, HeavyEdge>,
    /// Variables without a heavy child, in topological order.
    pub roots: Vec<SymbolId>,
}

impl HeavyForest {
    pub fn edge(&self, a: SymbolId) -> Option<HeavyEdge> {
        self.edges.get(&a).copied()
    }

    /// Root of the heavy tree containing `a`.
    pub fn root_of(&self, mut a: SymbolId) -> SymbolId {
        while let Some(e) = self.edges.get(&a) {
            a = e.heavy;
        }
        a
    }

    /// `a`, its heavy child, and so on down to the root.
    pub fn path(&self, mut a: SymbolId) -> Vec<SymbolId> {
        let mut out = vec![a];
        while let Some(e) = self.edges.get(&a) {
            a = e.heavy;
            out.push(a);
        }
        out
    }
}

/// Heavy child `B` of `A`: `B` occurs in the right-hand side of `A` and
/// `|exp(B)| > |exp(A)| / 2`. Run-length variables and terminals are roots.
pub fn heavy_forest(g: &Rlslp) -> HeavyForest {
    let mut edges = BTreeMap::new();
    let mut roots = Vec::new();
    for &a in g.topological() {
        let edge = match g.rule(a) {
            Rule::Binary(l, r) => {
                let n = g.explen(a);
                if 2 * g.explen(l) > n {
                    Some(HeavyEdge { heavy: l, lambda: None, rho: Some(r) })
                } else if 2 * g.explen(r) > n {
                    Some(HeavyEdge { heavy: r, lambda: Some(l), rho: None })
                } else {
                    None
                }
            }
            _ => None,
        };
        match edge {
            Some(e) => {
                edges.insert(a, e);
            }
            None => roots.push(a),
        }
    }
    HeavyForest { edges, roots }
}

/// Right-hand side of a run-length grammar rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CRule {
    Terminal(u8),
    Seq(Vec<SymbolId>),
    Run(SymbolId, u64),
}

/// Run-length grammar whose sequence rules may be longer than two.
#[derive(Debug, Clone, Default)]
pub struct ContractingGrammar {
    rules: BTreeMap<SymbolId, CRule>,
    explen: HashMap<SymbolId, u64>,
    start: Option<SymbolId>,
}

impl ContractingGrammar {
    pub fn rules(&self) -> &BTreeMap<SymbolId, CRule> {
        &self.rules
    }

    pub fn start(&self) -> Option<SymbolId> {
        self.start
    }

    pub fn size(&self) -> usize {
        self.rules.len()
    }

    pub fn explen(&self, sym: SymbolId) -> u64 {
        self.explen[&sym]
    }

    /// Longest sequence right-hand side.
    pub fn max_rhs(&self) -> usize {
        self.rules
            .values()
            .map(|r| match r {
                CRule::Seq(s) => s.len(),
                _ => 1,
            })
            .max()
            .unwrap_or(0)
    }

    /// Sequence rules with a symbol longer than half the left-hand side.
    pub fn non_contracting(&self) -> Vec<SymbolId> {
        self.rules
            .iter()
            .filter(|(a, r)| match r {
                CRule::Seq(s) => s.iter().any(|b| 2 * self.explen[b] > self.explen[a]),
                _ => false,
            })
            .map(|(&a, _)| a)
            .collect()
    }

    pub fn is_contracting(&self) -> bool {
        self.non_contracting().is_empty()
    }

    pub fn expand_symbol(&self, sym: SymbolId) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.explen[&sym] as usize);
        self.expand_into(sym, &mut out);
        out
    }

    fn expand_into(&self, sym: SymbolId, out: &mut Vec<u8>) {
        match &self.rules[&sym] {
            CRule::Terminal(c) => out.push(*c),
            CRule::Seq(s) => s.iter().for_each(|&b| self.expand_into(b, out)),
            CRule::Run(b, k) => {
                let from = out.len();
                self.expand_into(*b, out);
                let piece = out[from..].to_vec();
                for _ in 1..*k {
                    out.extend_from_slice(&piece);
                }
            }
        }
    }
}

/// Mutable grammar under construction, shared by the prefix-grammar and
/// balancing passes.
#[derive(Debug, Default)]
struct CgBuilder {
    g: ContractingGrammar,
    next: SymbolId,
    seqs: HashMap<Vec<SymbolId>, SymbolId>,
    runs: HashMap<(SymbolId, u64), SymbolId>,
}

impl CgBuilder {
    fn from_grammar(g: ContractingGrammar) -> Self {
        let next = g.rules.keys().next_back().map_or(0, |&m| m + 1);
        let mut b = CgBuilder { g, next, ..Default::default() };
        for (&a, r) in &b.g.rules {
            match r {
                CRule::Seq(s) => {
                    b.seqs.insert(s.clone(), a);
                }
                CRule::Run(x, k) => {
                    b.runs.insert((*x, *k), a);
                }
                CRule::Terminal(_) => {}
            }
        }
        b
    }

    fn len(&self, s: SymbolId) -> u64 {
        self.g.explen[&s]
    }

    fn define(&mut self, a: SymbolId, rule: CRule) {
        let len = match &rule {
            CRule::Terminal(_) => 1,
            CRule::Seq(s) => s.iter().map(|&b| self.len(b)).sum(),
            CRule::Run(b, k) => self.len(*b) * k,
        };
        match &rule {
            CRule::Seq(s) => {
                self.seqs.entry(s.clone()).or_insert(a);
            }
            CRule::Run(b, k) => {
                self.runs.entry((*b, *k)).or_insert(a);
            }
            CRule::Terminal(_) => {}
        }
        self.g.explen.insert(a, len);
        self.g.rules.insert(a, rule);
        self.next = self.next.max(a + 1);
    }

    fn fresh(&mut self, rule: CRule) -> SymbolId {
        let a = self.next;
        self.define(a, rule);
        a
    }

    fn run(&mut self, base: SymbolId, k: u64) -> SymbolId {
        if k == 1 {
            return base;
        }
        match self.runs.get(&(base, k)) {
            Some(&a) => a,
            None => self.fresh(CRule::Run(base, k)),
        }
    }

    /// Pieces of `s`, each at most half of `|exp(s)|`.
    fn halves(&mut self, s: SymbolId) -> Vec<SymbolId> {
        match self.g.rules[&s].clone() {
            CRule::Seq(p) => p,
            CRule::Run(b, k) if k <= 3 => vec![b; k as usize],
            CRule::Run(b, k) if k % 2 == 0 => {
                let h = self.run(b, k / 2);
                vec![h, h]
            }
            CRule::Run(b, k) => {
                let h = self.run(b, k / 2);
                vec![h, b, h]
            }
            CRule::Terminal(_) => vec![s],
        }
    }

    /// A symbol deriving the concatenation of `pieces` with a contracting
    /// rule, or `None` for the empty string.
    fn make(&mut self, pieces: &[Option<SymbolId>]) -> Option<SymbolId> {
        let p: Vec<SymbolId> = pieces.iter().flatten().copied().collect();
        match p.len() {
            0 => None,
            1 => Some(p[0]),
            _ => Some(self.name(p)),
        }
    }

    fn name(&mut self, p: Vec<SymbolId>) -> SymbolId {
        if p.len() == 1 {
            return p[0];
        }
        let rhs = self.contract(p);
        match self.seqs.get(&rhs) {
            Some(&a) => a,
            None => self.fresh(CRule::Seq(rhs)),
        }
    }

    /// A right-hand side for the concatenation of `p` in which every symbol
    /// is at most half the total and which has at most [`MAX_RHS`] symbols.
    fn contract(&mut self, mut p: Vec<SymbolId>) -> Vec<SymbolId> {
        let total: u64 = p.iter().map(|&s| self.len(s)).sum();
        if let Some(i) = p.iter().position(|&s| 2 * self.len(s) > total) {
            let inner = self.halves(p[i]);
            p.splice(i..=i, inner);
        }
        if p.len() <= MAX_RHS {
            return p;
        }
        // regroup around the symbol covering the midpoint
        let mut acc = 0;
        let c = p
            .iter()
            .position(|&s| {
                acc += self.len(s);
                2 * acc > total
            })
            .expect("weights sum to total");
        let mut out = Vec::with_capacity(3);
        if c > 0 {
            out.push(self.name(p[..c].to_vec()));
        }
        out.push(p[c]);
        if c + 1 < p.len() {
            out.push(self.name(p[c + 1..].to_vec()));
        }
        out
    }
}

/// Rooted forest whose non-root nodes carry the label of the edge to their parent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledTree {
    pub parent: Vec<Option<usize>>,
    pub label: Vec<Option<SymbolId>>,
}

impl LabeledTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_root(&mut self) -> usize {
        self.parent.push(None);
        self.label.push(None);
        self.parent.len() - 1
    }

    pub fn add_child(&mut self, parent: usize, label: Option<SymbolId>) -> usize {
        self.parent.push(Some(parent));
        self.label.push(label);
        self.parent.len() - 1
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Labels read from the root down to `v`.
    pub fn prefix(&self, mut v: usize) -> Vec<SymbolId> {
        let mut out = Vec::new();
        while let Some(p) = self.parent[v] {
            out.extend(self.label[v]);
            v = p;
        }
        out.reverse();
        out
    }
}

/// Which factor of a heavy-tree factorization a prefix grammar derives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Prefixes read backwards, from the node up to the root.
    Left,
    /// Prefixes read from the root down.
    Right,
}

struct PrefixBuilder<'t> {
    tree: &'t LabeledTree,
    side: Side,
    /// Total label length from the root down to each node.
    weight: Vec<u64>,
    memo: HashMap<(usize, usize), Option<SymbolId>>,
}

impl<'t> PrefixBuilder<'t> {
    fn new(tree: &'t LabeledTree, side: Side, cg: &CgBuilder) -> Self {
        let mut weight = vec![u64::MAX; tree.len()];
        for v in 0..tree.len() {
            let mut chain = Vec::new();
            let mut x = v;
            while weight[x] == u64::MAX {
                chain.push(x);
                match tree.parent[x] {
                    Some(p) => x = p,
                    None => break,
                }
            }
            for &y in chain.iter().rev() {
                let own = tree.label[y].map_or(0, |s| cg.len(s));
                weight[y] = tree.parent[y].map_or(0, |p| weight[p]) + own;
            }
        }
        PrefixBuilder { tree, side, weight, memo: HashMap::new() }
    }

    fn root_of(&self, mut v: usize) -> usize {
        while let Some(p) = self.tree.parent[v] {
            v = p;
        }
        v
    }

    fn prefix(&mut self, cg: &mut CgBuilder, v: usize) -> Option<SymbolId> {
        let r = self.root_of(v);
        self.rel(cg, r, v)
    }

    /// Labels strictly below ancestor `a` down to `v`. The split points are
    /// the dyadic offsets `2^(L-1)` and `2^L` from `a`, so pieces are shared
    /// between all descendants that agree up to them.
    fn rel(&mut self, cg: &mut CgBuilder, a: usize, v: usize) -> Option<SymbolId> {
        if a == v {
            return None;
        }
        if let Some(&s) = self.memo.get(&(a, v)) {
            return s;
        }
        let mut path = Vec::new();
        let mut x = v;
        while x != a {
            path.push(x);
            x = self.tree.parent[x].expect("a is an ancestor of v");
        }
        path.reverse();
        let base = self.weight[a];
        let total = self.weight[v] - base;
        let labelled: Vec<usize> = path.iter().copied().filter(|&p| self.tree.label[p].is_some()).collect();
        let out = if labelled.len() <= 1 {
            labelled.first().and_then(|&p| self.tree.label[p])
        } else {
            let l = 63 - total.leading_zeros();
            let b1 = base + (1u64 << (l - 1));
            let b2 = base + (1u64 << l);
            let i1 = path.iter().position(|&p| self.weight[p] > b1).expect("total exceeds half");
            let before1 = if i1 == 0 { a } else { path[i1 - 1] };
            let first = self.rel(cg, a, before1);
            let cross1 = self.tree.label[path[i1]];
            let mut pieces = vec![first, cross1];
            match path.iter().position(|&p| self.weight[p] > b2) {
                Some(i2) if i2 > i1 => {
                    let mid = self.rel(cg, path[i1], path[i2 - 1]);
                    let cross2 = self.tree.label[path[i2]];
                    let tail = self.rel(cg, path[i2], v);
                    pieces.extend([mid, cross2, tail]);
                }
                _ => pieces.push(self.rel(cg, path[i1], v)),
            }
            if self.side == Side::Left {
                pieces.reverse();
            }
            cg.make(&pieces)
        };
        self.memo.insert((a, v), out);
        out
    }
}

/// Contracting grammar defining every prefix of a labeled tree.
#[derive(Debug, Clone)]
pub struct PrefixGrammar {
    pub grammar: ContractingGrammar,
    /// Variable deriving the prefix of each node; `None` for the empty prefix.
    pub vars: Vec<Option<SymbolId>>,
    /// Rules added on top of the base grammar.
    pub added: usize,
}

/// Builds variables for all prefixes of `tree` (reversed for [`Side::Left`])
/// on top of `base`, whose symbols label the tree. Labels longer than half
/// of a prefix are opened through their own rules, so `base` should be
/// contracting for the result to be.
pub fn prefix_grammar(base: &ContractingGrammar, tree: &LabeledTree, side: Side) -> Result<PrefixGrammar> {
    if let Some(&s) = tree.label.iter().flatten().find(|s| !base.rules.contains_key(s)) {
        return Err(Error::Dangling(s));
    }
    let before = base.size();
    let mut cg = CgBuilder::from_grammar(base.clone());
    let mut pb = PrefixBuilder::new(tree, side, &cg);
    let vars = (0..tree.len()).map(|v| pb.prefix(&mut cg, v)).collect();
    let added = cg.g.size() - before;
    Ok(PrefixGrammar { grammar: cg.g, vars, added })
}

impl ContractingGrammar {
    /// The terminal rules of an alphabet, numbered by byte value.
    pub fn terminals(bytes: &[u8]) -> Self {
        let mut g = ContractingGrammar::default();
        for &c in bytes {
            g.rules.insert(c as SymbolId, CRule::Terminal(c));
            g.explen.insert(c as SymbolId, 1);
        }
        g
    }
}

/// Heavy trees of `forest` as one labeled forest per side. Node `i` of both
/// trees is `syms[i]`.
fn heavy_trees(g: &Rlslp, forest: &HeavyForest) -> (Vec<SymbolId>, HashMap<SymbolId, usize>, LabeledTree, LabeledTree) {
    let syms: Vec<SymbolId> = g.topological().to_vec();
    let index: HashMap<SymbolId, usize> = syms.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut left = LabeledTree { parent: vec![None; syms.len()], label: vec![None; syms.len()] };
    let mut right = left.clone();
    for (&a, e) in &forest.edges {
        let i = index[&a];
        let p = Some(index[&e.heavy]);
        left.parent[i] = p;
        right.parent[i] = p;
        left.label[i] = e.lambda;
        right.label[i] = e.rho;
    }
    (syms, index, left, right)
}

/// The contracting run-length grammar of the balancing construction, before
/// conversion to Chomsky normal form. Original symbols keep their ids.
pub fn contracting_grammar(g: &Rlslp) -> ContractingGrammar {
    let forest = heavy_forest(g);
    let (syms, index, left, right) = heavy_trees(g, &forest);
    let mut cg = CgBuilder { next: g.rules().keys().next_back().map_or(0, |&m| m + 1), ..Default::default() };
    for &s in &syms {
        cg.g.explen.insert(s, g.explen(s));
    }
    let mut lb = PrefixBuilder::new(&left, Side::Left, &cg);
    let mut rb = PrefixBuilder::new(&right, Side::Right, &cg);
    // children first: every label below A is final before A is built
    for &a in &syms {
        match forest.edge(a) {
            None => {
                let rule = match g.rule(a) {
                    Rule::Terminal(c) => CRule::Terminal(c),
                    Rule::Binary(l, r) => CRule::Seq(vec![l, r]),
                    Rule::Run(b, k) => CRule::Run(b, k),
                };
                cg.define(a, rule);
            }
            Some(_) => {
                let b = forest.root_of(a);
                let xl = lb.prefix(&mut cg, index[&a]);
                let xr = rb.prefix(&mut cg, index[&a]);
                let pieces = cg.contract([xl, Some(b), xr].into_iter().flatten().collect());
                cg.define(a, CRule::Seq(pieces));
            }
        }
    }
    cg.g.start = Some(g.start());
    cg.g
}

/// Binarizes every sequence rule by splitting it in the middle recursively.
pub fn to_cnf(g: &ContractingGrammar) -> Result<Rlslp> {
    let start = g.start.ok_or(Error::MissingStart)?;
    let mut rules: BTreeMap<SymbolId, Rule> = BTreeMap::new();
    let mut next = g.rules.keys().next_back().map_or(0, |&m| m + 1);
    let mut pairs: HashMap<(SymbolId, SymbolId), SymbolId> = HashMap::new();
    fn bin(
        s: &[SymbolId],
        rules: &mut BTreeMap<SymbolId, Rule>,
        next: &mut SymbolId,
        pairs: &mut HashMap<(SymbolId, SymbolId), SymbolId>,
    ) -> SymbolId {
        if s.len() == 1 {
            return s[0];
        }
        let mid = s.len() / 2;
        let l = bin(&s[..mid], rules, next, pairs);
        let r = bin(&s[mid..], rules, next, pairs);
        *pairs.entry((l, r)).or_insert_with(|| {
            let a = *next;
            *next += 1;
            rules.insert(a, Rule::Binary(l, r));
            a
        })
    }
    for (&a, r) in &g.rules {
        let rule = match r {
            CRule::Terminal(c) => Rule::Terminal(*c),
            CRule::Run(b, k) => Rule::Run(*b, *k),
            CRule::Seq(s) if s.len() == 1 => {
                return Err(Error::Arity { sym: a, k: 1 });
            }
            CRule::Seq(s) => {
                let mid = s.len() / 2;
                let l = bin(&s[..mid], &mut rules, &mut next, &mut pairs);
                let r = bin(&s[mid..], &mut rules, &mut next, &mut pairs);
                Rule::Binary(l, r)
            }
        };
        rules.insert(a, rule);
    }
    prune(rules, start)
}

fn prune(rules: BTreeMap<SymbolId, Rule>, start: SymbolId) -> Result<Rlslp> {
    let mut keep = BTreeMap::new();
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if keep.contains_key(&s) {
            continue;
        }
        let r = *rules.get(&s).ok_or(Error::Dangling(s))?;
        stack.extend(r.children());
        keep.insert(s, r);
    }
    Rlslp::new(keep, start)
}

/// A locally balanced RLSLP deriving the same string as `g`.
pub fn balance(g: &Rlslp) -> Result<Rlslp> {
    to_cnf(&contracting_grammar(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rlslp::tests::{abracadabra, ABRA};
    use crate::rlslp::GrammarBuilder;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn comb(n: usize, left: bool) -> Rlslp {
        let mut b = GrammarBuilder::new();
        let mut cur = b.terminal(b'a');
        for i in 1..n {
            let t = b.terminal(b'a' + (i % 26) as u8);
            cur = if left { b.binary(cur, t) } else { b.binary(t, cur) };
        }
        b.build(cur).unwrap()
    }

    fn random_grammar(rng: &mut ChaCha8Rng, vars: usize) -> Rlslp {
        let mut b = GrammarBuilder::new();
        let mut pool: Vec<SymbolId> = (0..rng.gen_range(1..4)).map(|i| b.terminal(b'a' + i)).collect();
        for _ in 0..vars {
            let x = pool[rng.gen_range(0..pool.len())];
            let s = if rng.gen_bool(0.15) {
                b.run(x, rng.gen_range(2..6))
            } else {
                let y = pool[rng.gen_range(0..pool.len())];
                b.binary(x, y)
            };
            pool.push(s);
        }
        b.build(*pool.last().unwrap()).unwrap()
    }

    fn check(g: &Rlslp) -> (usize, f64) {
        let cg = contracting_grammar(g);
        assert!(cg.is_contracting(), "non-contracting rules {:?}", cg.non_contracting());
        assert_eq!(cg.expand_symbol(g.start()), g.expand_symbol(g.start()));
        let out = balance(g).unwrap();
        assert_eq!(out.expand(), g.expand());
        assert!(out.is_locally_balanced(C_BAL_HEIGHT), "factor {}", out.balance_factor());
        assert!(out.size() as f64 <= C_BAL_SIZE * g.size() as f64, "{} vs {}", out.size(), g.size());
        (cg.max_rhs(), out.balance_factor())
    }

    #[test]
    fn abracadabra_heavy_forest() {
        let g = abracadabra();
        let f = heavy_forest(&g);
        let (c, d) = (12, 13);
        let expect = [
            (0, 1, None, Some(4)),
            (1, 3, Some(2), None),
            (2, 5, None, Some(6)),
            (4, 5, Some(c), None),
            (6, 9, None, Some(d)),
        ];
        assert_eq!(f.edges.len(), expect.len());
        for (a, h, l, r) in expect {
            assert_eq!(f.edge(a), Some(HeavyEdge { heavy: h, lambda: l, rho: r }), "A{a}");
        }
        assert_eq!(f.root_of(0), 3);
        assert_eq!(f.path(0), vec![0, 1, 3]);
    }

    #[test]
    fn equal_halves_and_runs_are_roots() {
        let mut b = GrammarBuilder::new();
        let (x, y) = (b.terminal(b'x'), b.terminal(b'y'));
        let a = b.binary(x, y);
        let g = b.build(a).unwrap();
        assert!(heavy_forest(&g).edges.is_empty());
        let mut b = GrammarBuilder::new();
        let x = b.terminal(b'x');
        let r = b.run(x, 9);
        let g = b.build(r).unwrap();
        assert!(heavy_forest(&g).edges.is_empty());
    }

    #[test]
    fn factorization_through_roots() {
        let g = abracadabra();
        let f = heavy_forest(&g);
        for &a in g.topological() {
            if f.edge(a).is_none() {
                continue;
            }
            let path = f.path(a);
            let root = *path.last().unwrap();
            let mut s = Vec::new();
            for x in &path[..path.len() - 1] {
                if let Some(l) = f.edge(*x).unwrap().lambda {
                    s.extend(g.expand_symbol(l));
                }
            }
            s.extend(g.expand_symbol(root));
            for x in path[..path.len() - 1].iter().rev() {
                if let Some(r) = f.edge(*x).unwrap().rho {
                    s.extend(g.expand_symbol(r));
                }
            }
            assert_eq!(s, g.expand_symbol(a), "A{a}");
        }
    }

    #[test]
    fn prefix_grammar_single_edge() {
        let base = ContractingGrammar::terminals(b"c");
        let mut t = LabeledTree::new();
        let r = t.add_root();
        let v = t.add_child(r, Some(b'c' as SymbolId));
        let pg = prefix_grammar(&base, &t, Side::Right).unwrap();
        assert_eq!(pg.vars[r], None);
        assert_eq!(pg.grammar.expand_symbol(pg.vars[v].unwrap()), b"c");
    }

    fn check_prefixes(base: &ContractingGrammar, t: &LabeledTree, side: Side) -> PrefixGrammar {
        let pg = prefix_grammar(base, t, side).unwrap();
        assert!(pg.grammar.is_contracting());
        for v in 0..t.len() {
            let mut want: Vec<u8> = Vec::new();
            let mut labels = t.prefix(v);
            if side == Side::Left {
                labels.reverse();
            }
            for s in labels {
                want.extend(base.expand_symbol(s));
            }
            let got = pg.vars[v].map(|x| pg.grammar.expand_symbol(x)).unwrap_or_default();
            assert_eq!(got, want, "node {v}");
        }
        pg
    }

    #[test]
    fn prefix_grammar_path() {
        let base = ContractingGrammar::terminals(b"abcdefgh");
        let mut t = LabeledTree::new();
        let mut v = t.add_root();
        for c in b"abcdefgh" {
            v = t.add_child(v, Some(*c as SymbolId));
        }
        for side in [Side::Left, Side::Right] {
            let pg = check_prefixes(&base, &t, side);
            assert!(pg.added <= 4 * t.len());
        }
    }

    #[test]
    fn prefix_grammar_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = ContractingGrammar::terminals(b"xyz");
        for _ in 0..50 {
            let mut t = LabeledTree::new();
            t.add_root();
            for i in 1..rng.gen_range(2..200) {
                let p = rng.gen_range(0..i);
                let l = (!rng.gen_bool(0.2)).then(|| b"xyz"[rng.gen_range(0..3)] as SymbolId);
                t.add_child(p, l);
            }
            for side in [Side::Left, Side::Right] {
                check_prefixes(&base, &t, side);
            }
        }
    }

    #[test]
    fn prefix_grammar_abracadabra_trees() {
        let g = abracadabra();
        let base = contracting_grammar(&g);
        let f = heavy_forest(&g);
        let (syms, index, left, right) = heavy_trees(&g, &f);
        assert_eq!(syms.len(), left.len());
        let l = check_prefixes(&base, &left, Side::Left);
        let r = check_prefixes(&base, &right, Side::Right);
        // A4 -> C A5 hangs below A5 with left label C
        assert_eq!(l.grammar.expand_symbol(l.vars[index[&4]].unwrap()), b"c");
        assert_eq!(r.vars[index[&4]], None);
        // A0 reaches A3 through A1 with right label A4
        assert_eq!(r.grammar.expand_symbol(r.vars[index[&0]].unwrap()), b"cabra");
    }

    #[test]
    fn balance_examples() {
        let g = abracadabra();
        check(&g);
        assert_eq!(balance(&g).unwrap().expand().as_bytes(), ABRA.as_bytes());
        let c = comb(10, true);
        check(&c);
        let out = balance(&c).unwrap();
        assert_eq!(out.expand().as_bytes(), b"abcdefghij");
        assert!(out.height(out.start()) as f64 - 1.0 <= C_BAL_HEIGHT * 10f64.log2());
    }

    #[test]
    fn balance_deep_combs() {
        for n in [2, 3, 17, 100, 1000] {
            for left in [true, false] {
                check(&comb(n, left));
            }
        }
    }

    #[test]
    fn balance_random_grammars() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut worst = (0, 0.0f64);
        for _ in 0..300 {
            let vars = rng.gen_range(1..60);
            let (r, c) = check(&random_grammar(&mut rng, vars));
            worst = (worst.0.max(r), worst.1.max(c));
        }
        assert!(worst.0 <= MAX_RHS, "{worst:?}");
    }

    #[test]
    fn cnf_examples() {
        let mut g = ContractingGrammar::terminals(b"bcd");
        let a = 200;
        g.rules.insert(a, CRule::Seq(vec![98, 99, 100]));
        g.explen.insert(a, 3);
        g.start = Some(a);
        let out = to_cnf(&g).unwrap();
        assert_eq!(out.expand().as_bytes(), b"bcd");
        assert_eq!(out.size(), 5);

        let mut g = ContractingGrammar::terminals(b"abcde");
        g.rules.insert(200, CRule::Seq(vec![97, 98, 99, 100, 101]));
        g.explen.insert(200, 5);
        g.rules.insert(201, CRule::Run(200, 4));
        g.explen.insert(201, 20);
        g.start = Some(201);
        let out = to_cnf(&g).unwrap();
        assert_eq!(out.expand().as_bytes(), b"abcde".repeat(4).as_slice());
        assert_eq!(out.rule(201), Rule::Run(200, 4));
        // one level for the old rule plus at most three for its binarization
        assert!(out.height(200) <= 2 + 3);
    }
}
