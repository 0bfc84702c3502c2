//! Run-length straight-line programs: validation, expansion, naive access,
//! grammar trees and the leaf partition they induce on the text.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::{log_at_least_one, Error, Result, Text};

pub type SymbolId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Terminal(u8),
    Binary(SymbolId, SymbolId),
    /// `A -> B^k`, `k >= 2`.
    Run(SymbolId, u64),
}

impl Rule {
    pub fn children(&self) -> impl Iterator<Item = SymbolId> {
        let (a, b) = match *self {
            Rule::Terminal(_) => (None, None),
            Rule::Binary(l, r) => (Some(l), Some(r)),
            Rule::Run(b, _) => (Some(b), None),
        };
        a.into_iter().chain(b)
    }
}

/// A validated RLSLP. Construct with [`Rlslp::new`] or [`GrammarBuilder`].
#[derive(Debug, Clone)]
pub struct Rlslp {
    rules: BTreeMap<SymbolId, Rule>,
    start: SymbolId,
    explen: HashMap<SymbolId, u64>,
    height: HashMap<SymbolId, u32>,
    /// Reachable symbols, children before parents.
    order: Vec<SymbolId>,
}

/// Collects every problem with a rule set instead of stopping at the first.
pub fn validate(rules: &BTreeMap<SymbolId, Rule>, start: Option<SymbolId>) -> Vec<Error> {
    let mut errs = Vec::new();
    let Some(start) = start else {
        errs.push(Error::MissingStart);
        return errs;
    };
    for (&sym, rule) in rules {
        if let Rule::Run(_, k) = *rule {
            if k < 2 {
                errs.push(Error::Arity { sym, k });
            }
        }
        for c in rule.children() {
            if !rules.contains_key(&c) {
                errs.push(Error::Dangling(c));
            }
        }
    }
    if !rules.contains_key(&start) {
        errs.push(Error::Dangling(start));
    }
    if !errs.is_empty() {
        return errs;
    }
    match topo_order(rules, start) {
        Err(e) => errs.push(e),
        Ok(order) => {
            if let Err(e) = lengths(rules, &order) {
                errs.push(e);
            }
        }
    }
    errs
}

fn topo_order(rules: &BTreeMap<SymbolId, Rule>, start: SymbolId) -> Result<Vec<SymbolId>> {
    // 0 = unseen, 1 = on stack, 2 = done
    let mut state: HashMap<SymbolId, u8> = HashMap::new();
    let mut order = Vec::new();
    let mut stack: Vec<(SymbolId, bool)> = vec![(start, false)];
    while let Some((sym, expanded)) = stack.pop() {
        if expanded {
            state.insert(sym, 2);
            order.push(sym);
            continue;
        }
        match state.get(&sym) {
            Some(2) => continue,
            Some(1) => return Err(Error::Cycle(sym)),
            _ => {}
        }
        state.insert(sym, 1);
        stack.push((sym, true));
        let rule = rules.get(&sym).ok_or(Error::Dangling(sym))?;
        for c in rule.children() {
            match state.get(&c) {
                Some(1) => return Err(Error::Cycle(c)),
                Some(2) => {}
                _ => stack.push((c, false)),
            }
        }
    }
    Ok(order)
}

type LengthMaps = (HashMap<SymbolId, u64>, HashMap<SymbolId, u32>);

fn lengths(rules: &BTreeMap<SymbolId, Rule>, order: &[SymbolId]) -> Result<LengthMaps> {
    let mut explen: HashMap<SymbolId, u64> = HashMap::with_capacity(order.len());
    let mut height: HashMap<SymbolId, u32> = HashMap::with_capacity(order.len());
    for &sym in order {
        let (len, h) = match rules[&sym] {
            Rule::Terminal(_) => (1u64, 1u32),
            Rule::Binary(l, r) => {
                (explen[&l].checked_add(explen[&r]).ok_or(Error::Overflow(sym))?, 1 + height[&l].max(height[&r]))
            }
            Rule::Run(b, k) => (explen[&b].checked_mul(k).ok_or(Error::Overflow(sym))?, 1 + height[&b]),
        };
        if len >= 1 << 63 {
            return Err(Error::Overflow(sym));
        }
        explen.insert(sym, len);
        height.insert(sym, h);
    }
    Ok((explen, height))
}

impl Rlslp {
    pub fn new(rules: BTreeMap<SymbolId, Rule>, start: SymbolId) -> Result<Self> {
        if let Some(e) = validate(&rules, Some(start)).into_iter().next() {
            return Err(e);
        }
        let order = topo_order(&rules, start)?;
        let (explen, height) = lengths(&rules, &order)?;
        Ok(Rlslp { rules, start, explen, height, order })
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    pub fn rules(&self) -> &BTreeMap<SymbolId, Rule> {
        &self.rules
    }

    pub fn rule(&self, sym: SymbolId) -> Rule {
        self.rules[&sym]
    }

    /// `g_rl`, terminal rules included.
    pub fn size(&self) -> usize {
        self.rules.len()
    }

    pub fn terminal_rules(&self) -> usize {
        self.rules.values().filter(|r| matches!(r, Rule::Terminal(_))).count()
    }

    /// Symbols reachable from the start, children before parents.
    pub fn topological(&self) -> &[SymbolId] {
        &self.order
    }

    pub fn explen(&self, sym: SymbolId) -> u64 {
        self.explen[&sym]
    }

    pub fn len(&self) -> usize {
        self.explen[&self.start] as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn height(&self, sym: SymbolId) -> u32 {
        self.height[&sym]
    }

    pub fn height_map(&self) -> HeightMap {
        HeightMap { height: self.height.clone(), explen: self.explen.clone() }
    }

    /// True iff every reachable symbol has height at most `c * max(1, log2 |exp|)`.
    /// Heights are measured in the grammar tree, where terminal rules are
    /// leaves at height 0, i.e. `height(A) - 1` in [`HeightMap`] terms.
    pub fn is_locally_balanced(&self, c: f64) -> bool {
        self.order
            .iter()
            .all(|&s| self.tree_height(s) as f64 <= c * log_at_least_one(2.0, self.explen[&s] as f64) + 1e-9)
    }

    fn tree_height(&self, s: SymbolId) -> u32 {
        self.height[&s] - 1
    }

    /// Smallest `c` for which [`is_locally_balanced`](Self::is_locally_balanced) holds.
    pub fn balance_factor(&self) -> f64 {
        self.order
            .iter()
            .map(|&s| self.tree_height(s) as f64 / log_at_least_one(2.0, self.explen[&s] as f64))
            .fold(0.0, f64::max)
    }

    pub fn expand_symbol(&self, sym: SymbolId) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.explen[&sym] as usize);
        let mut stack = vec![sym];
        while let Some(s) = stack.pop() {
            match self.rules[&s] {
                Rule::Terminal(c) => out.push(c),
                Rule::Binary(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
                Rule::Run(b, k) => {
                    let from = out.len();
                    self.expand_into(b, &mut out);
                    let piece = out[from..].to_vec();
                    for _ in 1..k {
                        out.extend_from_slice(&piece);
                    }
                }
            }
        }
        out
    }

    fn expand_into(&self, sym: SymbolId, out: &mut Vec<u8>) {
        out.extend(self.expand_symbol(sym));
    }

    pub fn expand(&self) -> Text {
        Text::new(self.expand_symbol(self.start))
    }

    /// `exp(sym)[pos]` by parse-tree descent; also returns the number of rules applied.
    pub fn descend(&self, mut sym: SymbolId, mut pos: u64) -> (u8, u32) {
        let mut steps = 0;
        loop {
            steps += 1;
            match self.rules[&sym] {
                Rule::Terminal(c) => return (c, steps),
                Rule::Binary(l, r) => {
                    let ll = self.explen[&l];
                    if pos <= ll {
                        sym = l;
                    } else {
                        pos -= ll;
                        sym = r;
                    }
                }
                Rule::Run(b, _) => {
                    pos = 1 + (pos - 1) % self.explen[&b];
                    sym = b;
                }
            }
        }
    }

    /// `S[q]` by descending from the start symbol.
    pub fn access_naive(&self, q: usize) -> Result<(u8, u32)> {
        if q == 0 || q > self.len() {
            return Err(Error::OutOfRange { pos: q, len: self.len() });
        }
        Ok(self.descend(self.start, q as u64))
    }

    pub fn grammar_tree(&self) -> GrammarTree {
        GrammarTree::build(self)
    }

    pub fn leaf_partition(&self) -> LeafPartition {
        self.grammar_tree().leaf_partition(self)
    }
}

/// Heights and expansion lengths of every reachable symbol.
#[derive(Debug, Clone)]
pub struct HeightMap {
    pub height: HashMap<SymbolId, u32>,
    pub explen: HashMap<SymbolId, u64>,
}

/// Incremental construction of an RLSLP with fresh symbol ids.
#[derive(Debug, Default, Clone)]
pub struct GrammarBuilder {
    rules: BTreeMap<SymbolId, Rule>,
    terminals: HashMap<u8, SymbolId>,
    next: SymbolId,
}

impl GrammarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Symbol deriving `c`; one shared symbol per byte value.
    pub fn terminal(&mut self, c: u8) -> SymbolId {
        if let Some(&s) = self.terminals.get(&c) {
            return s;
        }
        let s = self.push(Rule::Terminal(c));
        self.terminals.insert(c, s);
        s
    }

    pub fn binary(&mut self, l: SymbolId, r: SymbolId) -> SymbolId {
        self.push(Rule::Binary(l, r))
    }

    pub fn run(&mut self, base: SymbolId, k: u64) -> SymbolId {
        self.push(Rule::Run(base, k))
    }

    pub fn push(&mut self, rule: Rule) -> SymbolId {
        let s = self.next;
        self.next += 1;
        self.rules.insert(s, rule);
        s
    }

    pub fn build(self, start: SymbolId) -> Result<Rlslp> {
        let mut rules = self.rules;
        // drop rules unreachable from the start
        let reach = reachable(&rules, start);
        rules.retain(|s, _| reach.contains(s));
        Rlslp::new(rules, start)
    }
}

fn reachable(rules: &BTreeMap<SymbolId, Rule>, start: SymbolId) -> HashSet<SymbolId> {
    let mut seen = HashSet::new();
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if !seen.insert(s) {
            continue;
        }
        if let Some(r) = rules.get(&s) {
            stack.extend(r.children());
        }
    }
    seen
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeLabel {
    /// The unique internal node of a binary or run-length symbol.
    Internal(SymbolId),
    /// Leaf for a terminal-rule symbol.
    Terminal(SymbolId),
    /// Pruned occurrence of a binary or run-length symbol.
    Pruned(SymbolId),
    /// Right child `B^(k-1)` of a run-length node.
    Iteration { base: SymbolId, count: u64 },
}

impl NodeLabel {
    pub fn is_leaf(&self) -> bool {
        !matches!(self, NodeLabel::Internal(_))
    }
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub label: NodeLabel,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// The parse tree with every non-first occurrence of a binary or run-length
/// symbol pruned to a leaf. Terminal-rule symbols are always leaves, so the
/// tree has `2 * (g_rl - terminal rules) + 1` nodes.
#[derive(Debug, Clone)]
pub struct GrammarTree {
    pub nodes: Vec<TreeNode>,
}

impl GrammarTree {
    pub fn build(g: &Rlslp) -> Self {
        let mut nodes: Vec<TreeNode> = Vec::new();
        let mut expanded: HashSet<SymbolId> = HashSet::new();
        // (symbol-or-label, parent); processed in preorder
        let mut stack: Vec<(NodeLabel, Option<usize>)> = vec![(label_for(g, g.start, &mut expanded), None)];
        while let Some((label, parent)) = stack.pop() {
            let id = nodes.len();
            nodes.push(TreeNode { label, parent, children: Vec::new() });
            if let Some(p) = parent {
                nodes[p].children.push(id);
            }
            if let NodeLabel::Internal(sym) = label {
                match g.rule(sym) {
                    Rule::Binary(l, r) => {
                        let ll = label_for(g, l, &mut expanded);
                        // the right child's label is decided after the whole left subtree
                        stack.push((NodeLabel::Pruned(r), Some(id)));
                        stack.push((ll, Some(id)));
                    }
                    Rule::Run(b, k) => {
                        let bl = label_for(g, b, &mut expanded);
                        stack.push((NodeLabel::Iteration { base: b, count: k - 1 }, Some(id)));
                        stack.push((bl, Some(id)));
                    }
                    Rule::Terminal(_) => unreachable!(),
                }
            } else if let NodeLabel::Pruned(sym) = label {
                // deferred decision for right children
                let fixed = label_for(g, sym, &mut expanded);
                if fixed != label {
                    nodes.pop();
                    if let Some(p) = parent {
                        nodes[p].children.pop();
                    }
                    stack.push((fixed, parent));
                }
            }
        }
        GrammarTree { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Leaves left to right.
    pub fn leaves(&self) -> Vec<NodeLabel> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            let node = &self.nodes[v];
            if node.children.is_empty() {
                out.push(node.label);
            } else {
                stack.extend(node.children.iter().rev());
            }
        }
        out
    }

    pub fn leaf_partition(&self, g: &Rlslp) -> LeafPartition {
        let labels = self.leaves();
        let mut starts = Vec::with_capacity(labels.len() + 1);
        let mut x = 1u64;
        for l in &labels {
            starts.push(x as usize);
            x += leaf_len(g, *l);
        }
        starts.push(x as usize);
        LeafPartition { starts, labels }
    }
}

fn label_for(g: &Rlslp, sym: SymbolId, expanded: &mut HashSet<SymbolId>) -> NodeLabel {
    match g.rule(sym) {
        Rule::Terminal(_) => NodeLabel::Terminal(sym),
        _ => {
            if expanded.insert(sym) {
                NodeLabel::Internal(sym)
            } else {
                NodeLabel::Pruned(sym)
            }
        }
    }
}

pub(crate) fn leaf_len(g: &Rlslp, l: NodeLabel) -> u64 {
    match l {
        NodeLabel::Internal(s) | NodeLabel::Terminal(s) | NodeLabel::Pruned(s) => g.explen(s),
        NodeLabel::Iteration { base, count } => g.explen(base) * count,
    }
}

/// `S = exp(A_1) ... exp(A_g')` with `starts[i]` the position of `A_(i+1)`
/// and a final sentinel `n + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafPartition {
    pub starts: Vec<usize>,
    pub labels: Vec<NodeLabel>,
}

impl LeafPartition {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Length of leaf `i` (0-based).
    pub fn leaf_length(&self, i: usize) -> usize {
        self.starts[i + 1] - self.starts[i]
    }

    /// Concatenated leaf expansions.
    pub fn concat(&self, g: &Rlslp) -> Vec<u8> {
        let mut out = Vec::new();
        for l in &self.labels {
            match *l {
                NodeLabel::Internal(s) | NodeLabel::Terminal(s) | NodeLabel::Pruned(s) => {
                    out.extend(g.expand_symbol(s))
                }
                NodeLabel::Iteration { base, count } => {
                    let e = g.expand_symbol(base);
                    for _ in 0..count {
                        out.extend_from_slice(&e);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The grammar for "abracad(abra)^7cabra" with symbols
    /// A0..A9 = 0..9 and terminals A=10, B=11, C=12, D=13, R=14.
    pub fn abracadabra() -> Rlslp {
        let (a, b, c, d, r) = (10, 11, 12, 13, 14);
        let rules: BTreeMap<SymbolId, Rule> = [
            (0, Rule::Binary(1, 4)),
            (1, Rule::Binary(2, 3)),
            (2, Rule::Binary(5, 6)),
            (3, Rule::Run(5, 7)),
            (4, Rule::Binary(c, 5)),
            (5, Rule::Binary(7, 8)),
            (6, Rule::Binary(9, d)),
            (7, Rule::Binary(a, b)),
            (8, Rule::Binary(r, a)),
            (9, Rule::Binary(c, a)),
            (a, Rule::Terminal(b'a')),
            (b, Rule::Terminal(b'b')),
            (c, Rule::Terminal(b'c')),
            (d, Rule::Terminal(b'd')),
            (r, Rule::Terminal(b'r')),
        ]
        .into_iter()
        .collect();
        Rlslp::new(rules, 0).unwrap()
    }

    pub const ABRA: &str = "abracadabraabraabraabraabraabraabracabra";

    fn rules(list: &[(SymbolId, Rule)]) -> BTreeMap<SymbolId, Rule> {
        list.iter().copied().collect()
    }

    #[test]
    fn abracadabra_validates_and_expands() {
        let g = abracadabra();
        assert_eq!(g.size(), 15);
        assert_eq!(g.len(), 40);
        assert_eq!(g.expand().as_bytes(), ABRA.as_bytes());
    }

    #[test]
    fn validation_errors() {
        let cyc = rules(&[(0, Rule::Binary(0, 1)), (1, Rule::Terminal(b'b'))]);
        assert_eq!(Rlslp::new(cyc, 0).unwrap_err(), Error::Cycle(0));
        let arity = rules(&[(0, Rule::Run(1, 1)), (1, Rule::Terminal(b'b'))]);
        assert_eq!(Rlslp::new(arity, 0).unwrap_err(), Error::Arity { sym: 0, k: 1 });
        let dangling = rules(&[(0, Rule::Binary(1, 2)), (1, Rule::Terminal(b'b'))]);
        assert_eq!(Rlslp::new(dangling, 0).unwrap_err(), Error::Dangling(2));
        assert_eq!(validate(&BTreeMap::new(), None), vec![Error::MissingStart]);
        let big = rules(&[(0, Rule::Run(1, u64::MAX / 2)), (1, Rule::Run(2, 4)), (2, Rule::Terminal(b'x'))]);
        assert_eq!(Rlslp::new(big, 0).unwrap_err(), Error::Overflow(0));
    }

    #[test]
    fn small_expansions() {
        let one = Rlslp::new(rules(&[(0, Rule::Terminal(b'a'))]), 0).unwrap();
        assert_eq!(one.expand().as_bytes(), b"a");
        let run = Rlslp::new(rules(&[(0, Rule::Run(1, 3)), (1, Rule::Terminal(b'b'))]), 0).unwrap();
        assert_eq!(run.expand().as_bytes(), b"bbb");
    }

    #[test]
    fn naive_access() {
        let g = abracadabra();
        assert_eq!(g.access_naive(8).unwrap().0, b'a');
        assert_eq!(g.access_naive(1).unwrap().0, b'a');
        assert_eq!(g.access_naive(36).unwrap().0, b'c');
        assert!(g.access_naive(0).is_err());
        assert!(g.access_naive(41).is_err());
        for q in 1..=40 {
            let (c, steps) = g.access_naive(q).unwrap();
            assert_eq!(c, ABRA.as_bytes()[q - 1]);
            assert!(steps <= g.height(g.start()));
        }
    }

    #[test]
    fn grammar_tree_shapes() {
        let bc = Rlslp::new(rules(&[(0, Rule::Binary(1, 2)), (1, Rule::Terminal(b'b')), (2, Rule::Terminal(b'c'))]), 0)
            .unwrap();
        let t = bc.grammar_tree();
        assert_eq!(t.len(), 2 * (bc.size() - bc.terminal_rules()) + 1);
        let p = bc.leaf_partition();
        assert_eq!(p.starts, vec![1, 2, 3]);
        assert_eq!(p.labels, vec![NodeLabel::Terminal(1), NodeLabel::Terminal(2)]);

        let run = Rlslp::new(rules(&[(0, Rule::Run(1, 3)), (1, Rule::Terminal(b'b'))]), 0).unwrap();
        let t = run.grammar_tree();
        assert_eq!(t.len(), 3);
        let p = run.leaf_partition();
        assert_eq!(p.starts, vec![1, 2, 4]);
        assert_eq!(p.labels[1], NodeLabel::Iteration { base: 1, count: 2 });

        let g = abracadabra();
        let t = g.grammar_tree();
        assert_eq!(t.len(), 21);
        let internal = t.nodes.iter().filter(|n| !n.label.is_leaf()).count();
        assert_eq!(internal, 10);
        let p = g.leaf_partition();
        assert_eq!(p.concat(&g), ABRA.as_bytes());
        assert_eq!(*p.starts.last().unwrap(), 41);
    }

    #[test]
    fn local_balance() {
        // perfectly balanced over 8 leaves
        let mut b = GrammarBuilder::new();
        let mut level: Vec<SymbolId> = b"abcdefgh".iter().map(|&c| b.terminal(c)).collect();
        while level.len() > 1 {
            level = level.chunks(2).map(|p| b.binary(p[0], p[1])).collect();
        }
        let g = b.build(level[0]).unwrap();
        assert!(g.is_locally_balanced(1.0));

        // left comb of depth 10 over 11 symbols
        let mut b = GrammarBuilder::new();
        let mut cur = b.terminal(b'a');
        for c in b"bcdefghijk" {
            let t = b.terminal(*c);
            cur = b.binary(cur, t);
        }
        let g = b.build(cur).unwrap();
        assert_eq!(g.len(), 11);
        assert!(!g.is_locally_balanced(2.0));

        let run = Rlslp::new(rules(&[(0, Rule::Run(1, 1000)), (1, Rule::Terminal(b'b'))]), 0).unwrap();
        assert_eq!(run.height(0), 2);
        assert!(run.is_locally_balanced(2.0));
    }
}
