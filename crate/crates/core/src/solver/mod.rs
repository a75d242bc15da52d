//! Memoized evaluation of the good-pair recurrences for the minimum number
//! of bags of a width-bounded path (`pd_k`) or tree (`td_k`) decomposition.
//!
//! For a good pair `(X, W)` the path value is the least number of bags of a
//! decomposition of `G[X ∪ W]` whose last bag is `X`; it is 1 when `W` is
//! empty and otherwise one more than the best value over predecessor bags
//! `Y` (see [`enumerate_candidate_bags`]). The tree value additionally may
//! branch: split `W` into two unions of components and glue two
//! decompositions rooted at `X`, counting the shared root once.
//!
//! Every value is stored under the key of the pair's isomorphism class, so
//! isomorphic subproblems are solved once. A raw `(X, W)` cache sits in
//! front of the keyed table so canonization runs once per concrete pair.

mod enumerate;
mod reconstruct;

use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use hashbrown::HashMap;
use thiserror::Error;

use crate::canon::{self, CanonError, CanonKey, Certificate, GoodPair};
use crate::graph::{Graph, VertexSet};

pub use enumerate::{enumerate_branch_splits, enumerate_candidate_bags};

pub(crate) type Mask = u128;

/// Largest graph the solver accepts.
pub const MAX_VERTICES: usize = Mask::BITS as usize;

/// A bag count, or `Infeasible` when no decomposition of the required shape
/// exists. `Infeasible` compares greater than every count and absorbs
/// addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Size {
    Bags(u32),
    Infeasible,
}

impl Size {
    pub fn bags(self) -> Option<u32> {
        match self {
            Size::Bags(b) => Some(b),
            Size::Infeasible => None,
        }
    }

    pub fn is_feasible(self) -> bool {
        self != Size::Infeasible
    }

    /// Bags of two decompositions glued along their common root bag.
    pub fn glue(self, other: Size) -> Size {
        match (self, other) {
            (Size::Bags(a), Size::Bags(b)) => Size::Bags(a + b - 1),
            _ => Size::Infeasible,
        }
    }
}

impl Add<u32> for Size {
    type Output = Size;
    fn add(self, k: u32) -> Size {
        match self {
            Size::Bags(a) => Size::Bags(a + k),
            Size::Infeasible => Size::Infeasible,
        }
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Size::Bags(b) => write!(f, "{b}"),
            Size::Infeasible => f.write_str("INFEASIBLE"),
        }
    }
}

/// Path or tree decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Path,
    Tree,
}

/// How subproblems are keyed in the memo table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeyMode {
    /// Root bag fixed pointwise: equal keys exactly for pairs related by an
    /// isomorphism that is the identity on `X`.
    #[default]
    Canonical,
    /// Root bag distinguished only as a set, so pairs with different root
    /// bags can share an entry.
    Anonymous,
    /// The concrete `(X, W)` pair; no canonization at all. The branch step
    /// then treats every component as its own class.
    Plain,
}

/// How the predecessor bags of a pair are explored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Search {
    /// Build each predecessor bag one vertex at a time: drop removable root
    /// vertices, then add remainder vertices, sharing the partial bags
    /// across the memo. Same values, `O(n)` work per state.
    #[default]
    Incremental,
    /// Enumerate every candidate bag `Y` explicitly.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum bag size minus one.
    pub width: usize,
    pub keys: KeyMode,
    pub search: Search,
    /// Root bags tried by the drivers; `None` tries every set of at most
    /// `width + 1` vertices.
    pub roots: Option<Vec<VertexSet>>,
}

impl SolverConfig {
    pub fn new(width: usize) -> Self {
        SolverConfig {
            width,
            keys: KeyMode::default(),
            search: Search::default(),
            roots: None,
        }
    }

    pub fn keys(mut self, keys: KeyMode) -> Self {
        self.keys = keys;
        self
    }

    pub fn search(mut self, search: Search) -> Self {
        self.search = search;
        self
    }

    pub fn roots(mut self, roots: Vec<VertexSet>) -> Self {
        self.roots = Some(roots);
        self
    }
}

/// Work counters. `memo_entries` counts keyed values stored and `memo_hits`
/// the value lookups answered from the memo, so
/// `memo_hits + memo_entries <= subproblem_calls`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub memo_entries: u64,
    pub memo_hits: u64,
    pub subproblem_calls: u64,
    pub canon_calls: u64,
    pub candidate_bags_enumerated: u64,
    pub branch_splits_enumerated: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("graph has {0} vertices; the solver handles at most {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("not a good pair: {0}")]
    NotGoodPair(#[from] CanonError),
    #[error("root bag has {size} vertices, more than width + 1 = {limit}")]
    BagTooLarge { size: usize, limit: usize },
    #[error("target size {0} is not attained")]
    TargetNotAttained(Size),
    #[error("reconstruction found no child matching value {0}")]
    Inconsistent(Size),
}

/// Optimum of a driver run together with a root bag attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub size: Size,
    pub root: Option<VertexSet>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Slot {
    value: Option<Size>,
    drop_phase: Option<Size>,
    add_phase: Option<Size>,
}

/// Keyed form of a pair. A pair `(X, W)` is determined up to isomorphism
/// fixing `X` pointwise by `X` and the multiset of classes of its basic
/// pairs `(X, C)` for the components `C` of `G[W]`, so the per-root key is
/// stored in that composed form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum MemoKey {
    Composed(Mask, Vec<u32>),
    Full(CanonKey),
}

#[derive(Debug, Default)]
struct Memo {
    raw: HashMap<(Mask, Mask), u32>,
    keyed: HashMap<MemoKey, u32>,
    slots: Vec<Slot>,
}

impl Memo {
    fn entries(&self) -> usize {
        self.slots.iter().filter(|s| s.value.is_some()).count()
    }
}

/// Memoized solver for one graph and width. Path and tree values use
/// separate tables; both persist across calls.
pub struct Solver<'g> {
    graph: &'g Graph,
    adj: Vec<Mask>,
    config: SolverConfig,
    path_memo: Memo,
    tree_memo: Memo,
    /// Class ids of basic pairs `(X, C)`, interned by certificate.
    basic: HashMap<(Mask, Mask), u32>,
    class_ids: HashMap<Certificate, u32>,
    class_certs: Vec<Certificate>,
    stats: SolveStats,
}

pub(crate) fn to_mask(s: &VertexSet) -> Mask {
    s.iter().fold(0, |m, v| m | (1 << v))
}

pub(crate) fn to_set(mut m: Mask) -> VertexSet {
    let mut s = VertexSet::new();
    while m != 0 {
        s.insert(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    s
}

/// Union of the first `y[i]` members of each group.
fn split_mask(groups: &[Vec<Mask>], y: &[usize]) -> Mask {
    groups
        .iter()
        .zip(y)
        .flat_map(|(g, &take)| &g[..take])
        .fold(0, |m, c| m | c)
}

pub(crate) fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

impl<'g> Solver<'g> {
    pub fn new(graph: &'g Graph, config: SolverConfig) -> Result<Self, SolveError> {
        if graph.n() > MAX_VERTICES {
            return Err(SolveError::TooManyVertices(graph.n()));
        }
        let adj = (0..graph.n()).map(|v| to_mask(graph.neighbors(v))).collect();
        Ok(Solver {
            graph,
            adj,
            config,
            path_memo: Memo::default(),
            tree_memo: Memo::default(),
            basic: HashMap::new(),
            class_ids: HashMap::new(),
            class_certs: Vec::new(),
            stats: SolveStats::default(),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    /// Number of keyed values stored for the given shape.
    pub fn memo_entries(&self, shape: Shape) -> usize {
        self.memo(shape).entries()
    }

    fn memo(&self, shape: Shape) -> &Memo {
        match shape {
            Shape::Path => &self.path_memo,
            Shape::Tree => &self.tree_memo,
        }
    }

    fn memo_mut(&mut self, shape: Shape) -> &mut Memo {
        match shape {
            Shape::Path => &mut self.path_memo,
            Shape::Tree => &mut self.tree_memo,
        }
    }

    fn cap(&self) -> u32 {
        self.config.width as u32 + 1
    }

    /// Slot of the class of `(x, w)`, creating it if needed.
    fn slot(&mut self, shape: Shape, x: Mask, w: Mask) -> usize {
        if let Some(&id) = self.memo(shape).raw.get(&(x, w)) {
            return id as usize;
        }
        let key = match self.config.keys {
            KeyMode::Plain => None,
            KeyMode::Anonymous => {
                self.stats.canon_calls += 1;
                let pair = GoodPair::new(to_set(x), to_set(w));
                Some(MemoKey::Full(canon::anonymous_key_unchecked(self.graph, &pair)))
            }
            KeyMode::Canonical => {
                let mut ids: Vec<u32> = self
                    .components(w)
                    .into_iter()
                    .map(|c| self.basic_class(x, c))
                    .collect();
                ids.sort_unstable();
                Some(MemoKey::Composed(x, ids))
            }
        };
        let memo = self.memo_mut(shape);
        let fresh = memo.slots.len() as u32;
        let id = match key {
            Some(key) => *memo.keyed.entry(key).or_insert(fresh),
            None => fresh,
        };
        if id == fresh {
            memo.slots.push(Slot::default());
        }
        memo.raw.insert((x, w), id);
        id as usize
    }

    fn check_pair(&self, p: &GoodPair) -> Result<(Mask, Mask), SolveError> {
        p.check(self.graph)?;
        let limit = self.config.width + 1;
        if p.x.len() > limit {
            return Err(SolveError::BagTooLarge { size: p.x.len(), limit });
        }
        Ok((to_mask(&p.x), to_mask(&p.w)))
    }

    /// Minimum number of bags of a width-bounded path decomposition of
    /// `G[X ∪ W]` with last bag `X`.
    pub fn pd_k(&mut self, p: &GoodPair) -> Result<Size, SolveError> {
        let (x, w) = self.check_pair(p)?;
        Ok(self.value(Shape::Path, x, w))
    }

    /// Minimum number of bags of a width-bounded tree decomposition of
    /// `G[X ∪ W]` with root bag `X`.
    pub fn td_k(&mut self, p: &GoodPair) -> Result<Size, SolveError> {
        let (x, w) = self.check_pair(p)?;
        Ok(self.value(Shape::Tree, x, w))
    }

    fn value(&mut self, shape: Shape, x: Mask, w: Mask) -> Size {
        if w == 0 {
            return Size::Bags(1);
        }
        self.stats.subproblem_calls += 1;
        let id = self.slot(shape, x, w);
        if let Some(v) = self.memo(shape).slots[id].value {
            self.stats.memo_hits += 1;
            return v;
        }
        let mut best = match self.config.search {
            Search::Incremental => self.extend_incremental(shape, x, w),
            Search::Exhaustive => self.extend_exhaustive(shape, x, w),
        };
        if shape == Shape::Tree {
            best = best.min(self.branch(x, w));
        }
        self.memo_mut(shape).slots[id].value = Some(best);
        self.stats.memo_entries += 1;
        best
    }

    /// Root vertices that may be left out of the predecessor bag.
    fn removable(&self, x: Mask, w: Mask) -> Mask {
        bits(x).filter(|&v| self.adj[v] & w == 0).fold(0, |m, v| m | (1 << v))
    }

    fn extend_exhaustive(&mut self, shape: Shape, x: Mask, w: Mask) -> Size {
        let keep = x & !self.removable(x, w);
        let optional: Vec<usize> = bits((x | w) & !keep).collect();
        let limit = self.cap() as usize;
        if keep.count_ones() as usize > limit {
            return Size::Infeasible;
        }
        let room = limit - keep.count_ones() as usize;
        let mut best = Size::Infeasible;
        for combo in enumerate::Combinations::new(optional.len(), 0, room) {
            let y = combo.iter().fold(keep, |m, &i| m | (1 << optional[i]));
            if y == x {
                continue;
            }
            self.stats.candidate_bags_enumerated += 1;
            let child_w = w & !y;
            debug_assert!(
                ((x | w).count_ones(), w.count_ones()) > ((y | child_w).count_ones(), child_w.count_ones()),
                "recursion must shrink (|X ∪ W|, |W|)"
            );
            best = best.min(self.value(shape, y, child_w) + 1);
        }
        best
    }

    /// The extend value computed by building the predecessor bag in two
    /// phases: first drop removable vertices of `X`, then add vertices of
    /// `W` while the bag has room. Each partial bag is a good pair, and its
    /// phase values are memoized in its slot next to its own value.
    fn extend_incremental(&mut self, shape: Shape, x: Mask, w: Mask) -> Size {
        let mut best = Size::Infeasible;
        for v in bits(self.removable(x, w)) {
            best = best.min(self.drop_phase(shape, x & !(1 << v), w));
        }
        if x.count_ones() < self.cap() {
            for z in bits(w) {
                best = best.min(self.add_phase(shape, x | (1 << z), w & !(1 << z)));
            }
        }
        best + 1
    }

    /// Best value of a bag reachable from `s` by dropping removable vertices
    /// and then adding remainder vertices.
    fn drop_phase(&mut self, shape: Shape, s: Mask, w: Mask) -> Size {
        if w == 0 {
            return Size::Bags(1);
        }
        let id = self.slot(shape, s, w);
        if let Some(v) = self.memo(shape).slots[id].drop_phase {
            return v;
        }
        let mut best = self.add_phase(shape, s, w);
        for v in bits(self.removable(s, w)) {
            best = best.min(self.drop_phase(shape, s & !(1 << v), w));
        }
        self.memo_mut(shape).slots[id].drop_phase = Some(best);
        best
    }

    /// Best value of a bag reachable from `s` by adding remainder vertices.
    fn add_phase(&mut self, shape: Shape, s: Mask, w: Mask) -> Size {
        if w == 0 {
            return Size::Bags(1);
        }
        let id = self.slot(shape, s, w);
        if let Some(v) = self.memo(shape).slots[id].add_phase {
            return v;
        }
        self.stats.candidate_bags_enumerated += 1;
        let mut best = self.value(shape, s, w);
        if s.count_ones() < self.cap() {
            for z in bits(w) {
                best = best.min(self.add_phase(shape, s | (1 << z), w & !(1 << z)));
            }
        }
        self.memo_mut(shape).slots[id].add_phase = Some(best);
        best
    }

    /// Components of `G[w]`, ordered by smallest vertex.
    fn components(&self, w: Mask) -> Vec<Mask> {
        let mut left = w;
        let mut out = Vec::new();
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let reach = bits(frontier).fold(0, |m, v| m | self.adj[v]) & w & !comp;
                comp |= reach;
                frontier = reach;
            }
            out.push(comp);
            left &= !comp;
        }
        out
    }

    /// Interned class of the basic pair `(x, comp)` under isomorphisms
    /// fixing `x` pointwise.
    fn basic_class(&mut self, x: Mask, comp: Mask) -> u32 {
        if let Some(&id) = self.basic.get(&(x, comp)) {
            return id;
        }
        self.stats.canon_calls += 1;
        let pair = GoodPair::new(to_set(x), to_set(comp));
        let cert = canon::canon_key_unchecked(self.graph, &pair).cert;
        let fresh = self.class_ids.len() as u32;
        let id = *self.class_ids.entry(cert.clone()).or_insert(fresh);
        if id == fresh {
            self.class_certs.push(cert);
        }
        self.basic.insert((x, comp), id);
        id
    }

    /// Components of `G[w]` grouped into isomorphism classes of basic
    /// pairs, classes ordered by certificate and members by smallest
    /// vertex. In plain mode every component is its own class.
    fn class_groups(&mut self, x: Mask, w: Mask) -> Vec<Vec<Mask>> {
        let comps = self.components(w);
        if self.config.keys == KeyMode::Plain {
            return comps.into_iter().map(|c| alloc::vec![c]).collect();
        }
        let mut groups: Vec<(u32, Vec<Mask>)> = Vec::new();
        for c in comps {
            let id = self.basic_class(x, c);
            match groups.iter_mut().find(|(g, _)| *g == id) {
                Some((_, members)) => members.push(c),
                None => groups.push((id, alloc::vec![c])),
            }
        }
        groups.sort_unstable_by(|a, b| self.class_certs[a.0 as usize].cmp(&self.class_certs[b.0 as usize]));
        groups.into_iter().map(|(_, m)| m).collect()
    }

    /// Best glued value over splits of `W` into two non-empty unions of
    /// components. Vectors `y` and `c - y` give isomorphic splits, so only
    /// the lexicographically smaller of the two is evaluated.
    fn branch(&mut self, x: Mask, w: Mask) -> Size {
        let groups = self.class_groups(x, w);
        let counts: Vec<usize> = groups.iter().map(Vec::len).collect();
        let mut best = Size::Infeasible;
        for y in enumerate::class_vectors(&counts) {
            let mirror = counts.iter().zip(&y).map(|(c, v)| c - v);
            if y.iter().copied().gt(mirror) {
                continue;
            }
            self.stats.branch_splits_enumerated += 1;
            let w1 = split_mask(&groups, &y);
            let left = self.value(Shape::Tree, x, w1);
            if !left.is_feasible() {
                continue;
            }
            let right = self.value(Shape::Tree, x, w & !w1);
            best = best.min(left.glue(right));
        }
        best
    }

    fn root_candidates(&self) -> Vec<Mask> {
        match &self.config.roots {
            Some(roots) => roots
                .iter()
                .filter(|r| r.max().is_none_or(|v| v < self.graph.n()))
                .map(to_mask)
                .collect(),
            None => {
                let n = self.graph.n();
                enumerate::Combinations::new(n, 0, self.config.width + 1)
                    .map(|c| c.iter().fold(0, |m, &v| m | (1 << v)))
                    .collect()
            }
        }
    }

    fn drive(&mut self, shape: Shape) -> Outcome {
        let all: Mask = bits(Mask::MAX).take(self.graph.n()).fold(0, |m, v| m | (1 << v));
        let mut best = Outcome {
            size: Size::Infeasible,
            root: None,
        };
        for x in self.root_candidates() {
            if x.count_ones() > self.cap() || x & !all != 0 {
                continue;
            }
            let v = self.value(shape, x, all & !x);
            if v < best.size {
                best = Outcome {
                    size: v,
                    root: Some(to_set(x)),
                };
            }
        }
        best
    }

    /// Minimum size of a path decomposition of the whole graph at the
    /// configured width.
    pub fn mspd(&mut self) -> Outcome {
        self.drive(Shape::Path)
    }

    /// Minimum size of a tree decomposition of the whole graph at the
    /// configured width.
    pub fn mstd(&mut self) -> Outcome {
        self.drive(Shape::Tree)
    }
}

/// Minimum number of bags of a path decomposition of width at most `width`.
pub fn mspd(g: &Graph, width: usize) -> Result<Size, SolveError> {
    Ok(Solver::new(g, SolverConfig::new(width))?.mspd().size)
}

/// Minimum number of bags of a tree decomposition of width at most `width`.
pub fn mstd(g: &Graph, width: usize) -> Result<Size, SolveError> {
    Ok(Solver::new(g, SolverConfig::new(width))?.mstd().size)
}
