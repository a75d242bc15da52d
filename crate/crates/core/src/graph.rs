//! Simple undirected graphs over dense vertex ids and the set primitives the
//! solver is built from.
//!
//! Vertices are `0..n` internally. The exchange formats in the `fewbags`
//! crate shift to the 1-based ids used on disk.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

const WORD: usize = 64;

/// A set of vertex ids backed by a growable bit mask.
///
/// Trailing zero words are never stored, so equal sets compare and hash
/// equal regardless of how they were built.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub const fn new() -> Self {
        VertexSet { words: Vec::new() }
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n / WORD];
        if !n.is_multiple_of(WORD) {
            words.push((1u64 << (n % WORD)) - 1);
        }
        VertexSet { words }
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = VertexSet::new();
        s.insert(v);
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// Inserts `v`, returning `true` if it was not already present.
    pub fn insert(&mut self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        if w >= self.words.len() {
            return false;
        }
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        present
    }

    pub fn contains(&self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Smallest member, if any.
    pub fn min(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Largest member, if any.
    pub fn max(&self) -> Option<usize> {
        self.words
            .last()
            .map(|w| (self.words.len() - 1) * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        let len = self.words.len().max(other.words.len());
        let get = |s: &Self, i: usize| s.words.get(i).copied().unwrap_or(0);
        let mut out = VertexSet {
            words: (0..len).map(|i| f(get(self, i), get(other, i))).collect(),
        };
        out.trim();
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn union_with(&mut self, other: &Self) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Extend<usize> for VertexSet {
    fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
        for v in iter {
            self.insert(v);
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let b = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + b);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    m: usize,
}

impl Graph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![VertexSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Repeated edges (in either
    /// orientation) are collapsed; self-loops are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.adj[u].insert(v) {
                g.adj[v].insert(u);
                g.m += 1;
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("valid edges")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid edges")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, edges).expect("valid edges")
    }

    /// `K_{1,leaves}` with the center at vertex 0.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid edges")
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + shift, v + shift)));
        Graph::from_edges(shift + other.n(), edges).expect("valid edges")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `N(s) \ s`.
    pub fn open_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for v in s {
            out.union_with(&self.adj[v]);
        }
        out.difference(s)
    }

    /// Connected components of `G[s]`, ordered by smallest member.
    pub fn components_within(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut left = s.clone();
        let mut out = Vec::new();
        while let Some(start) = left.min() {
            let mut comp = VertexSet::singleton(start);
            let mut stack = vec![start];
            left.remove(start);
            while let Some(u) = stack.pop() {
                for w in self.adj[u].intersection(&left).iter() {
                    left.remove(w);
                    comp.insert(w);
                    stack.push(w);
                }
            }
            out.push(comp);
        }
        out
    }

    /// Connected components of `G[V \ x]`, ordered by smallest member.
    pub fn components_excluding(&self, x: &VertexSet) -> Vec<VertexSet> {
        self.components_within(&self.vertices().difference(x))
    }

    pub fn is_connected(&self) -> bool {
        self.components_within(&self.vertices()).len() <= 1
    }

    /// `G[s]` on dense ids `0..|s|`, with `map[new] = old`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let map = s.to_vec();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let edges = map.iter().enumerate().flat_map(|(i, &v)| {
            let index = &index;
            self.adj[v]
                .intersection(s)
                .iter()
                .map(move |w| (i, index[w]))
                .filter(|&(i, j)| i < j)
                .collect::<Vec<_>>()
        });
        (
            Graph::from_edges(map.len(), edges).expect("induced edges are valid"),
            map,
        )
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}
