//! Canonical certificates for vertex-colored graphs and the good-pair keys
//! built on top of them.
//!
//! The labeling is computed by individualization-refinement: colors are
//! refined to an equitable partition, the graph is split along singleton
//! cells into independently labeled components, and otherwise every vertex
//! of the first smallest non-singleton cell is individualized in turn, the
//! lexicographically least encoding winning. Vertices of that cell that are
//! twins of an already explored vertex are skipped, since swapping twins is
//! an automorphism. This keeps highly symmetric inputs (cliques, spiders,
//! clique chains) cheap.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// A graph together with one color per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub graph: Graph,
    pub colors: Vec<u32>,
}

impl ColoredGraph {
    /// All vertices get color 0.
    pub fn uncolored(graph: Graph) -> Self {
        let colors = vec![0; graph.n()];
        ColoredGraph { graph, colors }
    }
}

/// Byte string equal for two colored graphs exactly when they are
/// color-preserving isomorphic.
///
/// Layout: vertex count as `u32` LE, then the colors in canonical vertex
/// order (each `u32` LE), then the upper triangle of the adjacency matrix
/// in canonical order, row-major, packed little-endian into bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate(pub Vec<u8>);

/// Adjacency lists of a graph on `0..n`, the form the labeler works on.
struct Local {
    adj: Vec<Vec<u32>>,
}

impl Local {
    fn induced(g: &Graph, verts: &[usize]) -> Local {
        let mut index = hashbrown::HashMap::with_capacity(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            index.insert(v, i as u32);
        }
        let adj = verts
            .iter()
            .map(|&v| {
                let mut nb: Vec<u32> = g
                    .neighbors(v)
                    .iter()
                    .filter_map(|w| index.get(&w).copied())
                    .collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Local { adj }
    }

    fn sub(&self, verts: &[u32]) -> Local {
        let mut index = vec![u32::MAX; self.adj.len()];
        for (i, &v) in verts.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let adj = verts
            .iter()
            .map(|&v| {
                self.adj[v as usize]
                    .iter()
                    .map(|&w| index[w as usize])
                    .filter(|&w| w != u32::MAX)
                    .collect()
            })
            .collect();
        Local { adj }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    fn adjacent(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    fn twins(&self, u: u32, v: u32) -> bool {
        let strip = |a: u32, b: u32| self.adj[a as usize].iter().copied().filter(move |&x| x != b);
        strip(u, v).eq(strip(v, u))
    }
}

/// Renames colors to their rank among the distinct values.
fn rank(colors: &[u32]) -> (Vec<u32>, usize) {
    let mut distinct = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let ranked = colors
        .iter()
        .map(|c| distinct.binary_search(c).unwrap() as u32)
        .collect();
    (ranked, distinct.len())
}

/// Iterated color refinement to the coarsest equitable partition finer than
/// `colors`. Cell names are ranks of (old cell, neighbour cell multiset), so
/// they are invariant under isomorphism and preserve the input cell order.
fn refine(local: &Local, colors: &[u32]) -> (Vec<u32>, usize) {
    let (mut c, mut cells) = rank(colors);
    let n = local.n();
    loop {
        let mut sigs: Vec<(u32, Vec<u32>, u32)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = local.adj[v].iter().map(|&w| c[w as usize]).collect();
                nb.sort_unstable();
                (c[v], nb, v as u32)
            })
            .collect();
        sigs.sort_unstable();
        let mut next = vec![0u32; n];
        let mut name = 0u32;
        for i in 0..n {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                name += 1;
            }
            next[sigs[i].2 as usize] = name;
        }
        let now = if n == 0 { 0 } else { name as usize + 1 };
        c = next;
        if now == cells {
            return (c, cells);
        }
        cells = now;
    }
}

/// Comparison code of `local` under `order`: colors then packed adjacency.
fn code(local: &Local, colors: &[u32], order: &[u32]) -> Vec<u64> {
    let n = order.len();
    let mut pos = vec![0u32; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i as u32;
    }
    let mut out: Vec<u64> = order.iter().map(|&v| u64::from(colors[v as usize])).collect();
    let bits = n * n.saturating_sub(1) / 2;
    let base = out.len();
    out.resize(base + bits.div_ceil(64), 0);
    for (i, &v) in order.iter().enumerate() {
        let row = i * (2 * n - i - 1) / 2;
        for &w in &local.adj[v as usize] {
            let j = pos[w as usize] as usize;
            if j > i {
                let bit = row + (j - i - 1);
                out[base + bit / 64] |= 1 << (63 - bit % 64);
            }
        }
    }
    out
}

/// Canonical vertex order of `local` colored by `colors`.
fn canonical_order(local: &Local, colors: &[u32]) -> Vec<u32> {
    let n = local.n();
    let (c, cells) = refine(local, colors);
    if cells == n {
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_unstable_by_key(|&v| c[v as usize]);
        return order;
    }

    let mut size = vec![0usize; cells];
    for &x in &c {
        size[x as usize] += 1;
    }
    let singletons: Vec<u32> = {
        let mut s: Vec<u32> = (0..n as u32).filter(|&v| size[c[v as usize] as usize] == 1).collect();
        s.sort_unstable_by_key(|&v| c[v as usize]);
        s
    };
    let comps = components_avoiding(local, &singletons);
    if !singletons.is_empty() || comps.len() > 1 {
        let mut labeled: Vec<(Vec<u64>, Vec<u32>)> = comps
            .into_iter()
            .map(|comp| {
                let sub = local.sub(&comp);
                let sub_colors: Vec<u32> = comp.iter().map(|&v| c[v as usize]).collect();
                let sub_order = canonical_order(&sub, &sub_colors);
                let sub_code = code(&sub, &sub_colors, &sub_order);
                (sub_code, sub_order.iter().map(|&i| comp[i as usize]).collect())
            })
            .collect();
        labeled.sort_by(|a, b| a.0.cmp(&b.0));
        let mut order = singletons;
        for (_, verts) in labeled {
            order.extend(verts);
        }
        return order;
    }

    let target = (0..cells as u32)
        .filter(|&x| size[x as usize] > 1)
        .min_by_key(|&x| (size[x as usize], x))
        .expect("non-discrete partition has a non-singleton cell");
    let members: Vec<u32> = (0..n as u32).filter(|&v| c[v as usize] == target).collect();
    let mut reps: Vec<u32> = Vec::new();
    for &v in &members {
        if !reps.iter().any(|&r| local.twins(r, v)) {
            reps.push(v);
        }
    }

    let mut best: Option<(Vec<u64>, Vec<u32>)> = None;
    for v in reps {
        let split: Vec<u32> = (0..n)
            .map(|x| 2 * c[x] + u32::from(x as u32 != v))
            .collect();
        let order = canonical_order(local, &split);
        let cand = code(local, &c, &order);
        if best.as_ref().is_none_or(|(b, _)| cand < *b) {
            best = Some((cand, order));
        }
    }
    best.expect("target cell is non-empty").1
}

/// Components of `local` minus `removed`, each sorted, ordered by minimum.
fn components_avoiding(local: &Local, removed: &[u32]) -> Vec<Vec<u32>> {
    let n = local.n();
    let mut seen = vec![false; n];
    for &v in removed {
        seen[v as usize] = true;
    }
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s as u32];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i] as usize;
            for &w in &local.adj[u] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn serialize(local: &Local, colors: &[u32], order: &[u32]) -> Certificate {
    let n = order.len();
    let mut bytes = Vec::with_capacity(4 + 4 * n + n * n / 16 + 1);
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    for &v in order {
        bytes.extend_from_slice(&colors[v as usize].to_le_bytes());
    }
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for i in 0..n {
        for j in i + 1..n {
            if local.adjacent(order[i], order[j]) {
                acc |= 1 << filled;
            }
            filled += 1;
            if filled == 8 {
                bytes.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push(acc);
    }
    Certificate(bytes)
}

fn certify_local(local: &Local, colors: &[u32]) -> Certificate {
    let (ranked, _) = rank(colors);
    let order = canonical_order(local, &ranked);
    serialize(local, colors, &order)
}

/// Canonical certificate of a colored graph.
pub fn certificate(cg: &ColoredGraph) -> Certificate {
    let verts: Vec<usize> = (0..cg.graph.n()).collect();
    certify_local(&Local::induced(&cg.graph, &verts), &cg.colors)
}

/// Certificate of `G[s]` colored by `color(v)` for each `v` in `s`.
pub fn certificate_of_subgraph(g: &Graph, s: &VertexSet, color: impl Fn(usize) -> u32) -> Certificate {
    let verts = s.to_vec();
    let colors: Vec<u32> = verts.iter().map(|&v| color(v)).collect();
    certify_local(&Local::induced(g, &verts), &colors)
}

/// A root bag `x` together with a union `w` of components of `G - x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoodPair {
    pub x: VertexSet,
    pub w: VertexSet,
}

impl GoodPair {
    pub fn new(x: VertexSet, w: VertexSet) -> Self {
        GoodPair { x, w }
    }

    /// Checks disjointness and `N(w) ⊆ w ∪ x`; the size bound on `x`
    /// depends on the width and is left to callers.
    pub fn check(&self, g: &Graph) -> Result<(), CanonError> {
        let all = self.x.union(&self.w);
        if let Some(v) = all.max().filter(|&v| v >= g.n()) {
            return Err(CanonError::UnknownVertex(v));
        }
        if let Some(v) = self.x.intersection(&self.w).min() {
            return Err(CanonError::Overlap(v));
        }
        if let Some(v) = g.open_neighborhood(&self.w).difference(&self.x).min() {
            return Err(CanonError::Escapes(v));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("vertex {0} is in both the root bag and the remainder")]
    Overlap(usize),
    #[error("vertex {0} is a neighbour of the remainder outside the root bag")]
    Escapes(usize),
}

/// Memo key of a good pair.
///
/// With `x_sorted` filled in, two keys are equal exactly when the pairs are
/// related by an isomorphism fixing the root bag pointwise. Anonymous keys
/// leave `x_sorted` empty and only require the root bag to map onto the
/// other root bag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonKey {
    pub x_sorted: Vec<usize>,
    pub cert: Certificate,
}

/// Key under which the root bag is fixed pointwise: the `i`-th smallest
/// vertex of `x` gets color `i + 1`, the remainder color 0.
pub fn canon_key(g: &Graph, p: &GoodPair) -> Result<CanonKey, CanonError> {
    p.check(g)?;
    Ok(canon_key_unchecked(g, p))
}

pub(crate) fn canon_key_unchecked(g: &Graph, p: &GoodPair) -> CanonKey {
    let x_sorted = p.x.to_vec();
    let cert = certificate_of_subgraph(g, &p.x.union(&p.w), |v| {
        x_sorted.binary_search(&v).map_or(0, |i| i as u32 + 1)
    });
    CanonKey { x_sorted, cert }
}

/// Key under which only the root bag as a whole is distinguished, merging
/// pairs with different root bags.
pub fn anonymous_key(g: &Graph, p: &GoodPair) -> Result<CanonKey, CanonError> {
    p.check(g)?;
    Ok(anonymous_key_unchecked(g, p))
}

pub(crate) fn anonymous_key_unchecked(g: &Graph, p: &GoodPair) -> CanonKey {
    let cert = certificate_of_subgraph(g, &p.x.union(&p.w), |v| u32::from(p.x.contains(v)));
    CanonKey {
        x_sorted: Vec::new(),
        cert,
    }
}

/// One isomorphism class of basic good pairs `(x, component)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentClass {
    pub cert: Certificate,
    /// Member components ordered by smallest vertex.
    pub members: Vec<VertexSet>,
}

impl ComponentClass {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// Groups the components of `G[w]` by the key of `(x, component)`. Classes
/// are ordered by certificate bytes.
pub fn component_classes(g: &Graph, p: &GoodPair) -> Result<Vec<ComponentClass>, CanonError> {
    p.check(g)?;
    Ok(component_classes_unchecked(g, p))
}

pub(crate) fn component_classes_unchecked(g: &Graph, p: &GoodPair) -> Vec<ComponentClass> {
    let mut classes: Vec<ComponentClass> = Vec::new();
    for comp in g.components_within(&p.w) {
        let key = canon_key_unchecked(g, &GoodPair::new(p.x.clone(), comp.clone()));
        match classes.iter_mut().find(|c| c.cert == key.cert) {
            Some(class) => class.members.push(comp),
            None => classes.push(ComponentClass {
                cert: key.cert,
                members: vec![comp],
            }),
        }
    }
    classes.sort_by(|a, b| a.cert.cmp(&b.cert));
    classes
}
