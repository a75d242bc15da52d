//! Path and tree decompositions: validity checking, fingerprints, and
//! conversion to nice form.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// First violated clause found by a validator, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("malformed tree: {0}")]
    MalformedTree(&'static str),
    #[error("not a path")]
    NotAPath,
    #[error("bag {bag} contains vertex {vertex}, which is not in the graph")]
    UnknownVertex { bag: usize, vertex: usize },
    #[error("coverage: vertex {0} is in no bag")]
    Coverage(usize),
    #[error("edge: {{{0}, {1}}} is in no bag")]
    Edge(usize, usize),
    #[error("contiguity: bags containing vertex {0} are not contiguous")]
    Contiguity(usize),
    #[error("subtree: bags containing vertex {0} do not induce a subtree")]
    Subtree(usize),
    #[error("width: bag {bag} has {size} vertices")]
    Width { bag: usize, size: usize },
    #[error("size: {bags} bags exceed the limit of {max}")]
    Size { bags: usize, max: usize },
}

impl Violation {
    /// Short clause name, as printed by the command-line validator.
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::MalformedTree(_) => "malformed tree",
            Violation::NotAPath => "not a path",
            Violation::UnknownVertex { .. } => "unknown vertex",
            Violation::Coverage(_) => "coverage",
            Violation::Edge(..) => "edge",
            Violation::Contiguity(_) => "contiguity",
            Violation::Subtree(_) => "subtree",
            Violation::Width { .. } => "width",
            Violation::Size { .. } => "size",
        }
    }
}

/// A sequence of bags `(X_1, ..., X_s)`; `X_s` is the last bag.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathDecomposition {
    pub bags: Vec<VertexSet>,
}

/// Bags indexed `0..len` plus a parent relation with exactly one root.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub parent: Vec<Option<usize>>,
}

/// Bag sizes of a path decomposition, in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(pub Vec<usize>);

impl Fingerprint {
    pub fn reversed(&self) -> Fingerprint {
        Fingerprint(self.0.iter().rev().copied().collect())
    }

    /// Componentwise `self <= other`; `false` for different lengths.
    pub fn dominated_by(&self, other: &Fingerprint) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

pub fn fingerprint(pd: &PathDecomposition) -> Fingerprint {
    Fingerprint(pd.bags.iter().map(VertexSet::len).collect())
}

fn max_bag_size(bags: &[VertexSet]) -> usize {
    bags.iter().map(VertexSet::len).max().unwrap_or(0)
}

impl PathDecomposition {
    pub fn new(bags: Vec<VertexSet>) -> Self {
        PathDecomposition { bags }
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn max_bag_size(&self) -> usize {
        max_bag_size(&self.bags)
    }

    /// The same bags as a tree rooted at the last bag, each bag the child
    /// of its successor.
    pub fn to_tree(&self) -> TreeDecomposition {
        let s = self.bags.len();
        TreeDecomposition {
            bags: self.bags.clone(),
            parent: (0..s).map(|i| (i + 1 < s).then_some(i + 1)).collect(),
        }
    }
}

impl TreeDecomposition {
    /// Builds a decomposition from undirected tree edges, rooted at `root`.
    pub fn from_edges(
        bags: Vec<VertexSet>,
        edges: &[(usize, usize)],
        root: usize,
    ) -> Result<Self, Violation> {
        let t = bags.len();
        if t == 0 {
            return Err(Violation::MalformedTree("no bags"));
        }
        if root >= t {
            return Err(Violation::MalformedTree("root out of range"));
        }
        if edges.len() != t - 1 {
            return Err(Violation::MalformedTree("wrong number of tree edges"));
        }
        let mut adj = vec![Vec::new(); t];
        for &(a, b) in edges {
            if a >= t || b >= t || a == b {
                return Err(Violation::MalformedTree("bad tree edge"));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; t];
        let mut seen = vec![false; t];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Violation::MalformedTree("tree is disconnected"));
        }
        Ok(TreeDecomposition { bags, parent })
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn max_bag_size(&self) -> usize {
        max_bag_size(&self.bags)
    }

    /// Undirected tree edges `(child, parent)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (c, p)))
            .collect()
    }

    pub fn root(&self) -> Option<usize> {
        self.parent.iter().position(Option::is_none)
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (c, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(c);
            }
        }
        ch
    }

    /// Checks that the parent relation is a single rooted tree.
    pub fn check_structure(&self) -> Result<(), Violation> {
        let t = self.bags.len();
        if t == 0 {
            return Err(Violation::MalformedTree("no bags"));
        }
        if self.parent.len() != t {
            return Err(Violation::MalformedTree("parent list length differs from bag count"));
        }
        if self.parent.iter().filter(|p| p.is_none()).count() != 1 {
            return Err(Violation::MalformedTree("expected exactly one root"));
        }
        // Every node must reach the root within t steps.
        for start in 0..t {
            let mut u = start;
            let mut steps = 0;
            while let Some(p) = self.parent[u] {
                if p >= t {
                    return Err(Violation::MalformedTree("parent out of range"));
                }
                u = p;
                steps += 1;
                if steps > t {
                    return Err(Violation::MalformedTree("cycle in parent relation"));
                }
            }
        }
        Ok(())
    }

    /// True when every node has at most two tree neighbours.
    pub fn is_path_shaped(&self) -> bool {
        let mut deg = vec![0usize; self.len()];
        for (c, p) in self.edges() {
            deg[c] += 1;
            deg[p] += 1;
        }
        deg.iter().all(|&d| d <= 2)
    }

    /// The bags in path order when the tree is a path.
    pub fn to_path(&self) -> Option<PathDecomposition> {
        if self.check_structure().is_err() || !self.is_path_shaped() {
            return None;
        }
        let t = self.len();
        let mut adj = vec![Vec::new(); t];
        for (c, p) in self.edges() {
            adj[c].push(p);
            adj[p].push(c);
        }
        let start = (0..t).find(|&i| adj[i].len() <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(PathDecomposition::new(
            order.into_iter().map(|i| self.bags[i].clone()).collect(),
        ))
    }

    /// For every vertex in some bag, whether its bags induce a subtree.
    fn check_subtrees(&self) -> Result<(), Violation> {
        // A vertex's bags form a subtree iff exactly one of them has a parent
        // outside the set (or is the root).
        let mut tops: hashbrown::HashMap<usize, usize> = hashbrown::HashMap::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for v in bag {
                let top = match self.parent[i] {
                    None => true,
                    Some(p) => !self.bags[p].contains(v),
                };
                if top {
                    *tops.entry(v).or_default() += 1;
                }
            }
        }
        let mut bad: Vec<usize> = tops.into_iter().filter(|&(_, c)| c > 1).map(|(v, _)| v).collect();
        bad.sort_unstable();
        match bad.first() {
            Some(&v) => Err(Violation::Subtree(v)),
            None => Ok(()),
        }
    }
}

fn check_vertices_and_edges(g: &Graph, bags: &[VertexSet]) -> Result<(), Violation> {
    let n = g.n();
    let mut covered = VertexSet::new();
    for (i, bag) in bags.iter().enumerate() {
        if let Some(v) = bag.max().filter(|&v| v >= n) {
            return Err(Violation::UnknownVertex { bag: i, vertex: v });
        }
        covered.union_with(bag);
    }
    if let Some(v) = g.vertices().difference(&covered).min() {
        return Err(Violation::Coverage(v));
    }
    for (u, v) in g.edges() {
        if !bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            return Err(Violation::Edge(u, v));
        }
    }
    Ok(())
}

fn check_limits(bags: &[VertexSet], width: usize, max_bags: Option<usize>) -> Result<(), Violation> {
    if let Some((bag, b)) = bags.iter().enumerate().find(|(_, b)| b.len() > width + 1) {
        return Err(Violation::Width { bag, size: b.len() });
    }
    match max_bags {
        Some(max) if bags.len() > max => Err(Violation::Size { bags: bags.len(), max }),
        _ => Ok(()),
    }
}

/// Checks `pd` against `g` at the given width (maximum bag size minus one)
/// and optional bag budget. Clauses are checked in the order coverage, edge,
/// contiguity, width, size.
pub fn validate_path(
    g: &Graph,
    pd: &PathDecomposition,
    width: usize,
    max_bags: Option<usize>,
) -> Result<(), Violation> {
    check_vertices_and_edges(g, &pd.bags)?;
    let mut first = vec![usize::MAX; g.n()];
    let mut last = vec![0usize; g.n()];
    let mut count = vec![0usize; g.n()];
    for (i, bag) in pd.bags.iter().enumerate() {
        for v in bag {
            first[v] = first[v].min(i);
            last[v] = i;
            count[v] += 1;
        }
    }
    if let Some(v) = (0..g.n()).find(|&v| last[v] - first[v] + 1 != count[v]) {
        return Err(Violation::Contiguity(v));
    }
    check_limits(&pd.bags, width, max_bags)
}

/// Tree counterpart of [`validate_path`]; subtree connectivity replaces
/// contiguity, and the parent relation must form a single rooted tree.
pub fn validate_tree(
    g: &Graph,
    td: &TreeDecomposition,
    width: usize,
    max_bags: Option<usize>,
) -> Result<(), Violation> {
    td.check_structure()?;
    check_vertices_and_edges(g, &td.bags)?;
    td.check_subtrees()?;
    check_limits(&td.bags, width, max_bags)
}

/// Role of a node in a nice tree decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
    /// Matches none of the four patterns.
    Irregular,
}

/// Classifies every node; `td` must be structurally well formed.
pub fn classify_nodes(td: &TreeDecomposition) -> Vec<NodeKind> {
    let children = td.children();
    (0..td.len())
        .map(|i| {
            let bag = &td.bags[i];
            match children[i].as_slice() {
                [] => NodeKind::Leaf,
                [a, b] if td.bags[*a] == *bag && td.bags[*b] == *bag => NodeKind::Join,
                [c] => {
                    let child = &td.bags[*c];
                    let added = bag.difference(child);
                    let removed = child.difference(bag);
                    match (added.len(), removed.len()) {
                        (1, 0) => NodeKind::Introduce(added.min().unwrap()),
                        (0, 1) => NodeKind::Forget(removed.min().unwrap()),
                        _ => NodeKind::Irregular,
                    }
                }
                _ => NodeKind::Irregular,
            }
        })
        .collect()
}

pub fn is_nice(td: &TreeDecomposition) -> bool {
    td.check_structure().is_ok() && classify_nodes(td).iter().all(|k| *k != NodeKind::Irregular)
}

/// Converts a valid tree decomposition into a nice one of no larger width
/// with at most `max(1, 4n)` bags, `n` being the number of vertices that
/// occur in bags.
///
/// The input is first normalized: bags contained in a neighbour are
/// contracted away and the remaining bags are padded from their neighbours
/// up to the maximum bag size `K`. Tree edges whose bags differ in more than
/// one vertex are then subdivided so that neighbours swap exactly one
/// vertex. The normalized tree has `n - K + 1` nodes, and expanding each
/// edge into a forget/introduce pair plus a comb of join nodes per branching
/// node stays below `4n`.
pub fn make_nice(td: &TreeDecomposition) -> Result<TreeDecomposition, Violation> {
    td.check_structure()?;
    td.check_subtrees()?;

    let cap = td.max_bag_size();
    if cap == 0 {
        return Ok(TreeDecomposition {
            bags: vec![VertexSet::new()],
            parent: vec![None],
        });
    }

    let mut bags = td.bags.clone();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); bags.len()];
    for (c, p) in td.edges() {
        adj[c].push(p);
        adj[p].push(c);
    }
    let mut alive = vec![true; bags.len()];

    loop {
        contract_subset_bags(&mut bags, &mut adj, &mut alive);
        if !pad_one_bag(&mut bags, &adj, &alive, cap) {
            break;
        }
    }
    subdivide_edges(&mut bags, &mut adj, &mut alive);

    let root = alive.iter().position(|&a| a).expect("at least one bag survives");
    let mut out = TreeDecomposition::default();
    build_nice(root, usize::MAX, &bags, &adj, &mut out);
    Ok(out)
}

fn contract_subset_bags(bags: &mut [VertexSet], adj: &mut [Vec<usize>], alive: &mut [bool]) {
    'outer: loop {
        for i in 0..bags.len() {
            if !alive[i] {
                continue;
            }
            for &j in &adj[i] {
                if bags[i].is_subset(&bags[j]) {
                    // Merge i into j.
                    let nbrs = core::mem::take(&mut adj[i]);
                    for &w in &nbrs {
                        adj[w].retain(|&x| x != i);
                        if w != j {
                            adj[w].push(j);
                            adj[j].push(w);
                        }
                    }
                    alive[i] = false;
                    continue 'outer;
                }
            }
        }
        return;
    }
}

/// Adds one vertex from a neighbour to some bag smaller than `cap`.
fn pad_one_bag(bags: &mut [VertexSet], adj: &[Vec<usize>], alive: &[bool], cap: usize) -> bool {
    for i in 0..bags.len() {
        if !alive[i] || bags[i].len() >= cap {
            continue;
        }
        for &j in &adj[i] {
            if let Some(v) = bags[j].difference(&bags[i]).min() {
                bags[i].insert(v);
                return true;
            }
        }
    }
    false
}

fn subdivide_edges(bags: &mut Vec<VertexSet>, adj: &mut Vec<Vec<usize>>, alive: &mut Vec<bool>) {
    let edges: Vec<(usize, usize)> = (0..bags.len())
        .filter(|&i| alive[i])
        .flat_map(|i| adj[i].iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .collect();
    for (a, b) in edges {
        let outgoing: Vec<usize> = bags[a].difference(&bags[b]).to_vec();
        let incoming: Vec<usize> = bags[b].difference(&bags[a]).to_vec();
        if outgoing.len() <= 1 {
            continue;
        }
        adj[a].retain(|&x| x != b);
        adj[b].retain(|&x| x != a);
        let mut prev = a;
        let mut cur = bags[a].clone();
        for step in 0..outgoing.len() - 1 {
            cur.remove(outgoing[step]);
            cur.insert(incoming[step]);
            let id = bags.len();
            bags.push(cur.clone());
            alive.push(true);
            adj.push(vec![prev]);
            adj[prev].push(id);
            prev = id;
        }
        adj[prev].push(b);
        adj[b].push(prev);
    }
}

fn push_node(out: &mut TreeDecomposition, bag: VertexSet, children: &[usize]) -> usize {
    let id = out.bags.len();
    out.bags.push(bag);
    out.parent.push(None);
    for &c in children {
        out.parent[c] = Some(id);
    }
    id
}

/// Emits the nice subtree for `node` and returns the id of its top bag,
/// which equals `bags[node]`.
fn build_nice(
    node: usize,
    from: usize,
    bags: &[VertexSet],
    adj: &[Vec<usize>],
    out: &mut TreeDecomposition,
) -> usize {
    let here = &bags[node];
    let mut tops = Vec::new();
    for &child in adj[node].iter().filter(|&&c| c != from) {
        let mut top = build_nice(child, node, bags, adj, out);
        let mut cur = bags[child].clone();
        for v in bags[child].difference(here).iter() {
            cur.remove(v);
            top = push_node(out, cur.clone(), &[top]);
        }
        for v in here.difference(&bags[child]).iter() {
            cur.insert(v);
            top = push_node(out, cur.clone(), &[top]);
        }
        tops.push(top);
    }
    match tops.split_first() {
        None => push_node(out, here.clone(), &[]),
        Some((&first, rest)) => rest
            .iter()
            .fold(first, |acc, &t| push_node(out, here.clone(), &[acc, t])),
    }
}
