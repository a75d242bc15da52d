//! Brute-force reference solvers, independent of the canonizing solver.
//!
//! * [`oracle_mspd_subsetdp`] grows path decompositions forward, one bag
//!   at a time, by breadth-first search over (covered set, last bag).
//! * [`oracle_mstd_plain`] evaluates the tree recurrence on concrete
//!   `(X, W)` pairs, enumerating every candidate bag and every split of the
//!   remainder's components, with no isomorphism reduction.
//! * [`oracle_implements_check`] enumerates all tree decompositions with a
//!   bounded number of bags to test the clique-chain gadget property.
//! * [`three_dm_feasible`] and [`s3g_feasible`] decide tiny matching and
//!   grouping instances by exhaustive search.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};
use thiserror::Error;

use crate::decomp::Fingerprint;
use crate::gadgets::{S3GInstance, TripleSystem};
use crate::graph::Graph;
use crate::solver::Size;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices; this oracle handles at most {max}")]
    TooLarge { n: usize, max: usize },
    #[error("state budget of {0} exceeded")]
    Budget(u64),
}

/// Largest graph accepted by the subset dynamic program.
pub const SUBSET_DP_MAX: usize = 20;

fn adjacency32(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0, |m, u| m | (1 << u))).collect()
}

fn submasks(pool: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(pool);
    core::iter::from_fn(move || {
        let cur = next?;
        next = (cur != 0).then(|| (cur - 1) & pool);
        Some(cur)
    })
}

/// Minimum number of bags of a path decomposition of width at most `k`,
/// by breadth-first search over states `(covered, last)`.
///
/// Every edge with both ends covered is covered by some bag so far. A bag
/// `Y` may follow `last` when it avoids `covered \ last` (vertices already
/// forgotten), every new vertex has all its covered neighbours in `Y`, and
/// every vertex forgotten now has all its neighbours covered.
pub fn oracle_mspd_subsetdp(g: &Graph, k: usize) -> Result<Size, OracleError> {
    let n = g.n();
    if n > SUBSET_DP_MAX {
        return Err(OracleError::TooLarge { n, max: SUBSET_DP_MAX });
    }
    let adj = adjacency32(g);
    let all: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let fits = |s: u32| s.count_ones() as usize <= k + 1;
    let nbrs = |s: u32| (0..n).filter(|v| s >> v & 1 == 1).fold(0, |m, v| m | adj[v]);

    let mut dist: HashMap<(u32, u32), u32> = HashMap::new();
    let mut queue = VecDeque::new();
    for x in submasks(all).filter(|&x| fits(x)) {
        dist.insert((x, x), 1);
        queue.push_back((x, x));
    }
    while let Some((covered, last)) = queue.pop_front() {
        let d = dist[&(covered, last)];
        if covered == all {
            return Ok(Size::Bags(d));
        }
        let pool = last | (all & !covered);
        for y in submasks(pool).filter(|&y| fits(y)) {
            let fresh = y & !covered;
            let forgotten = last & !y;
            let next = covered | y;
            let fresh_ok = (0..n)
                .filter(|v| fresh >> v & 1 == 1)
                .all(|v| adj[v] & covered & !y == 0);
            if !fresh_ok || nbrs(forgotten) & !next != 0 {
                continue;
            }
            if let hashbrown::hash_map::Entry::Vacant(e) = dist.entry((next, y)) {
                e.insert(d + 1);
                queue.push_back((next, y));
            }
        }
    }
    Ok(Size::Infeasible)
}

/// Value and table size of a plain tree-recurrence run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlainReport {
    pub size: Size,
    /// Distinct `(X, W)` pairs evaluated (excluding `W = ∅`).
    pub entries: usize,
}

/// Default state budget of [`oracle_mstd_plain`].
pub const PLAIN_BUDGET: u64 = 5_000_000;

struct Plain {
    n: usize,
    adj: Vec<u128>,
    cap: u32,
    memo: HashMap<(u128, u128), Size>,
    budget: u64,
}

fn mask_bits(mut m: u128) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

impl Plain {
    fn components(&self, w: u128) -> Vec<u128> {
        let mut left = w;
        let mut out = Vec::new();
        while left != 0 {
            let mut comp = 1u128 << left.trailing_zeros();
            let mut frontier = comp;
            while frontier != 0 {
                let reach = mask_bits(frontier).fold(0, |m, v| m | self.adj[v]) & w & !comp;
                comp |= reach;
                frontier = reach;
            }
            out.push(comp);
            left &= !comp;
        }
        out
    }

    fn td(&mut self, x: u128, w: u128) -> Result<Size, OracleError> {
        if w == 0 {
            return Ok(Size::Bags(1));
        }
        if let Some(&v) = self.memo.get(&(x, w)) {
            return Ok(v);
        }
        if self.memo.len() as u64 >= self.budget {
            return Err(OracleError::Budget(self.budget));
        }
        let mut best = Size::Infeasible;
        // Every Y ⊆ X ∪ W with Y ≠ X, |Y| ≤ k+1 and no edge from X \ Y to W.
        let pool: Vec<usize> = mask_bits(x | w).collect();
        let mut chosen = Vec::new();
        self.each_bag(&pool, 0, &mut chosen, &mut |this, y| {
            if y == x {
                return Ok(());
            }
            let gone = x & !y;
            if mask_bits(gone).any(|v| this.adj[v] & w != 0) {
                return Ok(());
            }
            best = best.min(this.td(y, w & !y)? + 1);
            Ok(())
        })?;
        let comps = self.components(w);
        let c = comps.len();
        // Proper non-empty subsets containing the first component; the
        // complement covers the rest.
        if c >= 2 {
            for sub in 0u64..(1 << (c - 1)) {
                let pick = (sub << 1) | 1;
                if pick == (1 << c) - 1 {
                    continue;
                }
                let w1 = (0..c).filter(|i| pick >> i & 1 == 1).fold(0, |m, i| m | comps[i]);
                let left = self.td(x, w1)?;
                let right = self.td(x, w & !w1)?;
                best = best.min(left.glue(right));
            }
        }
        self.memo.insert((x, w), best);
        Ok(best)
    }

    fn each_bag(
        &mut self,
        pool: &[usize],
        from: usize,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&mut Self, u128) -> Result<(), OracleError>,
    ) -> Result<(), OracleError> {
        let y = chosen.iter().fold(0u128, |m, &v| m | (1 << v));
        f(self, y)?;
        if chosen.len() as u32 == self.cap {
            return Ok(());
        }
        for i in from..pool.len() {
            chosen.push(pool[i]);
            self.each_bag(pool, i + 1, chosen, f)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Minimum number of bags of a tree decomposition of width at most `k`,
/// from the tree recurrence on concrete pairs.
pub fn oracle_mstd_plain(g: &Graph, k: usize) -> Result<Size, OracleError> {
    oracle_mstd_plain_report(g, k, PLAIN_BUDGET).map(|r| r.size)
}

/// [`oracle_mstd_plain`] with an explicit state budget, also reporting the
/// number of pairs stored.
pub fn oracle_mstd_plain_report(g: &Graph, k: usize, budget: u64) -> Result<PlainReport, OracleError> {
    let n = g.n();
    if n > 128 {
        return Err(OracleError::TooLarge { n, max: 128 });
    }
    let mut p = Plain {
        n,
        adj: (0..n).map(|v| g.neighbors(v).iter().fold(0, |m, u| m | (1u128 << u))).collect(),
        cap: k as u32 + 1,
        memo: HashMap::new(),
        budget,
    };
    let all: u128 = (0..p.n).fold(0, |m, v| m | (1 << v));
    let pool: Vec<usize> = (0..n).collect();
    let mut best = Size::Infeasible;
    let mut chosen = Vec::new();
    p.each_bag(&pool, 0, &mut chosen, &mut |this, x| {
        best = best.min(this.td(x, all & !x)?);
        Ok(())
    })?;
    Ok(PlainReport { size: best, entries: p.memo.len() })
}

/// Result of [`oracle_implements_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplementsReport {
    /// Every tree decomposition with exactly `r` bags within capacity is
    /// path-shaped.
    pub all_path_shaped: bool,
    /// Fewest bags of a path decomposition within capacity, if any exists
    /// with at most `r` bags.
    pub min_size: Option<usize>,
    /// Componentwise-minimal fingerprints among path decompositions of
    /// size `min_size`, read from either end.
    pub minimal_fingerprints: Vec<Fingerprint>,
    /// Both clauses hold for the claimed vector: the minimum size is `r`,
    /// decompositions of size `r` are paths, and every minimal fingerprint
    /// is `w` or its reversal.
    pub implements: bool,
}

/// Largest graph and bag count accepted by [`oracle_implements_check`].
pub const IMPLEMENTS_MAX_N: usize = 32;
pub const IMPLEMENTS_MAX_BAGS: usize = 6;
const IMPLEMENTS_BUDGET: u64 = 200_000_000;

/// Labeled trees on `r` nodes as edge lists, from Prüfer sequences.
fn labeled_trees(r: usize) -> Vec<Vec<(usize, usize)>> {
    if r <= 1 {
        return vec![Vec::new()];
    }
    if r == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut out = Vec::new();
    let mut seq = vec![0usize; r - 2];
    loop {
        let mut degree = vec![1usize; r];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::new();
        for &s in &seq {
            let leaf = (0..r).find(|&v| degree[v] == 1).expect("a leaf exists");
            edges.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..r).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
        // Next sequence, odometer style.
        let mut i = seq.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < r {
                break;
            }
            seq[i] = 0;
        }
    }
}

/// Node sets of connected subtrees of a tree on `r` nodes.
fn connected_subsets(r: usize, edges: &[(usize, usize)]) -> Vec<u32> {
    let mut adj = vec![0u32; r];
    for &(a, b) in edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    (1u32..1 << r)
        .filter(|&s| {
            let mut seen = 1u32 << s.trailing_zeros();
            loop {
                let grow = (0..r).filter(|v| seen >> v & 1 == 1).fold(seen, |m, v| m | (adj[v] & s));
                if grow == seen {
                    return seen == s;
                }
                seen = grow;
            }
        })
        .collect()
}

struct Assign<'a> {
    order: Vec<usize>,
    adj: &'a [u32],
    subsets: Vec<u32>,
    capacity: usize,
    load: Vec<usize>,
    placed: Vec<u32>,
    steps: u64,
}

impl Assign<'_> {
    /// Calls `leaf` with the bag sizes of every complete assignment; stops
    /// early when it returns `true`.
    fn run(&mut self, depth: usize, leaf: &mut dyn FnMut(&[usize]) -> bool) -> Result<bool, OracleError> {
        self.steps += 1;
        if self.steps > IMPLEMENTS_BUDGET {
            return Err(OracleError::Budget(IMPLEMENTS_BUDGET));
        }
        if depth == self.order.len() {
            return Ok(leaf(&self.load));
        }
        let v = self.order[depth];
        for si in 0..self.subsets.len() {
            let s = self.subsets[si];
            let r = self.load.len();
            if (0..r).any(|b| s >> b & 1 == 1 && self.load[b] == self.capacity) {
                continue;
            }
            let mut nb = self.adj[v];
            let mut ok = true;
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if self.placed[u] != 0 && self.placed[u] & s == 0 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for b in (0..r).filter(|b| s >> b & 1 == 1) {
                self.load[b] += 1;
            }
            self.placed[v] = s;
            let stop = self.run(depth + 1, leaf)?;
            self.placed[v] = 0;
            for b in (0..r).filter(|b| s >> b & 1 == 1) {
                self.load[b] -= 1;
            }
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Breadth-first vertex order, so that neighbours are placed early and the
/// edge constraint prunes quickly.
fn bfs_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

fn assigner<'a>(g: &Graph, adj: &'a [u32], capacity: usize, r: usize, edges: &[(usize, usize)]) -> Assign<'a> {
    Assign {
        order: bfs_order(g),
        adj,
        subsets: connected_subsets(r, edges),
        capacity,
        load: vec![0; r],
        placed: vec![0; g.n()],
        steps: 0,
    }
}

/// Exhaustively tests whether `g` implements `w` at bag-size capacity
/// `capacity` with `r` bags: (a) every tree decomposition with `r` bags of
/// size at most `capacity` is a path, and (b) the minimal path
/// decompositions (fewest bags, then componentwise-minimal bag sizes) have
/// size `r` and fingerprint `w` up to reversal.
pub fn oracle_implements_check(
    g: &Graph,
    capacity: usize,
    r: usize,
    w: &Fingerprint,
) -> Result<ImplementsReport, OracleError> {
    let n = g.n();
    if n > IMPLEMENTS_MAX_N {
        return Err(OracleError::TooLarge { n, max: IMPLEMENTS_MAX_N });
    }
    if r > IMPLEMENTS_MAX_BAGS {
        return Err(OracleError::TooLarge { n: r, max: IMPLEMENTS_MAX_BAGS });
    }
    let adj = adjacency32(g);

    let mut all_path_shaped = true;
    for edges in labeled_trees(r) {
        let mut degree = vec![0; r];
        for &(a, b) in &edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        if degree.iter().all(|&d| d <= 2) {
            continue;
        }
        if assigner(g, &adj, capacity, r, &edges).run(0, &mut |_| true)? {
            all_path_shaped = false;
            break;
        }
    }

    let mut min_size = None;
    let mut prints: BTreeSet<Vec<usize>> = BTreeSet::new();
    for size in 1..=r {
        let path: Vec<(usize, usize)> = (1..size).map(|i| (i - 1, i)).collect();
        assigner(g, &adj, capacity, size, &path).run(0, &mut |load| {
            prints.insert(load.to_vec());
            false
        })?;
        if !prints.is_empty() {
            min_size = Some(size);
            break;
        }
    }
    let all: Vec<Fingerprint> = prints.into_iter().map(Fingerprint).collect();
    let minimal_fingerprints: Vec<Fingerprint> = all
        .iter()
        .filter(|f| !all.iter().any(|o| o != *f && o.dominated_by(f)))
        .cloned()
        .collect();
    let implements = all_path_shaped
        && min_size == Some(r)
        && !minimal_fingerprints.is_empty()
        && minimal_fingerprints.iter().all(|f| f == w || *f == w.reversed());
    Ok(ImplementsReport {
        all_path_shaped,
        min_size,
        minimal_fingerprints,
        implements,
    })
}

/// Whether the triples contain a perfect matching: `n` triples covering
/// every element of every side exactly once.
pub fn three_dm_feasible(t: &TripleSystem) -> bool {
    fn go(t: &TripleSystem, p: usize, used_q: u64, used_r: u64) -> bool {
        if p == t.n {
            return true;
        }
        t.triples.iter().any(|&(a, q, r)| {
            a == p && used_q >> q & 1 == 0 && used_r >> r & 1 == 0 && go(t, p + 1, used_q | 1 << q, used_r | 1 << r)
        })
    }
    t.n <= 64 && go(t, 0, 0, 0)
}

/// Whether the strings split into `n` groups `(a, b, c)`, one string from
/// each side per group and every string used once, with every group
/// summing to at most 1 in each coordinate.
pub fn s3g_feasible(s: &S3GInstance) -> bool {
    let n = s.n();
    if n > 64 {
        return false;
    }
    let words = |x: &crate::gadgets::BitString| {
        let mut out = vec![0u64; x.len().div_ceil(64)];
        for (i, &b) in x.0.iter().enumerate() {
            if b {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    };
    let (a, b, c): (Vec<_>, Vec<_>, Vec<_>) =
        (s.a.iter().map(words).collect(), s.b.iter().map(words).collect(), s.c.iter().map(words).collect());
    let disjoint = |x: &[u64], y: &[u64]| x.iter().zip(y).all(|(p, q)| p & q == 0);
    let fits = |i: usize, j: usize, k: usize| disjoint(&a[i], &b[j]) && disjoint(&a[i], &c[k]) && disjoint(&b[j], &c[k]);

    fn go(
        i: usize,
        used_b: u64,
        used_c: u64,
        n: usize,
        fits: &dyn Fn(usize, usize, usize) -> bool,
        dead: &mut HashSet<(u64, u64)>,
    ) -> bool {
        if i == n {
            return true;
        }
        if dead.contains(&(used_b, used_c)) {
            return false;
        }
        for j in (0..n).filter(|j| used_b >> j & 1 == 0) {
            for k in (0..n).filter(|k| used_c >> k & 1 == 0) {
                if fits(i, j, k) && go(i + 1, used_b | 1 << j, used_c | 1 << k, n, fits, dead) {
                    return true;
                }
            }
        }
        dead.insert((used_b, used_c));
        false
    }
    go(0, 0, 0, n, &fits, &mut HashSet::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{clique_chain, spider, BitString, ImplementSpec};

    #[test]
    fn subset_dp_small() {
        assert_eq!(oracle_mspd_subsetdp(&Graph::path(3), 1).unwrap(), Size::Bags(2));
        assert_eq!(oracle_mspd_subsetdp(&Graph::complete(3), 1).unwrap(), Size::Infeasible);
        assert_eq!(oracle_mspd_subsetdp(&Graph::star(3), 1).unwrap(), Size::Bags(3));
        assert_eq!(oracle_mspd_subsetdp(&Graph::empty(0), 0).unwrap(), Size::Bags(1));
        assert_eq!(oracle_mspd_subsetdp(&Graph::empty(3), 0).unwrap(), Size::Bags(3));
        assert_eq!(oracle_mspd_subsetdp(&spider(3, 2), 1).unwrap(), Size::Infeasible);
        assert_eq!(oracle_mspd_subsetdp(&Graph::cycle(5), 2).unwrap(), Size::Bags(3));
        assert!(oracle_mspd_subsetdp(&Graph::empty(21), 1).is_err());
    }

    #[test]
    fn plain_small() {
        assert_eq!(oracle_mstd_plain(&Graph::complete(4), 3).unwrap(), Size::Bags(1));
        assert_eq!(oracle_mstd_plain(&Graph::star(3), 1).unwrap(), Size::Bags(3));
        assert_eq!(oracle_mstd_plain(&spider(3, 2), 1).unwrap(), Size::Bags(6));
        assert_eq!(oracle_mstd_plain(&Graph::complete(3), 1).unwrap(), Size::Infeasible);
        assert!(oracle_mstd_plain_report(&spider(6, 3), 1, 10).is_err());
    }

    #[test]
    fn prufer_counts() {
        for r in 1..6 {
            assert_eq!(labeled_trees(r).len(), r.pow(r.saturating_sub(2) as u32));
        }
        // Path 0-1-2: six connected subsets, {0,2} excluded.
        assert_eq!(connected_subsets(3, &[(0, 1), (1, 2)]).len(), 6);
    }

    #[test]
    fn chain_implements() {
        let chain = clique_chain(&ImplementSpec::new(6, vec![5, 5]).unwrap());
        let rep = oracle_implements_check(&chain.graph, 6, 2, &Fingerprint(vec![5, 5])).unwrap();
        assert!(rep.all_path_shaped);
        assert_eq!(rep.minimal_fingerprints, [Fingerprint(vec![5, 5])]);
        assert!(rep.implements);
        let wrong = oracle_implements_check(&chain.graph, 6, 2, &Fingerprint(vec![5, 6])).unwrap();
        assert!(!wrong.implements);
    }

    #[test]
    fn triangle_implements_single_bag() {
        let rep = oracle_implements_check(&Graph::complete(3), 3, 1, &Fingerprint(vec![3])).unwrap();
        assert!(rep.implements);
        assert_eq!(rep.minimal_fingerprints, [Fingerprint(vec![3])]);
    }

    #[test]
    fn star_is_not_a_path_gadget() {
        // Three bags around the center of a star: the tree can be a star.
        let g = Graph::star(3);
        let rep = oracle_implements_check(&g, 2, 4, &Fingerprint(vec![2, 2, 2, 2])).unwrap();
        assert!(!rep.all_path_shaped);
        assert!(!rep.implements);
    }

    #[test]
    fn brute_force_matchings() {
        let yes = TripleSystem::new(2, vec![(0, 0, 0), (1, 1, 1)]).unwrap();
        let no = TripleSystem::new(2, vec![(0, 0, 0), (1, 0, 1)]).unwrap();
        assert!(three_dm_feasible(&yes));
        assert!(!three_dm_feasible(&no));
        let s = |x: &str| x.parse::<BitString>().unwrap();
        let inst = S3GInstance::new(vec![s("10"), s("01")], vec![s("01"), s("00")], vec![s("00"), s("10")]).unwrap();
        assert!(s3g_feasible(&inst));
        let inst = S3GInstance::new(vec![s("10"), s("10")], vec![s("01"), s("00")], vec![s("00"), s("10")]).unwrap();
        assert!(!s3g_feasible(&inst));
    }
}
