#![allow(dead_code)]

use fewbags_core::Graph;
use proptest::prelude::*;

/// Graph on `n` vertices from a bit per unordered pair.
pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let edges = pairs.zip(bits).filter(|(_, &b)| b).map(|(e, _)| e);
    Graph::from_edges(n, edges).unwrap()
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

/// Every permutation of `0..n`, lexicographically.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Whether some bijection maps `g` onto `h` preserving adjacency and colors.
pub fn isomorphic(g: &Graph, gc: &[u32], h: &Graph, hc: &[u32], perms: &[Vec<usize>]) -> bool {
    g.n() == h.n()
        && g.edge_count() == h.edge_count()
        && perms.iter().any(|p| {
            (0..g.n()).all(|v| gc[v] == hc[p[v]]) && g.edges().all(|(u, v)| h.has_edge(p[u], p[v]))
        })
}
