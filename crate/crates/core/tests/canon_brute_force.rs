mod common;

use common::{graph_from_bits, isomorphic, permutations};
use fewbags_core::canon::{self, certificate, ColoredGraph, GoodPair};
use fewbags_core::{Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0u32..1 << pairs)
        .map(|mask| {
            let bits: Vec<bool> = (0..pairs).map(|i| mask >> i & 1 == 1).collect();
            graph_from_bits(n, &bits)
        })
        .collect()
}

fn colored(g: &Graph, colors: Vec<u32>) -> ColoredGraph {
    ColoredGraph { graph: g.clone(), colors }
}

#[test]
fn certificates_match_isomorphism_exhaustively_up_to_five() {
    for n in 0..=5 {
        let perms = permutations(n);
        let graphs = all_graphs(n);
        // Two-colorings with color 1 on a prefix-free choice: all masks.
        let colorings: Vec<Vec<u32>> = (0u32..1 << n)
            .step_by(if n == 5 { 3 } else { 1 })
            .map(|m| (0..n).map(|v| m >> v & 1).collect())
            .collect();
        let mut items = Vec::new();
        for g in &graphs {
            for c in &colorings {
                items.push((g, c, certificate(&colored(g, c.clone()))));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let checks = if n <= 3 { items.len() * items.len() } else { 20_000 };
        for t in 0..checks {
            let (i, j) = if n <= 3 {
                (t / items.len(), t % items.len())
            } else {
                (rng.gen_range(0..items.len()), rng.gen_range(0..items.len()))
            };
            let (g, gc, a) = &items[i];
            let (h, hc, b) = &items[j];
            assert_eq!(a == b, isomorphic(g, gc, h, hc, &perms), "{g:?} {gc:?} vs {h:?} {hc:?}");
        }
    }
}

#[test]
fn certificates_match_isomorphism_on_relabelings_up_to_seven() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in 6..=7 {
        let perms = permutations(n);
        for _ in 0..60 {
            let pairs = n * (n - 1) / 2;
            let bits: Vec<bool> = (0..pairs).map(|_| rng.gen_bool(0.4)).collect();
            let g = graph_from_bits(n, &bits);
            let gc: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            // A random relabeling must give the same certificate.
            let p = &perms[rng.gen_range(0..perms.len())];
            let h = Graph::from_edges(n, g.edges().map(|(u, v)| (p[u], p[v]))).unwrap();
            let mut hc = vec![0; n];
            for v in 0..n {
                hc[p[v]] = gc[v];
            }
            assert_eq!(certificate(&colored(&g, gc.clone())), certificate(&colored(&h, hc.clone())));
            // A one-edge change is compared against brute force.
            let mut bits2 = bits.clone();
            let flip = rng.gen_range(0..pairs);
            bits2[flip] = !bits2[flip];
            let f = graph_from_bits(n, &bits2);
            let same = certificate(&colored(&g, gc.clone())) == certificate(&colored(&f, gc.clone()));
            assert_eq!(same, isomorphic(&g, &gc, &f, &gc, &perms));
        }
    }
}

#[test]
fn key_equality_implies_matching_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.gen_range(2..8);
        let bits: Vec<bool> = (0..n * (n - 1) / 2).map(|_| rng.gen_bool(0.45)).collect();
        let g = graph_from_bits(n, &bits);
        let x: VertexSet = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        let comps = g.components_excluding(&x);
        let pick = |rng: &mut ChaCha8Rng| -> VertexSet {
            comps.iter().filter(|_| rng.gen_bool(0.5)).flat_map(|c| c.iter()).collect()
        };
        let (p, q) = (GoodPair::new(x.clone(), pick(&mut rng)), GoodPair::new(x.clone(), pick(&mut rng)));
        let (kp, kq) = (canon::canon_key(&g, &p).unwrap(), canon::canon_key(&g, &q).unwrap());
        if kp == kq {
            assert_eq!(p.w.len(), q.w.len());
            let degrees = |s: &VertexSet| {
                let all = s.union(&x);
                let mut d: Vec<usize> = all.iter().map(|v| g.neighbors(v).intersection(&all).len()).collect();
                d.sort();
                d
            };
            assert_eq!(degrees(&p.w), degrees(&q.w));
        }
        let classes = canon::component_classes(&g, &p).unwrap();
        let total: usize = classes.iter().map(|c| c.count()).sum();
        assert_eq!(total, g.components_within(&p.w).len());
        for class in &classes {
            let rep = canon::canon_key(&g, &GoodPair::new(x.clone(), class.members[0].clone())).unwrap();
            for m in &class.members {
                assert_eq!(canon::canon_key(&g, &GoodPair::new(x.clone(), m.clone())).unwrap(), rep);
            }
        }
    }
}
