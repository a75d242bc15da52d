use fewbags_core::decomp::Fingerprint;
use fewbags_core::gadgets::{clique_chain, nb_prime, s3g_from_3dm, ImplementSpec, TripleSystem};
use fewbags_core::oracle::{oracle_implements_check, s3g_feasible, three_dm_feasible};
use fewbags_core::VertexSet;
use proptest::prelude::*;

/// All maximal cliques of `g`.
fn maximal_cliques(g: &fewbags_core::Graph) -> Vec<VertexSet> {
    // Bron-Kerbosch without pivoting; the chains are small.
    fn bk(g: &fewbags_core::Graph, r: VertexSet, p: VertexSet, x: VertexSet, out: &mut Vec<VertexSet>) {
        if p.is_empty() && x.is_empty() {
            out.push(r);
            return;
        }
        let (mut p, mut x) = (p, x);
        for v in p.clone().iter() {
            let mut r2 = r.clone();
            r2.insert(v);
            bk(g, r2, p.intersection(g.neighbors(v)), x.intersection(g.neighbors(v)), out);
            p.remove(v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    bk(g, VertexSet::new(), g.vertices(), VertexSet::new(), &mut out);
    out
}

fn arb_spec() -> impl Strategy<Value = ImplementSpec> {
    (3usize..12).prop_flat_map(|k| {
        let lo = 2 * k / 3 + 1;
        proptest::collection::vec(lo..=k, 1..5).prop_map(move |w| ImplementSpec::new(k, w).unwrap())
    })
}

proptest! {
    #[test]
    fn chain_cliques_are_the_labelled_ones(spec in arb_spec()) {
        let chain = clique_chain(&spec);
        let mut found = maximal_cliques(&chain.graph);
        found.sort_by_key(|c| c.min());
        let mut expected = chain.labeling.maximal.clone();
        expected.sort_by_key(|c| c.min());
        prop_assert_eq!(&found, &expected);
        for (m, &w) in chain.labeling.maximal.iter().zip(&spec.w) {
            prop_assert_eq!(m.len(), w);
        }
        for pair in chain.labeling.maximal.windows(2) {
            prop_assert_eq!(pair[0].intersection(&pair[1]).len(), spec.capacity / 3);
        }
    }

    #[test]
    fn nb_prime_is_balanced_and_injective(n in 1usize..70) {
        let all: Vec<_> = (0..n).map(|i| nb_prime(i, n).unwrap()).collect();
        for (i, s) in all.iter().enumerate() {
            prop_assert_eq!(2 * s.ones(), s.len());
            prop_assert!(all[..i].iter().all(|t| t != s));
        }
    }
}

#[test]
fn tiny_chains_implement_their_vectors() {
    for (k, w) in [(6, vec![5, 5]), (6, vec![6]), (7, vec![5, 6, 5]), (9, vec![7, 9])] {
        let chain = clique_chain(&ImplementSpec::new(k, w.clone()).unwrap());
        let rep = oracle_implements_check(&chain.graph, k, w.len(), &Fingerprint(w.clone())).unwrap();
        assert!(rep.implements, "K={k} w={w:?}: {rep:?}");
    }
}

#[test]
fn reduction_preserves_feasibility_on_small_systems() {
    let all: Vec<(usize, usize, usize)> = (0..2).flat_map(|p| (0..2).flat_map(move |q| (0..2).map(move |r| (p, q, r)))).collect();
    for mask in 0u32..1 << all.len() {
        let triples: Vec<_> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        let Ok(t) = TripleSystem::new(2, triples) else { continue };
        let Ok(s) = s3g_from_3dm(&t) else { continue };
        assert_eq!(three_dm_feasible(&t), s3g_feasible(&s), "{t:?}");
    }
}
