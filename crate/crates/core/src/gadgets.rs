//! Instance generators: clique-chain vector gadgets, the 3-dimensional
//! matching to String 3-Groups string construction, the String 3-Groups to
//! minimum-size path decomposition instance with its planted witness, and
//! benchmark families.
//!
//! The vector-gadget layer speaks in bag-size capacity (maximum bag size),
//! not width.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::decomp::PathDecomposition;
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("empty vector")]
    EmptyVector,
    #[error("entry {index} = {value} violates 2*{capacity}/3 < w <= {capacity}")]
    EntryBound { index: usize, value: usize, capacity: usize },
    #[error("capacity must be at least 3, got {0}")]
    Capacity(usize),
    #[error("index {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("element {0} lies in more than three triples")]
    TooManyTriples(usize),
    #[error("third-coordinate element {0} lies in no triple")]
    UncoveredElement(usize),
    #[error("sides have {a}, {b} and {c} strings; they must agree")]
    CountMismatch { a: usize, b: usize, c: usize },
    #[error("strings have different lengths")]
    LengthMismatch,
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("group {0} has a coordinate summing to more than 1")]
    Overfull(usize),
    #[error("invalid parameter: {0}")]
    Param(&'static str),
}

/// A binary string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString(vec![false; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        BitString(self.0.iter().map(|b| !b).collect())
    }

    pub fn reversed(&self) -> Self {
        BitString(self.0.iter().rev().copied().collect())
    }

    pub fn concat(parts: &[&BitString]) -> Self {
        BitString(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    pub fn padded(&self, len: usize) -> Self {
        let mut bits = self.0.clone();
        bits.resize(len.max(bits.len()), false);
        BitString(bits)
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }
}

impl FromStr for BitString {
    type Err = GadgetError;

    fn from_str(s: &str) -> Result<Self, GadgetError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(GadgetError::Param("bit strings use only 0 and 1")),
            })
            .collect::<Result<Vec<bool>, _>>()
            .map(BitString)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0
            .iter()
            .try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

fn bits_of(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}

/// Number of bits used for element indices among `n` elements.
fn index_bits(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1) as usize
}

/// Binary representation of `i` on `ceil(log2 n)` bits followed by its
/// complement. Every output has as many ones as zeros.
pub fn nb_prime(i: usize, n: usize) -> Result<BitString, GadgetError> {
    if i >= n {
        return Err(GadgetError::IndexOutOfRange { index: i, n });
    }
    let w = index_bits(n);
    let nb = BitString((0..w).rev().map(|b| (i >> b) & 1 == 1).collect());
    Ok(BitString::concat(&[&nb, &nb.complement()]))
}

/// `x` followed by its reversal.
pub fn palindromize(x: &BitString) -> BitString {
    BitString::concat(&[x, &x.reversed()])
}

/// Triples over three sides `P`, `Q`, `R` of `n` elements each, indexed
/// `0..n`, with every element in at most three triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSystem {
    pub n: usize,
    pub triples: Vec<(usize, usize, usize)>,
}

impl TripleSystem {
    pub fn new(n: usize, triples: Vec<(usize, usize, usize)>) -> Result<Self, GadgetError> {
        let mut load = vec![[0usize; 3]; n];
        for &(p, q, r) in &triples {
            for (side, e) in [p, q, r].into_iter().enumerate() {
                if e >= n {
                    return Err(GadgetError::IndexOutOfRange { index: e, n });
                }
                load[e][side] += 1;
                if load[e][side] > 3 {
                    return Err(GadgetError::TooManyTriples(e));
                }
            }
        }
        Ok(TripleSystem { n, triples })
    }

    /// Number of triples containing each third-coordinate element.
    pub fn third_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for &(_, _, r) in &self.triples {
            c[r] += 1;
        }
        c
    }
}

/// Three equally sized lists of bit strings of a common length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S3GInstance {
    pub a: Vec<BitString>,
    pub b: Vec<BitString>,
    pub c: Vec<BitString>,
}

impl S3GInstance {
    pub fn new(a: Vec<BitString>, b: Vec<BitString>, c: Vec<BitString>) -> Result<Self, GadgetError> {
        if a.len() != b.len() || a.len() != c.len() {
            return Err(GadgetError::CountMismatch { a: a.len(), b: b.len(), c: c.len() });
        }
        let s = S3GInstance { a, b, c };
        let len = s.len();
        if s.strings().any(|x| x.len() != len) {
            return Err(GadgetError::LengthMismatch);
        }
        Ok(s)
    }

    /// Strings per side.
    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Common string length (0 for an empty instance).
    pub fn len(&self) -> usize {
        self.a.first().map_or(0, BitString::len)
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    fn strings(&self) -> impl Iterator<Item = &BitString> {
        self.a.iter().chain(&self.b).chain(&self.c)
    }

    /// Zero-pads every string on the right to `len` (at least the current
    /// length) and replaces it by its palindromization.
    pub fn palindromized(&self, len: usize) -> S3GInstance {
        let len = len.max(self.len());
        let f = |xs: &[BitString]| xs.iter().map(|x| palindromize(&x.padded(len))).collect();
        S3GInstance {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
        }
    }

    /// Whether `a[i] + b[sigma[i]] + c[tau[i]]` is at most 1 in every
    /// coordinate, for all `i`.
    pub fn check_grouping(&self, sigma: &[usize], tau: &[usize]) -> Result<(), GadgetError> {
        let n = self.n();
        for perm in [sigma, tau] {
            let mut seen = vec![false; n];
            if perm.len() != n || perm.iter().any(|&j| j >= n || core::mem::replace(&mut seen[j], true)) {
                return Err(GadgetError::NotAPermutation(n));
            }
        }
        for i in 0..n {
            let (a, b, c) = (&self.a[i], &self.b[sigma[i]], &self.c[tau[i]]);
            if (0..self.len()).any(|j| a.0[j] as u8 + b.0[j] as u8 + c.0[j] as u8 > 1) {
                return Err(GadgetError::Overfull(i));
            }
        }
        Ok(())
    }
}

/// String construction turning a triple system into a String 3-Groups
/// instance with `|T|` strings per side, each of length `3 * alpha + 2`
/// where `alpha = 2 * ceil(log2 n)`.
///
/// Fails when some third-coordinate element lies in no triple: side sizes
/// could not match, and the system has no perfect matching anyway.
pub fn s3g_from_3dm(t: &TripleSystem) -> Result<S3GInstance, GadgetError> {
    let t = TripleSystem::new(t.n, t.triples.clone())?;
    let n = t.n;
    let counts = t.third_counts();
    if let Some(r) = counts.iter().position(|&c| c == 0) {
        return Err(GadgetError::UncoveredElement(r));
    }
    let nb = |i| nb_prime(i, n).expect("index checked");
    let zero = BitString::zeros(2 * index_bits(n));
    let (t10, t01, t00) = (bits_of("10"), bits_of("01"), bits_of("00"));

    let c_side = t
        .triples
        .iter()
        .map(|&(p, q, r)| {
            BitString::concat(&[&nb(p).complement(), &nb(q).complement(), &nb(r).complement(), &t00])
        })
        .collect();
    let mut a_side: Vec<BitString> = (0..n).map(|p| BitString::concat(&[&nb(p), &zero, &zero, &t10])).collect();
    let mut b_side: Vec<BitString> = (0..n).map(|q| BitString::concat(&[&zero, &nb(q), &zero, &t01])).collect();
    let cb = BitString::concat(&[&zero, &zero, &zero, &t10]);
    for (r, &c) in counts.iter().enumerate() {
        let ca = BitString::concat(&[&zero, &zero, &nb(r), &t01]);
        for _ in 1..c {
            a_side.push(ca.clone());
            b_side.push(cb.clone());
        }
    }
    S3GInstance::new(a_side, b_side, c_side)
}

/// Bag-size capacity and target vector of a clique-chain gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplementSpec {
    pub capacity: usize,
    pub w: Vec<usize>,
}

impl ImplementSpec {
    /// Checks `3 * w_i > 2 * capacity` and `w_i <= capacity` for every entry.
    pub fn new(capacity: usize, w: Vec<usize>) -> Result<Self, GadgetError> {
        if capacity < 3 {
            return Err(GadgetError::Capacity(capacity));
        }
        if w.is_empty() {
            return Err(GadgetError::EmptyVector);
        }
        if let Some((index, &value)) = w.iter().enumerate().find(|(_, &x)| 3 * x <= 2 * capacity || x > capacity) {
            return Err(GadgetError::EntryBound { index, value, capacity });
        }
        Ok(ImplementSpec { capacity, w })
    }

    /// Size `floor(capacity / 3)` of the base cliques.
    pub fn base(&self) -> usize {
        self.capacity / 3
    }
}

/// Named vertex groups of a clique chain. `base[i]` is `C_i` for
/// `i = 0..=r`; `pendant[i]` and `maximal[i]` are `C^p_{i+1}` and
/// `M_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLabeling {
    pub base: Vec<Vec<usize>>,
    pub pendant: Vec<Vec<usize>>,
    pub maximal: Vec<VertexSet>,
}

impl ChainLabeling {
    fn shifted(&self, by: usize) -> ChainLabeling {
        let shift = |vs: &Vec<usize>| vs.iter().map(|v| v + by).collect::<Vec<_>>();
        ChainLabeling {
            base: self.base.iter().map(shift).collect(),
            pendant: self.pendant.iter().map(shift).collect(),
            maximal: self.maximal.iter().map(|m| m.iter().map(|v| v + by).collect()).collect(),
        }
    }

    /// The path decomposition whose bags are the maximal cliques in order.
    pub fn path_decomposition(&self) -> PathDecomposition {
        PathDecomposition::new(self.maximal.clone())
    }
}

#[derive(Debug, Clone)]
pub struct CliqueChain {
    pub graph: Graph,
    pub labeling: ChainLabeling,
}

fn clique_edges(vs: &[usize], edges: &mut Vec<(usize, usize)>) {
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            edges.push((u, v));
        }
    }
}

fn biclique_edges(xs: &[usize], ys: &[usize], edges: &mut Vec<(usize, usize)>) {
    for &u in xs {
        for &v in ys {
            edges.push((u, v));
        }
    }
}

/// Chain of cliques `C_0, ..., C_r` of size `floor(K/3)`, consecutive ones
/// fully joined, plus a pendant clique of size `w_i - 2 floor(K/3)` joined
/// to `C_{i-1} ∪ C_i`. The maximal cliques are `M_i = C_{i-1} ∪ C_i ∪ C^p_i`
/// with `|M_i| = w_i`. Vertices are numbered `C_0, C^p_1, C_1, C^p_2, ...`.
pub fn clique_chain(spec: &ImplementSpec) -> CliqueChain {
    let b = spec.base();
    let mut next = 0;
    let mut take = |k: usize| {
        let vs: Vec<usize> = (next..next + k).collect();
        next += k;
        vs
    };
    let mut base = vec![take(b)];
    let mut pendant = Vec::new();
    for &w in &spec.w {
        pendant.push(take(w - 2 * b));
        base.push(take(b));
    }
    let mut edges = Vec::new();
    clique_edges(&base[0], &mut edges);
    let mut maximal = Vec::new();
    for i in 1..base.len() {
        let (prev, cur, pend) = (&base[i - 1], &base[i], &pendant[i - 1]);
        clique_edges(cur, &mut edges);
        clique_edges(pend, &mut edges);
        biclique_edges(prev, cur, &mut edges);
        biclique_edges(pend, prev, &mut edges);
        biclique_edges(pend, cur, &mut edges);
        maximal.push(prev.iter().chain(cur).chain(pend).copied().collect());
    }
    let graph = Graph::from_edges(next, edges).expect("chain edges are in range");
    CliqueChain {
        graph,
        labeling: ChainLabeling { base, pendant, maximal },
    }
}

/// Capacity-53 instance built from a String 3-Groups instance whose
/// strings share length `ell`.
#[derive(Debug, Clone)]
pub struct HardInstance {
    pub graph: Graph,
    pub capacity: usize,
    pub ell: usize,
    /// Target number of bags, `n * (ell + 1)`.
    pub size: usize,
    pub source: S3GInstance,
    pub a_chain: ChainLabeling,
    pub b_chains: Vec<ChainLabeling>,
    pub c_chains: Vec<ChainLabeling>,
}

pub const HARD_CAPACITY: usize = 53;
/// Largest bag of the planted witness.
pub const WITNESS_CAPACITY: usize = 40;

fn shifted_vector(x: &BitString, shift: usize) -> impl Iterator<Item = usize> + '_ {
    x.0.iter().map(move |&b| b as usize + shift)
}

/// Disjoint union of a capacity-40 chain over
/// `a^1 + 27 || 40 || a^2 + 27 || 40 || ... || a^n + 27 || 40`, a capacity-13
/// chain over `b^i + 9` for every `b^i`, and a capacity-4 chain over
/// `c^i + 3` for every `c^i`.
///
/// The strings are used as given; callers palindromize first.
pub fn mspd_hard_instance(s: &S3GInstance) -> Result<HardInstance, GadgetError> {
    let s = S3GInstance::new(s.a.clone(), s.b.clone(), s.c.clone())?;
    let (n, ell) = (s.n(), s.len());
    if n == 0 || ell == 0 {
        return Err(GadgetError::Param("instance needs at least one non-empty string per side"));
    }
    let mut a_vec = Vec::with_capacity(n * (ell + 1));
    for a in &s.a {
        a_vec.extend(shifted_vector(a, 27));
        a_vec.push(WITNESS_CAPACITY);
    }
    let mut specs = vec![ImplementSpec::new(40, a_vec)?];
    for b in &s.b {
        specs.push(ImplementSpec::new(13, shifted_vector(b, 9).collect())?);
    }
    for c in &s.c {
        specs.push(ImplementSpec::new(4, shifted_vector(c, 3).collect())?);
    }
    let mut graph = Graph::empty(0);
    let mut labels = Vec::new();
    for spec in &specs {
        let chain = clique_chain(spec);
        labels.push(chain.labeling.shifted(graph.n()));
        graph = graph.disjoint_union(&chain.graph);
    }
    let c_chains = labels.split_off(1 + n);
    let b_chains = labels.split_off(1);
    let a_chain = labels.pop().expect("one A chain");
    Ok(HardInstance {
        graph,
        capacity: HARD_CAPACITY,
        ell,
        size: n * (ell + 1),
        source: s,
        a_chain,
        b_chains,
        c_chains,
    })
}

/// The path decomposition of a hard instance induced by a grouping: group
/// `g` uses `a^g`, `b^{sigma[g]}` and `c^{tau[g]}`. Bag `g(ell+1) + i` is
/// the union of the `i`-th maximal cliques of the three chains (size
/// `39 + a + b + c`), and every `(ell+1)`-th bag is a separator clique of
/// the A chain alone (size 40).
pub fn planted_witness(h: &HardInstance, sigma: &[usize], tau: &[usize]) -> Result<PathDecomposition, GadgetError> {
    h.source.check_grouping(sigma, tau)?;
    let mut bags = Vec::with_capacity(h.size);
    for g in 0..h.source.n() {
        for i in 0..h.ell {
            let mut bag = h.a_chain.maximal[g * (h.ell + 1) + i].clone();
            bag.union_with(&h.b_chains[sigma[g]].maximal[i]);
            bag.union_with(&h.c_chains[tau[g]].maximal[i]);
            bags.push(bag);
        }
        bags.push(h.a_chain.maximal[g * (h.ell + 1) + h.ell].clone());
    }
    Ok(PathDecomposition::new(bags))
}

/// A random graph of treewidth at most `k`: a random `k`-tree on `n`
/// vertices (each new vertex joined to a uniformly chosen `k`-clique),
/// then each edge kept with probability `keep`.
pub fn random_partial_ktree(n: usize, k: usize, keep: f64, seed: u64) -> Result<Graph, GadgetError> {
    if n < k + 1 {
        return Err(GadgetError::Param("need n >= k + 1"));
    }
    if !(0.0..=1.0).contains(&keep) {
        return Err(GadgetError::Param("retention probability must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let seed_clique: Vec<usize> = (0..=k).collect();
    clique_edges(&seed_clique, &mut edges);
    let mut cliques: Vec<Vec<usize>> = (0..=k)
        .map(|skip| seed_clique.iter().copied().filter(|&v| v != skip).collect())
        .collect();
    for v in k + 1..n {
        let base = cliques[rng.gen_range(0..cliques.len())].clone();
        for &u in &base {
            edges.push((u, v));
        }
        for skip in 0..base.len() {
            let mut c = base.clone();
            c[skip] = v;
            c.sort_unstable();
            cliques.push(c);
        }
    }
    edges.retain(|_| rng.gen_bool(keep));
    Ok(Graph::from_edges(n, edges).expect("k-tree edges are in range"))
}

/// `m` paths of `t` vertices each, attached to a center vertex 0. Leg `j`
/// is `1 + j*t, ..., (j+1)*t`, starting next to the center.
pub fn spider(m: usize, t: usize) -> Graph {
    let mut edges = Vec::new();
    for j in 0..m {
        let mut prev = 0;
        for i in 0..t {
            let v = 1 + j * t + i;
            edges.push((prev, v));
            prev = v;
        }
    }
    Graph::from_edges(1 + m * t, edges).expect("spider edges are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{fingerprint, validate_path};
    use alloc::string::ToString;

    #[test]
    fn nb_prime_values() {
        assert_eq!(nb_prime(2, 4).unwrap().to_string(), "1001");
        assert_eq!(nb_prime(0, 4).unwrap().to_string(), "0011");
        assert_eq!(nb_prime(0, 2).unwrap().to_string(), "01");
        assert_eq!(nb_prime(0, 1).unwrap().to_string(), "01");
        assert_eq!(nb_prime(4, 5).unwrap().to_string(), "100011");
        assert!(nb_prime(4, 4).is_err());
        for n in 2..20 {
            let all: Vec<BitString> = (0..n).map(|i| nb_prime(i, n).unwrap()).collect();
            for (i, x) in all.iter().enumerate() {
                assert_eq!(x.ones() * 2, x.len());
                assert!(all[..i].iter().all(|y| y != x));
            }
        }
    }

    #[test]
    fn palindromes() {
        assert_eq!(palindromize(&bits_of("01")).to_string(), "0110");
        assert_eq!(palindromize(&bits_of("1")).to_string(), "11");
        assert_eq!(palindromize(&bits_of("")).to_string(), "");
        assert!(palindromize(&bits_of("0010111")).is_palindrome());
    }

    #[test]
    fn two_element_reduction() {
        let t = TripleSystem::new(2, vec![(0, 0, 0), (1, 1, 1)]).unwrap();
        let s = s3g_from_3dm(&t).unwrap();
        assert_eq!(s.c[0].to_string(), "10101000");
        assert_eq!(s.a[0].to_string(), "01000010");
        assert_eq!(s.b[0].to_string(), "00010001");
        assert_eq!(s.n(), 2);
        assert_eq!(s.len(), 8);
        s.check_grouping(&[0, 1], &[0, 1]).unwrap();
        assert!(s.check_grouping(&[0, 1], &[1, 0]).is_err());
    }

    #[test]
    fn padding_strings_for_repeated_thirds() {
        let t = TripleSystem::new(2, vec![(0, 0, 0), (1, 1, 0), (0, 1, 1)]).unwrap();
        let s = s3g_from_3dm(&t).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.a[2].to_string(), "00000101");
        assert_eq!(s.b[2].to_string(), "00000010");
        let uncovered = TripleSystem::new(2, vec![(0, 0, 0), (1, 1, 0)]).unwrap();
        assert_eq!(s3g_from_3dm(&uncovered), Err(GadgetError::UncoveredElement(1)));
    }

    #[test]
    fn triple_system_limits() {
        assert!(TripleSystem::new(2, vec![(0, 0, 2)]).is_err());
        let four = vec![(0, 0, 0), (0, 1, 1), (0, 0, 1), (0, 1, 0)];
        assert_eq!(TripleSystem::new(2, four), Err(GadgetError::TooManyTriples(0)));
    }

    #[test]
    fn chain_shape() {
        let chain = clique_chain(&ImplementSpec::new(6, vec![5, 5]).unwrap());
        assert_eq!(chain.graph.n(), 8);
        assert_eq!(chain.labeling.base.iter().map(Vec::len).collect::<Vec<_>>(), [2, 2, 2]);
        assert_eq!(chain.labeling.pendant.iter().map(Vec::len).collect::<Vec<_>>(), [1, 1]);
        let pd = chain.labeling.path_decomposition();
        assert_eq!(fingerprint(&pd).0, [5, 5]);
        validate_path(&chain.graph, &pd, 5, Some(2)).unwrap();
        let m = &chain.labeling.maximal;
        assert_eq!(m[0].intersection(&m[1]).len(), 2);

        let big = clique_chain(&ImplementSpec::new(40, vec![40]).unwrap());
        assert_eq!(big.labeling.base[0].len(), 13);
        assert_eq!(big.labeling.pendant[0].len(), 14);
        assert_eq!(big.labeling.maximal[0].len(), 40);
    }

    #[test]
    fn implement_spec_bounds() {
        assert!(matches!(ImplementSpec::new(6, vec![4, 5]), Err(GadgetError::EntryBound { index: 0, .. })));
        assert!(ImplementSpec::new(6, vec![7]).is_err());
        assert!(ImplementSpec::new(40, vec![27, 28]).is_ok());
        assert!(ImplementSpec::new(13, vec![9, 10]).is_ok());
        assert!(ImplementSpec::new(4, vec![3, 4]).is_ok());
        assert!(ImplementSpec::new(40, vec![26]).is_err());
        assert!(ImplementSpec::new(6, vec![]).is_err());
    }

    #[test]
    fn hard_instance_and_witness() {
        let zero = BitString::zeros(8);
        let s = S3GInstance::new(vec![zero.clone(); 2], vec![zero.clone(); 2], vec![zero; 2]).unwrap();
        let s = s.palindromized(0);
        let h = mspd_hard_instance(&s).unwrap();
        assert_eq!((h.ell, h.size, h.capacity), (16, 34, 53));
        assert_eq!(h.a_chain.maximal.len(), 34);
        assert_eq!(h.a_chain.maximal[33].len(), 40);
        for c in &h.c_chains {
            assert!(c.base.iter().all(|b| b.len() == 1));
            assert!(c.pendant.iter().all(|p| (1..=2).contains(&p.len())));
        }
        let pd = planted_witness(&h, &[0, 1], &[1, 0]).unwrap();
        assert_eq!(pd.len(), 34);
        assert_eq!(pd.max_bag_size(), 40);
        assert_eq!(pd.bags[0].len(), 39);
        validate_path(&h.graph, &pd, WITNESS_CAPACITY - 1, Some(h.size)).unwrap();
    }

    #[test]
    fn witness_rejects_bad_grouping() {
        let one = bits_of("10");
        let s = S3GInstance::new(vec![one.clone()], vec![one.clone()], vec![one]).unwrap();
        let h = mspd_hard_instance(&s).unwrap();
        assert_eq!(planted_witness(&h, &[0], &[0]).unwrap_err(), GadgetError::Overfull(0));
        assert!(planted_witness(&h, &[1], &[0]).is_err());
    }

    #[test]
    fn ktree_edges() {
        for k in 0..4 {
            let n = 12;
            let g = random_partial_ktree(n, k, 1.0, 7).unwrap();
            assert_eq!(g.edge_count(), k * n - k * (k + 1) / 2);
        }
        let a = random_partial_ktree(20, 3, 0.6, 42).unwrap();
        let b = random_partial_ktree(20, 3, 0.6, 42).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        assert!(random_partial_ktree(2, 3, 0.5, 0).is_err());
        assert!(random_partial_ktree(5, 1, 1.5, 0).is_err());
    }

    #[test]
    fn spider_shape() {
        let g = spider(3, 2);
        assert_eq!((g.n(), g.edge_count()), (7, 6));
        assert_eq!(g.degree(0), 3);
        assert_eq!(spider(10, 3).n(), 31);
    }
}
