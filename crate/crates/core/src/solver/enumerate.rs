//! Candidate predecessor bags and branch splits of a good pair.

use alloc::vec::Vec;

use crate::canon::{self, ComponentClass, GoodPair};
use crate::graph::{Graph, VertexSet};

/// Index combinations of `0..pool` with sizes `min..=max`, by increasing
/// size and lexicographically within a size.
#[derive(Debug, Clone)]
pub(crate) struct Combinations {
    pool: usize,
    size: usize,
    max: usize,
    idx: Vec<usize>,
    fresh: bool,
}

impl Combinations {
    pub(crate) fn new(pool: usize, min: usize, max: usize) -> Self {
        let max = max.min(pool);
        Combinations {
            pool,
            size: min,
            max,
            idx: (0..min).collect(),
            fresh: true,
        }
    }

    fn advance(&mut self) -> bool {
        let k = self.size;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.pool - (k - i) {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.size > self.max {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(self.idx.clone());
        }
        if self.advance() {
            return Some(self.idx.clone());
        }
        self.size += 1;
        if self.size > self.max {
            return None;
        }
        self.idx = (0..self.size).collect();
        Some(self.idx.clone())
    }
}

/// Lazily enumerates every `Y ⊆ X ∪ W` with `Y ≠ X`, `|Y| ≤ width + 1` and
/// no edge between `X \ Y` and `W`, by increasing `|Y|` then
/// lexicographically.
///
/// Vertices of `X` with a neighbour in `W` must stay in `Y`; every other
/// vertex of `X ∪ W` is optional, so the stream walks combinations of the
/// optional vertices.
pub fn enumerate_candidate_bags<'a>(
    g: &Graph,
    p: &'a GoodPair,
    width: usize,
) -> impl Iterator<Item = VertexSet> + 'a {
    let required: VertexSet = p.x.iter().filter(|&v| g.neighbors(v).intersects(&p.w)).collect();
    let optional: Vec<usize> = p.x.union(&p.w).difference(&required).to_vec();
    let room = (width + 1).saturating_sub(required.len());
    let feasible = required.len() <= width + 1;
    let combos = Combinations::new(optional.len(), 0, if feasible { room } else { 0 });
    combos
        .take_while(move |_| feasible)
        .map(move |c| {
            let mut y = required.clone();
            y.extend(c.iter().map(|&i| optional[i]));
            y
        })
        .filter(move |y| *y != p.x)
}

/// Points of the box `[0, c_1] × ... × [0, c_l]` other than `0` and `c`,
/// in lexicographic order.
pub(crate) fn class_vectors(counts: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let mut y: Vec<usize> = alloc::vec![0; counts.len()];
    let mut done = counts.is_empty();
    core::iter::from_fn(move || loop {
        if done {
            return None;
        }
        // Increment like an odometer, last coordinate fastest.
        let mut i = counts.len();
        loop {
            if i == 0 {
                done = true;
                return None;
            }
            i -= 1;
            if y[i] < counts[i] {
                y[i] += 1;
                y[i + 1..].fill(0);
                break;
            }
        }
        if y.as_slice() != counts {
            return Some(y.clone());
        }
    })
}

/// `W_1` for the class vector `y`: the first `y_i` members of each class.
pub(crate) fn split_for(classes: &[ComponentClass], y: &[usize]) -> VertexSet {
    let mut w1 = VertexSet::new();
    for (class, &take) in classes.iter().zip(y) {
        for comp in &class.members[..take] {
            w1.union_with(comp);
        }
    }
    w1
}

/// All splits `(W_1, W \ W_1)` considered by the branch step: one per class
/// vector strictly between `0` and the class counts. Empty when `G[W]` has
/// fewer than two components.
pub fn enumerate_branch_splits(g: &Graph, p: &GoodPair) -> Vec<(VertexSet, VertexSet)> {
    let classes = canon::component_classes_unchecked(g, p);
    let counts: Vec<usize> = classes.iter().map(ComponentClass::count).collect();
    class_vectors(&counts)
        .map(|y| {
            let w1 = split_for(&classes, &y);
            let w2 = p.w.difference(&w1);
            (w1, w2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn combinations_in_order() {
        let all: Vec<Vec<usize>> = Combinations::new(3, 0, 2).collect();
        assert_eq!(
            all,
            [vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(Combinations::new(2, 0, 5).count(), 4);
        assert_eq!(Combinations::new(0, 0, 3).count(), 1);
    }

    #[test]
    fn p3_candidates() {
        let g = Graph::path(3);
        let p = GoodPair::new(set(&[1, 2]), set(&[0]));
        let ys: Vec<VertexSet> = enumerate_candidate_bags(&g, &p, 1).collect();
        assert_eq!(ys, [set(&[1]), set(&[0, 1])]);
    }

    #[test]
    fn k2_candidates_without_remainder() {
        let g = Graph::complete(2);
        let p = GoodPair::new(set(&[0, 1]), VertexSet::new());
        let ys: Vec<VertexSet> = enumerate_candidate_bags(&g, &p, 1).collect();
        assert_eq!(ys, [set(&[]), set(&[0]), set(&[1])]);
    }

    #[test]
    fn candidates_obey_the_separator_condition() {
        let g = Graph::cycle(6);
        let p = GoodPair::new(set(&[0, 3]), set(&[1, 2]));
        for y in enumerate_candidate_bags(&g, &p, 2) {
            assert!(y.len() <= 3);
            assert_ne!(y, p.x);
            let gone = p.x.difference(&y);
            assert!(!g.open_neighborhood(&gone).intersects(&p.w));
            // The child is a good pair again.
            let child = GoodPair::new(y.clone(), p.w.difference(&y));
            child.check(&g).unwrap();
        }
    }

    #[test]
    fn star_splits() {
        let g = Graph::star(3);
        let p = GoodPair::new(set(&[0]), set(&[1, 2, 3]));
        assert_eq!(
            enumerate_branch_splits(&g, &p),
            [(set(&[1]), set(&[2, 3])), (set(&[1, 2]), set(&[3]))]
        );
    }

    #[test]
    fn two_classes_of_one() {
        let vs: Vec<Vec<usize>> = class_vectors(&[1, 1]).collect();
        assert_eq!(vs, [vec![0, 1], vec![1, 0]]);
        assert_eq!(class_vectors(&[2, 3]).count(), 3 * 4 - 2);
    }

    #[test]
    fn single_component_has_no_splits() {
        let g = Graph::path(3);
        let p = GoodPair::new(set(&[0]), set(&[1, 2]));
        assert!(enumerate_branch_splits(&g, &p).is_empty());
        assert_eq!(class_vectors(&[1]).count(), 0);
        assert_eq!(class_vectors(&[]).count(), 0);
    }
}
