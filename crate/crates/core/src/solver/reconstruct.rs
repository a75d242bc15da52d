//! Witness reconstruction by greedy descent through the memoized values.
//!
//! Keys fix the root bag pointwise, but a memo entry may have been filled
//! while solving an isomorphic pair with different remainder labels, so the
//! descent re-solves each child of the concrete pair instead of reading
//! stored choices. Every re-solve is a memo hit or a cheap fill.

use alloc::vec::Vec;

use super::{bits, enumerate, to_set, Mask, Shape, Size, SolveError, Solver};
use crate::decomp::{PathDecomposition, TreeDecomposition};
use crate::canon::GoodPair;
use crate::graph::VertexSet;

impl Solver<'_> {
    /// Predecessor bags of `(x, w)` in candidate order.
    fn candidates(&self, x: Mask, w: Mask) -> Vec<Mask> {
        let keep = x & !self.removable(x, w);
        let limit = self.cap() as usize;
        let Some(room) = limit.checked_sub(keep.count_ones() as usize) else {
            return Vec::new();
        };
        let optional: Vec<usize> = bits((x | w) & !keep).collect();
        enumerate::Combinations::new(optional.len(), 0, room)
            .map(|c| c.iter().fold(keep, |m, &i| m | (1 << optional[i])))
            .filter(|&y| y != x)
            .collect()
    }

    fn whole_remainder(&self, root: &VertexSet) -> Result<(Mask, Mask), SolveError> {
        let pair = GoodPair::new(root.clone(), self.graph.vertices().difference(root));
        self.check_pair(&pair)
    }

    /// A path decomposition of the whole graph with last bag `root` and
    /// exactly `target` bags.
    pub fn reconstruct_path(&mut self, root: &VertexSet, target: Size) -> Result<PathDecomposition, SolveError> {
        let (mut x, mut w) = self.whole_remainder(root)?;
        let mut m = self.value(Shape::Path, x, w);
        if m != target || !m.is_feasible() {
            return Err(SolveError::TargetNotAttained(target));
        }
        let mut bags = alloc::vec![to_set(x)];
        while w != 0 {
            let want = match m {
                Size::Bags(b) => Size::Bags(b - 1),
                Size::Infeasible => unreachable!(),
            };
            let mut next = None;
            for y in self.candidates(x, w) {
                if self.value(Shape::Path, y, w & !y) == want {
                    next = Some(y);
                    break;
                }
            }
            let y = next.ok_or(SolveError::Inconsistent(m))?;
            bags.push(to_set(y));
            w &= !y;
            x = y;
            m = want;
        }
        if m != Size::Bags(1) {
            return Err(SolveError::Inconsistent(m));
        }
        bags.reverse();
        Ok(PathDecomposition::new(bags))
    }

    /// A tree decomposition of the whole graph rooted at bag `root` with
    /// exactly `target` bags.
    pub fn reconstruct_tree(&mut self, root: &VertexSet, target: Size) -> Result<TreeDecomposition, SolveError> {
        let (x, w) = self.whole_remainder(root)?;
        let m = self.value(Shape::Tree, x, w);
        if m != target || !m.is_feasible() {
            return Err(SolveError::TargetNotAttained(target));
        }
        let mut td = TreeDecomposition {
            bags: alloc::vec![to_set(x)],
            parent: alloc::vec![None],
        };
        self.grow_tree(&mut td, 0, x, w, m)?;
        Ok(td)
    }

    /// Hangs below `node` (whose bag is `x`) a decomposition of `x ∪ w`
    /// rooted at `node` with `m` bags in total.
    fn grow_tree(&mut self, td: &mut TreeDecomposition, node: usize, x: Mask, w: Mask, m: Size) -> Result<(), SolveError> {
        let Size::Bags(b) = m else {
            return Err(SolveError::Inconsistent(m));
        };
        if w == 0 {
            return if b == 1 { Ok(()) } else { Err(SolveError::Inconsistent(m)) };
        }
        if b >= 2 {
            let want = Size::Bags(b - 1);
            for y in self.candidates(x, w) {
                if self.value(Shape::Tree, y, w & !y) == want {
                    td.bags.push(to_set(y));
                    td.parent.push(Some(node));
                    let child = td.bags.len() - 1;
                    return self.grow_tree(td, child, y, w & !y, want);
                }
            }
        }
        let groups = self.class_groups(x, w);
        let counts: Vec<usize> = groups.iter().map(Vec::len).collect();
        for y in enumerate::class_vectors(&counts) {
            let w1 = super::split_mask(&groups, &y);
            let left = self.value(Shape::Tree, x, w1);
            let right = self.value(Shape::Tree, x, w & !w1);
            if left.glue(right) == m {
                self.grow_tree(td, node, x, w1, left)?;
                return self.grow_tree(td, node, x, w & !w1, right);
            }
        }
        Err(SolveError::Inconsistent(m))
    }
}
