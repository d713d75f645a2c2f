// SPDX-License-Identifier: Apache-2.0

use std::collections::VecDeque;

use crate::pointset::PointSet;
use crate::rational::Rational;
use crate::system::FiniteMetricSystem;

/// For each point `p`, the points whose orbit eventually coincides with the
/// orbit of `p` while staying within ε of it beforehand:
///
/// `{x : ∃ n ≥ 0, f^n(x) = f^n(p) and d(f^j(x), f^j(p)) <= ε for j < n}`.
///
/// On a finite space a tracking error that tends to zero is eventually
/// zero, so this is exactly the set of ε-limit shadows of the orbit of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeSet {
    eps: Rational,
    sets: Vec<PointSet>,
}

impl MergeSet {
    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub fn of(&self, p: usize) -> &PointSet {
        &self.sets[p]
    }

    pub fn contains(&self, p: usize, x: usize) -> bool {
        self.sets[p].contains(x)
    }
}

/// Least fixpoint on the pair graph `(x, p) -> (f(x), f(p))`: a pair is good
/// if it is diagonal, or within ε and its successor pair is good. Computed
/// backwards from the diagonal through preimages.
pub fn merge_sets(system: &FiniteMetricSystem, eps: &Rational) -> MergeSet {
    let n = system.len();
    let pre = system.preimages();
    let mut sets = vec![PointSet::empty(n); n];
    let mut queue = VecDeque::new();
    for (z, set) in sets.iter_mut().enumerate() {
        set.insert(z);
        queue.push_back((z, z));
    }
    while let Some((u, v)) = queue.pop_front() {
        for &x in &pre[u] {
            for &p in &pre[v] {
                if !sets[p].contains(x) && system.dist(x, p) <= eps {
                    sets[p].insert(x);
                    queue.push_back((x, p));
                }
            }
        }
    }
    MergeSet {
        eps: eps.clone(),
        sets,
    }
}
