// SPDX-License-Identifier: Apache-2.0

use std::collections::VecDeque;

use crate::error::ChainError;
use crate::pointset::PointSet;
use crate::rational::Rational;
use crate::system::FiniteMetricSystem;

/// The δ-transition graph: `p -> q` iff `d(g(p), q) <= δ`, where `g` is the
/// system map (or, for [`DeltaGraph::with_map`], any supplied map).
#[derive(Clone, Debug)]
pub struct DeltaGraph<'a> {
    system: &'a FiniteMetricSystem,
    delta: Rational,
    adj: Vec<PointSet>,
}

impl<'a> DeltaGraph<'a> {
    pub fn new(system: &'a FiniteMetricSystem, delta: &Rational) -> Result<Self, ChainError> {
        Self::with_map(system, system.map(), delta)
    }

    /// Builds the graph of an arbitrary self-map on the system's metric.
    /// Used for the reversed graph of an invertible system.
    pub fn with_map(
        system: &'a FiniteMetricSystem,
        map: &[usize],
        delta: &Rational,
    ) -> Result<Self, ChainError> {
        if delta.is_negative() {
            return Err(ChainError::Negative(delta.clone()));
        }
        let adj = map.iter().map(|&fp| system.ball(fp, delta)).collect();
        Ok(DeltaGraph {
            system,
            delta: delta.clone(),
            adj,
        })
    }

    pub fn system(&self) -> &'a FiniteMetricSystem {
        self.system
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn successors(&self, p: usize) -> &PointSet {
        &self.adj[p]
    }

    pub fn has_edge(&self, p: usize, q: usize) -> bool {
        self.adj[p].contains(q)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(PointSet::len).sum()
    }

    /// Every point reachable from `x` by a path with at least one edge.
    pub fn reach_from(&self, x: usize) -> PointSet {
        let n = self.len();
        let mut seen = PointSet::empty(n);
        let mut queue: VecDeque<usize> = VecDeque::new();
        for q in self.adj[x].iter() {
            seen.insert(q);
            queue.push_back(q);
        }
        while let Some(p) = queue.pop_front() {
            for q in self.adj[p].iter() {
                if !seen.contains(q) {
                    seen.insert(q);
                    queue.push_back(q);
                }
            }
        }
        seen
    }

    /// `x ->_δ y`: a δ-chain of positive length from `x` to `y`.
    pub fn reaches(&self, x: usize, y: usize) -> Result<bool, ChainError> {
        let n = self.len();
        if x >= n {
            return Err(ChainError::BadIndex(x));
        }
        if y >= n {
            return Err(ChainError::BadIndex(y));
        }
        Ok(self.reach_from(x).contains(y))
    }

    /// Strongly connected components (Tarjan, iterative), each sorted, in
    /// reverse topological order of the condensation.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut next = 0;
        let succ: Vec<Vec<usize>> = self.adj.iter().map(PointSet::to_vec).collect();

        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            // (node, position in its successor list)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&(v, pos)) = call.last() {
                if pos < succ[v].len() {
                    let w = succ[v][pos];
                    if let Some(top) = call.last_mut() {
                        top.1 += 1;
                    }
                    if index[w] == UNSEEN {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    /// Points lying on a directed cycle (a self-loop counts).
    pub fn chain_recurrent_set(&self) -> PointSet {
        let mut cr = PointSet::empty(self.len());
        for comp in self.strongly_connected_components() {
            if comp.len() > 1 || self.has_edge(comp[0], comp[0]) {
                for p in comp {
                    cr.insert(p);
                }
            }
        }
        cr
    }
}
