// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::graph::DeltaGraph;
use super::sets::{invariant_core, set_gap};
use crate::error::ChainError;
use crate::pointset::PointSet;
use crate::rational::Rational;

/// One δ-chain class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainClass {
    pub id: usize,
    pub points: PointSet,
    /// No δ-chain leaves the class toward another class.
    pub terminal: bool,
    /// No δ-chain from another class enters the class.
    pub initial: bool,
    /// Minimal distance to any other class; `None` when there is no other class.
    pub separation: Option<Rational>,
    /// Greatest forward-invariant subset of the class.
    pub core: PointSet,
}

impl ChainClass {
    /// A class whose invariant core is empty carries no well-defined subsystem.
    pub fn is_degenerate(&self) -> bool {
        self.core.is_empty()
    }
}

/// Chain recurrent set, its classes and the reachability order among them,
/// all at one resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    delta: Rational,
    cr: PointSet,
    classes: Vec<ChainClass>,
    class_of: Vec<Option<usize>>,
    /// `reach[i]` holds every class `j != i` that class `i` δ-reaches.
    reach: Vec<PointSet>,
}

impl ChainDecomposition {
    /// Classes are numbered by their smallest point.
    pub fn new(graph: &DeltaGraph<'_>) -> Self {
        let system = graph.system();
        let n = graph.len();
        let cr = graph.chain_recurrent_set();

        let mut comps: Vec<Vec<usize>> = graph
            .strongly_connected_components()
            .into_iter()
            .filter(|c| cr.contains(c[0]))
            .collect();
        comps.sort_by_key(|c| c[0]);

        let mut class_of = vec![None; n];
        for (id, comp) in comps.iter().enumerate() {
            for &p in comp {
                class_of[p] = Some(id);
            }
        }
        let k = comps.len();

        let mut reach = vec![PointSet::empty(k); k];
        for (id, comp) in comps.iter().enumerate() {
            let reached = graph.reach_from(comp[0]);
            for q in reached.iter() {
                if let Some(j) = class_of[q] {
                    if j != id {
                        reach[id].insert(j);
                    }
                }
            }
        }

        let point_sets: Vec<PointSet> = comps
            .iter()
            .map(|c| PointSet::from_indices(n, c.iter().copied()))
            .collect();
        let classes = point_sets
            .iter()
            .enumerate()
            .map(|(id, points)| {
                let separation = point_sets
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != id)
                    .filter_map(|(_, other)| set_gap(system, points, other))
                    .min();
                ChainClass {
                    id,
                    points: points.clone(),
                    terminal: reach[id].is_empty(),
                    initial: (0..k).all(|j| !reach[j].contains(id)),
                    separation,
                    core: invariant_core(system, points),
                }
            })
            .collect();

        ChainDecomposition {
            delta: graph.delta().clone(),
            cr,
            classes,
            class_of,
            reach,
        }
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn chain_recurrent_set(&self) -> &PointSet {
        &self.cr
    }

    pub fn classes(&self) -> &[ChainClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &ChainClass {
        &self.classes[id]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, p: usize) -> Option<usize> {
        self.class_of[p]
    }

    /// Whether class `from` δ-reaches a different class `to`.
    pub fn class_reaches(&self, from: usize, to: usize) -> bool {
        self.reach[from].contains(to)
    }

    /// `a <= b`: some point of `b` δ-reaches some point of `a`. Reflexive.
    pub fn class_order(&self, a: usize, b: usize) -> Result<bool, ChainError> {
        let k = self.classes.len();
        if a >= k {
            return Err(ChainError::BadIndex(a));
        }
        if b >= k {
            return Err(ChainError::BadIndex(b));
        }
        Ok(a == b || self.reach[b].contains(a))
    }

    /// Classes with nothing strictly above them.
    pub fn maximal_classes(&self) -> Vec<usize> {
        let k = self.classes.len();
        (0..k)
            .filter(|&a| (0..k).all(|b| b == a || !self.reach[b].contains(a)))
            .collect()
    }

    /// Classes whose separation radius exceeds `r`.
    pub fn isolated_classes(&self, r: &Rational) -> Vec<usize> {
        self.classes
            .iter()
            .filter(|c| c.separation.as_ref().is_none_or(|s| s > r))
            .map(|c| c.id)
            .collect()
    }

    pub fn terminal_classes(&self) -> Vec<usize> {
        self.classes.iter().filter(|c| c.terminal).map(|c| c.id).collect()
    }

    pub fn initial_classes(&self) -> Vec<usize> {
        self.classes.iter().filter(|c| c.initial).map(|c| c.id).collect()
    }

    /// Pairs `(i, j)` such that class `i` δ-reaches class `j != i`.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        self.reach
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
            .collect()
    }
}
