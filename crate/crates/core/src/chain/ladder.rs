// SPDX-License-Identifier: Apache-2.0

use super::decompose::ChainDecomposition;
use super::graph::DeltaGraph;
use crate::error::ChainError;
use crate::rational::Rational;
use crate::system::FiniteMetricSystem;

/// Decompositions at a strictly decreasing sequence of resolutions, linked
/// by refinement maps.
#[derive(Clone, Debug)]
pub struct DeltaLadder {
    levels: Vec<ChainDecomposition>,
    /// `refinement[k][j]` is the level-`k` class containing class `j` of
    /// level `k + 1`; `None` if no single class contains it.
    refinement: Vec<Vec<Option<usize>>>,
    threshold: Option<Rational>,
}

impl DeltaLadder {
    pub fn new(system: &FiniteMetricSystem, deltas: &[Rational]) -> Result<Self, ChainError> {
        for (i, d) in deltas.iter().enumerate() {
            if d.is_negative() || (i > 0 && d >= &deltas[i - 1]) {
                return Err(ChainError::NotDecreasing(i));
            }
        }
        let levels: Vec<ChainDecomposition> = deltas
            .iter()
            .map(|d| DeltaGraph::new(system, d).map(|g| ChainDecomposition::new(&g)))
            .collect::<Result<_, _>>()?;
        let refinement = levels
            .windows(2)
            .map(|pair| {
                let (coarse, fine) = (&pair[0], &pair[1]);
                fine.classes()
                    .iter()
                    .map(|c| {
                        let mut parents = c.points.iter().map(|p| coarse.class_of(p));
                        let first = parents.next().flatten()?;
                        parents.all(|q| q == Some(first)).then_some(first)
                    })
                    .collect()
            })
            .collect();
        Ok(DeltaLadder {
            levels,
            refinement,
            threshold: functional_threshold(system),
        })
    }

    pub fn levels(&self) -> &[ChainDecomposition] {
        &self.levels
    }

    pub fn refinement(&self) -> &[Vec<Option<usize>>] {
        &self.refinement
    }

    pub fn class_counts(&self) -> Vec<usize> {
        self.levels.iter().map(ChainDecomposition::class_count).collect()
    }

    /// Below this resolution the δ-graph is exactly the graph of the map.
    pub fn stabilization_threshold(&self) -> Option<&Rational> {
        self.threshold.as_ref()
    }

    /// First level whose resolution lies below the stabilization threshold.
    pub fn stable_level(&self) -> Option<usize> {
        let t = self.threshold.as_ref();
        self.levels
            .iter()
            .position(|l| t.is_none_or(|t| l.delta() < t))
    }

    /// `CR` at level `k + 1` is contained in `CR` at level `k`.
    pub fn cr_monotone(&self, k: usize) -> bool {
        self.levels[k + 1]
            .chain_recurrent_set()
            .is_subset(self.levels[k].chain_recurrent_set())
    }

    /// Every class at level `k + 1` lies inside exactly one class at level `k`.
    pub fn classes_nested(&self, k: usize) -> bool {
        let coarse = &self.levels[k];
        self.levels[k + 1]
            .classes()
            .iter()
            .zip(&self.refinement[k])
            .all(|(c, parent)| parent.is_some_and(|p| c.points.is_subset(&coarse.class(p).points)))
    }

    pub fn laws_hold(&self) -> bool {
        (0..self.refinement.len()).all(|k| self.cr_monotone(k) && self.classes_nested(k))
    }
}

/// `min { d(f(p), q) : q != f(p) }`, `None` for a one-point system.
pub fn functional_threshold(system: &FiniteMetricSystem) -> Option<Rational> {
    (0..system.len())
        .flat_map(|p| {
            let fp = system.image(p);
            (0..system.len())
                .filter(move |&q| q != fp)
                .map(move |q| system.dist(fp, q))
        })
        .min()
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{build_corpus_system, parse_generator};

    fn sys(s: &str) -> FiniteMetricSystem {
        build_corpus_system(&parse_generator(s).unwrap()).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn cantor_ladder_counts() {
        let s = sys("cantor-identity:2");
        let ladder = DeltaLadder::new(&s, &[q("1"), q("1/4"), q("1/20")]).unwrap();
        assert_eq!(ladder.class_counts(), vec![1, 2, 4]);
        assert!(ladder.laws_hold());
        assert_eq!(ladder.refinement()[0], vec![Some(0), Some(0)]);
        assert_eq!(ladder.refinement()[1], vec![Some(0), Some(0), Some(1), Some(1)]);
        assert_eq!(ladder.stabilization_threshold(), Some(&q("2/9")));
        assert_eq!(ladder.stable_level(), Some(2));
    }

    #[test]
    fn single_level_and_rotation() {
        let s = sys("rotation:4:1");
        let ladder = DeltaLadder::new(&s, &[q("1/3")]).unwrap();
        assert_eq!(ladder.class_counts().len(), 1);
        assert!(ladder.refinement().is_empty());
        let ladder = DeltaLadder::new(&s, &[q("1"), q("0")]).unwrap();
        assert_eq!(ladder.class_counts(), vec![1, 1]);
    }

    #[test]
    fn rejects_non_decreasing() {
        let s = sys("rotation:4:1");
        assert_eq!(
            DeltaLadder::new(&s, &[q("1/2"), q("1/2")]).unwrap_err(),
            ChainError::NotDecreasing(1)
        );
        assert_eq!(
            DeltaLadder::new(&s, &[q("-1")]).unwrap_err(),
            ChainError::NotDecreasing(0)
        );
    }
}
