// SPDX-License-Identifier: Apache-2.0

//! Finite metric dynamical systems: a finite point set, an exact distance
//! table and a self-map.

mod corpus;
mod grid;
mod spec;

pub use corpus::{build_corpus_system, default_corpus, parse_generator, Generator};
pub use grid::{discretize, Geometry, GridSystem1D, SourceMap};
pub use spec::{load_system, SystemSpec};

use crate::error::{MetricAxiom, SystemError, Violation};
use crate::pointset::PointSet;
use crate::rational::Rational;

/// A validated finite metric space with a self-map.
///
/// Construction goes through [`FiniteMetricSystem::new`], which checks every
/// metric axiom exactly, so downstream code may assume a genuine metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSystem {
    name: String,
    n: usize,
    dist: Vec<Rational>,
    map: Vec<usize>,
    invertible: bool,
    quantization: Option<Rational>,
}

impl FiniteMetricSystem {
    /// Validates and builds a system, collecting every violated axiom.
    pub fn new(
        name: impl Into<String>,
        dist: Vec<Vec<Rational>>,
        map: Vec<usize>,
        invertible: bool,
    ) -> Result<Self, SystemError> {
        let n = map.len();
        let mut violations = Vec::new();
        if n == 0 {
            violations.push(Violation::Shape("system needs at least one point".into()));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            violations.push(Violation::Shape(format!(
                "distance table must be {n}x{n} to match the map"
            )));
            return Err(SystemError::Invalid(violations));
        }
        for (i, &target) in map.iter().enumerate() {
            if target >= n {
                violations.push(Violation::MapNotTotal(i));
            }
        }
        violations.extend(metric_violations(&dist));
        if invertible && violations.is_empty() && !is_bijection(&map) {
            violations.push(Violation::NotBijective);
        }
        if !violations.is_empty() {
            return Err(SystemError::Invalid(violations));
        }
        Ok(FiniteMetricSystem {
            name: name.into(),
            n,
            dist: dist.into_iter().flatten().collect(),
            map,
            invertible,
            quantization: None,
        })
    }

    pub(crate) fn with_quantization(mut self, bound: Rational) -> Self {
        self.quantization = Some(bound);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.n + j]
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    /// Half cell width recorded by grid discretizations.
    pub fn quantization_bound(&self) -> Option<&Rational> {
        self.quantization.as_ref()
    }

    /// The inverse permutation, when the map is a bijection.
    pub fn inverse_map(&self) -> Option<Vec<usize>> {
        if !is_bijection(&self.map) {
            return None;
        }
        let mut inv = vec![0; self.n];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Some(inv)
    }

    pub fn diameter(&self) -> Rational {
        self.dist.iter().max().cloned().unwrap_or_default()
    }

    /// Distinct positive pairwise distances, ascending.
    pub fn distance_values(&self) -> Vec<Rational> {
        let mut values: Vec<Rational> = self
            .dist
            .iter()
            .filter(|d| !d.is_zero())
            .cloned()
            .collect();
        values.sort();
        values.dedup();
        values
    }

    /// Closed ball `{x : d(center, x) <= r}`.
    pub fn ball(&self, center: usize, r: &Rational) -> PointSet {
        PointSet::from_indices(self.n, (0..self.n).filter(|&x| self.dist(center, x) <= r))
    }

    /// `f(S)`.
    pub fn image_set(&self, set: &PointSet) -> PointSet {
        PointSet::from_indices(self.n, set.iter().map(|i| self.map[i]))
    }

    /// `f^k(x)`.
    pub fn iterate(&self, x: usize, k: usize) -> usize {
        (0..k).fold(x, |p, _| self.map[p])
    }

    /// Preimage lists: `preimages()[y]` holds every `x` with `f(x) = y`, ascending.
    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut pre = vec![Vec::new(); self.n];
        for (x, &y) in self.map.iter().enumerate() {
            pre[y].push(x);
        }
        pre
    }

    pub fn distance_rows(&self) -> Vec<Vec<Rational>> {
        self.dist.chunks(self.n).map(|row| row.to_vec()).collect()
    }
}

fn is_bijection(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    for &j in map {
        if j >= map.len() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

/// Exact metric-axiom checks on a square table.
#[allow(clippy::needless_range_loop)]
pub fn metric_violations(dist: &[Vec<Rational>]) -> Vec<Violation> {
    let n = dist.len();
    let mut out = Vec::new();
    for i in 0..n {
        if !dist[i][i].is_zero() {
            out.push(Violation::Metric {
                axiom: MetricAxiom::Identity,
                indices: vec![i, i],
            });
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if dist[i][j].is_negative() {
                out.push(Violation::Metric {
                    axiom: MetricAxiom::Positivity,
                    indices: vec![i, j],
                });
            } else if i < j && dist[i][j].is_zero() {
                out.push(Violation::Metric {
                    axiom: MetricAxiom::Identity,
                    indices: vec![i, j],
                });
            }
            if i < j && dist[i][j] != dist[j][i] {
                out.push(Violation::Metric {
                    axiom: MetricAxiom::Symmetry,
                    indices: vec![i, j],
                });
            }
        }
    }
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if dist[i][k] > &dist[i][j] + &dist[j][k] {
                    out.push(Violation::Metric {
                        axiom: MetricAxiom::Triangle,
                        indices: vec![i, j, k],
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64) -> Rational {
        Rational::integer(p)
    }

    #[test]
    fn singleton_is_valid() {
        let sys = FiniteMetricSystem::new("one", vec![vec![r(0)]], vec![0], false).unwrap();
        assert_eq!(sys.len(), 1);
        assert_eq!(sys.image(0), 0);
    }

    #[test]
    fn invertible_swap_is_valid() {
        let sys = FiniteMetricSystem::new(
            "swap",
            vec![vec![r(0), r(1)], vec![r(1), r(0)]],
            vec![1, 0],
            true,
        )
        .unwrap();
        assert_eq!(sys.inverse_map(), Some(vec![1, 0]));
    }

    #[test]
    fn triangle_violation_names_the_triple() {
        let dist = vec![
            vec![r(0), r(1), r(5)],
            vec![r(1), r(0), r(1)],
            vec![r(5), r(1), r(0)],
        ];
        let err = FiniteMetricSystem::new("bad", dist, vec![0, 1, 2], false).unwrap_err();
        match err {
            SystemError::Invalid(v) => assert_eq!(
                v,
                vec![Violation::Metric {
                    axiom: MetricAxiom::Triangle,
                    indices: vec![0, 1, 2]
                }]
            ),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn map_and_bijection_errors() {
        let dist = vec![vec![r(0), r(1)], vec![r(1), r(0)]];
        let err = FiniteMetricSystem::new("m", dist.clone(), vec![0, 7], false).unwrap_err();
        assert!(matches!(err, SystemError::Invalid(ref v) if v == &[Violation::MapNotTotal(1)]));
        let err = FiniteMetricSystem::new("m", dist, vec![0, 0], true).unwrap_err();
        assert!(matches!(err, SystemError::Invalid(ref v) if v == &[Violation::NotBijective]));
    }

    #[test]
    fn asymmetric_and_degenerate_tables() {
        let dist = vec![vec![r(0), r(2)], vec![r(1), r(0)]];
        let err = FiniteMetricSystem::new("m", dist, vec![0, 1], false).unwrap_err();
        assert!(err.to_string().contains("symmetry"));
        let dist = vec![vec![r(0), r(0)], vec![r(0), r(0)]];
        let err = FiniteMetricSystem::new("m", dist, vec![0, 1], false).unwrap_err();
        assert!(err.to_string().contains("identity"));
        let dist = vec![vec![r(1)]];
        assert!(FiniteMetricSystem::new("m", dist, vec![0], false).is_err());
    }

    #[test]
    fn empty_system_rejected() {
        assert!(FiniteMetricSystem::new("e", vec![], vec![], false).is_err());
    }
}
