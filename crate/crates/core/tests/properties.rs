// SPDX-License-Identifier: Apache-2.0

//! Randomized invariants checked against enumeration.

#![allow(clippy::needless_range_loop)]

use chainscope_core::chain::{decompose, invariant_core, is_forward_invariant, DeltaGraph};
use chainscope_core::shadow::{
    brute_force_oracle, check_property, extract_witness, shadow_sets, witness_is_genuine,
};
use chainscope_core::{
    CheckOptions, DeltaLadder, FiniteMetricSystem, PointSet, Property, Rational,
};
use proptest::prelude::*;

/// Shortest-path metric of a weighted graph that always contains the path
/// 0-1-...-(n-1), so every pair is connected.
fn path_metric(n: usize, chain: &[i64], extra: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    const INF: i64 = i64::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for i in 0..n - 1 {
        d[i][i + 1] = chain[i];
        d[i + 1][i] = chain[i];
    }
    for &(a, b, w) in extra {
        let (a, b) = (a % n, b % n);
        if a != b && w < d[a][b] {
            d[a][b] = w;
            d[b][a] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

#[derive(Clone, Debug)]
struct Case {
    dist: Vec<Vec<i64>>,
    map: Vec<usize>,
}

impl Case {
    fn system(&self) -> FiniteMetricSystem {
        let dist = self
            .dist
            .iter()
            .map(|row| row.iter().map(|&x| Rational::integer(x)).collect())
            .collect();
        FiniteMetricSystem::new("random", dist, self.map.clone(), false).unwrap()
    }
}

fn case(max_n: usize) -> impl Strategy<Value = Case> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(1i64..=4, n - 1),
            prop::collection::vec((0..n, 0..n, 1i64..=4), 0..n),
            prop::collection::vec(0..n, n),
        )
            .prop_map(move |(chain, extra, map)| Case {
                dist: path_metric(n, &chain, &extra),
                map,
            })
    })
}

/// Resolutions on the half-integer lattice, which covers every distance
/// value and the gaps between them.
fn scale() -> impl Strategy<Value = Rational> {
    (0i64..=12).prop_map(|k| Rational::new(k, 2))
}

fn closure(system: &FiniteMetricSystem, delta: &Rational) -> Vec<Vec<bool>> {
    let n = system.len();
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|p| (0..n).map(|q| system.dist(system.image(p), q) <= delta).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

fn subsets(set: &PointSet) -> Vec<PointSet> {
    let items = set.to_vec();
    let n = set.universe();
    (0u32..1 << items.len())
        .map(|mask| {
            PointSet::from_indices(
                n,
                items.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &p)| p),
            )
        })
        .collect()
}

fn opts() -> CheckOptions {
    CheckOptions::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn shortest_path_tables_validate(c in case(12)) {
        let s = c.system();
        prop_assert_eq!(s.len(), c.map.len());
    }

    #[test]
    fn asymmetric_tables_are_rejected(c in case(8), bump in 1i64..5) {
        let mut dist = c.dist.clone();
        dist[0][1] += bump;
        let rows = dist.iter().map(|r| r.iter().map(|&x| Rational::integer(x)).collect()).collect();
        prop_assert!(FiniteMetricSystem::new("bad", rows, c.map.clone(), false).is_err());
    }

    #[test]
    fn reachability_matches_transitive_closure(c in case(12), delta in scale()) {
        let s = c.system();
        let g = DeltaGraph::new(&s, &delta).unwrap();
        let r = closure(&s, &delta);
        for x in 0..s.len() {
            for y in 0..s.len() {
                prop_assert_eq!(g.reaches(x, y).unwrap(), r[x][y], "{} -> {}", x, y);
            }
        }
    }

    #[test]
    fn decomposition_matches_closure(c in case(12), delta in scale()) {
        let s = c.system();
        let dec = decompose(&s, &delta).unwrap();
        let r = closure(&s, &delta);
        let n = s.len();
        for x in 0..n {
            prop_assert_eq!(dec.chain_recurrent_set().contains(x), r[x][x]);
            prop_assert_eq!(dec.class_of(x).is_some(), r[x][x]);
        }
        let mut covered = 0;
        for a in dec.classes() {
            covered += a.points.len();
            let rep = a.points.first().unwrap();
            for p in a.points.iter() {
                prop_assert!(r[rep][p] && r[p][rep]);
            }
            for b in dec.classes() {
                let other = b.points.first().unwrap();
                prop_assert_eq!(dec.class_reaches(a.id, b.id), a.id != b.id && r[rep][other]);
                if a.id != b.id {
                    // Acyclic.
                    prop_assert!(!(dec.class_reaches(a.id, b.id) && dec.class_reaches(b.id, a.id)));
                }
            }
            let reaches_other = dec.classes().iter().any(|b| b.id != a.id && r[rep][b.points.first().unwrap()]);
            let reached = dec.classes().iter().any(|b| b.id != a.id && r[b.points.first().unwrap()][rep]);
            prop_assert_eq!(a.terminal, !reaches_other);
            prop_assert_eq!(a.initial, !reached);
        }
        prop_assert_eq!(covered, dec.chain_recurrent_set().len());
    }

    #[test]
    fn invariant_core_is_greatest(c in case(8), mask in 0u32..256) {
        let s = c.system();
        let set = PointSet::from_indices(s.len(), (0..s.len()).filter(|&p| mask >> p & 1 == 1));
        let core = invariant_core(&s, &set);
        prop_assert!(core.is_subset(&set));
        prop_assert!(is_forward_invariant(&s, &core));
        for t in subsets(&set) {
            if is_forward_invariant(&s, &t) {
                prop_assert!(t.is_subset(&core));
            }
        }
    }

    #[test]
    fn shadow_sets_match_enumeration(c in case(10), delta in scale(), eps in scale(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..7), start in any::<prop::sample::Index>()) {
        let s = c.system();
        let g = DeltaGraph::new(&s, &delta).unwrap();
        let mut points = vec![start.index(s.len())];
        for pick in picks {
            let succ = g.successors(*points.last().unwrap()).to_vec();
            points.push(succ[pick.index(succ.len())]);
        }
        let ys = shadow_sets(&s, &points, &eps);
        prop_assert_eq!(ys.len(), points.len());
        for (i, y) in ys.iter().enumerate() {
            let expected = PointSet::from_indices(
                s.len(),
                (0..s.len())
                    .filter(|&x| (0..=i).all(|j| s.dist(s.iterate(x, j), points[j]) <= &eps))
                    .map(|x| s.iterate(x, i)),
            );
            prop_assert_eq!(y, &expected, "position {}", i);
        }
    }

    #[test]
    fn automaton_agrees_with_oracle(c in case(7), delta in scale(), eps in scale(), slimit in any::<bool>()) {
        let s = c.system();
        let property = if slimit { Property::Slimit } else { Property::Shadowing };
        let v = check_property(&s, property, &delta, &eps, None, opts()).unwrap();
        let o = brute_force_oracle(&s, property, &delta, &eps, None, 8).unwrap();
        prop_assert_eq!(v.pass, o.pass);
        prop_assert_eq!(v.witness, o.witness);
    }

    #[test]
    fn verdicts_are_monotone(c in case(8), d in 0i64..=12, dd in 0i64..=4, e in 0i64..=12, de in 0i64..=4, slimit in any::<bool>()) {
        let s = c.system();
        let property = if slimit { Property::Slimit } else { Property::Shadowing };
        let coarse = Rational::new(d + dd, 2);
        let fine = Rational::new(d, 2);
        let tight = Rational::new(e, 2);
        let loose = Rational::new(e + de, 2);
        let base = check_property(&s, property, &coarse, &tight, None, opts()).unwrap();
        if base.pass {
            // Fewer pseudo-orbits, more room to track.
            let easier = check_property(&s, property, &fine, &loose, None, opts()).unwrap();
            prop_assert!(easier.pass);
        }
    }

    #[test]
    fn slimit_implies_shadowing(c in case(10), delta in scale(), eps in scale()) {
        let s = c.system();
        let sl = check_property(&s, Property::Slimit, &delta, &eps, None, opts()).unwrap();
        if sl.pass {
            let sh = check_property(&s, Property::Shadowing, &delta, &eps, None, opts()).unwrap();
            prop_assert!(sh.pass);
        }
    }

    #[test]
    fn witnesses_are_genuine(c in case(10), delta in scale(), eps in scale(), slimit in any::<bool>()) {
        let s = c.system();
        let property = if slimit { Property::Slimit } else { Property::Shadowing };
        let v = check_property(&s, property, &delta, &eps, None, opts()).unwrap();
        if !v.pass {
            let w = extract_witness(&v).unwrap();
            prop_assert!(witness_is_genuine(&s, property, &w, &eps, None).unwrap());
        }
    }

    #[test]
    fn parallel_exploration_is_identical(c in case(12), delta in scale(), eps in scale(), slimit in any::<bool>()) {
        let s = c.system();
        let property = if slimit { Property::Slimit } else { Property::Shadowing };
        let seq = check_property(&s, property, &delta, &eps, None, opts()).unwrap();
        let par = check_property(&s, property, &delta, &eps, None, CheckOptions { parallel: true, ..opts() }).unwrap();
        prop_assert_eq!(serde_json::to_string(&seq).unwrap(), serde_json::to_string(&par).unwrap());
    }

    #[test]
    fn ladder_laws_hold(c in case(12), mut ks in prop::collection::btree_set(0i64..=16, 1..6)) {
        let s = c.system();
        let deltas: Vec<Rational> = std::mem::take(&mut ks).into_iter().rev().map(|k| Rational::new(k, 2)).collect();
        let ladder = DeltaLadder::new(&s, &deltas).unwrap();
        prop_assert!(ladder.laws_hold());
        let counts = ladder.class_counts();
        prop_assert_eq!(counts.len(), deltas.len());
        for (k, map) in ladder.refinement().iter().enumerate() {
            prop_assert_eq!(map.len(), counts[k + 1]);
            prop_assert!(map.iter().all(|p| p.is_some()));
        }
    }
}
