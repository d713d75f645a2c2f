// SPDX-License-Identifier: Apache-2.0

//! System-level (δ, ε)-shadowing and s-limit shadowing.
//!
//! States are pairs `(p, Y)`: the current pseudo-point and the exact set of
//! time-`i` positions of points that have ε-tracked the pseudo-orbit so far.
//! Initial states are `(p, B_ε(p))`; a δ-edge `p -> q` moves `(p, Y)` to
//! `(q, f(Y) ∩ B_ε(q))`. Shadowing fails iff some reachable state has an
//! empty `Y`. S-limit shadowing fails iff some reachable `(p, Y)` has no
//! member of `Y` that merges with the orbit of `p`, since any reachable
//! prefix may be continued by the exact orbit of its last point.
//!
//! Exploration is breadth-first. Each level is kept in lexicographic order of
//! its lexicographically smallest realizing prefix, so the first violation
//! found is the canonical witness: shortest, then lexicographically
//! smallest. Successor computation may run on the current rayon pool; the
//! merge into the visited set is sequential, so results do not depend on
//! the number of workers.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::merge::{merge_sets, MergeSet};
use super::orbit::PseudoOrbit;
use crate::chain::is_forward_invariant;
use crate::error::ShadowError;
use crate::pointset::PointSet;
use crate::rational::Rational;
use crate::system::FiniteMetricSystem;

pub const DEFAULT_STATE_CAP: usize = 1 << 22;

const PARALLEL_FRONTIER: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Shadowing,
    Slimit,
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Property::Shadowing => "shadowing",
            Property::Slimit => "slimit",
        })
    }
}

impl std::str::FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shadowing" => Ok(Property::Shadowing),
            "slimit" | "s-limit" => Ok(Property::Slimit),
            other => Err(format!("unknown property {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub state_cap: usize,
    /// Expand large frontiers on the current rayon pool.
    pub parallel: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            state_cap: DEFAULT_STATE_CAP,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShadowVerdict {
    pub property: Property,
    pub delta: Rational,
    pub eps: Rational,
    pub pass: bool,
    pub witness: Option<PseudoOrbit>,
    pub states_explored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShadowState {
    pub p: usize,
    pub y: PointSet,
}

struct Node {
    state: ShadowState,
    parent: Option<usize>,
}

/// Precomputed restriction of the system to a domain.
struct Arena<'a> {
    system: &'a FiniteMetricSystem,
    domain: PointSet,
    succ: Vec<Vec<usize>>,
    balls: Vec<PointSet>,
    merge: Option<MergeSet>,
}

impl<'a> Arena<'a> {
    fn new(
        system: &'a FiniteMetricSystem,
        delta: &Rational,
        eps: &Rational,
        domain: Option<&PointSet>,
        property: Property,
    ) -> Result<Self, ShadowError> {
        let n = system.len();
        let domain = domain.cloned().unwrap_or_else(|| PointSet::full(n));
        if domain.is_empty() {
            return Err(ShadowError::EmptyDomain);
        }
        if let Some(p) = domain.iter().find(|&p| !domain.contains(system.image(p))) {
            return Err(ShadowError::DomainNotInvariant(p));
        }
        debug_assert!(is_forward_invariant(system, &domain));
        if delta.is_negative() || eps.is_negative() {
            return Err(ShadowError::Chain(crate::error::ChainError::Negative(
                if delta.is_negative() { delta } else { eps }.clone(),
            )));
        }
        let succ = (0..n)
            .map(|p| {
                if domain.contains(p) {
                    system.ball(system.image(p), delta).intersection(&domain).to_vec()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let balls = (0..n).map(|q| system.ball(q, eps).intersection(&domain)).collect();
        let merge = (property == Property::Slimit).then(|| merge_sets(system, eps));
        Ok(Arena {
            system,
            domain,
            succ,
            balls,
            merge,
        })
    }

    fn violates(&self, state: &ShadowState) -> bool {
        match &self.merge {
            None => state.y.is_empty(),
            Some(m) => state.y.is_disjoint(m.of(state.p)),
        }
    }

    fn successors(&self, state: &ShadowState) -> Vec<ShadowState> {
        let image = self.system.image_set(&state.y);
        self.succ[state.p]
            .iter()
            .map(|&q| ShadowState {
                p: q,
                y: image.intersection(&self.balls[q]),
            })
            .collect()
    }
}

fn explore(
    system: &FiniteMetricSystem,
    delta: &Rational,
    eps: &Rational,
    domain: Option<&PointSet>,
    property: Property,
    opts: CheckOptions,
) -> Result<ShadowVerdict, ShadowError> {
    let arena = Arena::new(system, delta, eps, domain, property)?;
    let mut nodes: Vec<Node> = Vec::new();
    let mut seen: HashSet<ShadowState> = HashSet::new();

    let verdict = |nodes: &[Node], failing: Option<usize>| {
        let witness = failing.map(|idx| {
            let mut path = Vec::new();
            let mut cur = Some(idx);
            while let Some(i) = cur {
                path.push(nodes[i].state.p);
                cur = nodes[i].parent;
            }
            path.reverse();
            let t = path.len() - 1;
            match property {
                Property::Shadowing => PseudoOrbit::plain(path, delta.clone()),
                Property::Slimit => PseudoOrbit::eventually_exact(path, delta.clone(), t),
            }
        });
        ShadowVerdict {
            property,
            delta: delta.clone(),
            eps: eps.clone(),
            pass: witness.is_none(),
            witness,
            states_explored: nodes.len(),
        }
    };

    // Returns the index of the new node if it was unseen.
    let mut admit = |nodes: &mut Vec<Node>, state: ShadowState, parent: Option<usize>| -> Result<Option<usize>, ShadowError> {
        if seen.contains(&state) {
            return Ok(None);
        }
        if nodes.len() >= opts.state_cap {
            return Err(ShadowError::Inconclusive {
                cap: opts.state_cap,
                explored: nodes.len(),
            });
        }
        seen.insert(state.clone());
        nodes.push(Node { state, parent });
        Ok(Some(nodes.len() - 1))
    };

    let mut frontier = Vec::new();
    for p in arena.domain.iter() {
        let state = ShadowState {
            p,
            y: arena.balls[p].clone(),
        };
        if let Some(idx) = admit(&mut nodes, state, None)? {
            if arena.violates(&nodes[idx].state) {
                return Ok(verdict(&nodes, Some(idx)));
            }
            frontier.push(idx);
        }
    }

    while !frontier.is_empty() {
        let expanded: Vec<Vec<ShadowState>> = if opts.parallel && frontier.len() >= PARALLEL_FRONTIER {
            frontier
                .par_iter()
                .map(|&i| arena.successors(&nodes[i].state))
                .collect()
        } else {
            frontier.iter().map(|&i| arena.successors(&nodes[i].state)).collect()
        };
        let mut next = Vec::new();
        for (&parent, succs) in frontier.iter().zip(expanded) {
            for state in succs {
                if let Some(idx) = admit(&mut nodes, state, Some(parent))? {
                    if arena.violates(&nodes[idx].state) {
                        return Ok(verdict(&nodes, Some(idx)));
                    }
                    next.push(idx);
                }
            }
        }
        frontier = next;
    }
    Ok(verdict(&nodes, None))
}

/// Does every δ-pseudo orbit (inside `domain`, if given) have an ε-shadow?
pub fn check_shadowing_property(
    system: &FiniteMetricSystem,
    delta: &Rational,
    eps: &Rational,
    domain: Option<&PointSet>,
    opts: CheckOptions,
) -> Result<ShadowVerdict, ShadowError> {
    explore(system, delta, eps, domain, Property::Shadowing, opts)
}

/// Is every δ-limit-pseudo orbit (inside `domain`, if given) ε-limit shadowed?
pub fn check_slimit_property(
    system: &FiniteMetricSystem,
    delta: &Rational,
    eps: &Rational,
    domain: Option<&PointSet>,
    opts: CheckOptions,
) -> Result<ShadowVerdict, ShadowError> {
    explore(system, delta, eps, domain, Property::Slimit, opts)
}

pub fn check_property(
    system: &FiniteMetricSystem,
    property: Property,
    delta: &Rational,
    eps: &Rational,
    domain: Option<&PointSet>,
    opts: CheckOptions,
) -> Result<ShadowVerdict, ShadowError> {
    explore(system, delta, eps, domain, property, opts)
}

/// The counterexample carried by a failing verdict.
pub fn extract_witness(verdict: &ShadowVerdict) -> Result<PseudoOrbit, ShadowError> {
    match (&verdict.witness, verdict.pass) {
        (Some(w), false) => Ok(w.clone()),
        _ => Err(ShadowError::NotFailing),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::orbit::{is_limit_shadowed, is_shadowed, validate_pseudo_orbit};
    use crate::system::{build_corpus_system, parse_generator};

    fn sys(s: &str) -> FiniteMetricSystem {
        build_corpus_system(&parse_generator(s).unwrap()).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rotation_exact_pseudo_orbits() {
        let s = sys("rotation:5:2");
        for eps in ["0", "1/5", "1/2"] {
            let v = check_shadowing_property(&s, &q("0"), &q(eps), None, CheckOptions::default()).unwrap();
            assert!(v.pass);
            assert!(v.witness.is_none());
        }
    }

    #[test]
    fn cantor_below_min_gap() {
        for k in 1..=3u32 {
            let s = sys(&format!("cantor-identity:{k}"));
            let small = Rational::new(1, 3i64.pow(k));
            let sh = check_shadowing_property(&s, &small, &small, None, CheckOptions::default()).unwrap();
            let sl = check_slimit_property(&s, &small, &small, None, CheckOptions::default()).unwrap();
            assert!(sh.pass && sl.pass, "k = {k}");
        }
    }

    #[test]
    fn parallel_cycles_separates_the_properties() {
        let s = sys("parallel-cycles");
        let one = Rational::one();
        let sh = check_shadowing_property(&s, &one, &one, None, CheckOptions::default()).unwrap();
        assert!(sh.pass);
        let sl = check_slimit_property(&s, &one, &one, None, CheckOptions::default()).unwrap();
        assert!(!sl.pass);
        let w = extract_witness(&sl).unwrap();
        assert_eq!(w, PseudoOrbit::eventually_exact(vec![0, 4], one.clone(), 1));
        assert!(validate_pseudo_orbit(&s, &w).is_ok());
        assert_eq!(is_limit_shadowed(&s, &w, &one).unwrap(), None);
        assert_eq!(extract_witness(&sh), Err(ShadowError::NotFailing));
    }

    #[test]
    fn global_sink_with_large_eps_passes_slimit() {
        // Tent map on 2 cells sends both points to cell 0, a fixed point.
        let s = crate::system::discretize(&crate::system::GridSystem1D::new(
            2,
            crate::system::Geometry::Interval,
            crate::system::SourceMap::Tent,
        ))
        .unwrap();
        let diam = s.diameter();
        for delta in ["0", "1/2", "5"] {
            let v = check_slimit_property(&s, &q(delta), &diam, None, CheckOptions::default()).unwrap();
            assert!(v.pass);
        }
    }

    #[test]
    fn shadowing_failure_witness_ends_at_empty_set() {
        // North-south at a resolution that allows leaving the source, but
        // with ε too small to follow the jump.
        let s = sys("north-south:8");
        let v = check_shadowing_property(&s, &q("1/10"), &q("1/20"), None, CheckOptions::default()).unwrap();
        assert!(!v.pass);
        let w = extract_witness(&v).unwrap();
        assert_eq!(w.points, vec![0, 1]);
        assert!(validate_pseudo_orbit(&s, &w).is_ok());
        assert_eq!(is_shadowed(&s, &w, &q("1/20")).unwrap(), None);
    }

    #[test]
    fn domain_checks() {
        let s = sys("parallel-cycles");
        let one = Rational::one();
        let empty = PointSet::empty(5);
        assert_eq!(
            check_shadowing_property(&s, &one, &one, Some(&empty), CheckOptions::default()),
            Err(ShadowError::EmptyDomain)
        );
        let leaky = PointSet::from_indices(5, [0, 2]);
        assert!(matches!(
            check_shadowing_property(&s, &one, &one, Some(&leaky), CheckOptions::default()),
            Err(ShadowError::DomainNotInvariant(_))
        ));
        let cycle = PointSet::from_indices(5, [3, 4]);
        let v = check_slimit_property(&s, &one, &one, Some(&cycle), CheckOptions::default()).unwrap();
        assert!(v.pass);
    }

    #[test]
    fn state_cap_is_inconclusive() {
        let s = sys("tent:8");
        let opts = CheckOptions {
            state_cap: 3,
            parallel: false,
        };
        let res = check_shadowing_property(&s, &q("1/8"), &q("1/4"), None, opts);
        assert!(matches!(res, Err(ShadowError::Inconclusive { cap: 3, .. })));
    }

    #[test]
    fn parallel_matches_sequential() {
        let s = sys("doubling:8");
        for (d, e) in [("1/8", "1/8"), ("1/4", "1/8"), ("1/8", "3/8")] {
            let a = check_slimit_property(&s, &q(d), &q(e), None, CheckOptions::default()).unwrap();
            let opts = CheckOptions {
                parallel: true,
                ..CheckOptions::default()
            };
            let b = check_slimit_property(&s, &q(d), &q(e), None, opts).unwrap();
            assert_eq!(a, b);
        }
    }
}
