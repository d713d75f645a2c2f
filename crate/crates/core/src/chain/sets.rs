// SPDX-License-Identifier: Apache-2.0

//! Point-set utilities on a finite metric system.

use crate::error::ChainError;
use crate::pointset::PointSet;
use crate::rational::Rational;
use crate::system::FiniteMetricSystem;

/// `d(x, S) = min_{s in S} d(x, s)`; `None` for empty `S`.
pub fn distance_to_set(system: &FiniteMetricSystem, x: usize, set: &PointSet) -> Option<Rational> {
    set.iter().map(|s| system.dist(x, s)).min().cloned()
}

/// `B_r(S) = {x : d(x, S) <= r}`.
pub fn neighborhood(system: &FiniteMetricSystem, set: &PointSet, r: &Rational) -> Result<PointSet, ChainError> {
    if set.is_empty() {
        return Err(ChainError::EmptySet);
    }
    if r.is_negative() {
        return Err(ChainError::Negative(r.clone()));
    }
    Ok(PointSet::from_indices(
        system.len(),
        (0..system.len()).filter(|&x| set.iter().any(|s| system.dist(x, s) <= r)),
    ))
}

pub fn hausdorff_distance(system: &FiniteMetricSystem, a: &PointSet, b: &PointSet) -> Result<Rational, ChainError> {
    if a.is_empty() || b.is_empty() {
        return Err(ChainError::EmptySet);
    }
    let one_sided = |from: &PointSet, to: &PointSet| {
        from.iter()
            .filter_map(|x| distance_to_set(system, x, to))
            .max()
            .unwrap_or_default()
    };
    Ok(one_sided(a, b).max(one_sided(b, a)))
}

/// Minimal distance between two disjoint nonempty sets.
pub fn set_gap(system: &FiniteMetricSystem, a: &PointSet, b: &PointSet) -> Option<Rational> {
    a.iter().filter_map(|x| distance_to_set(system, x, b)).min()
}

/// The periodic cycle that the forward orbit of `x` eventually enters.
pub fn omega_cycle(system: &FiniteMetricSystem, x: usize) -> Result<PointSet, ChainError> {
    if x >= system.len() {
        return Err(ChainError::BadIndex(x));
    }
    // After n steps the orbit is inside its cycle.
    let start = system.iterate(x, system.len());
    let mut cycle = PointSet::empty(system.len());
    let mut p = start;
    loop {
        cycle.insert(p);
        p = system.image(p);
        if p == start {
            break;
        }
    }
    Ok(cycle)
}

/// Greatest forward-invariant subset of `set`: repeatedly drop points whose
/// image leaves the set.
pub fn invariant_core(system: &FiniteMetricSystem, set: &PointSet) -> PointSet {
    let mut core = set.clone();
    let pre = system.preimages();
    let mut work: Vec<usize> = core.iter().filter(|&p| !core.contains(system.image(p))).collect();
    for &p in &work {
        core.remove(p);
    }
    while let Some(p) = work.pop() {
        for &q in &pre[p] {
            if core.contains(q) {
                core.remove(q);
                work.push(q);
            }
        }
    }
    core
}

pub fn is_forward_invariant(system: &FiniteMetricSystem, set: &PointSet) -> bool {
    set.iter().all(|p| set.contains(system.image(p)))
}
