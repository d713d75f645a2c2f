// SPDX-License-Identifier: Apache-2.0

//! Bounded brute-force oracle for the shadowing checks.
//!
//! Enumerates δ-chains of up to `max_len` points in length-then-lexicographic
//! order and decides each one directly: for every candidate start point `x`
//! it evaluates `d(f^i(x), x_i)` from a precomputed orbit table, and for the
//! s-limit variant it simulates `f^i(x)` against the exact tail forward
//! until the two orbits meet, drift apart, or provably cycle.
//!
//! Two prefixes of equal length ending at the same point with the same
//! surviving start points have identical futures, so only the
//! lexicographically first of them is extended. This keeps the search
//! exhaustive while staying tractable at desk scale.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::automaton::Property;
use super::orbit::PseudoOrbit;
use crate::error::ShadowError;
use crate::pointset::PointSet;
use crate::rational::Rational;
use crate::system::FiniteMetricSystem;

pub const ORACLE_MAX_POINTS: usize = 12;
pub const ORACLE_MAX_LEN: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub property: Property,
    pub pass: bool,
    /// Shortest, then lexicographically smallest, failing prefix.
    pub witness: Option<PseudoOrbit>,
    pub max_len: usize,
    pub prefixes_examined: usize,
}

struct Chain {
    points: Vec<usize>,
    survivors: Vec<usize>,
}

pub fn brute_force_oracle(
    system: &FiniteMetricSystem,
    property: Property,
    delta: &Rational,
    eps: &Rational,
    domain: Option<&PointSet>,
    max_len: usize,
) -> Result<OracleVerdict, ShadowError> {
    let n = system.len();
    if n > ORACLE_MAX_POINTS {
        return Err(ShadowError::TooLarge(format!(
            "{n} points exceeds the oracle limit of {ORACLE_MAX_POINTS}"
        )));
    }
    if max_len == 0 || max_len > ORACLE_MAX_LEN {
        return Err(ShadowError::TooLarge(format!(
            "max_len must be between 1 and {ORACLE_MAX_LEN}"
        )));
    }
    let in_domain = |p: usize| domain.is_none_or(|d| d.contains(p));
    if !(0..n).any(in_domain) {
        return Err(ShadowError::EmptyDomain);
    }

    // orbit[x][i] = f^i(x)
    let orbit: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let mut row = vec![x];
            for _ in 1..max_len {
                let last = *row.last().unwrap();
                row.push(system.image(last));
            }
            row
        })
        .collect();

    let mut merge_memo: HashMap<(usize, usize), bool> = HashMap::new();
    let mut merges = |u: usize, v: usize| -> bool {
        *merge_memo.entry((u, v)).or_insert_with(|| {
            let (mut a, mut b) = (u, v);
            // The pair orbit repeats within n^2 steps.
            for _ in 0..=n * n {
                if a == b {
                    return true;
                }
                if system.dist(a, b) > eps {
                    return false;
                }
                a = system.image(a);
                b = system.image(b);
            }
            false
        })
    };

    let make_witness = |points: Vec<usize>| {
        let t = points.len() - 1;
        match property {
            Property::Shadowing => PseudoOrbit::plain(points, delta.clone()),
            Property::Slimit => PseudoOrbit::eventually_exact(points, delta.clone(), t),
        }
    };

    let mut examined = 0;
    let mut level: Vec<Chain> = Vec::new();
    for x0 in (0..n).filter(|&p| in_domain(p)) {
        let survivors = (0..n)
            .filter(|&x| in_domain(x) && system.dist(x, x0) <= eps)
            .collect();
        level.push(Chain {
            points: vec![x0],
            survivors,
        });
    }

    for len in 1..=max_len {
        let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
        let mut kept = Vec::new();
        for chain in level {
            let last = *chain.points.last().unwrap();
            if !seen.insert((last, chain.survivors.clone())) {
                continue;
            }
            examined += 1;
            let failed = match property {
                Property::Shadowing => chain.survivors.is_empty(),
                Property::Slimit => !chain
                    .survivors
                    .iter()
                    .any(|&x| merges(orbit[x][len - 1], last)),
            };
            if failed {
                return Ok(OracleVerdict {
                    property,
                    pass: false,
                    witness: Some(make_witness(chain.points)),
                    max_len,
                    prefixes_examined: examined,
                });
            }
            kept.push(chain);
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for chain in kept {
            let last = *chain.points.last().unwrap();
            let target = system.image(last);
            for q in (0..n).filter(|&q| in_domain(q) && system.dist(target, q) <= delta) {
                let survivors = chain
                    .survivors
                    .iter()
                    .copied()
                    .filter(|&x| system.dist(orbit[x][len], q) <= eps)
                    .collect();
                let mut points = chain.points.clone();
                points.push(q);
                next.push(Chain { points, survivors });
            }
        }
        level = next;
    }

    Ok(OracleVerdict {
        property,
        pass: true,
        witness: None,
        max_len,
        prefixes_examined: examined,
    })
}
