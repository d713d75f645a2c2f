// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::merge::merge_sets;
use crate::error::ShadowError;
use crate::pointset::PointSet;
use crate::rational::Rational;
use crate::system::FiniteMetricSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    /// Every step error is at most δ.
    Plain,
    /// Step errors are at most δ before `tail_start` and zero from there
    /// on; the sequence continues as the exact orbit of its last point.
    EventuallyExact,
}

/// A finite pseudo-orbit prefix. Serializes to the pseudo-orbit file format:
/// `{"points": [..], "kind": "plain" | "eventually_exact", "delta": "p/q", "tail_start": t}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoOrbit {
    pub points: Vec<usize>,
    pub kind: OrbitKind,
    pub delta: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_start: Option<usize>,
}

impl PseudoOrbit {
    pub fn plain(points: Vec<usize>, delta: Rational) -> Self {
        PseudoOrbit {
            points,
            kind: OrbitKind::Plain,
            delta,
            tail_start: None,
        }
    }

    pub fn eventually_exact(points: Vec<usize>, delta: Rational, tail_start: usize) -> Self {
        PseudoOrbit {
            points,
            kind: OrbitKind::EventuallyExact,
            delta,
            tail_start: Some(tail_start),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `d(f(x_i), x_{i+1})` for each consecutive pair.
    pub fn errors(&self, system: &FiniteMetricSystem) -> Vec<Rational> {
        self.points
            .windows(2)
            .map(|w| system.dist(system.image(w[0]), w[1]).clone())
            .collect()
    }

    /// The stored prefix followed by `extra` further points of the exact tail.
    pub fn unrolled(&self, system: &FiniteMetricSystem, extra: usize) -> Vec<usize> {
        let mut pts = self.points.clone();
        if self.kind == OrbitKind::EventuallyExact {
            if let Some(&last) = pts.last() {
                let mut p = last;
                for _ in 0..extra {
                    p = system.image(p);
                    pts.push(p);
                }
            }
        }
        pts
    }
}

/// Checks the kind-specific error bounds exactly; reports the first bad position.
pub fn validate_pseudo_orbit(system: &FiniteMetricSystem, po: &PseudoOrbit) -> Result<(), ShadowError> {
    let invalid = |position: usize, reason: String| ShadowError::InvalidOrbit { position, reason };
    if po.points.is_empty() {
        return Err(invalid(0, "pseudo-orbit is empty".into()));
    }
    if let Some(i) = po.points.iter().position(|&p| p >= system.len()) {
        return Err(invalid(i, format!("point index {} out of range", po.points[i])));
    }
    if po.delta.is_negative() {
        return Err(invalid(0, "negative delta".into()));
    }
    let tail = match (po.kind, po.tail_start) {
        (OrbitKind::Plain, None) => None,
        (OrbitKind::Plain, Some(_)) => {
            return Err(invalid(0, "plain pseudo-orbits carry no tail_start".into()))
        }
        (OrbitKind::EventuallyExact, None) => {
            return Err(invalid(0, "eventually-exact pseudo-orbit needs tail_start".into()))
        }
        (OrbitKind::EventuallyExact, Some(t)) if t >= po.points.len() => {
            return Err(invalid(t, "tail_start lies beyond the stored points".into()))
        }
        (OrbitKind::EventuallyExact, Some(t)) => Some(t),
    };
    for (i, e) in po.errors(system).iter().enumerate() {
        if tail.is_some_and(|t| i >= t) {
            if !e.is_zero() {
                return Err(invalid(i, format!("error {e} inside the exact tail")));
            }
        } else if e > &po.delta {
            return Err(invalid(i, format!("error {e} exceeds delta {}", po.delta)));
        }
    }
    Ok(())
}

/// `Y_0 = B_ε(x_0)`, `Y_{i+1} = f(Y_i) ∩ B_ε(x_{i+1})`: exactly the time-`i`
/// positions of points that ε-track the prefix up to `i`.
pub fn shadow_sets(system: &FiniteMetricSystem, points: &[usize], eps: &Rational) -> Vec<PointSet> {
    shadow_sets_within(system, points, eps, None)
}

/// [`shadow_sets`] with shadows confined to a forward-invariant domain.
pub fn shadow_sets_within(
    system: &FiniteMetricSystem,
    points: &[usize],
    eps: &Rational,
    domain: Option<&PointSet>,
) -> Vec<PointSet> {
    let mut out: Vec<PointSet> = Vec::with_capacity(points.len());
    for &x in points {
        let mut ball = system.ball(x, eps);
        if let Some(d) = domain {
            ball.intersect_with(d);
        }
        let next = match out.last() {
            None => ball,
            Some(prev) => system.image_set(prev).intersection(&ball),
        };
        out.push(next);
    }
    out
}

/// Walks back from `end` (a member of the last set) choosing the
/// smallest-index preimage at each step; returns the time-0 point.
fn backtrack(system: &FiniteMetricSystem, sets: &[PointSet], end: usize) -> usize {
    let mut y = end;
    for set in sets[..sets.len() - 1].iter().rev() {
        y = set
            .iter()
            .find(|&z| system.image(z) == y)
            .expect("shadow sets are closed under preimages");
    }
    y
}

/// A point whose orbit stays within ε of every stored point, if one exists.
pub fn is_shadowed(system: &FiniteMetricSystem, po: &PseudoOrbit, eps: &Rational) -> Result<Option<usize>, ShadowError> {
    is_shadowed_within(system, po, eps, None)
}

pub fn is_shadowed_within(
    system: &FiniteMetricSystem,
    po: &PseudoOrbit,
    eps: &Rational,
    domain: Option<&PointSet>,
) -> Result<Option<usize>, ShadowError> {
    validate_pseudo_orbit(system, po)?;
    let sets = shadow_sets_within(system, &po.points, eps, domain);
    Ok(sets
        .last()
        .and_then(PointSet::first)
        .map(|end| backtrack(system, &sets, end)))
}

/// A point that ε-tracks the prefix and whose orbit eventually coincides
/// with the exact tail, if one exists.
pub fn is_limit_shadowed(
    system: &FiniteMetricSystem,
    po: &PseudoOrbit,
    eps: &Rational,
) -> Result<Option<usize>, ShadowError> {
    is_limit_shadowed_within(system, po, eps, None)
}

pub fn is_limit_shadowed_within(
    system: &FiniteMetricSystem,
    po: &PseudoOrbit,
    eps: &Rational,
    domain: Option<&PointSet>,
) -> Result<Option<usize>, ShadowError> {
    if po.kind != OrbitKind::EventuallyExact {
        return Err(ShadowError::KindMismatch);
    }
    validate_pseudo_orbit(system, po)?;
    let t = po.tail_start.expect("validated");
    let sets = shadow_sets_within(system, &po.points[..=t], eps, domain);
    let merge = merge_sets(system, eps);
    let target = sets[t].intersection(merge.of(po.points[t]));
    Ok(target.first().map(|end| backtrack(system, &sets, end)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{build_corpus_system, parse_generator};

    fn pc() -> FiniteMetricSystem {
        build_corpus_system(&parse_generator("parallel-cycles").unwrap()).unwrap()
    }

    const A: usize = 0;
    const C1: usize = 1;
    const C2: usize = 2;
    const E1: usize = 3;
    const E2: usize = 4;

    #[test]
    fn validation_examples() {
        let s = pc();
        let orbit = PseudoOrbit::plain(vec![A, C2, C1], Rational::zero());
        assert!(validate_pseudo_orbit(&s, &orbit).is_ok());
        assert!(validate_pseudo_orbit(&s, &PseudoOrbit::plain(vec![A, E2], Rational::one())).is_ok());
        let err = validate_pseudo_orbit(&s, &PseudoOrbit::plain(vec![A, E1], Rational::one())).unwrap_err();
        assert!(matches!(err, ShadowError::InvalidOrbit { position: 0, .. }));
    }

    #[test]
    fn eventually_exact_validation() {
        let s = pc();
        let ok = PseudoOrbit::eventually_exact(vec![A, E2, E1, E2], Rational::one(), 1);
        assert!(validate_pseudo_orbit(&s, &ok).is_ok());
        let jump_in_tail = PseudoOrbit::eventually_exact(vec![A, E2, C1], Rational::one(), 1);
        assert!(matches!(
            validate_pseudo_orbit(&s, &jump_in_tail),
            Err(ShadowError::InvalidOrbit { position: 1, .. })
        ));
        let beyond = PseudoOrbit::eventually_exact(vec![A, E2], Rational::one(), 2);
        assert!(validate_pseudo_orbit(&s, &beyond).is_err());
        assert!(validate_pseudo_orbit(&s, &PseudoOrbit::plain(vec![], Rational::one())).is_err());
        assert!(validate_pseudo_orbit(&s, &PseudoOrbit::plain(vec![9], Rational::one())).is_err());
    }

    #[test]
    fn shadow_sets_hand_computed() {
        let s = pc();
        let sets = shadow_sets(&s, &[A, E2, E1], &Rational::one());
        let v: Vec<Vec<usize>> = sets.iter().map(PointSet::to_vec).collect();
        assert_eq!(v, vec![vec![A, C1], vec![C2], vec![C1]]);
    }

    #[test]
    fn shadow_sets_identity_single_point() {
        let s = build_corpus_system(&parse_generator("cantor-identity:2").unwrap()).unwrap();
        let r = Rational::new(1, 4);
        assert_eq!(shadow_sets(&s, &[1], &r), vec![s.ball(1, &r)]);
    }

    #[test]
    fn shadow_sets_full_balls_never_empty() {
        let s = pc();
        let diam = s.diameter();
        for set in shadow_sets(&s, &[A, E2, E1, C1, E2], &diam) {
            assert!(!set.is_empty());
        }
    }

    #[test]
    fn is_shadowed_examples() {
        let s = pc();
        let orbit = PseudoOrbit::plain(vec![E1, E2, E1], Rational::zero());
        assert_eq!(is_shadowed(&s, &orbit, &Rational::zero()).unwrap(), Some(E1));
        let po = PseudoOrbit::plain(vec![A, E2, E1], Rational::one());
        // Y = [{a, c1}, {c2}, {c1}]; c2 has preimages a and c1, smallest is a.
        assert_eq!(is_shadowed(&s, &po, &Rational::one()).unwrap(), Some(A));
        let po = PseudoOrbit::plain(vec![A, E2], Rational::one());
        assert_eq!(is_shadowed(&s, &po, &Rational::new(1, 2)).unwrap(), None);
    }

    #[test]
    fn is_limit_shadowed_examples() {
        let s = pc();
        let orbit = PseudoOrbit::eventually_exact(vec![A, C2, C1], Rational::zero(), 0);
        assert_eq!(is_limit_shadowed(&s, &orbit, &Rational::zero()).unwrap(), Some(A));
        let po = PseudoOrbit::eventually_exact(vec![A, E2], Rational::one(), 1);
        assert_eq!(is_limit_shadowed(&s, &po, &Rational::one()).unwrap(), None);
        // With ε = 4 every point is within ε; e1 maps onto e2 exactly.
        assert_eq!(is_limit_shadowed(&s, &po, &Rational::integer(4)).unwrap(), Some(E1));
        let plain = PseudoOrbit::plain(vec![A, E2], Rational::one());
        assert_eq!(is_limit_shadowed(&s, &plain, &Rational::one()), Err(ShadowError::KindMismatch));
    }

    #[test]
    fn file_format() {
        let po = PseudoOrbit::eventually_exact(vec![0, 4], Rational::one(), 1);
        let json = serde_json::to_string(&po).unwrap();
        assert_eq!(json, r#"{"points":[0,4],"kind":"eventually_exact","delta":"1","tail_start":1}"#);
        let back: PseudoOrbit =
            serde_json::from_str(r#"{"points":[0,2],"kind":"plain","delta":"1/2"}"#).unwrap();
        assert_eq!(back, PseudoOrbit::plain(vec![0, 2], Rational::new(1, 2)));
    }
}
