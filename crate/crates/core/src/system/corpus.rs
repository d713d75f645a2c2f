// SPDX-License-Identifier: Apache-2.0

//! Built-in generators.
//!
//! Every generator is addressable by a `name:arg1:arg2` shorthand
//! (`rotation:4:1`, `cantor-identity:2`, `parallel-cycles`, ...).

use std::fmt;

use super::grid::{discretize, Geometry, GridSystem1D, SourceMap};
use super::FiniteMetricSystem;
use crate::error::SystemError;
use crate::rational::Rational;

const MAX_CANTOR_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `Z_n` with the circle metric and `p -> p + k mod n`.
    Rotation { n: usize, k: usize },
    /// Cell-center discretization of `x -> 2x mod 1` on the circle.
    Doubling { n: usize },
    /// Cell-center discretization of the full tent map on `[0,1]`.
    Tent { n: usize },
    /// Circle flow from a source fixed point at 0 to a sink at 1/2.
    NorthSouth { n: usize },
    /// Identity on the left endpoints of the level-`depth` Cantor intervals.
    CantorIdentity { depth: usize },
    /// Five-point system with two 2-cycles and a transient point.
    ParallelCycles,
    /// Two 2-cycles at mutual distance 4.
    TwinCycles,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Rotation { n, k } => write!(f, "rotation:{n}:{k}"),
            Generator::Doubling { n } => write!(f, "doubling:{n}"),
            Generator::Tent { n } => write!(f, "tent:{n}"),
            Generator::NorthSouth { n } => write!(f, "north-south:{n}"),
            Generator::CantorIdentity { depth } => write!(f, "cantor-identity:{depth}"),
            Generator::ParallelCycles => f.write_str("parallel-cycles"),
            Generator::TwinCycles => f.write_str("twin-cycles"),
        }
    }
}

/// Parses the `name:arg1:arg2` shorthand.
pub fn parse_generator(text: &str) -> Result<Generator, SystemError> {
    let mut parts = text.trim().split(':');
    let name = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let nums = |count: usize| -> Result<Vec<usize>, SystemError> {
        if args.len() != count {
            return Err(SystemError::bad_params(
                name,
                format!("expected {count} argument(s), got {}", args.len()),
            ));
        }
        args.iter()
            .map(|a| {
                a.parse::<usize>()
                    .map_err(|_| SystemError::bad_params(name, format!("{a:?} is not a count")))
            })
            .collect()
    };
    let generator = match name {
        "rotation" => {
            let v = nums(2)?;
            Generator::Rotation { n: v[0], k: v[1] }
        }
        "doubling" => Generator::Doubling { n: nums(1)?[0] },
        "tent" => Generator::Tent { n: nums(1)?[0] },
        "north-south" => Generator::NorthSouth { n: nums(1)?[0] },
        "cantor-identity" => Generator::CantorIdentity { depth: nums(1)?[0] },
        "parallel-cycles" => {
            nums(0)?;
            Generator::ParallelCycles
        }
        "twin-cycles" => {
            nums(0)?;
            Generator::TwinCycles
        }
        other => return Err(SystemError::UnknownGenerator(other.to_string())),
    };
    Ok(generator)
}

pub fn build_corpus_system(generator: &Generator) -> Result<FiniteMetricSystem, SystemError> {
    let name = generator.to_string();
    match *generator {
        Generator::Rotation { n, k } => {
            if n == 0 {
                return Err(SystemError::bad_params("rotation", "n must be positive"));
            }
            let dist = circle_table(&(0..n).map(|i| Rational::new(i as i64, n as i64)).collect::<Vec<_>>());
            let map = (0..n).map(|p| (p + k) % n).collect();
            FiniteMetricSystem::new(name, dist, map, true)
        }
        Generator::Doubling { n } => {
            if n == 0 {
                return Err(SystemError::bad_params("doubling", "n must be positive"));
            }
            rename(discretize(&GridSystem1D::new(n, Geometry::Circle, SourceMap::Doubling))?, name)
        }
        Generator::Tent { n } => {
            if n == 0 {
                return Err(SystemError::bad_params("tent", "n must be positive"));
            }
            rename(discretize(&GridSystem1D::new(n, Geometry::Interval, SourceMap::Tent))?, name)
        }
        Generator::NorthSouth { n } => north_south(n, name),
        Generator::CantorIdentity { depth } => {
            if depth > MAX_CANTOR_DEPTH {
                return Err(SystemError::bad_params(
                    "cantor-identity",
                    format!("depth must be at most {MAX_CANTOR_DEPTH}"),
                ));
            }
            let points = cantor_left_endpoints(depth);
            let dist = points
                .iter()
                .map(|x| points.iter().map(|y| (x - y).abs()).collect())
                .collect();
            let map = (0..points.len()).collect();
            FiniteMetricSystem::new(name, dist, map, true)
        }
        Generator::ParallelCycles => parallel_cycles(name),
        Generator::TwinCycles => {
            let declared = [(0, 1, 1), (2, 3, 1), (0, 2, 4), (0, 3, 4), (1, 2, 4), (1, 3, 4)];
            let dist = complete_metric(4, &declared)
                .ok_or_else(|| SystemError::bad_params("twin-cycles", "disconnected"))?;
            FiniteMetricSystem::new(name, dist, vec![1, 0, 3, 2], true)
        }
    }
}

/// The corpus used by sweeps and the acceptance suite. Every member has at
/// most twelve points.
pub fn default_corpus() -> Vec<Generator> {
    vec![
        Generator::CantorIdentity { depth: 1 },
        Generator::CantorIdentity { depth: 2 },
        Generator::CantorIdentity { depth: 3 },
        Generator::Rotation { n: 4, k: 1 },
        Generator::Rotation { n: 5, k: 2 },
        Generator::NorthSouth { n: 8 },
        Generator::ParallelCycles,
        Generator::TwinCycles,
        Generator::Doubling { n: 8 },
        Generator::Tent { n: 8 },
    ]
}

fn rename(sys: FiniteMetricSystem, name: String) -> Result<FiniteMetricSystem, SystemError> {
    Ok(FiniteMetricSystem { name, ..sys })
}

fn circle_table(positions: &[Rational]) -> Vec<Vec<Rational>> {
    positions
        .iter()
        .map(|x| {
            positions
                .iter()
                .map(|y| {
                    let d = (x - y).abs();
                    let wrap = Rational::one() - d.clone();
                    d.min(wrap)
                })
                .collect()
        })
        .collect()
}

fn cantor_left_endpoints(depth: usize) -> Vec<Rational> {
    let mut points = vec![Rational::zero()];
    let third = Rational::new(1, 3);
    let two_thirds = Rational::new(2, 3);
    for _ in 0..depth {
        let left = points.iter().map(|x| x * &third);
        let right = points.iter().map(|x| &two_thirds + &(x * &third));
        points = left.chain(right).collect();
    }
    points
}

/// Points: index 0 is the source at 0, index n/2 the sink at 1/2. Index
/// `k` in `1..n/2` sits at `(2k-1)/2n` and moves one step toward the sink;
/// index `n-k` is its mirror image.
fn north_south(n: usize, name: String) -> Result<FiniteMetricSystem, SystemError> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(SystemError::bad_params("north-south", "n must be even and at least 4"));
    }
    let half = n / 2;
    let denom = 2 * n as i64;
    let positions: Vec<Rational> = (0..n)
        .map(|i| {
            if i == 0 {
                Rational::zero()
            } else if i == half {
                Rational::new(1, 2)
            } else if i < half {
                Rational::new(2 * i as i64 - 1, denom)
            } else {
                let k = (n - i) as i64;
                Rational::one() - Rational::new(2 * k - 1, denom)
            }
        })
        .collect();
    let map = (0..n)
        .map(|i| match i {
            0 => 0,
            i if i == half => half,
            i if i < half => i + 1,
            i => i - 1,
        })
        .collect();
    FiniteMetricSystem::new(name, circle_table(&positions), map, false)
}

/// a=0, c1=1, c2=2, e1=3, e2=4.
fn parallel_cycles(name: String) -> Result<FiniteMetricSystem, SystemError> {
    let declared = [
        (0, 1, 1),
        (0, 3, 2),
        (0, 2, 4),
        (0, 4, 4),
        (1, 2, 4),
        (3, 4, 4),
        (1, 3, 1),
        (2, 4, 1),
        (1, 4, 4),
        (2, 3, 4),
    ];
    let dist = complete_metric(5, &declared)
        .ok_or_else(|| SystemError::bad_params("parallel-cycles", "disconnected"))?;
    FiniteMetricSystem::new(name, dist, vec![2, 2, 1, 4, 3], false)
}

/// Shortest-path completion over declared symmetric edges, so the result
/// satisfies the triangle inequality. `None` when some pair is unconnected.
pub(crate) fn complete_metric(n: usize, declared: &[(usize, usize, i64)]) -> Option<Vec<Vec<Rational>>> {
    let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(Rational::zero());
    }
    for &(i, j, w) in declared {
        let w = Rational::integer(w);
        d[i][j] = Some(w.clone());
        d[j][i] = Some(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (&d[i][k], &d[k][j]) {
                    let via = a + b;
                    if d[i][j].as_ref().is_none_or(|cur| via < *cur) {
                        d[i][j] = Some(via);
                    }
                }
            }
        }
    }
    d.into_iter().map(|row| row.into_iter().collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> FiniteMetricSystem {
        build_corpus_system(&parse_generator(s).unwrap()).unwrap()
    }

    #[test]
    fn cantor_identity_one() {
        let sys = build("cantor-identity:1");
        assert_eq!(sys.len(), 2);
        assert_eq!(sys.map(), &[0, 1]);
        assert_eq!(sys.dist(0, 1), &Rational::new(2, 3));
    }

    #[test]
    fn cantor_identity_sizes_and_gaps() {
        for k in 0..=5usize {
            let sys = build(&format!("cantor-identity:{k}"));
            assert_eq!(sys.len(), 1 << k);
            if k > 0 {
                let min_gap = sys.distance_values()[0].clone();
                assert_eq!(min_gap, Rational::new(2, 3i64.pow(k as u32)));
            }
        }
    }

    #[test]
    fn cantor_two_points() {
        let sys = build("cantor-identity:2");
        assert_eq!(sys.dist(0, 1), &Rational::new(2, 9));
        assert_eq!(sys.dist(1, 2), &Rational::new(4, 9));
        assert_eq!(sys.dist(2, 3), &Rational::new(2, 9));
    }

    #[test]
    fn parallel_cycles_matches_declared_table() {
        let sys = build("parallel-cycles");
        assert_eq!(sys.map(), &[2, 2, 1, 4, 3]);
        let expect = [
            [0, 1, 4, 2, 4],
            [1, 0, 4, 1, 4],
            [4, 4, 0, 4, 1],
            [2, 1, 4, 0, 4],
            [4, 4, 1, 4, 0],
        ];
        for (i, row) in expect.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(sys.dist(i, j), &Rational::integer(v), "d({i},{j})");
            }
        }
    }

    #[test]
    fn rotation_is_a_cycle() {
        let sys = build("rotation:4:1");
        assert_eq!(sys.map(), &[1, 2, 3, 0]);
        assert!(sys.is_invertible());
        assert_eq!(sys.dist(0, 3), &Rational::new(1, 4));
    }

    #[test]
    fn north_south_shape() {
        let sys = build("north-south:8");
        assert_eq!(sys.map(), &[0, 2, 3, 4, 4, 4, 5, 6]);
        assert_eq!(sys.dist(0, 1), &Rational::new(1, 16));
        assert_eq!(sys.dist(0, 7), &Rational::new(1, 16));
        assert_eq!(sys.dist(3, 4), &Rational::new(3, 16));
        assert_eq!(sys.dist(0, 4), &Rational::new(1, 2));
    }

    #[test]
    fn generator_errors() {
        assert!(matches!(parse_generator("nope:3"), Err(SystemError::UnknownGenerator(_))));
        assert!(matches!(parse_generator("rotation:4"), Err(SystemError::BadParams { .. })));
        assert!(matches!(parse_generator("tent:x"), Err(SystemError::BadParams { .. })));
        let bad = parse_generator("north-south:5").unwrap();
        assert!(build_corpus_system(&bad).is_err());
        assert!(build_corpus_system(&Generator::CantorIdentity { depth: 40 }).is_err());
    }

    #[test]
    fn shorthand_round_trips() {
        for g in default_corpus() {
            assert_eq!(parse_generator(&g.to_string()).unwrap(), g);
        }
    }

    #[test]
    fn corpus_members_are_small() {
        for g in default_corpus() {
            let sys = build_corpus_system(&g).unwrap();
            assert!(sys.len() <= 12, "{g}");
        }
    }
}
