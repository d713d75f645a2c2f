// SPDX-License-Identifier: Apache-2.0

//! Cell-center discretization of one-dimensional maps on `[0,1]` or the circle.

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::FiniteMetricSystem;
use crate::error::SystemError;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Interval,
    /// `[0,1)` with endpoints identified.
    Circle,
}

/// Continuous source maps that can be evaluated exactly on rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceMap {
    Identity,
    /// `x -> 2x mod 1`.
    Doubling,
    /// `x -> 1 - |2x - 1|`.
    Tent,
    /// `x -> x + alpha mod 1`.
    Rotation(Rational),
}

impl SourceMap {
    fn eval(&self, x: &Rational) -> Rational {
        match self {
            SourceMap::Identity => x.clone(),
            SourceMap::Doubling => frac(&x.double()),
            SourceMap::Tent => {
                if x <= &Rational::new(1, 2) {
                    x.double()
                } else {
                    Rational::integer(2) - x.double()
                }
            }
            SourceMap::Rotation(alpha) => frac(&(x + alpha)),
        }
    }

    fn label(&self) -> String {
        match self {
            SourceMap::Identity => "identity".into(),
            SourceMap::Doubling => "doubling".into(),
            SourceMap::Tent => "tent".into(),
            SourceMap::Rotation(a) => format!("rotation[{a}]"),
        }
    }
}

fn frac(x: &Rational) -> Rational {
    Rational::from_big(x.as_big() - x.as_big().floor())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSystem1D {
    pub cells: usize,
    pub geometry: Geometry,
    pub source: SourceMap,
}

impl GridSystem1D {
    pub fn new(cells: usize, geometry: Geometry, source: SourceMap) -> Self {
        GridSystem1D {
            cells,
            geometry,
            source,
        }
    }

    /// Center of cell `i`: `(2i + 1) / 2N`.
    pub fn center(&self, i: usize) -> Rational {
        Rational::new(2 * i as i64 + 1, 2 * self.cells as i64)
    }

    pub fn quantization_bound(&self) -> Rational {
        Rational::new(1, 2 * self.cells as i64)
    }

    pub fn distance(&self, x: &Rational, y: &Rational) -> Rational {
        let d = (x - y).abs();
        match self.geometry {
            Geometry::Interval => d,
            Geometry::Circle => {
                let wrap = Rational::one() - d.clone();
                d.min(wrap)
            }
        }
    }

    /// Index of the center nearest to `y`, ties to the smaller index.
    pub fn nearest_center(&self, y: &Rational) -> usize {
        let n = self.cells as i64;
        let scaled = y.as_big() * num_bigint::BigInt::from(n);
        let cell = scaled.floor().to_integer().to_i64().unwrap_or(0);
        let mut candidates: Vec<usize> = (cell - 1..=cell + 1)
            .filter_map(|c| match self.geometry {
                Geometry::Interval => (0..n).contains(&c).then_some(c as usize),
                Geometry::Circle => Some(c.mod_floor(&n) as usize),
            })
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let mut best = candidates[0];
        let mut best_d = self.distance(&self.center(best), y);
        for &c in &candidates[1..] {
            let d = self.distance(&self.center(c), y);
            if d < best_d {
                best = c;
                best_d = d;
            }
        }
        best
    }
}

/// Builds the finite system on cell centers, with the map given by
/// nearest-center rounding of the source map.
pub fn discretize(grid: &GridSystem1D) -> Result<FiniteMetricSystem, SystemError> {
    if grid.cells == 0 {
        return Err(SystemError::bad_params("grid", "needs at least one cell"));
    }
    let centers: Vec<Rational> = (0..grid.cells).map(|i| grid.center(i)).collect();
    let dist = centers
        .iter()
        .map(|x| centers.iter().map(|y| grid.distance(x, y)).collect())
        .collect();
    let map = centers
        .iter()
        .map(|c| {
            let mut y = grid.source.eval(c);
            if grid.geometry == Geometry::Circle {
                y = frac(&y);
            }
            grid.nearest_center(&y)
        })
        .collect();
    let name = format!(
        "{}:{}:{}",
        grid.source.label(),
        grid.cells,
        match grid.geometry {
            Geometry::Interval => "interval",
            Geometry::Circle => "circle",
        }
    );
    Ok(FiniteMetricSystem::new(name, dist, map, false)?.with_quantization(grid.quantization_bound()))
}
