// SPDX-License-Identifier: Apache-2.0

//! Chain recurrence at a fixed resolution δ.
//!
//! `x ->_δ y` is reachability in the [`DeltaGraph`]; the chain recurrent set
//! is the set of points on directed cycles, and its classes are the strongly
//! connected components restricted to it. A [`DeltaLadder`] tracks how the
//! classes split as δ decreases.

mod decompose;
mod export;
mod graph;
mod ladder;
mod sets;

pub use decompose::{ChainClass, ChainDecomposition};
pub use export::{to_dot, ClassReport, DecompositionReport};
pub use graph::DeltaGraph;
pub use ladder::{functional_threshold, DeltaLadder};
pub use sets::{
    distance_to_set, hausdorff_distance, invariant_core, is_forward_invariant, neighborhood,
    omega_cycle, set_gap,
};

use crate::error::ChainError;
use crate::rational::Rational;
use crate::system::FiniteMetricSystem;

/// Convenience: build the δ-graph and decompose it.
pub fn decompose(system: &FiniteMetricSystem, delta: &Rational) -> Result<ChainDecomposition, ChainError> {
    Ok(ChainDecomposition::new(&DeltaGraph::new(system, delta)?))
}
