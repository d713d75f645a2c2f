// SPDX-License-Identifier: Apache-2.0

//! Exact chain recurrence and shadowing analysis for finite metric
//! dynamical systems.
//!
//! A system is a finite point set with an exact rational metric and a
//! self-map ([`system`]). At a resolution δ the [`chain`] module computes
//! δ-chains, the chain recurrent set, its classes and their order. The
//! [`shadow`] module decides whether every δ-pseudo orbit is ε-shadowed
//! (and the s-limit variant), producing canonical counterexample
//! pseudo-orbits on failure. [`verify`] runs finite-scale analogs of the
//! structural results relating s-limit shadowing to chain classes with the
//! shadowing property.

pub mod chain;
pub mod error;
pub mod pointset;
pub mod rational;
pub mod shadow;
pub mod system;
pub mod verify;

pub use chain::{ChainClass, ChainDecomposition, DeltaGraph, DeltaLadder};
pub use error::{ChainError, ShadowError, SystemError, VerifyError};
pub use pointset::PointSet;
pub use rational::Rational;
pub use shadow::{CheckOptions, Property, PseudoOrbit, ShadowVerdict};
pub use system::{FiniteMetricSystem, Generator, SystemSpec};
