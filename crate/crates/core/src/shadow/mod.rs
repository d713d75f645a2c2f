// SPDX-License-Identifier: Apache-2.0

//! Pseudo-orbits and the shadowing decision procedures.
//!
//! On a finite space a step error sequence that tends to zero is eventually
//! zero, so δ-limit-pseudo orbits are exactly the eventually-exact ones: a
//! δ-chain prefix followed by the true orbit of its last point. Likewise a
//! tracking error that tends to zero means the shadow's orbit eventually
//! coincides with the pseudo-orbit's tail.

mod automaton;
mod merge;
mod oracle;
mod orbit;

pub use automaton::{
    check_property, check_shadowing_property, check_slimit_property, extract_witness,
    CheckOptions, Property, ShadowState, ShadowVerdict, DEFAULT_STATE_CAP,
};
pub use merge::{merge_sets, MergeSet};
pub use oracle::{brute_force_oracle, OracleVerdict, ORACLE_MAX_LEN, ORACLE_MAX_POINTS};
pub use orbit::{
    is_limit_shadowed, is_limit_shadowed_within, is_shadowed, is_shadowed_within, shadow_sets,
    shadow_sets_within, validate_pseudo_orbit, OrbitKind, PseudoOrbit,
};

use crate::error::ShadowError;
use crate::pointset::PointSet;
use crate::rational::Rational;
use crate::system::FiniteMetricSystem;

/// Re-checks a witness with the per-orbit checker for its property: true
/// when it is a valid pseudo-orbit inside `domain` that no point of
/// `domain` shadows.
pub fn witness_is_genuine(
    system: &FiniteMetricSystem,
    property: Property,
    witness: &PseudoOrbit,
    eps: &Rational,
    domain: Option<&PointSet>,
) -> Result<bool, ShadowError> {
    validate_pseudo_orbit(system, witness)?;
    if let Some(d) = domain {
        if witness.points.iter().any(|&p| !d.contains(p)) {
            return Ok(false);
        }
    }
    Ok(match property {
        Property::Shadowing => is_shadowed_within(system, witness, eps, domain)?.is_none(),
        Property::Slimit => is_limit_shadowed_within(system, witness, eps, domain)?.is_none(),
    })
}
