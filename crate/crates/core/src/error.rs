// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseRationalError(pub String);

/// Which metric axiom a distance table breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricAxiom {
    Identity,
    Positivity,
    Symmetry,
    Triangle,
}

impl fmt::Display for MetricAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricAxiom::Identity => "identity",
            MetricAxiom::Positivity => "positivity",
            MetricAxiom::Symmetry => "symmetry",
            MetricAxiom::Triangle => "triangle",
        })
    }
}

/// One failed check found while validating a system description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Metric {
        axiom: MetricAxiom,
        indices: Vec<usize>,
    },
    MapNotTotal(usize),
    NotBijective,
    Shape(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Metric { axiom, indices } => {
                let idx: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
                write!(f, "metric violation ({axiom}) at ({})", idx.join(","))
            }
            Violation::MapNotTotal(i) => write!(f, "map is not total: entry {i} is out of range"),
            Violation::NotBijective => f.write_str("map is flagged invertible but is not a bijection"),
            Violation::Shape(msg) => f.write_str(msg),
        }
    }
}

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("invalid system: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("bad parameters for {generator}: {reason}")]
    BadParams { generator: String, reason: String },
    #[error("malformed system description: {0}")]
    Format(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

impl SystemError {
    pub(crate) fn bad_params(generator: &str, reason: impl Into<String>) -> Self {
        SystemError::BadParams {
            generator: generator.to_string(),
            reason: reason.into(),
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("point set is empty")]
    EmptySet,
    #[error("resolutions must be strictly decreasing and nonnegative (offending entry {0})")]
    NotDecreasing(usize),
    #[error("parameter must be nonnegative, got {0}")]
    Negative(Rational),
    #[error("point index {0} out of range")]
    BadIndex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShadowError {
    #[error("pseudo-orbit is invalid at position {position}: {reason}")]
    InvalidOrbit { position: usize, reason: String },
    #[error("operation needs an eventually-exact pseudo-orbit")]
    KindMismatch,
    #[error("domain is empty")]
    EmptyDomain,
    #[error("domain is not forward-invariant (point {0} leaves it)")]
    DomainNotInvariant(usize),
    #[error("inconclusive: state cap of {cap} reached after exploring {explored} states")]
    Inconclusive { cap: usize, explored: usize },
    #[error("verdict passed; there is no witness to extract")]
    NotFailing,
    #[error("brute-force oracle refused: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("system is not invertible")]
    NotInvertible,
    #[error("fine resolution {fine} exceeds coarse resolution {coarse}")]
    BadResolutions { coarse: Box<Rational>, fine: Box<Rational> },
    #[error(transparent)]
    Shadow(#[from] ShadowError),
}
