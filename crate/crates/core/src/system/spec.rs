// SPDX-License-Identifier: Apache-2.0

//! JSON system descriptions.
//!
//! ```json
//! {"n": 2, "dist": [["0", "1"], ["1", "0"]], "map": [1, 0], "invertible": true}
//! {"generator": "rotation", "params": {"n": 4, "k": 1}}
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::corpus::{build_corpus_system, parse_generator, Generator};
use super::FiniteMetricSystem;
use crate::error::{SystemError, Violation};
use crate::rational::Rational;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Explicit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        n: usize,
        dist: Vec<Vec<Rational>>,
        map: Vec<i64>,
        #[serde(default)]
        invertible: bool,
    },
    Generator {
        generator: String,
        #[serde(default)]
        params: serde_json::Map<String, Value>,
    },
}

impl SystemSpec {
    pub fn explicit(system: &FiniteMetricSystem) -> Self {
        SystemSpec::Explicit {
            name: Some(system.name().to_string()),
            n: system.len(),
            dist: system.distance_rows(),
            map: system.map().iter().map(|&i| i as i64).collect(),
            invertible: system.is_invertible(),
        }
    }

    /// Validates the description into a system.
    pub fn validate(&self) -> Result<FiniteMetricSystem, SystemError> {
        match self {
            SystemSpec::Explicit {
                name,
                n,
                dist,
                map,
                invertible,
            } => {
                let mut violations = Vec::new();
                if map.len() != *n {
                    violations.push(Violation::Shape(format!(
                        "map has {} entries but n = {n}",
                        map.len()
                    )));
                    return Err(SystemError::Invalid(violations));
                }
                let mut total = Vec::with_capacity(*n);
                for (i, &j) in map.iter().enumerate() {
                    if j < 0 || j as usize >= *n {
                        violations.push(Violation::MapNotTotal(i));
                        total.push(0);
                    } else {
                        total.push(j as usize);
                    }
                }
                if !violations.is_empty() {
                    return Err(SystemError::Invalid(violations));
                }
                let name = name.clone().unwrap_or_else(|| "explicit".to_string());
                FiniteMetricSystem::new(name, dist.clone(), total, *invertible)
            }
            SystemSpec::Generator { generator, params } => {
                build_corpus_system(&generator_from_params(generator, params)?)
            }
        }
    }
}

fn generator_from_params(
    name: &str,
    params: &serde_json::Map<String, Value>,
) -> Result<Generator, SystemError> {
    let get = |key: &str| -> Result<usize, SystemError> {
        params
            .get(key)
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| SystemError::bad_params(name, format!("missing integer parameter {key:?}")))
    };
    let shorthand = match name {
        "rotation" => format!("rotation:{}:{}", get("n")?, get("k")?),
        "doubling" | "tent" | "north-south" => format!("{name}:{}", get("n")?),
        "cantor-identity" => format!("cantor-identity:{}", get("depth")?),
        "parallel-cycles" | "twin-cycles" => name.to_string(),
        other => return Err(SystemError::UnknownGenerator(other.to_string())),
    };
    parse_generator(&shorthand)
}

/// Parses and validates a JSON system description.
pub fn load_system(json: &str) -> Result<FiniteMetricSystem, SystemError> {
    let spec: SystemSpec =
        serde_json::from_str(json).map_err(|e| SystemError::Format(e.to_string()))?;
    spec.validate()
}
