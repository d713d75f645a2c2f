// SPDX-License-Identifier: Apache-2.0

//! JSON and DOT renderings of a decomposition.

use std::fmt::Write as _;

use serde::Serialize;

use super::decompose::ChainDecomposition;
use crate::pointset::PointSet;
use crate::rational::Rational;

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub id: usize,
    pub points: PointSet,
    pub terminal: bool,
    pub initial: bool,
    pub separation: Option<Rational>,
    pub core: PointSet,
    pub degenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub system: String,
    pub delta: Rational,
    pub cr_size: usize,
    pub classes: Vec<ClassReport>,
    /// `[i, j]`: class `i` δ-reaches class `j`.
    pub order: Vec<[usize; 2]>,
    pub maximal: Vec<usize>,
}

impl DecompositionReport {
    pub fn new(system: &str, dec: &ChainDecomposition) -> Self {
        DecompositionReport {
            system: system.to_string(),
            delta: dec.delta().clone(),
            cr_size: dec.chain_recurrent_set().len(),
            classes: dec
                .classes()
                .iter()
                .map(|c| ClassReport {
                    id: c.id,
                    points: c.points.clone(),
                    terminal: c.terminal,
                    initial: c.initial,
                    separation: c.separation.clone(),
                    core: c.core.clone(),
                    degenerate: c.is_degenerate(),
                })
                .collect(),
            order: dec.order_pairs().into_iter().map(|(i, j)| [i, j]).collect(),
            maximal: dec.maximal_classes(),
        }
    }
}

/// Condensation digraph, one node per class. Classes with separation above
/// `isolation_radius` are tagged isolated.
pub fn to_dot(dec: &ChainDecomposition, isolation_radius: &Rational) -> String {
    let maximal = dec.maximal_classes();
    let isolated = dec.isolated_classes(isolation_radius);
    let mut out = String::from("digraph condensation {\n");
    let _ = writeln!(out, "  label=\"delta = {}\";", dec.delta());
    for c in dec.classes() {
        let mut flags = Vec::new();
        if c.terminal {
            flags.push("terminal");
        }
        if c.initial {
            flags.push("initial");
        }
        if maximal.contains(&c.id) {
            flags.push("maximal");
        }
        if isolated.contains(&c.id) {
            flags.push("isolated");
        }
        if c.is_degenerate() {
            flags.push("degenerate");
        }
        let _ = writeln!(
            out,
            "  c{} [label=\"C{} size={}\\n{}\"];",
            c.id,
            c.id,
            c.points.len(),
            flags.join(" ")
        );
    }
    for (i, j) in dec.order_pairs() {
        let _ = writeln!(out, "  c{i} -> c{j};");
    }
    out.push_str("}\n");
    out
}
