// SPDX-License-Identifier: Apache-2.0

//! Plain-text renderings for `--format table`.

use std::fmt::Write as _;

use chainscope_core::verify::{HarnessReport, Outcome};
use chainscope_core::{ChainDecomposition, PointSet, PseudoOrbit, Rational, ShadowVerdict};

fn set(s: &PointSet) -> String {
    let items: Vec<String> = s.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn points(p: &[usize]) -> String {
    let items: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    items.join(" ")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

pub fn decomposition(system: &str, dec: &ChainDecomposition) -> String {
    let maximal = dec.maximal_classes();
    let mut out = String::new();
    let _ = writeln!(out, "system {system}  delta {}  cr {}", dec.delta(), dec.chain_recurrent_set().len());
    let _ = writeln!(out, "{:<6}{:<6}{:<10}{:<10}{:<10}{:<12}points", "class", "size", "terminal", "initial", "maximal", "separation");
    for c in dec.classes() {
        let _ = writeln!(
            out,
            "{:<6}{:<6}{:<10}{:<10}{:<10}{:<12}{}",
            c.id,
            c.points.len(),
            c.terminal,
            c.initial,
            maximal.contains(&c.id),
            opt(c.separation.as_ref()),
            set(&c.points)
        );
    }
    for (i, j) in dec.order_pairs() {
        let _ = writeln!(out, "order {i} -> {j}");
    }
    out
}

pub fn verdict(system: &str, v: &ShadowVerdict) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "system {system}  property {}  delta {}  eps {}",
        v.property, v.delta, v.eps
    );
    let _ = writeln!(out, "pass {}  states {}", v.pass, v.states_explored);
    if let Some(w) = &v.witness {
        let _ = writeln!(out, "witness {}", witness(w));
    }
    out
}

fn witness(w: &PseudoOrbit) -> String {
    match w.tail_start {
        Some(t) => format!("{} (exact from {t})", points(&w.points)),
        None => points(&w.points),
    }
}

pub fn ladder(
    system: &str,
    deltas: &[Rational],
    counts: &[usize],
    refinement: &[Vec<Option<usize>>],
    threshold: Option<&Rational>,
    stable: Option<usize>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "system {system}  threshold {}  stable level {}", opt(threshold), opt(stable));
    for (k, (d, c)) in deltas.iter().zip(counts).enumerate() {
        let parents = match k {
            0 => String::new(),
            _ => {
                let p: Vec<String> = refinement[k - 1].iter().map(|x| opt(*x)).collect();
                format!("  parents {}", p.join(" "))
            }
        };
        let _ = writeln!(out, "level {k}  delta {d}  classes {c}{parents}");
    }
    out
}

pub fn harness(r: &HarnessReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "system {}  holds {}  fails {}  vacuous {}",
        r.system, r.summary.holds, r.summary.fails, r.summary.vacuous
    );
    for e in r.results.iter().filter(|e| e.outcome == Outcome::Fails) {
        let _ = writeln!(
            out,
            "  FAIL {:?} coarse {} delta {} eps {}: {}",
            e.check,
            opt(e.delta_coarse.as_ref()),
            e.delta,
            e.eps,
            e.details
        );
    }
    for note in &r.degenerate_notes {
        let _ = writeln!(out, "  note {note}");
    }
    out
}

pub fn orbit(system: &str, property: &str, eps: &Rational, po: &PseudoOrbit, shadow: Option<usize>) -> String {
    format!(
        "system {system}  property {property}  eps {eps}\norbit {}\nshadow {}\n",
        witness(po),
        opt(shadow)
    )
}
