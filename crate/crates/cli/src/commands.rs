// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::fs;
use std::io::Write;

use chainscope_core::chain::{decompose, to_dot, DecompositionReport};
use chainscope_core::shadow::{
    check_property, is_limit_shadowed, is_shadowed, validate_pseudo_orbit, OrbitKind,
};
use chainscope_core::system::{build_corpus_system, default_corpus, load_system, parse_generator};
use chainscope_core::verify::{default_grid, run_harness, Outcome, ParameterGrid};
use chainscope_core::{
    CheckOptions, DeltaLadder, FiniteMetricSystem, PseudoOrbit, Rational, ShadowError, VerifyError,
};
use serde::Serialize;

use crate::args::{
    AnalyzeArgs, Cli, Command, Format, LadderArgs, OrbitArgs, RunOptions, ShadowArgs, Source,
    VerifyArgs,
};
use crate::table;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Inconclusive(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Inconclusive(m) => f.write_str(m),
        }
    }
}

impl From<ShadowError> for CliError {
    fn from(e: ShadowError) -> Self {
        match e {
            ShadowError::Inconclusive { .. } => CliError::Inconclusive(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Shadow(s) => s.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Runs the selected command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Shadow(a) => shadow(a),
        Command::Ladder(a) => ladder(a),
        Command::Verify(a) => verify(a),
        Command::Orbit(a) => orbit(a),
    }
}

fn load(source: &Source) -> Result<Option<FiniteMetricSystem>, CliError> {
    if let Some(path) = &source.file {
        let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        return load_system(&text).map(Some).map_err(input);
    }
    if let Some(g) = &source.generator {
        let generator = parse_generator(g).map_err(input)?;
        return build_corpus_system(&generator).map(Some).map_err(input);
    }
    Ok(None)
}

fn require(source: &Source) -> Result<FiniteMetricSystem, CliError> {
    load(source)?.ok_or_else(|| input("a system is required: pass --file or --gen"))
}

fn warn_below_quantization(system: &FiniteMetricSystem, delta: &Rational) {
    if let Some(bound) = system.quantization_bound() {
        if delta < bound {
            eprintln!(
                "warning: delta {delta} is below the quantization bound {bound} of {}",
                system.name()
            );
        }
    }
}

fn options(run: &RunOptions) -> CheckOptions {
    CheckOptions {
        state_cap: run.state_cap,
        parallel: run.workers != Some(1),
    }
}

fn emit(run: &RunOptions, text: &str) -> Result<(), CliError> {
    match &run.out {
        Some(path) => fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(input)
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn no_dot(run: &RunOptions, command: &str) -> Result<(), CliError> {
    if run.format == Format::Dot {
        return Err(input(format!("--format dot is only available for analyze, not {command}")));
    }
    Ok(())
}

fn analyze(a: &AnalyzeArgs) -> Result<u8, CliError> {
    let system = require(&a.source)?;
    warn_below_quantization(&system, &a.delta);
    let dec = decompose(&system, &a.delta).map_err(input)?;
    let text = match a.run.format {
        Format::Json => json(&DecompositionReport::new(system.name(), &dec)),
        Format::Dot => to_dot(&dec, a.isolation.as_ref().unwrap_or(&a.delta)),
        Format::Table => table::decomposition(system.name(), &dec),
    };
    emit(&a.run, &text)?;
    Ok(0)
}

fn shadow(a: &ShadowArgs) -> Result<u8, CliError> {
    no_dot(&a.run, "shadow")?;
    let system = require(&a.source)?;
    warn_below_quantization(&system, &a.delta);
    let verdict = check_property(&system, a.property, &a.delta, &a.eps, None, options(&a.run))?;
    let text = match a.run.format {
        Format::Table => table::verdict(system.name(), &verdict),
        _ => json(&verdict),
    };
    emit(&a.run, &text)?;
    Ok(if verdict.pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct LadderReport {
    system: String,
    deltas: Vec<Rational>,
    class_counts: Vec<usize>,
    /// `refinement[k][j]`: class of level `k` containing class `j` of level `k + 1`.
    refinement: Vec<Vec<Option<usize>>>,
    stabilization_threshold: Option<Rational>,
    stable_level: Option<usize>,
    levels: Vec<DecompositionReport>,
}

fn ladder(a: &LadderArgs) -> Result<u8, CliError> {
    no_dot(&a.run, "ladder")?;
    let system = require(&a.source)?;
    if let Some(last) = a.deltas.last() {
        warn_below_quantization(&system, last);
    }
    let ladder = DeltaLadder::new(&system, &a.deltas).map_err(input)?;
    let report = LadderReport {
        system: system.name().to_string(),
        deltas: a.deltas.clone(),
        class_counts: ladder.class_counts(),
        refinement: ladder.refinement().to_vec(),
        stabilization_threshold: ladder.stabilization_threshold().cloned(),
        stable_level: ladder.stable_level(),
        levels: ladder
            .levels()
            .iter()
            .map(|d| DecompositionReport::new(system.name(), d))
            .collect(),
    };
    let text = match a.run.format {
        Format::Table => table::ladder(
            &report.system,
            &report.deltas,
            &report.class_counts,
            &report.refinement,
            report.stabilization_threshold.as_ref(),
            report.stable_level,
        ),
        _ => json(&report),
    };
    emit(&a.run, &text)?;
    Ok(0)
}

fn verify(a: &VerifyArgs) -> Result<u8, CliError> {
    no_dot(&a.run, "verify")?;
    let systems = match load(&a.source)? {
        Some(s) => vec![s],
        None => default_corpus()
            .iter()
            .map(build_corpus_system)
            .collect::<Result<_, _>>()
            .map_err(input)?,
    };
    let opts = options(&a.run);
    let mut reports = Vec::with_capacity(systems.len());
    for system in &systems {
        let grid = grid_for(system, a)?;
        if let (Some(_), Some(smallest)) = (&a.deltas, grid.deltas.first()) {
            warn_below_quantization(system, smallest);
        }
        reports.push(run_harness(system, &grid, opts)?);
    }
    let failed = reports
        .iter()
        .any(|r| r.results.iter().any(|e| e.outcome == Outcome::Fails));
    let text = match a.run.format {
        Format::Table => reports.iter().map(table::harness).collect(),
        _ => json(&reports),
    };
    emit(&a.run, &text)?;
    Ok(if failed { 1 } else { 0 })
}

fn grid_for(system: &FiniteMetricSystem, a: &VerifyArgs) -> Result<ParameterGrid, CliError> {
    let fallback = || default_grid(system);
    let mut deltas = a.deltas.clone().unwrap_or_else(fallback);
    let mut eps = a.eps.clone().unwrap_or_else(|| deltas.clone());
    for v in [&mut deltas, &mut eps] {
        v.sort();
        v.dedup();
    }
    if deltas.is_empty() || eps.is_empty() {
        return Err(input("parameter grid is empty"));
    }
    Ok(ParameterGrid { deltas, eps })
}

#[derive(Serialize)]
struct OrbitReport {
    system: String,
    property: &'static str,
    eps: Rational,
    orbit: PseudoOrbit,
    /// A point whose orbit tracks the pseudo-orbit, if any.
    shadow: Option<usize>,
    shadowed: bool,
}

fn orbit(a: &OrbitArgs) -> Result<u8, CliError> {
    no_dot(&a.run, "orbit")?;
    let system = require(&a.source)?;
    let text = fs::read_to_string(&a.orbit).map_err(|e| input(format!("{}: {e}", a.orbit.display())))?;
    let po: PseudoOrbit = serde_json::from_str(&text).map_err(|e| input(format!("malformed pseudo-orbit: {e}")))?;
    validate_pseudo_orbit(&system, &po)?;
    let (property, shadow) = match po.kind {
        OrbitKind::Plain => ("shadowing", is_shadowed(&system, &po, &a.eps)?),
        OrbitKind::EventuallyExact => ("slimit", is_limit_shadowed(&system, &po, &a.eps)?),
    };
    let report = OrbitReport {
        system: system.name().to_string(),
        property,
        eps: a.eps.clone(),
        orbit: po,
        shadow,
        shadowed: shadow.is_some(),
    };
    let text = match a.run.format {
        Format::Table => table::orbit(&report.system, report.property, &report.eps, &report.orbit, report.shadow),
        _ => json(&report),
    };
    emit(&a.run, &text)?;
    Ok(if report.shadowed { 0 } else { 1 })
}
