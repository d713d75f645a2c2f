// SPDX-License-Identifier: Apache-2.0

//! Finite-scale harness for the structural results linking s-limit
//! shadowing to chain classes with the shadowing property.
//!
//! Four conditional statements are checked, each at fixed resolutions:
//!
//! * s-limit shadowing at (δ, ε) implies shadowing at (δ, ε);
//! * if s-limit shadowing holds at (δ_fine, ε), every coarse class at
//!   δ_coarse contains a fine class at δ_fine whose invariant core has
//!   (δ_fine, ε)-shadowing (the maximal fine classes are tried first);
//! * for invertible systems with s-limit shadowing, every initial class has
//!   shadowing on its core;
//! * if the whole system has shadowing, every class separated from all
//!   others by more than `2ε + δ` has shadowing on its core.
//!
//! An unmet antecedent is reported as [`Outcome::Vacuous`], never as a pass.
//! Classes whose invariant core is empty are degenerate: they are excluded
//! from the quantifiers and listed in the report.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{decompose, omega_cycle, ChainDecomposition, DeltaGraph};
use crate::error::VerifyError;
use crate::pointset::PointSet;
use crate::rational::Rational;
use crate::shadow::{
    check_shadowing_property, check_slimit_property, CheckOptions, PseudoOrbit, ShadowVerdict,
};
use crate::system::FiniteMetricSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    SlimitImpliesShadowing,
    DenseShadowingClasses,
    InitialClassesShadow,
    IsolatedClassesShadow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Fails,
    Vacuous,
}

/// A class that was shown to have shadowing on its invariant core.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certification {
    /// The class being certified (a coarse class for the density check).
    pub class: PointSet,
    /// The class whose core passed the restricted check.
    pub certifier: PointSet,
    pub certifier_core: PointSet,
    pub certifier_maximal: bool,
    pub states_explored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarnessEntry {
    pub check: CheckId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_coarse: Option<Rational>,
    pub delta: Rational,
    pub eps: Rational,
    pub outcome: Outcome,
    pub details: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certified: Vec<Certification>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failing_classes: Vec<PointSet>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<PseudoOrbit>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degenerate_classes: Vec<PointSet>,
}

impl HarnessEntry {
    fn new(check: CheckId, delta: &Rational, eps: &Rational) -> Self {
        HarnessEntry {
            check,
            delta_coarse: None,
            delta: delta.clone(),
            eps: eps.clone(),
            outcome: Outcome::Holds,
            details: String::new(),
            certified: Vec::new(),
            failing_classes: Vec::new(),
            witnesses: Vec::new(),
            degenerate_classes: Vec::new(),
        }
    }
}

/// Everything the checks need at one (δ, ε) pair.
#[derive(Clone, Debug)]
pub struct FineAnalysis {
    pub delta: Rational,
    pub eps: Rational,
    pub slimit: ShadowVerdict,
    pub shadowing: ShadowVerdict,
    pub decomposition: ChainDecomposition,
    /// Restricted shadowing verdict per class; `None` for degenerate classes.
    pub class_shadowing: Vec<Option<ShadowVerdict>>,
}

impl FineAnalysis {
    pub fn new(
        system: &FiniteMetricSystem,
        delta: &Rational,
        eps: &Rational,
        opts: CheckOptions,
    ) -> Result<Self, VerifyError> {
        let slimit = check_slimit_property(system, delta, eps, None, opts)?;
        let shadowing = check_shadowing_property(system, delta, eps, None, opts)?;
        let decomposition = decompose(system, delta).map_err(crate::error::ShadowError::from)?;
        let class_shadowing = decomposition
            .classes()
            .iter()
            .map(|c| {
                if c.is_degenerate() {
                    Ok(None)
                } else {
                    check_shadowing_property(system, delta, eps, Some(&c.core), opts).map(Some)
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(FineAnalysis {
            delta: delta.clone(),
            eps: eps.clone(),
            slimit,
            shadowing,
            decomposition,
            class_shadowing,
        })
    }

    fn degenerate(&self) -> Vec<PointSet> {
        self.decomposition
            .classes()
            .iter()
            .filter(|c| c.is_degenerate())
            .map(|c| c.points.clone())
            .collect()
    }

    fn certify(&self, class: usize, target: &PointSet, maximal: bool) -> Option<Certification> {
        let verdict = self.class_shadowing[class].as_ref()?;
        verdict.pass.then(|| {
            let c = self.decomposition.class(class);
            Certification {
                class: target.clone(),
                certifier: c.points.clone(),
                certifier_core: c.core.clone(),
                certifier_maximal: maximal,
                states_explored: verdict.states_explored,
            }
        })
    }

    fn class_witness(&self, class: usize) -> Option<PseudoOrbit> {
        self.class_shadowing[class].as_ref().and_then(|v| v.witness.clone())
    }
}

pub fn slimit_implies_shadowing_entry(fine: &FineAnalysis) -> HarnessEntry {
    let mut e = HarnessEntry::new(CheckId::SlimitImpliesShadowing, &fine.delta, &fine.eps);
    match (fine.slimit.pass, fine.shadowing.pass) {
        (false, _) => {
            e.outcome = Outcome::Vacuous;
            e.details = "s-limit shadowing fails".into();
            e.witnesses.extend(fine.slimit.witness.clone());
        }
        (true, true) => e.details = "both properties pass".into(),
        (true, false) => {
            e.outcome = Outcome::Fails;
            e.details = "s-limit shadowing passes but shadowing fails".into();
            e.witnesses.extend(fine.shadowing.witness.clone());
        }
    }
    e
}

pub fn dense_shadowing_classes_entry(coarse: &ChainDecomposition, fine: &FineAnalysis) -> HarnessEntry {
    let mut e = HarnessEntry::new(CheckId::DenseShadowingClasses, &fine.delta, &fine.eps);
    e.delta_coarse = Some(coarse.delta().clone());
    e.degenerate_classes = coarse
        .classes()
        .iter()
        .filter(|c| c.is_degenerate())
        .map(|c| c.points.clone())
        .collect();
    e.degenerate_classes.extend(fine.degenerate());
    if !fine.slimit.pass {
        e.outcome = Outcome::Vacuous;
        e.details = "s-limit shadowing fails at the fine resolution".into();
        return e;
    }
    let dec = &fine.decomposition;
    let mut uncovered = 0;
    for a in coarse.classes().iter().filter(|c| !c.is_degenerate()) {
        let inside: Vec<usize> = dec
            .classes()
            .iter()
            .filter(|c| c.points.is_subset(&a.points))
            .map(|c| c.id)
            .collect();
        let is_max = |c: usize| {
            inside
                .iter()
                .all(|&b| b == c || !dec.class_reaches(b, c))
        };
        let (maximal, rest): (Vec<usize>, Vec<usize>) = inside.iter().partition(|&&c| is_max(c));
        let found = maximal
            .iter()
            .map(|&c| (c, true))
            .chain(rest.iter().map(|&c| (c, false)))
            .find_map(|(c, m)| fine.certify(c, &a.points, m));
        match found {
            Some(cert) => e.certified.push(cert),
            None => {
                uncovered += 1;
                e.failing_classes.push(a.points.clone());
                e.witnesses.extend(inside.iter().filter_map(|&c| fine.class_witness(c)));
            }
        }
    }
    if uncovered > 0 {
        e.outcome = Outcome::Fails;
        e.details = format!("{uncovered} coarse class(es) contain no fine class with shadowing");
    } else {
        e.details = format!("{} coarse class(es) certified", e.certified.len());
    }
    e
}

pub fn initial_classes_entry(system: &FiniteMetricSystem, fine: &FineAnalysis) -> Result<HarnessEntry, VerifyError> {
    let inverse = system
        .inverse_map()
        .filter(|_| system.is_invertible())
        .ok_or(VerifyError::NotInvertible)?;
    let mut e = HarnessEntry::new(CheckId::InitialClassesShadow, &fine.delta, &fine.eps);
    e.degenerate_classes = fine.degenerate();
    if !fine.slimit.pass {
        e.outcome = Outcome::Vacuous;
        e.details = "s-limit shadowing fails".into();
        return Ok(e);
    }
    let dec = &fine.decomposition;
    // Initial for f should be terminal for the inverse at the same resolution.
    let reversed = DeltaGraph::with_map(system, &inverse, &fine.delta)
        .map(|g| ChainDecomposition::new(&g))
        .map_err(crate::error::ShadowError::from)?;
    let mut mismatched = 0;
    for c in dec.classes().iter().filter(|c| c.initial) {
        let rev_terminal = reversed
            .classes()
            .iter()
            .any(|r| r.points == c.points && r.terminal);
        if !rev_terminal {
            mismatched += 1;
        }
        if c.is_degenerate() {
            continue;
        }
        match fine.certify(c.id, &c.points, true) {
            Some(cert) => e.certified.push(cert),
            None => {
                e.failing_classes.push(c.points.clone());
                e.witnesses.extend(fine.class_witness(c.id));
            }
        }
    }
    let cross = if mismatched == 0 {
        "initial classes agree with terminal classes of the inverse".to_string()
    } else {
        format!("{mismatched} initial class(es) are not terminal for the inverse")
    };
    if e.failing_classes.is_empty() {
        e.details = format!("{} initial class(es) certified; {cross}", e.certified.len());
    } else {
        e.outcome = Outcome::Fails;
        e.details = format!("{} initial class(es) lack shadowing; {cross}", e.failing_classes.len());
    }
    Ok(e)
}

pub fn isolated_classes_entry(fine: &FineAnalysis) -> HarnessEntry {
    let mut e = HarnessEntry::new(CheckId::IsolatedClassesShadow, &fine.delta, &fine.eps);
    e.degenerate_classes = fine.degenerate();
    if !fine.shadowing.pass {
        e.outcome = Outcome::Vacuous;
        e.details = "shadowing fails on the whole system".into();
        return e;
    }
    let margin = &fine.eps.double() + &fine.delta;
    let isolated: Vec<usize> = fine
        .decomposition
        .isolated_classes(&margin)
        .into_iter()
        .filter(|&c| !fine.decomposition.class(c).is_degenerate())
        .collect();
    if isolated.is_empty() {
        e.outcome = Outcome::Vacuous;
        e.details = format!("no class is separated by more than {margin}");
        return e;
    }
    for c in isolated {
        let points = &fine.decomposition.class(c).points;
        match fine.certify(c, points, false) {
            Some(cert) => e.certified.push(cert),
            None => {
                e.failing_classes.push(points.clone());
                e.witnesses.extend(fine.class_witness(c));
            }
        }
    }
    if e.failing_classes.is_empty() {
        e.details = format!("{} isolated class(es) certified", e.certified.len());
    } else {
        e.outcome = Outcome::Fails;
        e.details = format!("{} isolated class(es) lack shadowing", e.failing_classes.len());
    }
    e
}

pub fn verify_slimit_implies_shadowing(
    system: &FiniteMetricSystem,
    delta: &Rational,
    eps: &Rational,
    opts: CheckOptions,
) -> Result<HarnessEntry, VerifyError> {
    Ok(slimit_implies_shadowing_entry(&FineAnalysis::new(system, delta, eps, opts)?))
}

pub fn verify_dense_shadowing_classes(
    system: &FiniteMetricSystem,
    delta_coarse: &Rational,
    delta_fine: &Rational,
    eps: &Rational,
    opts: CheckOptions,
) -> Result<HarnessEntry, VerifyError> {
    if delta_fine > delta_coarse {
        return Err(VerifyError::BadResolutions {
            coarse: Box::new(delta_coarse.clone()),
            fine: Box::new(delta_fine.clone()),
        });
    }
    let coarse = decompose(system, delta_coarse).map_err(crate::error::ShadowError::from)?;
    let fine = FineAnalysis::new(system, delta_fine, eps, opts)?;
    Ok(dense_shadowing_classes_entry(&coarse, &fine))
}

pub fn verify_initial_classes_shadow(
    system: &FiniteMetricSystem,
    delta: &Rational,
    eps: &Rational,
    opts: CheckOptions,
) -> Result<HarnessEntry, VerifyError> {
    if !system.is_invertible() {
        return Err(VerifyError::NotInvertible);
    }
    initial_classes_entry(system, &FineAnalysis::new(system, delta, eps, opts)?)
}

pub fn verify_isolated_classes_shadow(
    system: &FiniteMetricSystem,
    delta: &Rational,
    eps: &Rational,
    opts: CheckOptions,
) -> Result<HarnessEntry, VerifyError> {
    Ok(isolated_classes_entry(&FineAnalysis::new(system, delta, eps, opts)?))
}

/// A failing s-limit witness together with its structural features.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlimitViolation {
    pub witness: PseudoOrbit,
    /// The first point is not chain recurrent at δ.
    pub starts_outside_cr: bool,
    /// Class containing the periodic cycle the tail settles on.
    pub tail_class: Option<PointSet>,
    pub tail_class_initial: bool,
    /// Starts outside the chain recurrent set and ends in an initial class.
    pub transient_into_initial: bool,
}

pub fn find_slimit_violation(
    system: &FiniteMetricSystem,
    delta: &Rational,
    eps: &Rational,
    opts: CheckOptions,
) -> Result<Option<SlimitViolation>, VerifyError> {
    let verdict = check_slimit_property(system, delta, eps, None, opts)?;
    let Some(witness) = verdict.witness else {
        return Ok(None);
    };
    let dec = decompose(system, delta).map_err(crate::error::ShadowError::from)?;
    let starts_outside_cr = !dec.chain_recurrent_set().contains(witness.points[0]);
    let last = *witness.points.last().expect("witnesses are nonempty");
    let tail = omega_cycle(system, last)
        .ok()
        .and_then(|cycle| cycle.first())
        .and_then(|p| dec.class_of(p));
    let tail_class_initial = tail.is_some_and(|c| dec.class(c).initial);
    Ok(Some(SlimitViolation {
        witness,
        starts_outside_cr,
        tail_class: tail.map(|c| dec.class(c).points.clone()),
        tail_class_initial,
        transient_into_initial: starts_outside_cr && tail_class_initial,
    }))
}

/// Resolutions used for sweeps: every positive pairwise distance, its half
/// and its double, ascending.
pub fn default_grid(system: &FiniteMetricSystem) -> Vec<Rational> {
    let mut values: Vec<Rational> = system
        .distance_values()
        .into_iter()
        .flat_map(|d| [d.half(), d.double(), d])
        .collect();
    values.sort();
    values.dedup();
    values
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParameterGrid {
    pub deltas: Vec<Rational>,
    pub eps: Vec<Rational>,
}

impl ParameterGrid {
    pub fn square(values: Vec<Rational>) -> Self {
        ParameterGrid {
            deltas: values.clone(),
            eps: values,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub holds: usize,
    pub fails: usize,
    pub vacuous: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub system: String,
    pub grid: ParameterGrid,
    pub summary: Summary,
    pub results: Vec<HarnessEntry>,
    pub degenerate_notes: Vec<String>,
}

impl HarnessReport {
    pub fn failures(&self) -> impl Iterator<Item = &HarnessEntry> {
        self.results.iter().filter(|e| e.outcome == Outcome::Fails)
    }
}

/// Runs every check over the grid. Pairs are analysed on the current rayon
/// pool; results are assembled in grid order.
pub fn run_harness(
    system: &FiniteMetricSystem,
    grid: &ParameterGrid,
    opts: CheckOptions,
) -> Result<HarnessReport, VerifyError> {
    let pairs: Vec<(&Rational, &Rational)> = grid
        .deltas
        .iter()
        .flat_map(|d| grid.eps.iter().map(move |e| (d, e)))
        .collect();
    let analyses: Vec<FineAnalysis> = pairs
        .par_iter()
        .map(|&(d, e)| FineAnalysis::new(system, d, e, opts))
        .collect::<Result<_, _>>()?;
    let coarse: Vec<ChainDecomposition> = grid
        .deltas
        .iter()
        .map(|d| decompose(system, d).map_err(|e| VerifyError::Shadow(e.into())))
        .collect::<Result<_, _>>()?;

    let mut results = Vec::new();
    let mut notes = Vec::new();
    for fine in &analyses {
        results.push(slimit_implies_shadowing_entry(fine));
        for c in &coarse {
            if c.delta() >= &fine.delta {
                results.push(dense_shadowing_classes_entry(c, fine));
            }
        }
        if system.is_invertible() {
            results.push(initial_classes_entry(system, fine)?);
        }
        results.push(isolated_classes_entry(fine));
        for c in fine.decomposition.classes().iter().filter(|c| c.is_degenerate()) {
            let note = format!(
                "delta {}: class {:?} has an empty invariant core",
                fine.delta,
                c.points.to_vec()
            );
            if !notes.contains(&note) {
                notes.push(note);
            }
        }
    }
    let mut summary = Summary::default();
    for r in &results {
        match r.outcome {
            Outcome::Holds => summary.holds += 1,
            Outcome::Fails => summary.fails += 1,
            Outcome::Vacuous => summary.vacuous += 1,
        }
    }
    Ok(HarnessReport {
        system: system.name().to_string(),
        grid: grid.clone(),
        summary,
        results,
        degenerate_notes: notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{build_corpus_system, parse_generator};

    fn sys(s: &str) -> FiniteMetricSystem {
        build_corpus_system(&parse_generator(s).unwrap()).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    const OPTS: CheckOptions = CheckOptions {
        state_cap: crate::shadow::DEFAULT_STATE_CAP,
        parallel: false,
    };

    #[test]
    fn implication_examples() {
        let e = verify_slimit_implies_shadowing(&sys("cantor-identity:2"), &q("1/20"), &q("1/20"), OPTS).unwrap();
        assert_eq!(e.outcome, Outcome::Holds);
        let e = verify_slimit_implies_shadowing(&sys("parallel-cycles"), &q("1"), &q("1"), OPTS).unwrap();
        assert_eq!(e.outcome, Outcome::Vacuous);
        assert_eq!(e.witnesses[0].points, vec![0, 4]);
    }

    #[test]
    fn dense_classes_cantor() {
        let e = verify_dense_shadowing_classes(&sys("cantor-identity:2"), &q("1/4"), &q("1/20"), &q("1/20"), OPTS)
            .unwrap();
        assert_eq!(e.outcome, Outcome::Holds);
        assert_eq!(e.certified.len(), 2);
        for cert in &e.certified {
            assert_eq!(cert.certifier.len(), 1);
            assert!(cert.certifier_maximal);
        }
    }

    #[test]
    fn dense_classes_parallel_cycles_vacuous() {
        let e = verify_dense_shadowing_classes(&sys("parallel-cycles"), &q("1"), &q("1"), &q("1"), OPTS).unwrap();
        assert_eq!(e.outcome, Outcome::Vacuous);
        assert!(matches!(
            verify_dense_shadowing_classes(&sys("parallel-cycles"), &q("1/2"), &q("1"), &q("1"), OPTS),
            Err(VerifyError::BadResolutions { .. })
        ));
    }

    #[test]
    fn initial_classes_rotation_and_errors() {
        let e = verify_initial_classes_shadow(&sys("rotation:4:1"), &q("1/8"), &q("1/8"), OPTS).unwrap();
        assert_eq!(e.outcome, Outcome::Holds);
        assert!(e.details.contains("agree"));
        assert_eq!(
            verify_initial_classes_shadow(&sys("north-south:8"), &q("1/8"), &q("1/8"), OPTS),
            Err(VerifyError::NotInvertible)
        );
    }

    #[test]
    fn isolated_twin_cycles() {
        let e = verify_isolated_classes_shadow(&sys("twin-cycles"), &q("1/10"), &q("1/10"), OPTS).unwrap();
        assert_eq!(e.outcome, Outcome::Holds);
        assert_eq!(e.certified.len(), 2);
        // Margin 2ε + δ = 5 exceeds the separation 4.
        let e = verify_isolated_classes_shadow(&sys("twin-cycles"), &q("1"), &q("2"), OPTS).unwrap();
        assert_eq!(e.outcome, Outcome::Vacuous);
    }

    #[test]
    fn slimit_violation_parallel_cycles() {
        let v = find_slimit_violation(&sys("parallel-cycles"), &q("1"), &q("1"), OPTS)
            .unwrap()
            .unwrap();
        assert_eq!(v.witness.points, vec![0, 4]);
        // At δ = 1 the transient point a is chain recurrent (c2 ->_1 a).
        assert!(!v.starts_outside_cr);
        assert_eq!(v.tail_class.as_ref().map(PointSet::len), Some(5));
        assert!(v.tail_class_initial);
        assert!(find_slimit_violation(&sys("cantor-identity:2"), &q("1/20"), &q("1/20"), OPTS)
            .unwrap()
            .is_none());
    }

    #[test]
    fn grid_contains_halves_and_doubles() {
        let g = default_grid(&sys("cantor-identity:1"));
        assert_eq!(g, vec![q("1/3"), q("2/3"), q("4/3")]);
    }
}
