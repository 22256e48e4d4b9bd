//! Checks shared by the property tests and the acceptance run.

use super::gen::{ill_typed, well_typed};
use super::oracle::{from_core, infer_source, mgu, satisfiable, Ty, Verdict};
use chameleon_core::check::{analyze, GroupAnalysis};
use chameleon_core::constrain::LabeledConstraint;
use chameleon_core::diagnose::TypeErrorReport;
use chameleon_core::span::Span;
use chameleon_core::{check, CheckResult, Options};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

pub const BRUTE_FORCE_LIMIT: usize = 12;

fn pairs(cs: &[LabeledConstraint], ids: &[usize]) -> Vec<(Ty, Ty)> {
    ids.iter().map(|&id| (from_core(&cs[id].lhs), from_core(&cs[id].rhs))).collect()
}

pub fn sat(cs: &[LabeledConstraint], ids: &[usize]) -> bool {
    satisfiable(&pairs(cs, ids))
}

/// Every minimal unsatisfiable subset of `cs`, by enumerating the power set.
pub fn all_muses(cs: &[LabeledConstraint]) -> BTreeSet<Vec<usize>> {
    let n = cs.len();
    assert!(n <= 16, "power set of {n} constraints is too large");
    let subset = |mask: u32| -> Vec<usize> { (0..n).filter(|i| mask & (1 << i) != 0).collect() };
    let unsat: Vec<bool> = (0..1u32 << n).map(|mask| !sat(cs, &subset(mask))).collect();
    (0..1u32 << n)
        .filter(|&mask| unsat[mask as usize])
        .filter(|&mask| (0..n).all(|i| mask & (1 << i) == 0 || !unsat[(mask & !(1 << i)) as usize]))
        .map(subset)
        .collect()
}

/// Violations of the rule that a candidate's two possible types cannot
/// both hold. Shared variables between the two types are one unknown.
pub fn conflict_violations(report: &TypeErrorReport) -> Vec<String> {
    report
        .candidates
        .iter()
        .filter(|c| {
            let [a, b] = [&c.possible_types[0].ty, &c.possible_types[1].ty];
            mgu(&from_core(a), &from_core(b)).is_some()
        })
        .map(|c| format!("candidate {} has compatible types {} and {}", c.name, c.possible_types[0].printed, c.possible_types[1].printed))
        .collect()
}

#[derive(Default, Debug)]
pub struct MusTally {
    pub programs: usize,
    pub groups: usize,
    pub brute_forced: usize,
    pub candidates: usize,
    pub violations: Vec<String>,
    pub elapsed: Duration,
}

impl MusTally {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
        }
    }

    fn group(&mut self, g: &GroupAnalysis, source: &str) {
        self.groups += 1;
        let cs = &g.constraints;
        let mus = &g.slice().expect("ill-typed groups carry a slice").mus;
        let report = g.report().expect("ill-typed groups carry a report");
        let ctx = || format!("group {} of\n{source}", g.name());

        self.require(!sat(cs, mus), || format!("MUS {mus:?} is satisfiable: {}", ctx()));
        for (i, &id) in mus.iter().enumerate() {
            let rest: Vec<usize> = mus.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &c)| c).collect();
            self.require(sat(cs, &rest), || format!("MUS {mus:?} minus {id} is unsatisfiable: {}", ctx()));
        }

        let expected: BTreeSet<Span> = mus.iter().flat_map(|&id| [cs[id].lhs_span, cs[id].rhs_span]).collect();
        let reported: BTreeSet<Span> = report.error_locations.iter().copied().collect();
        self.require(expected == reported, || format!("error locations differ from MUS spans: {}", ctx()));

        if cs.len() <= BRUTE_FORCE_LIMIT {
            self.brute_forced += 1;
            let muses = all_muses(cs);
            self.require(muses.contains(mus), || format!("{mus:?} is not among the minimal subsets {muses:?}: {}", ctx()));
        }

        self.candidates += report.candidates.len();
        for v in conflict_violations(report) {
            self.violations.push(format!("{v}: {}", ctx()));
        }
        for c in &report.candidates {
            for pt in &c.possible_types {
                self.require(pt.locations.iter().all(|l| reported.contains(l)), || {
                    format!("candidate {} lists a location outside the slice: {}", c.name, ctx())
                });
            }
            self.require(!c.steps.is_empty(), || format!("candidate {} has no steps: {}", c.name, ctx()));
        }
        self.require(report.default_candidate < report.candidates.len(), || format!("bad default candidate: {}", ctx()));
    }
}

/// Slicing properties on `programs` random ill-typed programs. A third of
/// them are tiny programs with at most a dozen constraints.
pub fn mus_suite(programs: usize) -> MusTally {
    let start = Instant::now();
    let mut t = MusTally::default();
    let mut seed = 0u64;
    while t.programs < programs {
        seed += 1;
        let (bindings, depth) = match seed % 3 {
            0 => (1, 0),
            1 => (1 + (seed % 2) as usize, 1),
            _ => (1 + (seed % 3) as usize, 2),
        };
        let Some(source) = ill_typed(seed, bindings, depth) else { continue };
        let analysis = analyze(&source, Options::default()).expect("mutants still parse and resolve");
        t.programs += 1;
        let failing: Vec<&GroupAnalysis> = analysis.groups.iter().filter(|g| g.report().is_some()).collect();
        t.require(!failing.is_empty(), || format!("no failing group for a program the oracle rejects:\n{source}"));
        for g in failing {
            t.group(g, &source);
        }
    }
    t.elapsed = start.elapsed();
    t
}

#[derive(Default, Debug)]
pub struct OracleTally {
    pub programs: usize,
    pub bindings: usize,
    pub mismatches: Vec<String>,
}

/// Binding types of `programs` random well-typed programs against Algorithm W.
pub fn oracle_suite(programs: u64) -> OracleTally {
    let mut t = OracleTally::default();
    for seed in 0..programs {
        let source = well_typed(seed, 1 + (seed % 4) as usize, 3).source();
        t.programs += 1;
        let expected = match infer_source(&source) {
            Verdict::WellTyped(types) => types,
            Verdict::IllTyped(names) => {
                t.mismatches.push(format!("generator produced ill-typed {names:?}:\n{source}"));
                continue;
            }
        };
        let actual: Vec<(String, String)> = match check(&source) {
            CheckResult::Ok { binding_types } => binding_types.into_iter().map(|b| (b.name, b.ty)).collect(),
            other => {
                t.mismatches.push(format!("checker said {}:\n{source}", other.status()));
                continue;
            }
        };
        t.bindings += actual.len();
        if actual != expected {
            t.mismatches.push(format!("ours {actual:?}, oracle {expected:?}:\n{source}"));
        }
    }
    t
}
