//! The theorem suite: a seeded corpus of algebras and modules, every
//! statement checked on every applicable instance, plus the semigroup
//! sweeps. Reports are deterministic for a fixed spec.

mod checks;
mod corpus;
mod oracle;

pub use checks::*;
pub use corpus::{generate_corpus, CorpusAlgebra, CorpusModule, CorpusSpec, Recipe};
pub use oracle::{brute_force_trace_oracle, OracleOutcome};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::numsgp::{corollary_sweep, hw_sweep, CorollarySweep, HwSweep};

/// Fewer hypothesis-satisfied instances than this makes a check vacuous.
pub const VACUITY_THRESHOLD: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSpec {
    pub corpus: CorpusSpec,
    /// Genus bound of the corollary sweep; `None` skips it.
    pub corollary_genus: Option<usize>,
    /// Genus bound of the torsion sweep; `None` skips it.
    pub torsion_genus: Option<usize>,
    /// Degree cutoff of the torsion sweep (default per instance).
    pub torsion_cutoff: Option<i64>,
    /// Stop at the first failing check (sequential).
    pub fail_fast: bool,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        SuiteSpec {
            corpus: CorpusSpec::default(),
            corollary_genus: Some(8),
            torsion_genus: Some(6),
            torsion_cutoff: None,
            fail_fast: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub check: CheckKind,
    pub statement: &'static str,
    pub instances: usize,
    pub satisfied: usize,
    pub passed: usize,
    pub failed: usize,
    pub hypothesis_not_met: usize,
    pub skipped: usize,
    /// Some instances were run but fewer than the threshold met the
    /// hypotheses.
    pub vacuous: bool,
}

impl CheckSummary {
    fn new(check: CheckKind) -> Self {
        CheckSummary {
            check,
            statement: check.statement(),
            instances: 0,
            satisfied: 0,
            passed: 0,
            failed: 0,
            hypothesis_not_met: 0,
            skipped: 0,
            vacuous: false,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && !self.vacuous
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleSummary {
    pub name: String,
    pub dim: usize,
    pub recipe: Recipe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraSummary {
    pub name: String,
    pub dim: usize,
    pub lifted: Option<String>,
    pub modules: Vec<ModuleSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupSection {
    pub corollary: Option<CorollarySweep>,
    pub torsion: Option<HwSweep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub spec: SuiteSpec,
    pub algebras: Vec<AlgebraSummary>,
    /// `(M; L, N)` triples checked.
    pub triples: usize,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<CheckReport>,
    pub semigroups: SemigroupSection,
    /// The run stopped early at the first failure.
    pub stopped_early: bool,
    pub ok: bool,
}

impl SuiteReport {
    pub fn summary(&self, check: CheckKind) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.check == check)
    }
}

#[derive(Clone, Copy, Debug)]
enum Work {
    Module(usize, usize),
    Triple(usize, usize, usize, usize),
}

fn work_items(corpus: &[CorpusAlgebra]) -> Vec<Work> {
    let mut items = Vec::new();
    for (ai, alg) in corpus.iter().enumerate() {
        let tests: Vec<usize> = TEST_MODULES.iter().filter_map(|n| alg.modules.iter().position(|m| m.name == *n)).collect();
        for mi in 0..alg.modules.len() {
            items.push(Work::Module(ai, mi));
            for &li in &tests {
                for &ni in &tests {
                    items.push(Work::Triple(ai, mi, li, ni));
                }
            }
        }
    }
    items
}

fn run_item(corpus: &[CorpusAlgebra], spec: &CorpusSpec, item: Work) -> Result<Vec<CheckReport>> {
    let (ai, outcomes) = match item {
        Work::Module(ai, mi) => (ai, check_module(&corpus[ai], mi)?),
        Work::Triple(ai, mi, li, ni) => (ai, check_triple(&corpus[ai], mi, li, ni, spec)?),
    };
    let alg = &corpus[ai];
    Ok(outcomes
        .into_iter()
        .map(|(check, o, roles)| {
            let instance = std::iter::once(alg.name.clone())
                .chain(roles.iter().map(|(r, i)| format!("{r}={}", alg.modules[*i].name)))
                .collect::<Vec<_>>()
                .join(" ");
            let witness = (o.verdict == Verdict::Fail).then(|| {
                let mods: Vec<(&str, &CorpusModule)> = roles.iter().map(|(r, i)| (*r, &alg.modules[*i])).collect();
                Witness::new(check, &alg.algebra, &mods)
            });
            CheckReport { check, instance, hypothesis: o.hypothesis, verdict: o.verdict, detail: o.detail, witness }
        })
        .collect())
}

/// Runs the whole suite. Parallel over instances; results are collected in
/// enumeration order so the report does not depend on scheduling.
pub fn run_suite(spec: &SuiteSpec) -> Result<SuiteReport> {
    let corpus = generate_corpus(&spec.corpus)?;
    let items = work_items(&corpus);
    let triples = items.iter().filter(|w| matches!(w, Work::Triple(..))).count();

    let mut stopped_early = false;
    let reports: Vec<CheckReport> = if spec.fail_fast {
        let mut out = Vec::new();
        for &item in &items {
            let batch = run_item(&corpus, &spec.corpus, item)?;
            let failed = batch.iter().any(|r| r.verdict == Verdict::Fail);
            out.extend(batch);
            if failed {
                stopped_early = true;
                break;
            }
        }
        out
    } else {
        let batches: Vec<Vec<CheckReport>> =
            items.par_iter().map(|&item| run_item(&corpus, &spec.corpus, item)).collect::<Result<_>>()?;
        batches.into_iter().flatten().collect()
    };

    let mut summaries: BTreeMap<CheckKind, CheckSummary> = BTreeMap::new();
    let mut failures = Vec::new();
    for r in reports {
        let s = summaries.entry(r.check).or_insert_with(|| CheckSummary::new(r.check));
        s.instances += 1;
        match r.verdict {
            Verdict::Pass => s.passed += 1,
            Verdict::Fail => s.failed += 1,
            Verdict::HypothesisNotMet => s.hypothesis_not_met += 1,
            Verdict::Skipped => s.skipped += 1,
        }
        if matches!(r.verdict, Verdict::Pass | Verdict::Fail) {
            s.satisfied += 1;
        }
        if r.verdict == Verdict::Fail {
            failures.push(r);
        }
    }
    let mut checks: Vec<CheckSummary> = summaries.into_values().collect();
    for c in &mut checks {
        c.vacuous = !stopped_early && c.instances > 0 && c.satisfied < VACUITY_THRESHOLD;
    }

    let run_sweeps = !(spec.fail_fast && stopped_early);
    let semigroups = SemigroupSection {
        corollary: spec.corollary_genus.filter(|_| run_sweeps).map(corollary_sweep),
        torsion: spec.torsion_genus.filter(|_| run_sweeps).map(|g| hw_sweep(g, spec.torsion_cutoff)),
    };
    let sweeps_ok = semigroups.corollary.as_ref().is_none_or(|c| c.passed == c.instances && c.invariant_violations == 0)
        && semigroups.torsion.as_ref().is_none_or(|h| h.equiv_consistent == h.equiv_checked);
    let ok = !stopped_early && checks.iter().all(CheckSummary::ok) && sweeps_ok;

    let algebras = corpus
        .iter()
        .map(|a| AlgebraSummary {
            name: a.name.clone(),
            dim: a.algebra.dim(),
            lifted: a.lifted.as_ref().map(|(_, l, _)| l.field().name()),
            modules: a
                .modules
                .iter()
                .map(|m| ModuleSummary { name: m.name.clone(), dim: m.module.dim(), recipe: m.recipe.clone() })
                .collect(),
        })
        .collect();

    Ok(SuiteReport {
        seed: spec.corpus.seed,
        spec: spec.clone(),
        algebras,
        triples,
        checks,
        failures,
        semigroups,
        stopped_early,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::AlgebraFamily;

    fn small() -> SuiteSpec {
        SuiteSpec {
            corpus: CorpusSpec {
                fields: vec![2],
                families: vec![AlgebraFamily::Truncated(2), AlgebraFamily::Truncated(3)],
                max_dim: 5,
                ..CorpusSpec::default()
            },
            corollary_genus: Some(3),
            torsion_genus: Some(3),
            torsion_cutoff: None,
            fail_fast: false,
        }
    }

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let a = run_suite(&small()).unwrap();
        assert!(a.failures.is_empty(), "{:#?}", a.failures);
        assert!(a.triples > 0);
        for c in &a.checks {
            assert_eq!(c.failed, 0, "{}", c.check.name());
        }
        let b = run_suite(&small()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_corpus_is_not_vacuous() {
        let spec = SuiteSpec { corpus: CorpusSpec::empty(), corollary_genus: None, torsion_genus: None, ..small() };
        let r = run_suite(&spec).unwrap();
        assert!(r.checks.is_empty() && r.ok);
    }
}
