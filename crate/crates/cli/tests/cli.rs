use clap::Parser;
use serde_json::Value;

use tracekernel::artin::AlgebraFamily;
use tracekernel::suite::{check_module, check_triple, generate_corpus, CheckKind, CorpusSpec, Verdict, Witness};
use tracekernel_cli::doc::parse;
use tracekernel_cli::resolve::resolve;
use tracekernel_cli::run::{run, RunOptions};
use tracekernel_cli::witness::witness_document;
use tracekernel_cli::{execute, Cli, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

fn write(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tracekernel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let cli = Cli::try_parse_from(std::iter::once("tracekernel").chain(args.iter().copied())).unwrap();
    execute(&cli, None)
}

const DOC: &str = "\
version = 1
field = F2
algebra A fam=dual_numbers
[module M]
preset = sum(R, k)
task t1 op=trace M=k L=R N=R
task t2 op=center M=M
semigroup S gens=3,4,5
task c1 op=sgp.check_canonical ideal=m
";

#[test]
fn trace_task_reports_the_ideal() {
    let p = write("trace.tk", DOC);
    let (code, out, _) = cli(&["trace", "--json", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "v1");
    let tasks = v["tasks"].as_array().unwrap();
    assert_eq!(tasks.len(), 1);
    assert_eq!(tasks[0]["result"]["dim"], 1);
    assert_eq!(tasks[0]["result"]["ideal_basis"], serde_json::json!(["x"]));
}

#[test]
fn semigroup_task_and_center() {
    let p = write("all.tk", DOC);
    let (code, out, _) = cli(&["run", "--json", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let c1 = &v["tasks"][2]["result"];
    assert_eq!(c1["passed"], true);
    assert_eq!(c1["end_semigroup_text"], "<1>");
    assert_eq!(v["tasks"][1]["result"]["center_dim"], 2);
}

#[test]
fn output_is_byte_identical() {
    let p = write("det.tk", DOC);
    let a = cli(&["run", "--json", p.to_str().unwrap()]);
    let b = cli(&["run", "--json", p.to_str().unwrap()]);
    assert_eq!(a, b);
    let a = cli(&["run", p.to_str().unwrap()]);
    let b = cli(&["run", p.to_str().unwrap()]);
    assert_eq!(a, b);
}

#[test]
fn empty_report() {
    let report = tracekernel_cli::run::Report::default();
    let v: Value = serde_json::from_str(&tracekernel_cli::emit::json(&report)).unwrap();
    assert_eq!(v["tasks"], serde_json::json!([]));
}

#[test]
fn usage_errors_exit_two_with_line_numbers() {
    let p = write("dup.tk", "algebra A fam=dual_numbers\n[module M]\npreset = k\n[module M]\npreset = R\n");
    let (code, _, err) = cli(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 4") && err.contains("lines 2 and 4"), "{err}");
    let (code, _, _) = cli(&["frobnicate", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    let p = write("nohom.tk", DOC);
    let (code, _, err) = cli(&["hom", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE, "{err}");
}

#[test]
fn failed_tasks_exit_one() {
    // a task error (missing argument) is recorded and fails the run
    let p = write("bad.tk", "algebra A fam=dual_numbers\ntask t op=hom M=k\ntask u op=end M=k\n");
    let (code, out, _) = cli(&["run", "--json", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAILED);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tasks"][0]["status"], "error");
    assert_eq!(v["tasks"][1]["status"], "ok");
    let (_, out, _) = cli(&["run", "--json", "--fail-fast", p.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tasks"].as_array().unwrap().len(), 1);
}

#[test]
fn validate_lists_objects() {
    let p = write("val.tk", DOC);
    let (code, out, _) = cli(&["validate", "--json", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tasks"][0]["result"]["semigroup S"]["frobenius"], 2);
    assert_eq!(v["tasks"][0]["result"]["module M"]["dim"], 3);
}

#[test]
fn small_suite_from_a_document() {
    let p = write(
        "suite.tk",
        "[suite]\nfields = F2\nfamilies = dual_numbers, truncated(3)\nmax_dim = 4\ncorollary_genus = 2\ntorsion_genus = 2\n",
    );
    let a = cli(&["suite", "--json", "--seed", "3", p.to_str().unwrap()]);
    assert_eq!(a.0, EXIT_OK, "{}", a.1);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["tasks"][0]["result"]["seed"], 3);
    assert_eq!(v["tasks"][0]["result"]["failures"], serde_json::json!([]));
    let env = Cli::try_parse_from(["tracekernel", "suite", "--json", p.to_str().unwrap()]).unwrap();
    let (_, out, _) = execute(&env, Some("3"));
    assert_eq!(out, a.1);
}

/// Serializing an instance as a document and replaying it gives the verdict
/// of the original run.
#[test]
fn witness_round_trip() {
    let spec = CorpusSpec {
        fields: vec![2, 3],
        families: vec![AlgebraFamily::Truncated(2), AlgebraFamily::SquareZero(2)],
        max_dim: 4,
        ..CorpusSpec::default()
    };
    let corpus = generate_corpus(&spec).unwrap();
    let mut replayed = std::collections::BTreeSet::new();
    for alg in &corpus {
        let r = alg.modules.iter().position(|m| m.name == "R").unwrap();
        let k = alg.modules.iter().position(|m| m.name == "k").unwrap();
        for mi in 0..alg.modules.len() {
            let mut outcomes = check_module(alg, mi).unwrap();
            outcomes.extend(check_triple(alg, mi, k, r, &spec).unwrap());
            for (kind, outcome, roles) in outcomes {
                if !replayed.insert((alg.name.clone(), kind, outcome.verdict)) {
                    continue;
                }
                let mods: Vec<(&str, &tracekernel::suite::CorpusModule)> =
                    roles.iter().map(|(role, i)| (*role, &alg.modules[*i])).collect();
                let text = witness_document(&Witness::new(kind, &alg.algebra, &mods));
                let resolved = resolve(&parse(&text).unwrap()).unwrap_or_else(|e| panic!("{e}\n{text}"));
                let report = run(&resolved, |_| true, &RunOptions::default());
                let result = &report.tasks[0].result;
                let verdict: Verdict = match result["verdict"].as_str().unwrap() {
                    "pass" => Verdict::Pass,
                    "fail" => Verdict::Fail,
                    "hypothesis_not_met" => Verdict::HypothesisNotMet,
                    _ => Verdict::Skipped,
                };
                assert_eq!(verdict, outcome.verdict, "{kind:?} {}\n{text}", alg.name);
                assert_eq!(result["hypothesis"], outcome.hypothesis);
            }
        }
    }
    // every check kind was replayed at least once
    for kind in CheckKind::ALL {
        assert!(replayed.iter().any(|(_, k, _)| *k == kind), "{kind:?}");
    }
}
