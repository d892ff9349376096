//! Executing task blocks.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use tracekernel::artin::{Algebra, AlgebraFamily, Module, ModulePresentation};
use tracekernel::hom::{
    add_membership, check_center_certificate, evaluation_map, generation_witness, semidualizing_check, theta_image,
    GenerationDirection, HomSpace, MatrixAlgebra, Reflexivity, TraceData,
};
use tracekernel::linalg::Subspace;
use tracekernel::numsgp::{
    check_corollary_canonical, corollary_sweep, hw_probe, hw_sweep, stable_value_sets, tensor_torsion_length, FracIdeal,
};
use tracekernel::suite::{check_instance, check_oracle, run_suite, CheckKind, CorpusSpec, SuiteSpec, Verdict};
use tracekernel::{FieldSpec, Mat};

use crate::doc::{scalar, tokens, Block, DocError};
use crate::resolve::{Resolved, Scope};
use crate::witness::witness_document;

/// Command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Seed from the environment, used when neither the flag nor the
    /// document sets one.
    pub env_seed: Option<u64>,
    pub cutoff: Option<i64>,
    pub ext_bound: Option<usize>,
    pub max_oracle: Option<u64>,
    pub fail_fast: bool,
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    Ok,
    /// A checked statement failed.
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaskReport {
    pub name: String,
    pub op: String,
    pub inputs: BTreeMap<String, String>,
    pub status: TaskStatus,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.tasks.iter().all(|t| t.status == TaskStatus::Ok)
    }
}

pub const OPS: [&str; 24] = [
    "validate",
    "hom",
    "end",
    "center",
    "trace",
    "theta",
    "reflexive",
    "add",
    "generate",
    "semidualizing",
    "iso",
    "oracle",
    "check",
    "suite",
    "sgp.info",
    "sgp.ideal",
    "sgp.colon",
    "sgp.trace",
    "sgp.check_canonical",
    "sgp.torsion",
    "sgp.probe",
    "sgp.sweep",
    "sgp.stable_sets",
    "sgp.tensor",
];

type TaskResult = Result<(TaskStatus, Value), String>;

/// Runs the tasks whose op passes `select`, in document order.
pub fn run(resolved: &Resolved, select: impl Fn(&Block) -> bool, opts: &RunOptions) -> Report {
    let mut report = Report::default();
    for task in resolved.tasks.iter().filter(|t| select(t)) {
        let start = Instant::now();
        let op = task.value("op").unwrap_or_default().to_string();
        let outcome = run_task(resolved, task, &op, opts);
        let (status, result, error) = match outcome {
            Ok((s, v)) => (s, v, None),
            Err(e) => (TaskStatus::Error, Value::Null, Some(e)),
        };
        let inputs = task.entries.iter().filter(|e| e.key != "op").map(|e| (e.key.clone(), e.value.clone())).collect();
        report.tasks.push(TaskReport {
            name: task.name.clone(),
            op,
            inputs,
            status,
            result,
            error,
            elapsed_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
        });
        if opts.fail_fast && status != TaskStatus::Ok {
            break;
        }
    }
    report
}

/// Summary of every validated object, for `validate`.
pub fn validate_report(resolved: &Resolved) -> Report {
    let mut objects = serde_json::Map::new();
    for (name, a) in &resolved.algebras {
        objects.insert(format!("algebra {name}"), algebra_json(a));
    }
    for (name, m) in &resolved.modules {
        objects.insert(format!("module {name}"), json!({"algebra": m.algebra, "dim": m.module.dim()}));
    }
    for (name, s) in &resolved.semigroups {
        objects.insert(format!("semigroup {name}"), semigroup_json(s));
    }
    for (name, i) in &resolved.ideals {
        objects.insert(format!("ideal {name}"), json!({"semigroup": i.parent().to_string(), "ideal": i.to_string()}));
    }
    let tasks: Vec<Value> = resolved.tasks.iter().map(|t| json!({"name": t.name, "op": t.value("op")})).collect();
    objects.insert("tasks".into(), Value::Array(tasks));
    Report {
        tasks: vec![TaskReport {
            name: "validate".into(),
            op: "validate".into(),
            inputs: BTreeMap::new(),
            status: TaskStatus::Ok,
            result: Value::Object(objects),
            error: None,
            elapsed_ms: None,
        }],
    }
}

fn algebra_json(a: &Algebra) -> Value {
    json!({
        "field": a.field().name(),
        "family": a.family().map(|f| f.to_string()),
        "dim": a.dim(),
        "labels": a.labels(),
    })
}

fn semigroup_json(s: &tracekernel::numsgp::Semigroup) -> Value {
    json!({
        "generators": s.generators(),
        "multiplicity": s.multiplicity(),
        "embedding_dimension": s.embedding_dimension(),
        "frobenius": s.frobenius(),
        "conductor": s.conductor(),
        "genus": s.genus(),
        "gaps": s.gaps(),
        "apery": s.apery(),
        "symmetric": s.is_symmetric(),
        "canonical": FracIdeal::canonical(s).to_string(),
    })
}

/// A matrix in input syntax: rows separated by `;`.
pub fn matrix_text(m: &Mat) -> String {
    let f = m.field();
    (0..m.rows()).map(|i| m.row(i).iter().map(|&x| f.format(x)).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("; ")
}

/// Basis of a subspace of `Hom(L,N)` coordinates, as matrices.
fn basis_matrices(h: &HomSpace, s: &Subspace) -> Vec<String> {
    s.basis_vectors().map(|c| matrix_text(&h.matrix(&c))).collect()
}

fn tf(verdict: bool) -> TaskStatus {
    if verdict {
        TaskStatus::Ok
    } else {
        TaskStatus::Fail
    }
}

fn ok(v: Value) -> TaskResult {
    Ok((TaskStatus::Ok, v))
}

fn run_task(resolved: &Resolved, task: &Block, op: &str, opts: &RunOptions) -> TaskResult {
    let e = |err: DocError| err.to_string();
    let me = |err: tracekernel::error::ModuleError| err.to_string();
    let mut scope = Scope::new(resolved);
    if let Some(sgp) = op.strip_prefix("sgp.") {
        return run_semigroup_task(&mut scope, task, sgp, opts);
    }
    match op {
        "suite" => return run_suite_task(resolved, task, opts),
        "validate" => return ok(json!({"valid": true})),
        _ => {}
    }
    if !OPS.contains(&op) {
        return Err(format!("line {}: unknown op {op:?}", task.line));
    }
    let role_keys = ["M", "L", "N", "A", "B", "C"];
    let alg = scope.task_algebra(task, &role_keys).map_err(e)?;
    let mut module = |key: &str, default: Option<&str>| -> Result<Module, String> {
        match task.get(key) {
            Some(entry) => scope.module(&alg, entry).map_err(e),
            None => match default {
                Some("R") => Ok(ModulePresentation::free(&alg.1, 1)),
                _ => Err(format!("line {}: task {:?} needs {key}", task.line, task.name)),
            },
        }
    };
    let is_free_rank_one = |m: &Module| *m == ModulePresentation::free(&alg.1, 1);
    match op {
        "hom" => {
            let (m, n) = (module("M", None)?, module("N", None)?);
            let h = HomSpace::new(&m, &n).map_err(me)?;
            ok(json!({"dim": h.dim(), "basis": h.basis().iter().map(matrix_text).collect::<Vec<_>>()}))
        }
        "end" => {
            let m = module("M", None)?;
            let end = MatrixAlgebra::endomorphisms(&m);
            let z = end.center();
            ok(json!({
                "dim": end.dim(),
                "generators": end.generators().len(),
                "commutative": end.is_commutative(),
                "center_dim": z.dim(),
            }))
        }
        "center" => {
            let m = module("M", None)?;
            let n = module("N", Some("R"))?;
            let c = check_center_certificate(&m, &n).map_err(me)?;
            let z = MatrixAlgebra::endomorphisms(&m).center();
            let gate = c.reflexive && (c.add_condition || (is_free_rank_one(&n) && c.faithful));
            let holds = c.certificate.is_isomorphism() && c.center_is_end_over_end;
            let mut v = serde_json::to_value(&c).expect("serializable");
            v["center_basis"] = json!(z.basis().iter().map(matrix_text).collect::<Vec<_>>());
            v["gate"] = json!(gate);
            v["isomorphism"] = json!(c.certificate.is_isomorphism());
            Ok((tf(!gate || holds), v))
        }
        "trace" => {
            let m = module("M", None)?;
            let l = module("L", Some("R"))?;
            let n = module("N", Some("R"))?;
            let data = TraceData::new(&m, &l, &n).map_err(me)?;
            let mut v = json!({
                "dim": data.image().dim(),
                "hom_dim": data.codomain().dim(),
                "basis": basis_matrices(data.codomain(), data.image()),
                "injective": data.is_injective(),
                "surjective": data.is_surjective(),
                "bijective": data.is_bijective(),
            });
            if is_free_rank_one(&l) && is_free_rank_one(&n) {
                // maps R -> R are multiplications by the image of 1
                let ideal: Vec<String> = data
                    .image()
                    .basis_vectors()
                    .map(|c| alg.1.format_element(&data.codomain().matrix(&c).col(0)))
                    .collect();
                v["ideal_basis"] = json!(ideal);
            }
            ok(v)
        }
        "theta" => {
            let (l, n) = (module("L", None)?, module("N", None)?);
            let (h, img) = theta_image(&l, &n).map_err(me)?;
            ok(json!({"dim": img.dim(), "hom_dim": h.dim(), "basis": basis_matrices(&h, &img), "surjective": img.is_full()}))
        }
        "reflexive" => {
            let (m, n) = (module("M", None)?, module("N", None)?);
            let l = module("L", Some("R"))?;
            let r = Reflexivity::of(&m, &n, &l).map_err(me)?;
            let ev = evaluation_map(&m, &n).map_err(me)?;
            let mut v = serde_json::to_value(r).expect("serializable");
            v["evaluation_injective"] = json!(ev.is_injective());
            v["evaluation_bijective"] = json!(ev.is_bijective());
            ok(v)
        }
        "add" => {
            let (m, n) = (module("M", None)?, module("N", None)?);
            ok(json!({"in_add": add_membership(&n, &m).map_err(me)?}))
        }
        "generate" => {
            let (m, n) = (module("M", None)?, module("N", None)?);
            let l = module("L", Some("R"))?;
            let dir = match task.value("direction").unwrap_or("covariant") {
                "covariant" => GenerationDirection::Covariant,
                "contravariant" => GenerationDirection::Contravariant,
                other => return Err(format!("line {}: direction must be covariant or contravariant, not {other:?}", task.line)),
            };
            ok(serde_json::to_value(generation_witness(&m, &n, &l, dir).map_err(me)?).expect("serializable"))
        }
        "semidualizing" => {
            let c = module("C", None).or_else(|_| module("M", None))?;
            let bound = match task.get("bound") {
                Some(b) => scalar(b).map_err(e)?,
                None => opts.ext_bound.unwrap_or(CorpusSpec::default().ext_bound),
            };
            ok(serde_json::to_value(semidualizing_check(&c, bound).map_err(me)?).expect("serializable"))
        }
        "iso" => {
            let (m, n) = (module("M", None)?, module("N", None)?);
            let limit = match task.get("limit") {
                Some(x) => scalar(x).map_err(e)?,
                None => 1u64 << 20,
            };
            let iso = m.is_isomorphic(&n, limit).map_err(me)?;
            ok(json!({"isomorphic": iso, "decided": iso.is_some()}))
        }
        "oracle" => {
            let m = module("M", None)?;
            let l = module("L", Some("R"))?;
            let n = module("N", Some("R"))?;
            let data = TraceData::new(&m, &l, &n).map_err(me)?;
            let mut spec = CorpusSpec::default();
            if let Some(cap) = opts.max_oracle {
                spec.oracle_cap = cap;
            }
            let out = check_oracle(&data, &spec);
            let v = json!({"verdict": out.verdict, "detail": out.detail, "trace_dim": data.image().dim()});
            Ok((tf(out.verdict != Verdict::Fail), v))
        }
        "check" => {
            let name = task.value("check").ok_or_else(|| format!("line {}: check task needs `check`", task.line))?;
            let kind = CheckKind::parse(name).ok_or_else(|| format!("line {}: unknown check {name:?}", task.line))?;
            let mut mods: Vec<(&str, Module)> = Vec::new();
            for r in ["M", "L", "N", "A", "B"] {
                if task.get(r).is_some() {
                    mods.push((r, module(r, None)?));
                }
            }
            let roles: Vec<(&str, &Module)> = mods.iter().map(|(r, m)| (*r, m)).collect();
            let mut spec = CorpusSpec::default();
            if let Some(cap) = opts.max_oracle {
                spec.oracle_cap = cap;
            }
            let out = check_instance(kind, &roles, &spec).map_err(|err| err.to_string())?;
            let v = json!({"check": kind, "hypothesis": out.hypothesis, "verdict": out.verdict, "detail": out.detail});
            Ok((tf(out.verdict != Verdict::Fail), v))
        }
        _ => Err(format!("line {}: op {op:?} is not a module operation", task.line)),
    }
}

fn run_semigroup_task(scope: &mut Scope, task: &Block, op: &str, opts: &RunOptions) -> TaskResult {
    let e = |err: DocError| err.to_string();
    let cutoff = match task.get("cutoff") {
        Some(c) => Some(scalar::<i64>(c).map_err(e)?),
        None => opts.cutoff,
    };
    if op == "sweep" {
        let genus = |key: &str, default: usize| -> Result<Option<usize>, String> {
            match task.value(key) {
                Some("off") => Ok(None),
                Some(_) => Ok(Some(scalar(task.get(key).expect("present")).map_err(e)?)),
                None => Ok(Some(default)),
            }
        };
        let cor = genus("corollary_genus", 4)?.map(corollary_sweep);
        let hw = genus("torsion_genus", 4)?.map(|g| hw_sweep(g, cutoff));
        let good = cor.as_ref().is_none_or(|c| c.passed == c.instances && c.invariant_violations == 0)
            && hw.as_ref().is_none_or(|h| h.equiv_consistent == h.equiv_checked);
        return Ok((tf(good), json!({"corollary": cor, "torsion": hw})));
    }
    let ideal_keys = ["ideal", "I", "J"];
    let s = scope.task_semigroup(task, &ideal_keys).map_err(e)?;
    let mut ideal = |keys: &[&str]| -> Result<FracIdeal, String> {
        let entry = task.any(keys).ok_or_else(|| format!("line {}: task {:?} needs {}", task.line, task.name, keys[0]))?;
        scope.ideal(&s, entry).map_err(e)
    };
    match op {
        "info" => ok(semigroup_json(&s)),
        "stable_sets" => {
            let sets: Vec<String> = stable_value_sets(&s).iter().map(|i| i.to_string()).collect();
            ok(json!({"count": sets.len(), "sets": sets}))
        }
        "ideal" => {
            let i = ideal(&["ideal", "I"])?;
            ok(json!({
                "ideal": i.to_string(),
                "generators": i.generators(),
                "principal": i.is_principal(),
                "canonical_translate": i.is_canonical_translate(),
                "star": i.star().to_string(),
                "vee": i.vee().to_string(),
                "end_semigroup": i.end_semigroup().to_string(),
                "trace": i.trace_ideal().to_string(),
                "trace_omega": i.trace_omega().to_string(),
                "omega_reflexive": i.omega_reflexive(),
            }))
        }
        "colon" => {
            let (i, j) = (ideal(&["I", "ideal"])?, ideal(&["J"])?);
            let c = i.colon(&j).map_err(|err| err.to_string())?;
            ok(json!({"colon": c.to_string(), "maximal": i.colon_is_maximal(&j)}))
        }
        "tensor" | "torsion" => {
            let i = ideal(&["I", "ideal"])?;
            let j = match task.get("J") {
                Some(entry) => scope.ideal(&s, entry).map_err(e)?,
                None => i.star(),
            };
            ok(serde_json::to_value(tensor_torsion_length(&i, &j, cutoff)).expect("serializable"))
        }
        "trace" => {
            let i = ideal(&["ideal", "I"])?;
            ok(json!({"trace": i.trace_ideal().to_string(), "trace_omega": i.trace_omega().to_string()}))
        }
        "check_canonical" => {
            let c = check_corollary_canonical(&ideal(&["ideal", "I"])?);
            let mut v = serde_json::to_value(&c).expect("serializable");
            v["end_semigroup_text"] = json!(c.end_semigroup.to_string());
            v["trace_omega_text"] = json!(c.trace_omega.to_string());
            v["passed"] = json!(c.passed());
            Ok((tf(c.passed()), v))
        }
        "probe" => ok(serde_json::to_value(hw_probe(&ideal(&["ideal", "I"])?, cutoff)).expect("serializable")),
        _ => Err(format!("line {}: unknown op sgp.{op}", task.line)),
    }
}

/// Suite configuration from a `[suite]` block, then command-line overrides.
pub fn suite_spec(block: Option<&Block>, opts: &RunOptions) -> Result<SuiteSpec, String> {
    let mut spec = SuiteSpec::default();
    let mut seed = None;
    if let Some(b) = block {
        for entry in &b.entries {
            let bad = |what: &str| format!("line {}: {}: {what}", entry.line, entry.key);
            let e = |err: DocError| err.to_string();
            let genus = || -> Result<Option<usize>, String> {
                if entry.value == "off" {
                    Ok(None)
                } else {
                    scalar(entry).map(Some).map_err(e)
                }
            };
            let c = &mut spec.corpus;
            match entry.key.as_str() {
                "seed" => seed = Some(scalar(entry).map_err(e)?),
                "fields" => {
                    c.fields = tokens(&entry.value)
                        .map(|t| FieldSpec::parse(t).map(|f| f.order()).map_err(|err| bad(&err.to_string())))
                        .collect::<Result<_, _>>()?
                }
                "families" => {
                    c.families = tokens(&entry.value)
                        .map(|t| AlgebraFamily::parse(t).ok_or_else(|| bad(&format!("unknown family {t:?}"))))
                        .collect::<Result<_, _>>()?
                }
                "max_dim" => c.max_dim = scalar(entry).map_err(e)?,
                "random_quotients" => c.random_quotients = scalar(entry).map_err(e)?,
                "direct_sums" => c.direct_sums = scalar(entry).map_err(e)?,
                "oracle_cap" => c.oracle_cap = scalar(entry).map_err(e)?,
                "oracle_hom_cap" => c.oracle_hom_cap = scalar(entry).map_err(e)?,
                "lift_degree" => c.lift_degree = scalar(entry).map_err(e)?,
                "ext_bound" => c.ext_bound = scalar(entry).map_err(e)?,
                "corollary_genus" => spec.corollary_genus = genus()?,
                "torsion_genus" => spec.torsion_genus = genus()?,
                "torsion_cutoff" => spec.torsion_cutoff = Some(scalar(entry).map_err(e)?),
                _ => return Err(bad("unknown suite key")),
            }
        }
    }
    spec.corpus.seed = opts.seed.or(seed).or(opts.env_seed).unwrap_or(0);
    if let Some(c) = opts.cutoff {
        spec.torsion_cutoff = Some(c);
    }
    if let Some(b) = opts.ext_bound {
        spec.corpus.ext_bound = b;
    }
    if let Some(m) = opts.max_oracle {
        spec.corpus.oracle_cap = m;
    }
    spec.fail_fast = opts.fail_fast;
    Ok(spec)
}

fn run_suite_task(resolved: &Resolved, task: &Block, opts: &RunOptions) -> TaskResult {
    // task-level keys override the document's suite block
    let mut block = resolved.suite.clone().unwrap_or(Block {
        kind: crate::doc::BlockKind::Suite,
        name: "suite".into(),
        line: task.line,
        entries: Vec::new(),
    });
    for entry in task.entries.iter().filter(|e| e.key != "op") {
        block.entries.retain(|x| x.key != entry.key);
        block.entries.push(entry.clone());
    }
    let spec = suite_spec(Some(&block), opts)?;
    suite_result(&spec)
}

/// Runs the suite and attaches a replay document to every failure.
pub fn suite_result(spec: &SuiteSpec) -> TaskResult {
    let report = run_suite(spec).map_err(|e| e.to_string())?;
    let mut v = serde_json::to_value(&report).expect("serializable");
    let replays: Vec<String> = report.failures.iter().filter_map(|f| f.witness.as_ref().map(witness_document)).collect();
    v["replays"] = json!(replays);
    Ok((tf(report.ok), v))
}
