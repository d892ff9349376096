use serde::Serialize;

use crate::artin::{Algebra, Module, ModulePresentation};
use crate::error::{ModuleError, Result};
use crate::field::Elem;
use crate::hom::{
    add_membership, check_center_certificate, check_lindo_certificate, epsilon_map, evaluation_map, general_certificate,
    generation_witness, hom_over_end, pi_map, trace_image, GeneralHypotheses, GenerationDirection, MatrixAlgebra,
    TraceData, Variant,
};
use crate::linalg::Subspace;

use super::corpus::{CorpusAlgebra, CorpusModule, CorpusSpec, Recipe};
use super::oracle::{brute_force_trace_oracle, OracleOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CheckKind {
    #[serde(rename = "trace.direct_sum")]
    TraceDirectSum,
    #[serde(rename = "trace.add_bijective")]
    TraceAddBijective,
    #[serde(rename = "trace.generation_inclusion")]
    TraceGenerationInclusion,
    #[serde(rename = "trace.generation_surjective")]
    TraceGenerationSurjective,
    #[serde(rename = "trace.restriction_iso")]
    TraceRestriction,
    #[serde(rename = "trace.base_change")]
    TraceBaseChange,
    #[serde(rename = "faithful_generator")]
    FaithfulGenerator,
    #[serde(rename = "general.variant1")]
    GeneralOne,
    #[serde(rename = "general.variant2")]
    GeneralTwo,
    #[serde(rename = "lindo")]
    Lindo,
    #[serde(rename = "center.canonical")]
    CenterCanonical,
    #[serde(rename = "center.end_over_end")]
    CenterEndOverEnd,
    #[serde(rename = "oracle.factorization")]
    Oracle,
}

impl CheckKind {
    pub const ALL: [CheckKind; 13] = [
        CheckKind::TraceDirectSum,
        CheckKind::TraceAddBijective,
        CheckKind::TraceGenerationInclusion,
        CheckKind::TraceGenerationSurjective,
        CheckKind::TraceRestriction,
        CheckKind::TraceBaseChange,
        CheckKind::FaithfulGenerator,
        CheckKind::GeneralOne,
        CheckKind::GeneralTwo,
        CheckKind::Lindo,
        CheckKind::CenterCanonical,
        CheckKind::CenterEndOverEnd,
        CheckKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::TraceDirectSum => "trace.direct_sum",
            CheckKind::TraceAddBijective => "trace.add_bijective",
            CheckKind::TraceGenerationInclusion => "trace.generation_inclusion",
            CheckKind::TraceGenerationSurjective => "trace.generation_surjective",
            CheckKind::TraceRestriction => "trace.restriction_iso",
            CheckKind::TraceBaseChange => "trace.base_change",
            CheckKind::FaithfulGenerator => "faithful_generator",
            CheckKind::GeneralOne => "general.variant1",
            CheckKind::GeneralTwo => "general.variant2",
            CheckKind::Lindo => "lindo",
            CheckKind::CenterCanonical => "center.canonical",
            CheckKind::CenterEndOverEnd => "center.end_over_end",
            CheckKind::Oracle => "oracle.factorization",
        }
    }

    pub fn parse(s: &str) -> Option<CheckKind> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// The statement being checked.
    pub fn statement(self) -> &'static str {
        match self {
            CheckKind::TraceDirectSum => "tr_{L,N}(A+B) = tr_{L,N}(A) + tr_{L,N}(B)",
            CheckKind::TraceAddBijective => "L or N in Add(M) => phi^M_{L,N} bijective",
            CheckKind::TraceGenerationInclusion => "M generates B (cov. wrt L or contra. wrt N) => tr(B) in tr(M)",
            CheckKind::TraceGenerationSurjective => "M generates N wrt L or L wrt N => phi^M_{L,N} surjective",
            CheckKind::TraceRestriction => "reflexive pair => Hom_E(tr, tr) -> Hom_E(tr, Hom(L,N)) bijective",
            CheckKind::TraceBaseChange => "tr over F_(q^d) of the lifts = lift of tr",
            CheckKind::FaithfulGenerator => "M torsionless => (M faithful <=> R in Add(M))",
            CheckKind::GeneralOne => "End_End(L)(tr) = End_End(M)(Hom(M,N)) as rings",
            CheckKind::GeneralTwo => "End_End(N)(tr) = End_End(M)(Hom(L,M)) as rings",
            CheckKind::Lindo => "M faithful and reflexive => Z(End M) = End(tr_R(M))",
            CheckKind::CenterCanonical => "R or omega in Add(M) => Z(End M) = End(tr_omega(M))",
            CheckKind::CenterEndOverEnd => "Z(End M) = End_End(M)(M)",
            CheckKind::Oracle => "tr_{L,N}(M) = maps factoring through a power of M",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisNotMet,
    /// Over the enumeration cap (oracle only).
    Skipped,
}

/// One module of a serialized instance, with its action matrix for every
/// basis element of the algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleRecord {
    pub role: String,
    pub name: String,
    pub dim: usize,
    pub actions: Vec<Vec<Vec<Elem>>>,
}

impl ModuleRecord {
    pub fn new(role: &str, name: &str, m: &Module) -> Self {
        ModuleRecord {
            role: role.into(),
            name: name.into(),
            dim: m.dim(),
            actions: m.actions().iter().map(|a| (0..a.rows()).map(|i| a.row(i).to_vec()).collect()).collect(),
        }
    }
}

/// A full, replayable serialization of a checked instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: CheckKind,
    pub field: String,
    pub family: Option<String>,
    pub labels: Vec<String>,
    pub constants: Vec<Elem>,
    pub unit: Vec<Elem>,
    pub modules: Vec<ModuleRecord>,
}

impl Witness {
    pub fn new(check: CheckKind, algebra: &Algebra, modules: &[(&str, &CorpusModule)]) -> Self {
        Witness {
            check,
            field: algebra.field().name(),
            family: algebra.family().map(|f| f.to_string()),
            labels: algebra.labels().to_vec(),
            constants: algebra.constants().to_vec(),
            unit: algebra.unit().to_vec(),
            modules: modules.iter().map(|(role, m)| ModuleRecord::new(role, &m.name, &m.module)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: CheckKind,
    pub instance: String,
    pub hypothesis: bool,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// A check outcome before it is attached to an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub hypothesis: bool,
    pub verdict: Verdict,
    pub detail: Option<String>,
}

impl Outcome {
    pub fn decide(hypothesis: bool, holds: impl FnOnce() -> Result<bool, ModuleError>) -> Result<Self, ModuleError> {
        if !hypothesis {
            return Ok(Outcome { hypothesis, verdict: Verdict::HypothesisNotMet, detail: None });
        }
        let verdict = if holds()? { Verdict::Pass } else { Verdict::Fail };
        Ok(Outcome { hypothesis, verdict, detail: None })
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }
}

/// `tr_{L,N}(A ⊕ B) = tr_{L,N}(A) + tr_{L,N}(B)`.
pub fn check_direct_sum(sum: &Module, a: &Module, b: &Module, l: &Module, n: &Module) -> Result<Outcome, ModuleError> {
    Outcome::decide(true, || {
        let (_, ts) = trace_image(sum, l, n)?;
        let (_, ta) = trace_image(a, l, n)?;
        let (_, tb) = trace_image(b, l, n)?;
        Ok(ta.sum(&tb).expect("same ambient") == ts)
    })
}

pub fn check_add_bijective(data: &TraceData, m: &Module, l: &Module, n: &Module) -> Result<Outcome, ModuleError> {
    let hyp = add_membership(l, m)? || add_membership(n, m)?;
    Outcome::decide(hyp, || Ok(data.is_bijective()))
}

/// `A` generates `B` covariantly w.r.t. `L` or contravariantly w.r.t. `N`,
/// witnessed by an explicit map; then `tr_{L,N}(B) ⊆ tr_{L,N}(A)`.
pub fn check_generation_inclusion(
    data_a: &TraceData,
    a: &Module,
    b: &Module,
    l: &Module,
    n: &Module,
) -> Result<Outcome, ModuleError> {
    let hyp = generation_witness(a, b, l, GenerationDirection::Covariant)?.surjective
        || generation_witness(a, b, n, GenerationDirection::Contravariant)?.surjective;
    Outcome::decide(hyp, || {
        let (_, tb) = trace_image(b, l, n)?;
        Ok(tb.is_subspace_of(data_a.image()).expect("same ambient"))
    })
}

pub fn check_generation_surjective(data: &TraceData, m: &Module, l: &Module, n: &Module) -> Result<Outcome, ModuleError> {
    let hyp = generation_witness(m, n, l, GenerationDirection::Covariant)?.surjective
        || generation_witness(m, l, n, GenerationDirection::Contravariant)?.surjective;
    Outcome::decide(hyp, || Ok(data.is_surjective()))
}

/// For a covariantly `L`-reflexive pair `(M,N)`, every `End(L)`-map from the
/// trace submodule into `Hom(L,N)` lands in the trace submodule; likewise
/// with `End(N)` for a contravariantly `N`-reflexive pair `(L,M)`.
pub fn check_restriction(data: &TraceData, m: &Module, l: &Module, n: &Module) -> Result<Outcome, ModuleError> {
    let cov = epsilon_map(m, n, l)?.is_bijective();
    let contra = pi_map(l, m, n)?.is_bijective();
    let field = m.algebra().field();
    let h = data.codomain();
    let t_dim = data.image().dim();
    let compare = |ops_t: Vec<crate::linalg::Mat>, ops_h: Vec<crate::linalg::Mat>| {
        let inner = hom_over_end(field, &ops_t, t_dim, &ops_t, t_dim).dim();
        let outer = hom_over_end(field, &ops_t, t_dim, &ops_h, h.dim()).dim();
        (inner, outer)
    };
    let mut detail = Vec::new();
    let outcome = Outcome::decide(cov || contra, || {
        let mut ok = true;
        if cov {
            let end_l = MatrixAlgebra::endomorphisms(l);
            let ops_t = end_l.generators().iter().map(|u| data.right_action_on_image(u).expect("stable")).collect();
            let ops_h = end_l.generators().iter().map(|u| h.right_action(u)).collect();
            let (a, b) = compare(ops_t, ops_h);
            detail.push(format!("covariant {a}/{b}"));
            ok &= a == b;
        }
        if contra {
            let end_n = MatrixAlgebra::endomorphisms(n);
            let ops_t = end_n.generators().iter().map(|v| data.left_action_on_image(v).expect("stable")).collect();
            let ops_h = end_n.generators().iter().map(|v| h.left_action(v)).collect();
            let (a, b) = compare(ops_t, ops_h);
            detail.push(format!("contravariant {a}/{b}"));
            ok &= a == b;
        }
        Ok(ok)
    })?;
    Ok(if detail.is_empty() { outcome } else { outcome.with_detail(detail.join(", ")) })
}

/// Trace submodule of the base-changed modules versus the base change of the
/// trace submodule, as spaces of matrices.
pub fn check_base_change(
    data: &TraceData,
    lifted: (&Module, &Module, &Module),
    emb: &crate::field::FieldEmbedding,
) -> Result<Outcome, ModuleError> {
    Outcome::decide(true, || {
        let (m, l, n) = lifted;
        let big = TraceData::new(m, l, n)?;
        let lifted_small = data.image_matrices().lift(emb).expect("embedding matches the field");
        Ok(big.image_matrices() == lifted_small)
    })
}

pub fn check_faithful_generator(m: &Module) -> Result<Outcome, ModuleError> {
    let torsionless = evaluation_map(m, &ModulePresentation::free(m.algebra(), 1))?.is_injective();
    Outcome::decide(torsionless, || {
        Ok(m.is_faithful() == add_membership(&ModulePresentation::free(m.algebra(), 1), m)?)
    })
}

pub fn check_general(m: &Module, l: &Module, n: &Module, variant: Variant) -> Result<Outcome, ModuleError> {
    let hyp = GeneralHypotheses::evaluate(m, l, n, variant)?;
    let mut flags = String::new();
    let out = Outcome::decide(hyp.satisfied(), || {
        let cert = general_certificate(m, l, n, variant)?;
        flags = format!(
            "dim {} -> {}, well_defined={} lands_in_target={} bijective={} multiplicative={} unital={}",
            cert.source.dim,
            cert.target.dim,
            cert.well_defined,
            cert.lands_in_target,
            cert.bijective,
            cert.multiplicative,
            cert.unital
        );
        Ok(cert.is_isomorphism())
    })?;
    Ok(if flags.is_empty() { out } else { out.with_detail(flags) })
}

/// Lindo's statement and the center identity, from one certificate.
pub fn check_lindo(m: &Module) -> Result<(Outcome, Outcome), ModuleError> {
    let c = check_lindo_certificate(m)?;
    let gate = c.faithful && c.reflexive;
    let lindo = Outcome::decide(gate, || Ok(c.certificate.is_isomorphism()))?
        .with_detail(format!("center {} of End {}", c.center_dim, c.end_dim));
    let center = Outcome::decide(true, || Ok(c.center_is_end_over_end))?;
    Ok((lindo, center))
}

/// The Artinian analogue with the canonical module in place of `R`.
pub fn check_center_canonical(m: &Module) -> Result<Outcome, ModuleError> {
    let w = ModulePresentation::canonical(m.algebra());
    let c = check_center_certificate(m, &w)?;
    Outcome::decide(c.add_condition && c.reflexive, || Ok(c.certificate.is_isomorphism()))
}

pub fn check_oracle(data: &TraceData, spec: &CorpusSpec) -> Outcome {
    match brute_force_trace_oracle(data, spec.oracle_cap, spec.oracle_hom_cap) {
        OracleOutcome::Skipped => Outcome { hypothesis: false, verdict: Verdict::Skipped, detail: None },
        OracleOutcome::Computed { elements, summands } => {
            let trace = data.image_matrices();
            let holds = elements.len() as u64 == trace_size(&trace) && elements.iter().all(|e| trace.contains(e));
            Outcome {
                hypothesis: true,
                verdict: if holds { Verdict::Pass } else { Verdict::Fail },
                detail: Some(format!("{} maps, {summands} summands", elements.len())),
            }
        }
    }
}

fn trace_size(s: &Subspace) -> u64 {
    (s.field().order() as u64).pow(s.dim() as u32)
}

/// The `(L, N)` pairs every module is checked against.
pub const TEST_MODULES: [&str; 3] = ["R", "k", "omega"];

/// Modules `B` used as the generated module in the inclusion check.
pub const GENERATED_MODULES: [&str; 4] = ["R", "k", "omega", "m"];

/// A check, its outcome, and the corpus module index behind each role.
pub type CheckResult = (CheckKind, Outcome, Vec<(&'static str, usize)>);

/// Every check for the triple `(M; L, N)` of corpus modules.
pub fn check_triple(
    alg: &CorpusAlgebra,
    mi: usize,
    li: usize,
    ni: usize,
    spec: &CorpusSpec,
) -> Result<Vec<CheckResult>> {
    let mods = &alg.modules;
    let (m, l, n) = (&mods[mi].module, &mods[li].module, &mods[ni].module);
    let data = TraceData::new(m, l, n)?;
    let triple = vec![("M", mi), ("L", li), ("N", ni)];
    let mut out = Vec::new();

    if let Recipe::DirectSum { left, right } = &mods[mi].recipe {
        let ai = mods.iter().position(|x| &x.name == left).expect("summand in corpus");
        let bi = mods.iter().position(|x| &x.name == right).expect("summand in corpus");
        let o = check_direct_sum(m, &mods[ai].module, &mods[bi].module, l, n)?;
        let mut roles = triple.clone();
        roles.extend([("A", ai), ("B", bi)]);
        out.push((CheckKind::TraceDirectSum, o, roles));
    }
    out.push((CheckKind::TraceAddBijective, check_add_bijective(&data, m, l, n)?, triple.clone()));
    for name in GENERATED_MODULES {
        let Some(bi) = mods.iter().position(|x| x.name == name) else { continue };
        if bi == mi {
            continue;
        }
        let o = check_generation_inclusion(&data, m, &mods[bi].module, l, n)?;
        let mut roles = triple.clone();
        roles.push(("B", bi));
        out.push((CheckKind::TraceGenerationInclusion, o, roles));
    }
    out.push((CheckKind::TraceGenerationSurjective, check_generation_surjective(&data, m, l, n)?, triple.clone()));
    out.push((CheckKind::TraceRestriction, check_restriction(&data, m, l, n)?, triple.clone()));
    if let Some((emb, _, lifted)) = &alg.lifted {
        let o = check_base_change(&data, (&lifted[mi], &lifted[li], &lifted[ni]), emb)?;
        out.push((CheckKind::TraceBaseChange, o, triple.clone()));
    }
    out.push((CheckKind::GeneralOne, check_general(m, l, n, Variant::One)?, triple.clone()));
    out.push((CheckKind::GeneralTwo, check_general(m, l, n, Variant::Two)?, triple.clone()));
    out.push((CheckKind::Oracle, check_oracle(&data, spec), triple));
    Ok(out)
}

/// Checks that only involve `M`.
pub fn check_module(alg: &CorpusAlgebra, mi: usize) -> Result<Vec<CheckResult>> {
    let m = &alg.modules[mi].module;
    let roles = vec![("M", mi)];
    let (lindo, center) = check_lindo(m)?;
    Ok(vec![
        (CheckKind::FaithfulGenerator, check_faithful_generator(m)?, roles.clone()),
        (CheckKind::Lindo, lindo, roles.clone()),
        (CheckKind::CenterEndOverEnd, center, roles.clone()),
        (CheckKind::CenterCanonical, check_center_canonical(m)?, roles),
    ])
}

/// Re-runs one check on explicitly given modules, looked up by role
/// (`M`, `L`, `N`, and `A`, `B` where the check needs them). Used to replay
/// failure witnesses.
pub fn check_instance(kind: CheckKind, roles: &[(&str, &Module)], spec: &CorpusSpec) -> Result<Outcome> {
    let get = |r: &str| -> Result<&Module> {
        roles
            .iter()
            .find(|(name, _)| *name == r)
            .map(|(_, m)| *m)
            .ok_or_else(|| crate::error::Error::Usage(format!("{} needs a module for role {r}", kind.name())))
    };
    let m = get("M")?;
    let module_level = matches!(
        kind,
        CheckKind::FaithfulGenerator | CheckKind::Lindo | CheckKind::CenterCanonical | CheckKind::CenterEndOverEnd
    );
    if module_level {
        return Ok(match kind {
            CheckKind::FaithfulGenerator => check_faithful_generator(m)?,
            CheckKind::Lindo => check_lindo(m)?.0,
            CheckKind::CenterEndOverEnd => check_lindo(m)?.1,
            _ => check_center_canonical(m)?,
        });
    }
    let (l, n) = (get("L")?, get("N")?);
    let data = TraceData::new(m, l, n)?;
    Ok(match kind {
        CheckKind::TraceDirectSum => check_direct_sum(m, get("A")?, get("B")?, l, n)?,
        CheckKind::TraceAddBijective => check_add_bijective(&data, m, l, n)?,
        CheckKind::TraceGenerationInclusion => check_generation_inclusion(&data, m, get("B")?, l, n)?,
        CheckKind::TraceGenerationSurjective => check_generation_surjective(&data, m, l, n)?,
        CheckKind::TraceRestriction => check_restriction(&data, m, l, n)?,
        CheckKind::TraceBaseChange => {
            let field = m.algebra().field();
            let big = crate::field::FieldSpec::galois(field.characteristic(), field.degree() * spec.lift_degree.max(2))?;
            let emb = crate::field::FieldEmbedding::new(field, &big)?;
            let lifted = m.algebra().lift(&emb)?;
            let lift = |x: &Module| x.lift(&lifted, &emb);
            check_base_change(&data, (&lift(m)?, &lift(l)?, &lift(n)?), &emb)?
        }
        CheckKind::GeneralOne => check_general(m, l, n, Variant::One)?,
        CheckKind::GeneralTwo => check_general(m, l, n, Variant::Two)?,
        CheckKind::Oracle => check_oracle(&data, spec),
        _ => unreachable!("module-level checks handled above"),
    })
}
