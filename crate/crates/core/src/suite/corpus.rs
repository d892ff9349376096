use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::artin::{Algebra, AlgebraFamily, AlgebraPresentation, Module, ModulePresentation};
use crate::error::Result;
use crate::field::{Elem, FieldEmbedding, FieldSpec};

/// Everything that determines a corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusSpec {
    pub seed: u64,
    /// Field orders.
    pub fields: Vec<u32>,
    pub families: Vec<AlgebraFamily>,
    /// Largest module dimension kept.
    pub max_dim: usize,
    /// Seeded quotients of `R^2` by one random element, per algebra.
    pub random_quotients: usize,
    /// Add `A ⊕ B` for all pairs of the base modules that fit.
    pub direct_sums: bool,
    /// Largest number of pairs the brute-force oracle enumerates.
    pub oracle_cap: u64,
    /// Largest `|Hom(L,N)|` the brute-force oracle closes under sums.
    pub oracle_hom_cap: u64,
    /// Degree of the field extension used for base change.
    pub lift_degree: u32,
    /// Bound for the `Ext` vanishing reported by semidualizing checks.
    pub ext_bound: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 0,
            fields: vec![2, 3],
            families: vec![
                AlgebraFamily::Truncated(2),
                AlgebraFamily::Truncated(3),
                AlgebraFamily::Truncated(4),
                AlgebraFamily::SquareZero(2),
                AlgebraFamily::CompleteIntersectionSquares,
                AlgebraFamily::XSquaredXyYCubed,
                AlgebraFamily::SquareZero(3),
            ],
            max_dim: 8,
            random_quotients: 2,
            direct_sums: true,
            oracle_cap: 1 << 16,
            oracle_hom_cap: 1 << 12,
            lift_degree: 2,
            ext_bound: 4,
        }
    }
}

impl CorpusSpec {
    /// No algebras at all.
    pub fn empty() -> Self {
        CorpusSpec { fields: Vec::new(), families: Vec::new(), ..Self::default() }
    }
}

/// How a corpus module was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    Free,
    ResidueField,
    Canonical,
    MaximalIdeal,
    Syzygy { of: String },
    /// `R^2` modulo the submodule generated by `element`.
    RandomQuotient { element: Vec<Elem> },
    DirectSum { left: String, right: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusModule {
    pub name: String,
    pub recipe: Recipe,
    pub module: Module,
}

#[derive(Clone, Debug)]
pub struct CorpusAlgebra {
    /// `F<q>:<family>`.
    pub name: String,
    pub algebra: Algebra,
    pub modules: Vec<CorpusModule>,
    /// Base change of the algebra and of every module (in the same order),
    /// with the field embedding used.
    pub lifted: Option<(FieldEmbedding, Algebra, Vec<Module>)>,
}

impl CorpusAlgebra {
    pub fn module(&self, name: &str) -> Option<&CorpusModule> {
        self.modules.iter().find(|m| m.name == name)
    }
}

/// Per-algebra seed: the corpus seed mixed with the algebra's position.
fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusAlgebra>> {
    let mut out = Vec::new();
    for &q in &spec.fields {
        let field = FieldSpec::of_order(q)?;
        for family in &spec.families {
            let algebra = AlgebraPresentation::from_family(&field, family)?;
            let name = format!("F{q}:{family}");
            let mut rng = rng_for(spec.seed, out.len());
            let modules = corpus_modules(&algebra, spec, &mut rng)?;
            let lifted = if spec.lift_degree > 1 {
                lift_all(&algebra, &modules, spec.lift_degree)?
            } else {
                None
            };
            out.push(CorpusAlgebra { name, algebra, modules, lifted });
        }
    }
    Ok(out)
}

fn lift_all(algebra: &Algebra, modules: &[CorpusModule], degree: u32) -> Result<Option<(FieldEmbedding, Algebra, Vec<Module>)>> {
    let field = algebra.field();
    let big = FieldSpec::galois(field.characteristic(), field.degree() * degree)?;
    let emb = FieldEmbedding::new(field, &big)?;
    // base change of a non-split residue field is not local; skip it
    let Ok(lifted) = algebra.lift(&emb) else { return Ok(None) };
    let mods = modules.iter().map(|m| m.module.lift(&lifted, &emb)).collect::<Result<Vec<_>, _>>()?;
    Ok(Some((emb, lifted, mods)))
}

fn corpus_modules(algebra: &Algebra, spec: &CorpusSpec, rng: &mut ChaCha8Rng) -> Result<Vec<CorpusModule>> {
    let mut base: Vec<CorpusModule> = Vec::new();
    let push = |list: &mut Vec<CorpusModule>, name: String, recipe: Recipe, module: Module| {
        if !module.is_zero() && module.dim() <= spec.max_dim && !list.iter().any(|m| m.name == name) {
            list.push(CorpusModule { name, recipe, module });
        }
    };
    let r = ModulePresentation::free(algebra, 1);
    let k = ModulePresentation::residue_field(algebra);
    let w = ModulePresentation::canonical(algebra);
    let m = ModulePresentation::maximal_ideal(algebra);
    push(&mut base, "R".into(), Recipe::Free, r);
    push(&mut base, "k".into(), Recipe::ResidueField, k);
    push(&mut base, "omega".into(), Recipe::Canonical, w.clone());
    push(&mut base, "m".into(), Recipe::MaximalIdeal, m.clone());
    push(&mut base, "syz(m)".into(), Recipe::Syzygy { of: "m".into() }, m.syzygy());
    push(&mut base, "syz(omega)".into(), Recipe::Syzygy { of: "omega".into() }, w.syzygy());

    let r2 = ModulePresentation::free(algebra, 2);
    let q = algebra.field().order();
    let mut made = 0;
    let mut attempts = 0;
    while made < spec.random_quotients && attempts < 16 * spec.random_quotients.max(1) {
        attempts += 1;
        let element: Vec<Elem> = (0..r2.dim()).map(|_| rng.gen_range(0..q)).collect();
        let sub = r2.generated_by([element.clone()]);
        let quotient = r2.quotient(&sub)?;
        if quotient.is_zero() || quotient.dim() > spec.max_dim {
            continue;
        }
        made += 1;
        push(&mut base, format!("quot{made}"), Recipe::RandomQuotient { element }, quotient);
    }

    let mut all = base.clone();
    if spec.direct_sums {
        for (i, a) in base.iter().enumerate() {
            for b in &base[i..] {
                if a.module.dim() + b.module.dim() > spec.max_dim {
                    continue;
                }
                let sum = ModulePresentation::direct_sum(&[&a.module, &b.module])?;
                let recipe = Recipe::DirectSum { left: a.name.clone(), right: b.name.clone() };
                push(&mut all, format!("{}+{}", a.name, b.name), recipe, sum);
            }
        }
    }
    Ok(all)
}
