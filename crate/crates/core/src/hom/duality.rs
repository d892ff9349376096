use serde::Serialize;

use crate::artin::{ext_dims, ExtReport, Module, ModulePresentation, DEFAULT_SYZYGY_CAP};
use crate::error::ModuleError;
use crate::field::{Elem, FieldSpec};
use crate::linalg::{intertwiners, Echelon, Mat, Subspace};

use super::trace::trace_image;
use super::{HomSpace, MatrixAlgebra};

/// Rank data of a linear map between finite-dimensional spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DualityMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl DualityMap {
    pub fn is_injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.rank == self.target_dim
    }
}

/// `Hom_E(A, B)` for two spaces carrying actions of the same generators of
/// an algebra `E`, as row-major `dim B x dim A` matrices.
pub fn hom_over_end(field: &FieldSpec, a_ops: &[Mat], a_dim: usize, b_ops: &[Mat], b_dim: usize) -> Subspace {
    intertwiners(field, a_ops, a_dim, b_ops, b_dim)
}

fn rank_of<I>(field: &FieldSpec, n: usize, vectors: I) -> usize
where
    I: IntoIterator<Item = Vec<Elem>>,
{
    let mut ech = Echelon::new(field, n);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// `Hom(M,N) -> Hom_End(L)(Hom(L,M), Hom(L,N))`, `f -> (g -> f . g)`.
pub fn epsilon_map(m: &Module, n: &Module, l: &Module) -> Result<DualityMap, ModuleError> {
    let x = HomSpace::new(m, n)?;
    let y = HomSpace::new(l, m)?;
    let t = HomSpace::new(l, n)?;
    let end_l = MatrixAlgebra::endomorphisms(l);
    let y_ops: Vec<Mat> = end_l.generators().iter().map(|u| y.right_action(u)).collect();
    let t_ops: Vec<Mat> = end_l.generators().iter().map(|u| t.right_action(u)).collect();
    let target = hom_over_end(x.field(), &y_ops, y.dim(), &t_ops, t.dim());
    let images = x.basis().iter().map(|f| {
        let cols: Vec<Vec<Elem>> = y.basis().iter().map(|g| t.coords_unchecked(&f.mul_unchecked(g))).collect();
        let v = Mat::from_columns(x.field(), t.dim(), &cols).into_data();
        debug_assert!(target.contains(&v));
        v
    });
    let rank = rank_of(x.field(), target.ambient(), images);
    Ok(DualityMap { source_dim: x.dim(), target_dim: target.dim(), rank })
}

/// `Hom(M,N) -> Hom_End(L)(Hom(N,L), Hom(M,L))`, `f -> (h -> h . f)`.
pub fn pi_map(m: &Module, n: &Module, l: &Module) -> Result<DualityMap, ModuleError> {
    let x = HomSpace::new(m, n)?;
    let p = HomSpace::new(n, l)?;
    let q = HomSpace::new(m, l)?;
    let end_l = MatrixAlgebra::endomorphisms(l);
    let p_ops: Vec<Mat> = end_l.generators().iter().map(|v| p.left_action(v)).collect();
    let q_ops: Vec<Mat> = end_l.generators().iter().map(|v| q.left_action(v)).collect();
    let target = hom_over_end(x.field(), &p_ops, p.dim(), &q_ops, q.dim());
    let images = x.basis().iter().map(|f| {
        let cols: Vec<Vec<Elem>> = p.basis().iter().map(|h| q.coords_unchecked(&h.mul_unchecked(f))).collect();
        let v = Mat::from_columns(x.field(), q.dim(), &cols).into_data();
        debug_assert!(target.contains(&v));
        v
    });
    let rank = rank_of(x.field(), target.ambient(), images);
    Ok(DualityMap { source_dim: x.dim(), target_dim: target.dim(), rank })
}

/// The evaluation map `N -> Hom_End(L)(Hom(N,L), L)`, realized as the
/// contravariant map of the pair `(R, N)`.
pub fn evaluation_map(n: &Module, l: &Module) -> Result<DualityMap, ModuleError> {
    pi_map(&ModulePresentation::free(n.algebra(), 1), n, l)
}

/// The four torsionless/reflexive conditions of a pair `(M,N)` with respect
/// to `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Reflexivity {
    pub covariantly_torsionless: bool,
    pub contravariantly_torsionless: bool,
    pub covariantly_reflexive: bool,
    pub contravariantly_reflexive: bool,
}

impl Reflexivity {
    pub fn of(m: &Module, n: &Module, l: &Module) -> Result<Self, ModuleError> {
        let eps = epsilon_map(m, n, l)?;
        let pi = pi_map(m, n, l)?;
        Ok(Reflexivity {
            covariantly_torsionless: eps.is_injective(),
            contravariantly_torsionless: pi.is_injective(),
            covariantly_reflexive: eps.is_bijective(),
            contravariantly_reflexive: pi.is_bijective(),
        })
    }
}

/// `N ∈ Add(M)`, decided by `id_N ∈ tr_{N,N}(M)`.
pub fn add_membership(n: &Module, m: &Module) -> Result<bool, ModuleError> {
    let (t, tr) = trace_image(m, n, n)?;
    let id = Mat::identity(t.field(), n.dim());
    let coords = t.coords(&id).expect("identity is a module map");
    Ok(tr.contains(&coords))
}

/// `M` covariantly generates `N` with respect to `L`: `tr_{L,N}(M) = Hom(L,N)`.
pub fn covariantly_generates(m: &Module, n: &Module, l: &Module) -> Result<bool, ModuleError> {
    Ok(trace_image(m, l, n)?.1.is_full())
}

/// `M` contravariantly generates `N` with respect to `L`:
/// `tr_{N,L}(M) = Hom(N,L)`.
pub fn contravariantly_generates(m: &Module, n: &Module, l: &Module) -> Result<bool, ModuleError> {
    Ok(trace_image(m, n, l)?.1.is_full())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GenerationDirection {
    Covariant,
    Contravariant,
}

/// An explicit map between `M^copies` and `N` and whether the induced map
/// on `Hom(L, -)` (covariant) or `Hom(-, L)` (contravariant) is surjective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationWitness {
    pub direction: GenerationDirection,
    pub copies: usize,
    pub surjective: bool,
}

/// Builds the universal map from a set of `End(M)`-module generators of
/// `Hom(M,N)` (covariant) or `Hom(N,M)` (contravariant) and tests whether it
/// witnesses generation.
pub fn generation_witness(
    m: &Module,
    n: &Module,
    l: &Module,
    direction: GenerationDirection,
) -> Result<GenerationWitness, ModuleError> {
    let field = m.algebra().field().clone();
    let end_m = MatrixAlgebra::endomorphisms(m);
    let power = |copies: usize| -> Result<Module, ModuleError> {
        if copies == 0 {
            return Ok(ModulePresentation::zero(m.algebra()));
        }
        let parts: Vec<&ModulePresentation> = (0..copies).map(|_| m.as_ref()).collect();
        ModulePresentation::direct_sum(&parts)
    };
    match direction {
        GenerationDirection::Covariant => {
            let gens = HomSpace::new(m, n)?.right_generators(&end_m);
            let sum = power(gens.len())?;
            let p = gens.iter().fold(Mat::zeros(&field, n.dim(), 0), |acc, t| acc.hstack(t));
            let hom_p = HomSpace::new(&sum, n)?;
            debug_assert!(gens.is_empty() || hom_p.coords(&p).is_some());
            let t = HomSpace::new(l, n)?;
            let from_l = HomSpace::new(l, &sum)?;
            let rank = rank_of(&field, t.dim(), from_l.basis().iter().map(|g| t.coords_unchecked(&p.mul_unchecked(g))));
            Ok(GenerationWitness { direction, copies: gens.len(), surjective: rank == t.dim() })
        }
        GenerationDirection::Contravariant => {
            let gens = HomSpace::new(n, m)?.left_generators(&end_m);
            let sum = power(gens.len())?;
            let q = gens.iter().fold(Mat::zeros(&field, 0, n.dim()), |acc, t| acc.vstack(t));
            let t = HomSpace::new(n, l)?;
            let to_l = HomSpace::new(&sum, l)?;
            let rank = rank_of(&field, t.dim(), to_l.basis().iter().map(|h| t.coords_unchecked(&h.mul_unchecked(&q))));
            Ok(GenerationWitness { direction, copies: gens.len(), surjective: rank == t.dim() })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemidualizingReport {
    /// `A -> End(C)` is bijective.
    pub homothety_iso: bool,
    pub ext: ExtReport,
    /// No nonzero `Ext^i(C,C)` for `1 <= i <= bound`; a bounded check, not a
    /// certificate.
    pub ext_vanishing_up_to_bound: bool,
}

pub fn semidualizing_check(c: &Module, bound: usize) -> Result<SemidualizingReport, ModuleError> {
    let end_dim = c.hom_space(c)?.dim();
    let homothety_iso = c.is_faithful() && end_dim == c.algebra().dim();
    let ext = ext_dims(c, c, bound, DEFAULT_SYZYGY_CAP)?;
    let ext_vanishing_up_to_bound = ext.vanishes_above_zero();
    Ok(SemidualizingReport { homothety_iso, ext, ext_vanishing_up_to_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{AlgebraFamily, AlgebraPresentation};

    fn setup() -> (Module, Module, Module) {
        let a = AlgebraPresentation::from_family(&FieldSpec::prime(2).unwrap(), &AlgebraFamily::Truncated(2)).unwrap();
        (ModulePresentation::free(&a, 1), ModulePresentation::residue_field(&a), ModulePresentation::canonical(&a))
    }

    #[test]
    fn free_module_pairs_are_covariantly_reflexive() {
        let (r, k, w) = setup();
        for m in [&r, &k, &w] {
            for n in [&r, &k, &w] {
                assert!(epsilon_map(m, n, &r).unwrap().is_bijective());
            }
        }
    }

    #[test]
    fn canonical_module_duality() {
        let (r, k, w) = setup();
        let rk = ModulePresentation::direct_sum(&[&r, &k]).unwrap();
        for m in [&r, &k, &rk] {
            assert!(evaluation_map(m, &w).unwrap().is_bijective());
        }
    }

    #[test]
    fn residue_field_is_reflexive_over_dual_numbers() {
        // k is isomorphic to the ideal (x), so it embeds in R
        let (r, k, _) = setup();
        let ev = evaluation_map(&k, &r).unwrap();
        assert!(ev.is_bijective());
    }

    #[test]
    fn add_and_generation() {
        let (r, k, w) = setup();
        let rk = ModulePresentation::direct_sum(&[&r, &k]).unwrap();
        assert!(add_membership(&k, &k).unwrap());
        assert!(add_membership(&r, &rk).unwrap());
        assert!(!add_membership(&r, &k).unwrap());
        assert!(!covariantly_generates(&k, &r, &r).unwrap());
        assert!(covariantly_generates(&w, &w, &k).unwrap());
        for n in [&r, &k, &rk] {
            for l in [&r, &k, &rk] {
                assert!(covariantly_generates(&rk, n, l).unwrap());
                assert!(contravariantly_generates(&rk, n, l).unwrap());
            }
        }
    }

    #[test]
    fn witnesses_agree_with_trace_criterion() {
        let (r, k, w) = setup();
        let rk = ModulePresentation::direct_sum(&[&r, &k]).unwrap();
        for m in [&r, &k, &rk] {
            for n in [&r, &k, &w] {
                for l in [&r, &k] {
                    let cov = generation_witness(m, n, l, GenerationDirection::Covariant).unwrap();
                    assert_eq!(cov.surjective, covariantly_generates(m, n, l).unwrap());
                    let contra = generation_witness(m, n, l, GenerationDirection::Contravariant).unwrap();
                    assert_eq!(contra.surjective, contravariantly_generates(m, n, l).unwrap());
                }
            }
        }
    }

    #[test]
    fn semidualizing_examples() {
        let (r, k, w) = setup();
        let rep = semidualizing_check(&r, 4).unwrap();
        assert!(rep.homothety_iso && rep.ext_vanishing_up_to_bound);
        let rep = semidualizing_check(&w, 4).unwrap();
        assert!(rep.homothety_iso && rep.ext_vanishing_up_to_bound);
        assert!(!semidualizing_check(&k, 4).unwrap().homothety_iso);
    }
}
