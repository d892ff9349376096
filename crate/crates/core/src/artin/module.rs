use std::fmt;
use std::sync::Arc;

use crate::error::ModuleError;
use crate::field::{Elem, FieldEmbedding};
use crate::linalg::{intertwiners, solve, Echelon, Mat, QuotientSpace, Subspace};

use super::algebra::Algebra;

/// Shared handle to a validated module.
pub type Module = Arc<ModulePresentation>;

/// A finitely generated module over an [`Algebra`], as a vector space over the
/// base field with one action matrix per algebra basis element.
#[derive(Clone)]
pub struct ModulePresentation {
    algebra: Algebra,
    dim: usize,
    actions: Vec<Mat>,
    // actions of the algebra generators, which is all Hom computations need
    generator_actions: Vec<Mat>,
}

impl fmt::Debug for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModulePresentation").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl PartialEq for ModulePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.actions == other.actions
    }
}

impl Eq for ModulePresentation {}

/// Surjection `A^mu -> M` sending the `j`-th basis vector to the `j`-th
/// minimal generator. Coordinates of `A^mu` are indexed `j * d + i`.
#[derive(Clone, Debug)]
pub struct FreeCover {
    pub generators: Vec<Vec<Elem>>,
    pub free: Module,
    pub map: Mat,
    pub kernel: Subspace,
}

impl ModulePresentation {
    /// Validates one action matrix per algebra basis element.
    pub fn new(algebra: &Algebra, dim: usize, actions: Vec<Mat>) -> Result<Module, ModuleError> {
        Self::build(algebra, dim, actions).map(Arc::new)
    }

    fn build(algebra: &Algebra, dim: usize, actions: Vec<Mat>) -> Result<Self, ModuleError> {
        let d = algebra.dim();
        let field = algebra.field();
        if actions.len() != d
            || actions.iter().any(|a| a.rows() != dim || a.cols() != dim || a.field() != field)
        {
            return Err(ModuleError::Shape { expected: d, size: dim });
        }
        let combine = |x: &[Elem]| {
            let mut m = Mat::zeros(field, dim, dim);
            for (i, &c) in x.iter().enumerate() {
                if c != 0 {
                    m.add_scaled(c, &actions[i]);
                }
            }
            m
        };
        if !combine(algebra.unit()).is_identity() {
            return Err(ModuleError::NotUnital);
        }
        for i in 0..d {
            for j in i..d {
                let lhs = actions[i].mul_unchecked(&actions[j]);
                let rhs = combine(algebra.basis_product(i, j));
                if lhs != rhs {
                    return Err(ModuleError::Relation {
                        left: algebra.labels()[i].clone(),
                        right: algebra.labels()[j].clone(),
                    });
                }
            }
        }
        let generator_actions = algebra.generators().iter().map(|g| combine(g)).collect();
        Ok(ModulePresentation { algebra: algebra.clone(), dim, actions, generator_actions })
    }

    /// Builds a module from the actions of a few algebra elements that generate
    /// the algebra; the remaining actions are derived multiplicatively and the
    /// result is validated.
    pub fn from_partial_actions(
        algebra: &Algebra,
        dim: usize,
        given: &[(Vec<Elem>, Mat)],
    ) -> Result<Module, ModuleError> {
        let d = algebra.dim();
        let field = algebra.field();
        if given.iter().any(|(x, m)| x.len() != d || m.rows() != dim || m.cols() != dim) {
            return Err(ModuleError::Shape { expected: d, size: dim });
        }
        let mut ech = Echelon::new(field, d);
        let mut known: Vec<(Vec<Elem>, Mat)> = Vec::new();
        let mut frontier = vec![(algebra.unit().to_vec(), Mat::identity(field, dim))];
        frontier.extend(given.iter().cloned());
        while let Some((x, m)) = frontier.pop() {
            if !ech.insert(x.clone()) {
                continue;
            }
            for (g, gm) in given {
                frontier.push((algebra.mul(g, &x), gm.mul_unchecked(&m)));
            }
            known.push((x, m));
        }
        if !ech.is_full() {
            return Err(ModuleError::Preset("the given elements do not generate the algebra".into()));
        }
        let span = Mat::from_columns(field, d, &known.iter().map(|(x, _)| x.clone()).collect::<Vec<_>>());
        let inverse = span.inverse().expect("spanning set of full rank");
        let actions = (0..d)
            .map(|l| {
                let mut m = Mat::zeros(field, dim, dim);
                for (t, (_, mt)) in known.iter().enumerate() {
                    let c = inverse.get(t, l);
                    if c != 0 {
                        m.add_scaled(c, mt);
                    }
                }
                m
            })
            .collect();
        Self::new(algebra, dim, actions)
    }

    /// `A^rank`, with basis index `j * d + i` for copy `j` and algebra basis `i`.
    pub fn free(algebra: &Algebra, rank: usize) -> Module {
        let d = algebra.dim();
        let field = algebra.field();
        let actions = (0..d)
            .map(|i| {
                let mut m = Mat::zeros(field, d * rank, d * rank);
                for j in 0..rank {
                    let l = algebra.left_mult(i);
                    for r in 0..d {
                        for c in 0..d {
                            m.set(j * d + r, j * d + c, l.get(r, c));
                        }
                    }
                }
                m
            })
            .collect();
        Arc::new(Self::build(algebra, d * rank, actions).expect("regular representation"))
    }

    /// `k = A / m`.
    pub fn residue_field(algebra: &Algebra) -> Module {
        Self::free(algebra, 1).quotient(algebra.maximal_ideal()).expect("m is an ideal")
    }

    /// `m` as a submodule of `A`.
    pub fn maximal_ideal(algebra: &Algebra) -> Module {
        Self::free(algebra, 1).submodule(algebra.maximal_ideal()).expect("m is an ideal")
    }

    /// The canonical module, the Matlis dual of `A`.
    pub fn canonical(algebra: &Algebra) -> Module {
        Self::free(algebra, 1).matlis_dual()
    }

    pub fn zero(algebra: &Algebra) -> Module {
        Arc::new(Self::build(algebra, 0, vec![Mat::zeros(algebra.field(), 0, 0); algebra.dim()]).expect("zero module"))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn actions(&self) -> &[Mat] {
        &self.actions
    }

    pub fn action(&self, i: usize) -> &Mat {
        &self.actions[i]
    }

    pub fn action_of(&self, x: &[Elem]) -> Mat {
        let mut m = Mat::zeros(self.algebra.field(), self.dim, self.dim);
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                m.add_scaled(c, &self.actions[i]);
            }
        }
        m
    }

    /// Actions of the algebra generators (in the order of
    /// [`AlgebraPresentation::generators`](super::AlgebraPresentation::generators)).
    pub fn generator_actions(&self) -> &[Mat] {
        &self.generator_actions
    }

    fn same_algebra(&self, other: &ModulePresentation) -> Result<(), ModuleError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(ModuleError::AlgebraMismatch)
        }
    }

    /// `Hom_A(self, target)` as a subspace of row-major `target.dim x self.dim`
    /// matrices.
    pub fn hom_space(&self, target: &ModulePresentation) -> Result<Subspace, ModuleError> {
        self.same_algebra(target)?;
        Ok(intertwiners(
            self.algebra.field(),
            &self.generator_actions,
            self.dim,
            &target.generator_actions,
            target.dim,
        ))
    }

    /// Transposed actions; for a commutative algebra this is again a module.
    pub fn matlis_dual(&self) -> Module {
        let actions = self.actions.iter().map(Mat::transpose).collect();
        Arc::new(Self::build(&self.algebra, self.dim, actions).expect("transpose of a commutative action"))
    }

    pub fn direct_sum(parts: &[&ModulePresentation]) -> Result<Module, ModuleError> {
        let Some(first) = parts.first() else {
            return Err(ModuleError::Preset("direct sum of no modules".into()));
        };
        for p in parts {
            first.same_algebra(p)?;
        }
        let d = first.algebra.dim();
        let dim = parts.iter().map(|p| p.dim).sum();
        let actions = (0..d)
            .map(|i| {
                let mut it = parts.iter();
                let mut m = it.next().unwrap().actions[i].clone();
                for p in it {
                    m = m.block_diag(&p.actions[i]);
                }
                m
            })
            .collect();
        Self::new(&first.algebra, dim, actions)
    }

    pub fn is_submodule(&self, sub: &Subspace) -> bool {
        sub.ambient() == self.dim
            && sub
                .basis_vectors()
                .all(|v| self.generator_actions.iter().all(|a| sub.contains(&a.mul_vec(&v))))
    }

    /// The submodule on `sub`, in the coordinates of its RREF basis.
    pub fn submodule(&self, sub: &Subspace) -> Result<Module, ModuleError> {
        if !self.is_submodule(sub) {
            return Err(ModuleError::NotSubmodule);
        }
        let field = self.algebra.field();
        let actions = self
            .actions
            .iter()
            .map(|a| {
                let cols: Vec<Vec<Elem>> =
                    sub.basis_vectors().map(|v| sub.coords_unchecked(&a.mul_vec(&v))).collect();
                Mat::from_columns(field, sub.dim(), &cols)
            })
            .collect();
        Self::new(&self.algebra, sub.dim(), actions)
    }

    /// `self / sub`, in the coordinates of [`QuotientSpace`].
    pub fn quotient(&self, sub: &Subspace) -> Result<Module, ModuleError> {
        if !self.is_submodule(sub) {
            return Err(ModuleError::NotSubmodule);
        }
        let q = QuotientSpace::new(sub.clone());
        let actions = self.actions.iter().map(|a| q.induced(a)).collect();
        Self::new(&self.algebra, q.dim(), actions)
    }

    /// Smallest submodule containing the given vectors.
    pub fn generated_by<I>(&self, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let field = self.algebra.field();
        let mut ech = Echelon::new(field, self.dim);
        let mut frontier: Vec<Vec<Elem>> = vectors.into_iter().collect();
        let mut found = Vec::new();
        while let Some(v) = frontier.pop() {
            if ech.insert(v.clone()) {
                for a in &self.generator_actions {
                    frontier.push(a.mul_vec(&v));
                }
                found.push(v);
            }
        }
        Subspace::span(field, self.dim, found)
    }

    /// `{a in A : a M = 0}`.
    pub fn annihilator(&self) -> Subspace {
        let field = self.algebra.field();
        let cols: Vec<Vec<Elem>> = self.actions.iter().map(|a| a.data().to_vec()).collect();
        Mat::from_columns(field, self.dim * self.dim, &cols).kernel()
    }

    pub fn is_faithful(&self) -> bool {
        self.annihilator().is_zero()
    }

    /// `mM`.
    pub fn radical(&self) -> Subspace {
        let field = self.algebra.field();
        let m = self.algebra.maximal_ideal();
        let vectors: Vec<Vec<Elem>> = m
            .basis_vectors()
            .flat_map(|x| {
                let a = self.action_of(&x);
                (0..self.dim).map(move |j| a.col(j))
            })
            .collect();
        Subspace::span(field, self.dim, vectors)
    }

    /// `{v : m v = 0}`.
    pub fn socle(&self) -> Subspace {
        let field = self.algebra.field();
        let m = self.algebra.maximal_ideal();
        let stacked = m
            .basis_vectors()
            .map(|x| self.action_of(&x))
            .fold(Mat::zeros(field, 0, self.dim), |acc, a| acc.vstack(&a));
        stacked.kernel()
    }

    /// A minimal generating set: lifts of a basis of `M / mM` over the residue
    /// field, chosen greedily among the standard basis vectors.
    pub fn minimal_generators(&self) -> Vec<Vec<Elem>> {
        let mut covered = self.radical();
        let mut gens = Vec::new();
        for j in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[j] = 1;
            if covered.contains(&e) {
                continue;
            }
            gens.push(e);
            let span = self.generated_by(gens.iter().cloned());
            covered = covered.sum(&span).expect("same ambient");
            if covered.is_full() {
                break;
            }
        }
        gens
    }

    /// `mu(M)`, the number of generators over the residue field.
    pub fn mu(&self) -> usize {
        (self.dim - self.radical().dim()) / self.algebra.residue_degree()
    }

    pub fn minimal_free_cover(&self) -> FreeCover {
        let generators = self.minimal_generators();
        let d = self.algebra.dim();
        let free = Self::free(&self.algebra, generators.len());
        let cols: Vec<Vec<Elem>> = generators
            .iter()
            .flat_map(|g| (0..d).map(move |i| self.actions[i].mul_vec(g)))
            .collect();
        let map = Mat::from_columns(self.algebra.field(), self.dim, &cols);
        let kernel = map.kernel();
        FreeCover { generators, free, map, kernel }
    }

    /// First syzygy: the kernel of the minimal free cover.
    pub fn syzygy(&self) -> Module {
        let cover = self.minimal_free_cover();
        cover.free.submodule(&cover.kernel).expect("kernel of a module map")
    }

    /// `M` is free iff its minimal cover is injective.
    pub fn is_free(&self) -> bool {
        self.dim == self.mu() * self.algebra.dim()
    }

    /// Base change along `emb`, onto an algebra already lifted along it.
    pub fn lift(&self, lifted: &Algebra, emb: &FieldEmbedding) -> Result<Module, ModuleError> {
        if emb.source() != self.algebra.field()
            || lifted.field() != emb.target()
            || lifted.constants().len() != self.algebra.constants().len()
        {
            return Err(ModuleError::AlgebraMismatch);
        }
        let actions = self
            .actions
            .iter()
            .map(|a| a.lift(emb).map_err(|_| ModuleError::AlgebraMismatch))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(lifted, self.dim, actions)
    }

    /// Decides `self ≅ other` by searching `Hom(self, other)` for an invertible
    /// map. Returns `None` when the Hom space has more than `limit` elements.
    pub fn is_isomorphic(&self, other: &ModulePresentation, limit: u64) -> Result<Option<bool>, ModuleError> {
        if self.dim != other.dim {
            self.same_algebra(other)?;
            return Ok(Some(false));
        }
        let hom = self.hom_space(other)?;
        let q = self.algebra.field().order() as u64;
        let Some(total) = q.checked_pow(hom.dim() as u32).filter(|&t| t <= limit) else {
            return Ok(None);
        };
        let mut coords = vec![0u32; hom.dim()];
        for _ in 0..total {
            let v = hom.vector(&coords);
            if Mat::from_vec(self.algebra.field(), self.dim, self.dim, v).is_invertible() {
                return Ok(Some(true));
            }
            for c in coords.iter_mut() {
                *c += 1;
                if *c < q as u32 {
                    break;
                }
                *c = 0;
            }
        }
        Ok(Some(false))
    }

    /// Whether `x` (a vector of `M`) generates `M` together with `m M`.
    pub fn is_generator_set(&self, vectors: &[Vec<Elem>]) -> bool {
        self.generated_by(vectors.iter().cloned()).is_full()
    }

    /// The linear map `A -> M, a -> a x`, as a matrix.
    pub fn orbit_map(&self, x: &[Elem]) -> Mat {
        let cols: Vec<Vec<Elem>> = self.actions.iter().map(|a| a.mul_vec(x)).collect();
        Mat::from_columns(self.algebra.field(), self.dim, &cols)
    }

    /// Solves for `a in A` with `a x = y`.
    pub fn divide(&self, x: &[Elem], y: &[Elem]) -> Option<Vec<Elem>> {
        let rhs = Mat::column(self.algebra.field(), y);
        solve(&self.orbit_map(x), &rhs).ok().flatten().map(|s| s.particular.col(0))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{AlgebraFamily, AlgebraPresentation};
    use super::*;
    use crate::field::FieldSpec;

    fn alg(p: u32, fam: AlgebraFamily) -> Algebra {
        AlgebraPresentation::from_family(&FieldSpec::prime(p).unwrap(), &fam).unwrap()
    }

    #[test]
    fn validation_of_dual_number_actions() {
        let a = alg(2, AlgebraFamily::Truncated(2));
        let f = a.field().clone();
        let x = vec![0, 1];
        let good = Mat::from_rows(&f, &[vec![0, 0], vec![1, 0]]).unwrap();
        let m = ModulePresentation::from_partial_actions(&a, 2, &[(x.clone(), good)]).unwrap();
        assert_eq!(m.is_isomorphic(&ModulePresentation::free(&a, 1), 1 << 10).unwrap(), Some(true));
        let bad = Mat::from_rows(&f, &[vec![0, 1], vec![1, 0]]).unwrap();
        let err = ModulePresentation::new(&a, 2, vec![Mat::identity(&f, 2), bad]).unwrap_err();
        assert!(matches!(err, ModuleError::Relation { .. }));
    }

    #[test]
    fn annihilators() {
        let a = alg(2, AlgebraFamily::Truncated(2));
        let r = ModulePresentation::free(&a, 1);
        let k = ModulePresentation::residue_field(&a);
        assert!(r.is_faithful());
        assert_eq!(k.annihilator(), *a.maximal_ideal());
        assert!(ModulePresentation::direct_sum(&[&r, &k]).unwrap().is_faithful());
    }

    #[test]
    fn canonical_modules() {
        let a = alg(2, AlgebraFamily::Truncated(2));
        let w = ModulePresentation::canonical(&a);
        assert_eq!(w.is_isomorphic(&ModulePresentation::free(&a, 1), 1 << 10).unwrap(), Some(true));
        let b = alg(2, AlgebraFamily::SquareZero(2));
        let w = ModulePresentation::canonical(&b);
        assert_eq!(w.dim(), 3);
        assert_eq!(w.mu(), 2);
        assert_eq!(ModulePresentation::residue_field(&b).matlis_dual().dim(), 1);
    }

    #[test]
    fn generator_counts() {
        let a = alg(2, AlgebraFamily::SquareZero(2));
        assert_eq!(ModulePresentation::free(&a, 1).mu(), 1);
        let k = ModulePresentation::residue_field(&a);
        assert_eq!(ModulePresentation::direct_sum(&[&k, &k, &k]).unwrap().mu(), 3);
        let m = ModulePresentation::maximal_ideal(&a);
        assert_eq!(m.mu(), 2);
        assert_eq!(m.minimal_generators().len(), 2);
    }

    #[test]
    fn residue_degree_two() {
        let a = AlgebraPresentation::field_extension(&FieldSpec::prime(2).unwrap(), 2).unwrap();
        let r = ModulePresentation::free(&a, 1);
        assert_eq!(r.mu(), 1);
        assert_eq!(r.minimal_generators().len(), 1);
        assert!(r.is_free());
    }

    #[test]
    fn free_covers() {
        let a = alg(2, AlgebraFamily::Truncated(2));
        let cover = ModulePresentation::free(&a, 2).minimal_free_cover();
        assert!(cover.kernel.is_zero());
        let k = ModulePresentation::residue_field(&a);
        let syz = k.syzygy();
        assert_eq!(syz.is_isomorphic(&k, 16).unwrap(), Some(true));
        let b = alg(2, AlgebraFamily::Truncated(3));
        let syz = ModulePresentation::residue_field(&b).syzygy();
        assert_eq!(syz.dim(), 2);
        assert_eq!(syz.is_isomorphic(&ModulePresentation::maximal_ideal(&b), 64).unwrap(), Some(true));
    }

    #[test]
    fn socle_of_square_zero() {
        let a = alg(3, AlgebraFamily::SquareZero(2));
        assert_eq!(ModulePresentation::free(&a, 1).socle(), *a.maximal_ideal());
    }
}
