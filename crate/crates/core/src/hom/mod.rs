//! Hom-bimodules, endomorphism rings and their centers, tensor products over
//! endomorphism rings and the trace maps built from them.

mod certificate;
mod duality;
mod trace;

pub use certificate::{
    build_general_isomorphism, certify, check_center_certificate, general_certificate, check_lindo_certificate, CenterCertificate,
    GeneralHypotheses, RingMapCertificate, Variant,
};
pub use duality::{
    add_membership, contravariantly_generates, covariantly_generates, epsilon_map, evaluation_map,
    generation_witness, hom_over_end, pi_map, semidualizing_check, DualityMap, GenerationDirection,
    GenerationWitness, Reflexivity, SemidualizingReport,
};
pub use trace::{theta_image, trace_ideal, trace_image, trace_submodule, TensorOverEnd, TraceData};

use serde::Serialize;

use crate::artin::Module;
use crate::error::ModuleError;
use crate::field::{Elem, FieldSpec};
use crate::linalg::{intertwiners, Echelon, Mat, Subspace};

/// `Hom_A(M, N)` as a space of `dim N x dim M` matrices with a fixed RREF
/// basis.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Module,
    target: Module,
    space: Subspace,
    basis: Vec<Mat>,
}

impl HomSpace {
    pub fn new(source: &Module, target: &Module) -> Result<Self, ModuleError> {
        let space = source.hom_space(target)?;
        let field = source.algebra().field();
        let basis = space
            .basis_vectors()
            .map(|v| Mat::from_vec(field, target.dim(), source.dim(), v))
            .collect();
        Ok(HomSpace { source: source.clone(), target: target.clone(), space, basis })
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn field(&self) -> &FieldSpec {
        self.source.algebra().field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The space of maps as a subspace of row-major matrices.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn matrix(&self, coords: &[Elem]) -> Mat {
        Mat::from_vec(self.field(), self.target.dim(), self.source.dim(), self.space.vector(coords))
    }

    pub fn coords(&self, f: &Mat) -> Option<Vec<Elem>> {
        self.space.coords(f.data())
    }

    /// Coordinates of a matrix known to lie in the space.
    pub fn coords_unchecked(&self, f: &Mat) -> Vec<Elem> {
        self.space.coords_unchecked(f.data())
    }

    /// Coordinate matrix of `f -> f . u` for `u` an endomorphism of the source.
    pub fn right_action(&self, u: &Mat) -> Mat {
        let cols: Vec<Vec<Elem>> = self.basis.iter().map(|f| self.coords_unchecked(&f.mul_unchecked(u))).collect();
        Mat::from_columns(self.field(), self.dim(), &cols)
    }

    /// Coordinate matrix of `f -> v . f` for `v` an endomorphism of the target.
    pub fn left_action(&self, v: &Mat) -> Mat {
        let cols: Vec<Vec<Elem>> = self.basis.iter().map(|f| self.coords_unchecked(&v.mul_unchecked(f))).collect();
        Mat::from_columns(self.field(), self.dim(), &cols)
    }

    /// Generators as a right module over `End(source)`: a greedy choice of
    /// basis maps whose `End`-translates span the space.
    pub fn right_generators(&self, end_source: &MatrixAlgebra) -> Vec<Mat> {
        let ops: Vec<Mat> = end_source.generators().iter().map(|u| self.right_action(u)).collect();
        greedy_module_generators(self.field(), self.dim(), &ops)
            .into_iter()
            .map(|c| self.matrix(&c))
            .collect()
    }

    /// Generators as a left module over `End(target)`.
    pub fn left_generators(&self, end_target: &MatrixAlgebra) -> Vec<Mat> {
        let ops: Vec<Mat> = end_target.generators().iter().map(|v| self.left_action(v)).collect();
        greedy_module_generators(self.field(), self.dim(), &ops)
            .into_iter()
            .map(|c| self.matrix(&c))
            .collect()
    }
}

/// Standard basis vectors, chosen in order, whose orbits under the algebra
/// generated by `ops` span the whole space.
fn greedy_module_generators(field: &FieldSpec, dim: usize, ops: &[Mat]) -> Vec<Vec<Elem>> {
    let mut span = Echelon::new(field, dim);
    let mut gens = Vec::new();
    for j in 0..dim {
        let mut e = vec![0; dim];
        e[j] = 1;
        if span.contains(&e) {
            continue;
        }
        gens.push(e.clone());
        let mut frontier = vec![e];
        while let Some(v) = frontier.pop() {
            if span.insert(v.clone()) {
                frontier.extend(ops.iter().map(|a| a.mul_vec(&v)));
            }
        }
        if span.is_full() {
            break;
        }
    }
    gens
}

/// Multiplication table of a finite-dimensional algebra:
/// `b_i b_j = sum_l constants[(i*d+j)*d+l] b_l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingTable {
    pub dim: usize,
    pub constants: Vec<Elem>,
    pub unit: Vec<Elem>,
}

/// A unital subalgebra of `n x n` matrices, such as `End_A(M)`, a center, or
/// the endomorphisms of a space commuting with a family of operators.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    field: FieldSpec,
    n: usize,
    space: Subspace,
    basis: Vec<Mat>,
    generators: Vec<Mat>,
}

impl MatrixAlgebra {
    /// Wraps a subspace of row-major `n x n` matrices that is closed under
    /// products and contains the identity.
    pub fn from_space(field: &FieldSpec, n: usize, space: Subspace) -> Self {
        assert_eq!(space.ambient(), n * n);
        let basis: Vec<Mat> = space.basis_vectors().map(|v| Mat::from_vec(field, n, n, v)).collect();
        debug_assert!(space.contains(Mat::identity(field, n).data()));
        let mut alg = MatrixAlgebra { field: field.clone(), n, space, basis, generators: Vec::new() };
        alg.generators = alg.compute_generators();
        alg
    }

    /// All `n x n` matrices commuting with every operator in `ops`.
    pub fn commutant(field: &FieldSpec, n: usize, ops: &[Mat]) -> Self {
        Self::from_space(field, n, intertwiners(field, ops, n, ops, n))
    }

    /// `End_A(M)`.
    pub fn endomorphisms(m: &Module) -> Self {
        Self::commutant(m.algebra().field(), m.dim(), m.generator_actions())
    }

    fn compute_generators(&self) -> Vec<Mat> {
        let mut gens: Vec<Mat> = Vec::new();
        let mut closure = self.closure(&gens);
        for b in &self.basis {
            if !closure.contains(b.data()) {
                gens.push(b.clone());
                closure = self.closure(&gens);
                if closure.dim() == self.dim() {
                    break;
                }
            }
        }
        gens
    }

    fn closure(&self, gens: &[Mat]) -> Subspace {
        let nn = self.n * self.n;
        let mut ech = Echelon::new(&self.field, nn);
        let mut found = Vec::new();
        let mut frontier = vec![Mat::identity(&self.field, self.n)];
        while let Some(x) = frontier.pop() {
            if ech.insert(x.data().to_vec()) {
                frontier.extend(gens.iter().map(|g| g.mul_unchecked(&x)));
                found.push(x.into_data());
            }
        }
        Subspace::span(&self.field, nn, found)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Size of the matrices.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// Algebra generators (the identity is implied).
    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }

    pub fn matrix(&self, coords: &[Elem]) -> Mat {
        Mat::from_vec(&self.field, self.n, self.n, self.space.vector(coords))
    }

    pub fn coords(&self, x: &Mat) -> Option<Vec<Elem>> {
        self.space.coords(x.data())
    }

    pub fn contains(&self, x: &Mat) -> bool {
        self.space.contains(x.data())
    }

    pub fn identity_coords(&self) -> Vec<Elem> {
        self.space.coords_unchecked(Mat::identity(&self.field, self.n).data())
    }

    pub fn table(&self) -> RingTable {
        let d = self.dim();
        let mut constants = Vec::with_capacity(d * d * d);
        for a in &self.basis {
            for b in &self.basis {
                constants.extend(self.space.coords_unchecked(a.mul_unchecked(b).data()));
            }
        }
        RingTable { dim: d, constants, unit: self.identity_coords() }
    }

    pub fn is_commutative(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.mul_unchecked(b) == b.mul_unchecked(a)))
    }

    /// `Z(self)`, from one linear system in the basis coordinates.
    pub fn center(&self) -> MatrixAlgebra {
        let nn = self.n * self.n;
        let d = self.dim();
        let mut ech = Echelon::new(&self.field, d);
        for g in &self.generators {
            let commutators: Vec<Mat> = self
                .basis
                .iter()
                .map(|b| b.mul_unchecked(g).sub(&g.mul_unchecked(b)).expect("square"))
                .collect();
            for entry in 0..nn {
                let row: Vec<Elem> = commutators.iter().map(|c| c.data()[entry]).collect();
                if row.iter().any(|&x| x != 0) {
                    ech.insert(row);
                }
            }
        }
        let coords = ech.null_space();
        let space = Subspace::span(&self.field, nn, coords.basis_vectors().map(|c| self.space.vector(&c)));
        MatrixAlgebra::from_space(&self.field, self.n, space)
    }

    /// The same algebra acting through `rep`, which sends each basis matrix
    /// to an operator on another space; the images must span a matrix
    /// algebra of size `m`.
    pub fn image_under(&self, m: usize, rep: impl Fn(&Mat) -> Mat) -> MatrixAlgebra {
        let images: Vec<Vec<Elem>> = self.basis.iter().map(|b| rep(b).into_data()).collect();
        MatrixAlgebra::from_space(&self.field, m, Subspace::span(&self.field, m * m, images))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{AlgebraFamily, AlgebraPresentation, ModulePresentation};

    fn dual_numbers() -> crate::artin::Algebra {
        AlgebraPresentation::from_family(&FieldSpec::prime(2).unwrap(), &AlgebraFamily::Truncated(2)).unwrap()
    }

    #[test]
    fn hom_examples() {
        let a = dual_numbers();
        let r = ModulePresentation::free(&a, 1);
        let k = ModulePresentation::residue_field(&a);
        let rk = ModulePresentation::direct_sum(&[&r, &k]).unwrap();
        for n in [&r, &k, &rk] {
            assert_eq!(HomSpace::new(&r, n).unwrap().dim(), n.dim());
        }
        let kr = HomSpace::new(&k, &r).unwrap();
        assert_eq!(kr.dim(), 1);
        // 1 -> x
        assert_eq!(kr.basis()[0].col(0), vec![0, 1]);
        assert_eq!(HomSpace::new(&k, &k).unwrap().dim(), 1);
    }

    #[test]
    fn end_rings_and_centers() {
        let a = dual_numbers();
        let r = ModulePresentation::free(&a, 1);
        let k = ModulePresentation::residue_field(&a);
        let end_r = MatrixAlgebra::endomorphisms(&r);
        assert_eq!((end_r.dim(), end_r.center().dim()), (2, 2));
        let rk = ModulePresentation::direct_sum(&[&r, &k]).unwrap();
        let e = MatrixAlgebra::endomorphisms(&rk);
        assert_eq!(e.dim(), 5);
        assert_eq!(e.center().dim(), 2);
        assert!(!e.is_commutative());
        assert!(e.center().is_commutative());
        let kk = ModulePresentation::direct_sum(&[&k, &k]).unwrap();
        let e = MatrixAlgebra::endomorphisms(&kk);
        assert_eq!((e.dim(), e.center().dim()), (4, 1));
    }

    #[test]
    fn ring_tables_have_unit() {
        let a = dual_numbers();
        let r = ModulePresentation::free(&a, 1);
        let k = ModulePresentation::residue_field(&a);
        let e = MatrixAlgebra::endomorphisms(&ModulePresentation::direct_sum(&[&r, &k]).unwrap());
        let t = e.table();
        let d = t.dim;
        for i in 0..d {
            let mut prod = vec![0; d];
            for (j, &u) in t.unit.iter().enumerate() {
                if u != 0 {
                    for l in 0..d {
                        prod[l] ^= t.constants[(j * d + i) * d + l];
                    }
                }
            }
            let mut e_i = vec![0; d];
            e_i[i] = 1;
            assert_eq!(prod, e_i);
        }
    }
}
