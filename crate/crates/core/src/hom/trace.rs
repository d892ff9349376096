use crate::artin::{Module, ModulePresentation};
use crate::error::ModuleError;
use crate::field::{Elem, FieldSpec};
use crate::linalg::{Echelon, Mat, QuotientSpace, Subspace};

use super::{HomSpace, MatrixAlgebra};

/// `Hom(M,N) ⊗_E Hom(L,M)` with `E = End(M)`, as the quotient of the tensor
/// product over the field by the balancing relations. Coordinates of the
/// ambient tensor product are `a * s + b` for `x_a ⊗ y_b`.
#[derive(Clone, Debug)]
pub struct TensorOverEnd {
    r: usize,
    s: usize,
    balancing: Subspace,
    quotient: QuotientSpace,
}

impl TensorOverEnd {
    /// `right_x` are the right actions of algebra generators of `E` on
    /// `Hom(M,N)`, `left_y` the matching left actions on `Hom(L,M)`.
    /// Relations for products of generators follow from those for the
    /// generators themselves.
    pub fn new(field: &FieldSpec, r: usize, s: usize, right_x: &[Mat], left_y: &[Mat]) -> Self {
        let balancing = balancing_span(field, r, s, right_x, left_y);
        let quotient = QuotientSpace::new(balancing.clone());
        TensorOverEnd { r, s, balancing, quotient }
    }

    /// Same construction, with one relation family per basis element of `E`
    /// instead of per generator.
    pub fn with_full_basis(x: &HomSpace, y: &HomSpace, end_m: &MatrixAlgebra) -> Self {
        let right: Vec<Mat> = end_m.basis().iter().map(|e| x.right_action(e)).collect();
        let left: Vec<Mat> = end_m.basis().iter().map(|e| y.left_action(e)).collect();
        Self::new(x.field(), x.dim(), y.dim(), &right, &left)
    }

    pub fn ambient(&self) -> usize {
        self.r * self.s
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn balancing(&self) -> &Subspace {
        &self.balancing
    }

    pub fn quotient(&self) -> &QuotientSpace {
        &self.quotient
    }

    /// Operator `A ⊗ B` on the ambient tensor product, for `A` acting on the
    /// first factor and `B` on the second.
    pub fn kron(a: &Mat, b: &Mat) -> Mat {
        let field = a.field();
        let (r, s) = (a.rows(), b.rows());
        let mut out = Mat::zeros(field, r * s, a.cols() * b.cols());
        for i in 0..r {
            for j in 0..a.cols() {
                let x = a.get(i, j);
                if x == 0 {
                    continue;
                }
                for k in 0..s {
                    for l in 0..b.cols() {
                        let y = b.get(k, l);
                        if y != 0 {
                            out.set(i * s + k, j * b.cols() + l, field.mul(x, y));
                        }
                    }
                }
            }
        }
        out
    }

    /// Whether an operator on the ambient tensor product descends to the
    /// quotient.
    pub fn is_stable(&self, op: &Mat) -> bool {
        self.quotient.preserves_kernel(op)
    }

    /// The operator induced on the quotient.
    pub fn induced(&self, op: &Mat) -> Mat {
        self.quotient.induced(op)
    }
}

fn balancing_span(field: &FieldSpec, r: usize, s: usize, right_x: &[Mat], left_y: &[Mat]) -> Subspace {
    let n = r * s;
    let mut ech = Echelon::new(field, n);
    'outer: for (rx, ly) in right_x.iter().zip(left_y) {
        for a in 0..r {
            for b in 0..s {
                // (x_a e) ⊗ y_b - x_a ⊗ (e y_b)
                let mut v = vec![0; n];
                for a2 in 0..r {
                    let c = rx.get(a2, a);
                    if c != 0 {
                        v[a2 * s + b] = c;
                    }
                }
                for b2 in 0..s {
                    let c = ly.get(b2, b);
                    if c != 0 {
                        let idx = a * s + b2;
                        v[idx] = field.sub(v[idx], c);
                    }
                }
                if v.iter().any(|&x| x != 0) {
                    ech.insert(v);
                    if ech.is_full() {
                        break 'outer;
                    }
                }
            }
        }
    }
    ech.into_subspace()
}

/// The trace map `Hom(M,N) ⊗_End(M) Hom(L,M) -> Hom(L,N)`, `f ⊗ g -> f . g`,
/// with its image and kernel.
#[derive(Clone, Debug)]
pub struct TraceData {
    m: Module,
    x: HomSpace,
    y: HomSpace,
    t: HomSpace,
    end_m: MatrixAlgebra,
    tensor: TensorOverEnd,
    // columns: coordinates in Hom(L,N) of x_a . y_b, indexed a * s + b
    compositions: Mat,
    phi: Mat,
    image: Subspace,
    kernel: Subspace,
}

impl TraceData {
    pub fn new(m: &Module, l: &Module, n: &Module) -> Result<Self, ModuleError> {
        let x = HomSpace::new(m, n)?;
        let y = HomSpace::new(l, m)?;
        let t = HomSpace::new(l, n)?;
        let end_m = MatrixAlgebra::endomorphisms(m);
        Ok(Self::from_parts(m, x, y, t, end_m))
    }

    pub(crate) fn from_parts(m: &Module, x: HomSpace, y: HomSpace, t: HomSpace, end_m: MatrixAlgebra) -> Self {
        let field = x.field().clone();
        let right_x: Vec<Mat> = end_m.generators().iter().map(|e| x.right_action(e)).collect();
        let left_y: Vec<Mat> = end_m.generators().iter().map(|e| y.left_action(e)).collect();
        let tensor = TensorOverEnd::new(&field, x.dim(), y.dim(), &right_x, &left_y);
        let cols: Vec<Vec<Elem>> = x
            .basis()
            .iter()
            .flat_map(|f| y.basis().iter().map(|g| t.coords_unchecked(&f.mul_unchecked(g))))
            .collect();
        let compositions = Mat::from_columns(&field, t.dim(), &cols);
        let phi = compositions.mul_unchecked(&tensor.quotient().section_matrix());
        let image = compositions.image();
        let kernel = phi.kernel();
        TraceData { m: m.clone(), x, y, t, end_m, tensor, compositions, phi, image, kernel }
    }

    pub fn module(&self) -> &Module {
        &self.m
    }

    /// `Hom(M,N)`.
    pub fn outer(&self) -> &HomSpace {
        &self.x
    }

    /// `Hom(L,M)`.
    pub fn inner(&self) -> &HomSpace {
        &self.y
    }

    /// `Hom(L,N)`.
    pub fn codomain(&self) -> &HomSpace {
        &self.t
    }

    pub fn end_ring(&self) -> &MatrixAlgebra {
        &self.end_m
    }

    pub fn tensor(&self) -> &TensorOverEnd {
        &self.tensor
    }

    /// The map on the ambient tensor product over the field.
    pub fn compositions(&self) -> &Mat {
        &self.compositions
    }

    /// The induced map on the tensor product over `End(M)`.
    pub fn phi(&self) -> &Mat {
        &self.phi
    }

    /// `tr_{L,N}(M)` in coordinates of `Hom(L,N)`.
    pub fn image(&self) -> &Subspace {
        &self.image
    }

    /// The trace submodule as a space of row-major matrices.
    pub fn image_matrices(&self) -> Subspace {
        Subspace::span(
            self.t.field(),
            self.t.space().ambient(),
            self.image.basis_vectors().map(|c| self.t.space().vector(&c)),
        )
    }

    /// Kernel of the trace map, in quotient coordinates.
    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn is_injective(&self) -> bool {
        self.kernel.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.image.is_full()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Whether the composition map vanishes on the balancing relations.
    pub fn is_balanced(&self) -> bool {
        self.tensor.balancing().basis_vectors().all(|v| self.compositions.mul_vec(&v).iter().all(|&x| x == 0))
    }

    /// Action of an endomorphism `v` of `N` on the trace submodule, in its
    /// basis coordinates.
    pub fn left_action_on_image(&self, v: &Mat) -> Option<Mat> {
        self.image.restrict(&self.t.left_action(v))
    }

    /// Action of an endomorphism `u` of `L` (by precomposition) on the trace
    /// submodule.
    pub fn right_action_on_image(&self, u: &Mat) -> Option<Mat> {
        self.image.restrict(&self.t.right_action(u))
    }
}

/// `tr_{L,N}(M)` only, as the span of all compositions, together with
/// `Hom(L,N)`.
pub fn trace_image(m: &Module, l: &Module, n: &Module) -> Result<(HomSpace, Subspace), ModuleError> {
    let x = HomSpace::new(m, n)?;
    let y = HomSpace::new(l, m)?;
    let t = HomSpace::new(l, n)?;
    let field = t.field().clone();
    let mut ech = Echelon::new(&field, t.dim());
    'outer: for f in x.basis() {
        for g in y.basis() {
            ech.insert(t.coords_unchecked(&f.mul_unchecked(g)));
            if ech.is_full() {
                break 'outer;
            }
        }
    }
    Ok((t, ech.into_subspace()))
}

/// `tr_N(M)`, the sum of the images of all maps `M -> N`, as a subspace of `N`.
pub fn trace_submodule(m: &Module, n: &Module) -> Result<Subspace, ModuleError> {
    let x = HomSpace::new(m, n)?;
    let field = x.field();
    Ok(Subspace::span(
        field,
        n.dim(),
        x.basis().iter().flat_map(|f| (0..f.cols()).map(move |j| f.col(j))),
    ))
}

/// `tr_R(M)` as an ideal of the algebra.
pub fn trace_ideal(m: &Module) -> Result<Subspace, ModuleError> {
    trace_submodule(m, &ModulePresentation::free(m.algebra(), 1))
}

/// Image of `N ⊗ L^* -> Hom(L,N)`, `x ⊗ f -> (y -> f(y) x)`, in coordinates
/// of `Hom(L,N)`.
pub fn theta_image(l: &Module, n: &Module) -> Result<(HomSpace, Subspace), ModuleError> {
    let alg = l.algebra();
    let r = ModulePresentation::free(alg, 1);
    let dual = HomSpace::new(l, &r)?;
    let t = HomSpace::new(l, n)?;
    let field = t.field().clone();
    let mut ech = Echelon::new(&field, t.dim());
    for j in 0..n.dim() {
        let mut x = vec![0; n.dim()];
        x[j] = 1;
        let images: Vec<Vec<Elem>> = n.actions().iter().map(|a| a.mul_vec(&x)).collect();
        for f in dual.basis() {
            let mut alpha = Mat::zeros(&field, n.dim(), l.dim());
            for (i, img) in images.iter().enumerate() {
                for row in 0..n.dim() {
                    if img[row] == 0 {
                        continue;
                    }
                    let coeff = img[row];
                    let dst = alpha.row_mut(row);
                    field.axpy(dst, coeff, f.row(i));
                }
            }
            ech.insert(t.coords(&alpha).ok_or(ModuleError::NotSubmodule)?);
        }
    }
    Ok((t, ech.into_subspace()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{AlgebraFamily, AlgebraPresentation};

    fn dual_numbers() -> crate::artin::Algebra {
        AlgebraPresentation::from_family(&FieldSpec::prime(2).unwrap(), &AlgebraFamily::Truncated(2)).unwrap()
    }

    #[test]
    fn trace_ideal_examples() {
        let a = dual_numbers();
        let r = ModulePresentation::free(&a, 1);
        let k = ModulePresentation::residue_field(&a);
        assert_eq!(trace_ideal(&k).unwrap(), *a.maximal_ideal());
        assert!(trace_ideal(&r).unwrap().is_full());
        let rk = ModulePresentation::direct_sum(&[&r, &k]).unwrap();
        assert!(trace_ideal(&rk).unwrap().is_full());
        let data = TraceData::new(&k, &r, &r).unwrap();
        assert_eq!(data.image().dim(), 1);
        assert!(data.is_balanced());
    }

    #[test]
    fn tensor_over_free_module() {
        let a = dual_numbers();
        let r = ModulePresentation::free(&a, 1);
        let k = ModulePresentation::residue_field(&a);
        let rk = ModulePresentation::direct_sum(&[&r, &k]).unwrap();
        for (l, n) in [(&r, &rk), (&rk, &r), (&k, &r), (&r, &k)] {
            let data = TraceData::new(&r, l, n).unwrap();
            assert_eq!(data.tensor().dim(), data.codomain().dim());
            assert!(data.is_bijective());
        }
        // maps k -> R + k through R miss the identity on the k summand
        assert!(!TraceData::new(&r, &k, &rk).unwrap().is_surjective());
        let data = TraceData::new(&k, &r, &r).unwrap();
        assert_eq!(data.tensor().dim(), 1);

        // k ⊗ Hom(k, R) = k ⊗ m is 2-dimensional while Hom(k, k) is not
        let b = AlgebraPresentation::from_family(&FieldSpec::prime(2).unwrap(), &AlgebraFamily::SquareZero(2)).unwrap();
        let r = ModulePresentation::free(&b, 1);
        let k = ModulePresentation::residue_field(&b);
        let data = TraceData::new(&r, &k, &k).unwrap();
        assert_eq!((data.tensor().dim(), data.codomain().dim()), (2, 1));
        assert!(data.image().is_zero());
    }

    #[test]
    fn generator_relations_match_full_relations() {
        let a = AlgebraPresentation::from_family(&FieldSpec::prime(2).unwrap(), &AlgebraFamily::Truncated(3)).unwrap();
        let r = ModulePresentation::free(&a, 1);
        let k = ModulePresentation::residue_field(&a);
        let m = ModulePresentation::maximal_ideal(&a);
        let mk = ModulePresentation::direct_sum(&[&m, &k]).unwrap();
        let data = TraceData::new(&mk, &k, &r).unwrap();
        let full = TensorOverEnd::with_full_basis(data.outer(), data.inner(), data.end_ring());
        assert_eq!(full.balancing(), data.tensor().balancing());
    }

    #[test]
    fn theta_matches_trace_of_free_module() {
        let a = dual_numbers();
        let r = ModulePresentation::free(&a, 1);
        let k = ModulePresentation::residue_field(&a);
        let (_, img) = theta_image(&k, &k).unwrap();
        assert_eq!(img.dim(), 0);
        let (_, img) = theta_image(&k, &r).unwrap();
        assert!(img.is_full() && img.dim() == 1);
        let (_, img) = theta_image(&r, &k).unwrap();
        assert!(img.is_full());
        for (l, n) in [(&k, &k), (&k, &r), (&r, &k)] {
            let (_, tr) = trace_image(&r, l, n).unwrap();
            assert_eq!(theta_image(l, n).unwrap().1, tr);
        }
    }
}
