use crate::error::LinalgError;
use crate::field::{Elem, FieldEmbedding, FieldSpec};

use super::{Echelon, Mat};

/// A subspace of `F^n` stored by its reduced row-echelon basis.
///
/// The representation is canonical, so two subspaces are equal exactly when
/// their basis matrices are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub(crate) fn from_rref_parts(
        field: &FieldSpec,
        ambient: usize,
        rows: Vec<Vec<Elem>>,
        pivots: Vec<usize>,
    ) -> Self {
        let dim = rows.len();
        let data = rows.into_iter().flatten().collect();
        Subspace { ambient, basis: Mat::from_vec(field, dim, ambient, data), pivots }
    }

    pub fn zero(field: &FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: &FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the given vectors, each of length `ambient`.
    pub fn span<I>(field: &FieldSpec, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let mut ech = Echelon::new(field, ambient);
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length must match the ambient dimension");
            ech.insert(v);
            if ech.is_full() {
                break;
            }
        }
        ech.into_subspace()
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// RREF basis, one vector per row.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> &[Elem] {
        self.basis.row(i)
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec())
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the subspace in place; afterwards `v` vanishes on pivots.
    pub fn reduce(&self, v: &mut [Elem]) {
        let f = self.field();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c != 0 {
                f.axpy(v, f.neg(c), self.basis.row(i));
            }
        }
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is not a member.
    pub fn coords(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        self.contains(v).then(|| self.coords_unchecked(v))
    }

    /// Coordinates of a known member: its entries at the pivot columns.
    pub fn coords_unchecked(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    /// The vector with the given coordinates.
    pub fn vector(&self, coords: &[Elem]) -> Vec<Elem> {
        assert_eq!(coords.len(), self.dim());
        let mut v = vec![0; self.ambient];
        for (i, &c) in coords.iter().enumerate() {
            self.field().axpy(&mut v, c, self.basis.row(i));
        }
        v
    }

    fn check(&self, other: &Subspace, op: &'static str) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch { op, left: self.ambient, right: other.ambient });
        }
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch { op });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other, "sum")?;
        Ok(Subspace::span(
            self.field(),
            self.ambient,
            self.basis_vectors().chain(other.basis_vectors()),
        ))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other, "intersection")?;
        let f = self.field();
        // x lies in `other` iff it is orthogonal to other's annihilator
        let annihilator = other.basis.kernel();
        if annihilator.is_zero() {
            return Ok(self.clone());
        }
        let constraints = annihilator.basis.mul_unchecked(&self.basis.transpose());
        let combos = constraints.kernel();
        Ok(Subspace::span(
            f,
            self.ambient,
            combos.basis_vectors().map(|a| {
                let mut x = vec![0; self.ambient];
                for (i, &c) in a.iter().enumerate() {
                    f.axpy(&mut x, c, self.basis.row(i));
                }
                x
            }),
        ))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check(other, "is_subspace_of")?;
        Ok(self.basis_vectors().all(|v| other.contains(&v)))
    }

    /// Image under the linear map `v -> A v`.
    pub fn map(&self, a: &Mat) -> Result<Subspace, LinalgError> {
        if a.cols() != self.ambient {
            return Err(LinalgError::DimensionMismatch { op: "map", left: a.cols(), right: self.ambient });
        }
        Ok(Subspace::span(self.field(), a.rows(), self.basis_vectors().map(|v| a.mul_vec(&v))))
    }

    /// Preimage `{v : A v in self}` for `A : F^m -> F^ambient`.
    pub fn preimage(&self, a: &Mat) -> Result<Subspace, LinalgError> {
        if a.rows() != self.ambient {
            return Err(LinalgError::DimensionMismatch { op: "preimage", left: a.rows(), right: self.ambient });
        }
        let annihilator = self.basis.kernel();
        Ok(annihilator.basis.mul_unchecked(a).kernel())
    }

    /// Matrix of `op` on the subspace in basis coordinates, or `None` when `op`
    /// does not map the subspace into itself.
    pub fn restrict(&self, op: &Mat) -> Option<Mat> {
        let mut cols = Vec::with_capacity(self.dim());
        for v in self.basis_vectors() {
            cols.push(self.coords(&op.mul_vec(&v))?);
        }
        Some(Mat::from_columns(self.field(), self.dim(), &cols))
    }

    /// Span over a larger field.
    pub fn lift(&self, emb: &FieldEmbedding) -> Result<Subspace, LinalgError> {
        Ok(Subspace {
            ambient: self.ambient,
            basis: self.basis.lift(emb)?,
            pivots: self.pivots.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vec<Elem> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    #[test]
    fn coordinate_subspaces() {
        let f = FieldSpec::prime(7).unwrap();
        let u = Subspace::span(&f, 2, [e(2, 0)]);
        let v = Subspace::span(&f, 2, [e(2, 1)]);
        assert_eq!(u.sum(&v).unwrap().dim(), 2);
        assert_eq!(u.intersection(&v).unwrap().dim(), 0);
        assert_eq!(u.sum(&u).unwrap(), u);
        assert_eq!(u.intersection(&u).unwrap(), u);
        assert!(u.sum(&Subspace::zero(&f, 3)).is_err());
    }

    #[test]
    fn f2_containment_example() {
        let f = FieldSpec::prime(2).unwrap();
        let u = Subspace::span(&f, 3, [vec![1, 1, 0], vec![0, 1, 1]]);
        let v = Subspace::span(&f, 3, [vec![1, 0, 1]]);
        assert!(v.is_subspace_of(&u).unwrap());
        assert_eq!(u.sum(&v).unwrap().dim(), 2);
        assert_eq!(u.intersection(&v).unwrap(), v);
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let f = FieldSpec::prime(5).unwrap();
        let a = Subspace::span(&f, 3, [vec![1, 2, 3], vec![0, 1, 4]]);
        let b = Subspace::span(&f, 3, [vec![1, 3, 2], vec![2, 4, 1]]);
        // (1,3,2) = (1,2,3)+(0,1,4); (2,4,1) = 2*(1,2,3)
        assert_eq!(a, b);
    }

    #[test]
    fn preimage_and_coords() {
        let f = FieldSpec::prime(3).unwrap();
        let s = Subspace::span(&f, 2, [vec![1, 1]]);
        let a = Mat::from_rows(&f, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let pre = s.preimage(&a).unwrap();
        assert_eq!(pre.dim(), 2);
        assert_eq!(s.coords(&[2, 2]), Some(vec![2]));
        assert_eq!(s.coords(&[1, 2]), None);
    }
}
