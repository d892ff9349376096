//! Exact dense linear algebra over finite fields.

mod echelon;
mod mat;
mod subspace;

pub use echelon::Echelon;
pub use mat::Mat;
pub use subspace::Subspace;

use crate::error::LinalgError;
use crate::field::{Elem, FieldSpec};

/// Solution set of `A X = B`: one particular solution plus the kernel of `A`.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub particular: Mat,
    pub kernel: Subspace,
}

/// Solves `A X = B` for `X`. Returns `Ok(None)` when some column of `B` is
/// outside the column space of `A`.
pub fn solve(a: &Mat, b: &Mat) -> Result<Option<SolveOutcome>, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch { op: "solve", left: a.rows(), right: b.rows() });
    }
    if a.field() != b.field() {
        return Err(LinalgError::FieldMismatch { op: "solve" });
    }
    let field = a.field();
    let n = a.cols();
    let aug = a.hstack(b);
    let mut ech = Echelon::new(field, aug.cols());
    for i in 0..aug.rows() {
        ech.insert(aug.row(i).to_vec());
    }
    if ech.pivot_columns().iter().any(|&pc| pc >= n) {
        return Ok(None);
    }
    let sub = ech.into_subspace();
    let mut particular = Mat::zeros(field, n, b.cols());
    let mut a_part = Echelon::new(field, n);
    for (i, &pc) in sub.pivots().iter().enumerate() {
        let row = sub.basis_vector(i);
        for j in 0..b.cols() {
            particular.set(pc, j, row[n + j]);
        }
        a_part.insert(row[..n].to_vec());
    }
    Ok(Some(SolveOutcome { particular, kernel: a_part.null_space() }))
}

/// Solves `A x = b` for a single right-hand side vector.
pub fn solve_vec(a: &Mat, b: &[Elem]) -> Result<Option<Vec<Elem>>, LinalgError> {
    let rhs = Mat::column(a.field(), b);
    Ok(solve(a, &rhs)?.map(|s| s.particular.col(0)))
}

/// All `X` (`tgt_dim x src_dim`, vectorized row-major) with `B_k X = X A_k` for
/// every operator pair `(A_k, B_k)`. This is the Hom space between two
/// representations of the same operator family.
pub fn intertwiners(field: &FieldSpec, src: &[Mat], src_dim: usize, tgt: &[Mat], tgt_dim: usize) -> Subspace {
    assert_eq!(src.len(), tgt.len(), "operator families must pair up");
    let unknowns = src_dim * tgt_dim;
    let mut ech = Echelon::new(field, unknowns);
    'ops: for (a, b) in src.iter().zip(tgt) {
        debug_assert_eq!((a.rows(), a.cols()), (src_dim, src_dim));
        debug_assert_eq!((b.rows(), b.cols()), (tgt_dim, tgt_dim));
        for r in 0..tgt_dim {
            for c in 0..src_dim {
                let mut row = vec![0; unknowns];
                for s in 0..tgt_dim {
                    let x = b.get(r, s);
                    if x != 0 {
                        row[s * src_dim + c] = x;
                    }
                }
                for s in 0..src_dim {
                    let x = a.get(s, c);
                    if x != 0 {
                        let idx = r * src_dim + s;
                        row[idx] = field.sub(row[idx], x);
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    ech.insert(row);
                    if ech.is_full() {
                        break 'ops;
                    }
                }
            }
        }
    }
    ech.null_space()
}

/// `F^n / K` with the complement spanned by the standard basis vectors at the
/// non-pivot columns of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    kernel: Subspace,
    free: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(kernel: Subspace) -> Self {
        let mut is_pivot = vec![false; kernel.ambient()];
        for &pc in kernel.pivots() {
            is_pivot[pc] = true;
        }
        let free = (0..kernel.ambient()).filter(|&j| !is_pivot[j]).collect();
        QuotientSpace { kernel, free }
    }

    pub fn field(&self) -> &FieldSpec {
        self.kernel.field()
    }

    pub fn ambient(&self) -> usize {
        self.kernel.ambient()
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn complement_columns(&self) -> &[usize] {
        &self.free
    }

    pub fn project(&self, v: &[Elem]) -> Vec<Elem> {
        let mut w = v.to_vec();
        self.kernel.reduce(&mut w);
        self.free.iter().map(|&j| w[j]).collect()
    }

    pub fn section(&self, c: &[Elem]) -> Vec<Elem> {
        assert_eq!(c.len(), self.dim());
        let mut v = vec![0; self.ambient()];
        for (&j, &x) in self.free.iter().zip(c) {
            v[j] = x;
        }
        v
    }

    pub fn projection_matrix(&self) -> Mat {
        let f = self.field();
        let n = self.ambient();
        let cols: Vec<Vec<Elem>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                self.project(&e)
            })
            .collect();
        Mat::from_columns(f, self.dim(), &cols)
    }

    pub fn section_matrix(&self) -> Mat {
        let mut m = Mat::zeros(self.field(), self.ambient(), self.dim());
        for (i, &j) in self.free.iter().enumerate() {
            m.set(j, i, 1);
        }
        m
    }

    /// `proj . T . section`, the operator induced on the quotient by `T`.
    /// The caller is responsible for `T` preserving the kernel.
    pub fn induced(&self, t: &Mat) -> Mat {
        let cols: Vec<Vec<Elem>> = self
            .free
            .iter()
            .map(|&j| self.project(&t.col(j)))
            .collect();
        Mat::from_columns(self.field(), self.dim(), &cols)
    }

    /// Whether `T` maps the kernel into itself.
    pub fn preserves_kernel(&self, t: &Mat) -> bool {
        self.kernel.basis_vectors().all(|v| self.kernel.contains(&t.mul_vec(&v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let id = Mat::identity(&f2, 2);
        let s = solve_vec(&id, &[1, 0]).unwrap().unwrap();
        assert_eq!(s, vec![1, 0]);

        let z = Mat::zeros(&f2, 2, 2);
        let out = solve(&z, &Mat::column(&f2, &[0, 0])).unwrap().unwrap();
        assert_eq!(out.particular.col(0), vec![0, 0]);
        assert_eq!(out.kernel.dim(), 2);

        let a = Mat::from_rows(&f2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let out = solve(&a, &Mat::column(&f2, &[1, 1])).unwrap().unwrap();
        assert_eq!(out.particular.col(0), vec![1, 0]);
        assert_eq!(out.kernel, Subspace::span(&f2, 2, [vec![1, 1]]));
        assert!(solve(&a, &Mat::column(&f2, &[1, 0])).unwrap().is_none());
        assert!(solve(&a, &Mat::column(&f2, &[1, 0, 0])).is_err());
    }

    #[test]
    fn quotient_examples() {
        let f = FieldSpec::prime(3).unwrap();
        let full = QuotientSpace::new(Subspace::full(&f, 3));
        assert_eq!(full.dim(), 0);
        let triv = QuotientSpace::new(Subspace::zero(&f, 3));
        assert!(triv.projection_matrix().is_identity());
        let q = QuotientSpace::new(Subspace::span(&f, 2, [vec![1, 0]]));
        assert_eq!(q.dim(), 1);
        assert_eq!(q.project(&[1, 0]), vec![0]);
        assert_eq!(q.project(&[2, 1]), vec![1]);
        assert!(q.projection_matrix().mul(&q.section_matrix()).unwrap().is_identity());
    }
}
