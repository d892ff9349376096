use std::fmt;

use crate::error::LinalgError;
use crate::field::{Elem, FieldEmbedding, FieldSpec};

use super::{Echelon, Subspace};

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[{}x{} over {}](", self.rows, self.cols, self.field.name())?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|&x| self.field.format(x)).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, ")")
    }
}

impl Mat {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Mat { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_vec(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries length must be rows * cols");
        Mat { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<Elem>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { op: "from_rows", left: cols, right: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Mat { field: field.clone(), rows: rows.len(), cols, data })
    }

    /// Column matrix.
    pub fn column(field: &FieldSpec, v: &[Elem]) -> Self {
        Self::from_vec(field, v.len(), 1, v.to_vec())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: &FieldSpec, rows: usize, columns: &[Vec<Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * columns.len() + j] = x;
            }
        }
        m
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Row-major entries; doubles as the vectorization used for Hom spaces.
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Elem> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    fn check_field(&self, other: &Mat, op: &'static str) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch { op });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.check_field(other, "mul")?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { op: "mul", left: self.cols, right: other.rows });
        }
        Ok(self.mul_unchecked(other))
    }

    /// Product without shape checks (panics on mismatch in debug builds).
    pub fn mul_unchecked(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(&self.field, self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let c = self.data[i * self.cols + k];
                if c != 0 {
                    self.field.axpy(dst, c, &other.data[k * n..(k + 1) * n]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.check_field(other, "add")?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                op: "add",
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        self.field.axpy(&mut out.data, 1, &other.data);
        Ok(out)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.add(&other.scaled(self.field.neg(1)))
    }

    pub fn scaled(&self, c: Elem) -> Mat {
        let mut out = self.clone();
        self.field.scale(&mut out.data, c);
        out
    }

    /// `self += c * other`, shapes assumed equal.
    pub fn add_scaled(&mut self, c: Elem, other: &Mat) {
        debug_assert_eq!(self.data.len(), other.data.len());
        self.field.axpy(&mut self.data, c, &other.data);
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(&self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            out.row_mut(i)[self.cols..].copy_from_slice(other.row(i));
        }
        out
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat::from_vec(&self.field, self.rows + other.rows, self.cols, data)
    }

    /// Submatrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(&self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// Reduced row-echelon form of the row space (zero rows dropped).
    pub fn rref(&self) -> Mat {
        self.row_space().basis().clone()
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(&self.field, self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec());
            if ech.is_full() {
                break;
            }
        }
        ech.rank()
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::span(&self.field, self.cols, (0..self.rows).map(|i| self.row(i).to_vec()))
    }

    /// `{v : A v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let mut ech = Echelon::new(&self.field, self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec());
            if ech.is_full() {
                break;
            }
        }
        ech.null_space()
    }

    /// Column space `{A v}`.
    pub fn image(&self) -> Subspace {
        self.transpose().row_space()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let sol = super::solve(self, &Mat::identity(&self.field, self.rows)).ok()??;
        (sol.kernel.dim() == 0).then_some(sol.particular)
    }

    /// Entrywise image under a field embedding.
    pub fn lift(&self, emb: &FieldEmbedding) -> Result<Mat, LinalgError> {
        if emb.source() != &self.field {
            return Err(LinalgError::FieldMismatch { op: "lift" });
        }
        Ok(Mat {
            field: emb.target().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| emb.map(x)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn products_and_transpose() {
        let f5 = f(5);
        let a = Mat::from_rows(&f5, &[vec![1, 2], vec![3, 4]]).unwrap();
        let b = Mat::from_rows(&f5, &[vec![0, 1], vec![1, 0]]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, Mat::from_rows(&f5, &[vec![2, 1], vec![4, 3]]).unwrap());
        assert_eq!(a.transpose().transpose(), a);
        assert!(a.mul(&Mat::zeros(&f5, 3, 1)).is_err());
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn kernel_and_image_examples() {
        let f3 = f(3);
        let id = Mat::identity(&f3, 3);
        assert_eq!(id.kernel().dim(), 0);
        assert_eq!(id.image().dim(), 3);
        let z = Mat::zeros(&f3, 2, 3);
        assert_eq!(z.kernel().dim(), 3);
        assert_eq!(z.image().dim(), 0);
        // det = 1 - 4 = 0 mod 3
        let a = Mat::from_rows(&f3, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(a.kernel().dim(), 1);
        assert_eq!(a.image().dim(), 1);
        for v in a.kernel().basis_vectors() {
            assert!(a.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rank_survives_extension() {
        let f2 = f(2);
        let f4 = FieldSpec::galois(2, 2).unwrap();
        let emb = FieldEmbedding::new(&f2, &f4).unwrap();
        let a = Mat::from_rows(&f2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(a.rank(), 1);
        assert_eq!(a.lift(&emb).unwrap().rank(), 1);
    }
}
