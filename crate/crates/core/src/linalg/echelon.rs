use crate::field::{Elem, FieldSpec};

use super::Subspace;

const NO_ROW: usize = usize::MAX;

/// Incremental reduced row-echelon builder.
///
/// Rows are kept fully reduced: each stored row has a leading 1 in its pivot
/// column and zeros in every other stored row's pivot column, so reducing a
/// vector is a single pass over the rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    ncols: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
    row_of_col: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &FieldSpec, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_col: vec![NO_ROW; ncols],
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Reduces `v` in place against the stored rows.
    pub fn reduce(&self, v: &mut [Elem]) {
        debug_assert_eq!(v.len(), self.ncols);
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                self.field.axpy(v, self.field.neg(c), row);
            }
        }
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[pc]).expect("nonzero pivot");
        self.field.scale(&mut v, inv);
        for row in &mut self.rows {
            let c = row[pc];
            if c != 0 {
                self.field.axpy(row, self.field.neg(c), &v);
            }
        }
        self.row_of_col[pc] = self.rows.len();
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis of `{x : r . x = 0 for every stored row r}`.
    pub fn null_space(&self) -> Subspace {
        let f = &self.field;
        let mut vectors = Vec::with_capacity(self.ncols - self.rank());
        for free in 0..self.ncols {
            if self.row_of_col[free] != NO_ROW {
                continue;
            }
            let mut x = vec![0; self.ncols];
            x[free] = 1;
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                x[pc] = f.neg(row[free]);
            }
            vectors.push(x);
        }
        Subspace::span(f, self.ncols, vectors)
    }

    /// Canonical RREF subspace of the stored span.
    pub fn into_subspace(self) -> Subspace {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        let mut rows = self.rows;
        let sorted: Vec<Vec<Elem>> = order.iter().map(|&i| std::mem::take(&mut rows[i])).collect();
        Subspace::from_rref_parts(&self.field, self.ncols, sorted, pivots)
    }
}
