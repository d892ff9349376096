use serde::Serialize;

use crate::error::ModuleError;

use super::module::{Module, ModulePresentation};

/// Largest syzygy (as a vector space) the resolution is allowed to reach.
pub const DEFAULT_SYZYGY_CAP: usize = 512;

/// Dimensions of `Ext^j(M, N)` for `j = 0..`, as far as the resolution got.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtReport {
    pub dims: Vec<usize>,
    pub bound: usize,
    /// False when a syzygy outgrew the size cap before `bound` was reached.
    pub complete: bool,
}

impl ExtReport {
    /// No nonzero `Ext^j` for `1 <= j <= bound` among the computed terms.
    pub fn vanishes_above_zero(&self) -> bool {
        self.dims.iter().skip(1).all(|&x| x == 0)
    }
}

/// `dim Ext^j(M, N)` for `0 <= j <= bound` by dimension shifting along the
/// minimal resolution: from `0 -> W_j -> F_(j-1) -> W_(j-1) -> 0`,
/// `dim Ext^j = dim Hom(W_j, N) - mu_(j-1) dim N + dim Hom(W_(j-1), N)`.
pub fn ext_dims(m: &Module, n: &Module, bound: usize, cap: usize) -> Result<ExtReport, ModuleError> {
    let hom_dim = |x: &ModulePresentation| x.hom_space(n).map(|s| s.dim());
    let mut dims = vec![hom_dim(m)?];
    let mut prev = m.clone();
    let mut prev_hom = dims[0];
    for _ in 1..=bound {
        if prev.is_zero() {
            dims.push(0);
            continue;
        }
        let cover = prev.minimal_free_cover();
        let rank = cover.generators.len();
        if cover.kernel.dim() > cap {
            return Ok(ExtReport { dims, bound, complete: false });
        }
        let syz = cover.free.submodule(&cover.kernel)?;
        let syz_hom = hom_dim(&syz)?;
        // Hom(A^rank, N) = N^rank
        let cover_hom = rank * n.dim();
        dims.push(syz_hom + prev_hom - cover_hom);
        prev = syz;
        prev_hom = syz_hom;
    }
    Ok(ExtReport { dims, bound, complete: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{AlgebraFamily, AlgebraPresentation};
    use crate::field::FieldSpec;

    #[test]
    fn ext_examples() {
        let a = AlgebraPresentation::from_family(&FieldSpec::prime(2).unwrap(), &AlgebraFamily::Truncated(2))
            .unwrap();
        let r = ModulePresentation::free(&a, 1);
        let k = ModulePresentation::residue_field(&a);
        let w = ModulePresentation::canonical(&a);
        let free = ext_dims(&r, &k, 4, DEFAULT_SYZYGY_CAP).unwrap();
        assert_eq!(free.dims, vec![1, 0, 0, 0, 0]);
        let kk = ext_dims(&k, &k, 4, DEFAULT_SYZYGY_CAP).unwrap();
        assert_eq!(kk.dims, vec![1; 5]);
        let ww = ext_dims(&w, &w, 4, DEFAULT_SYZYGY_CAP).unwrap();
        assert!(ww.complete && ww.vanishes_above_zero());
        assert_eq!(ww.dims[0], 2);
    }

    #[test]
    fn ext_over_square_zero_grows() {
        let a = AlgebraPresentation::from_family(&FieldSpec::prime(2).unwrap(), &AlgebraFamily::SquareZero(2))
            .unwrap();
        let k = ModulePresentation::residue_field(&a);
        // Betti numbers of k are 1, 2, 4, 8, ...
        let rep = ext_dims(&k, &k, 3, DEFAULT_SYZYGY_CAP).unwrap();
        assert_eq!(rep.dims, vec![1, 2, 4, 8]);
        let short = ext_dims(&k, &k, 12, 16).unwrap();
        assert!(!short.complete);
    }
}
