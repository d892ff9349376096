//! Brute-force description of the trace submodule: enumerate every
//! composition `f . g` with `f: M -> N`, `g: L -> M`, then close under
//! addition. Independent of the tensor-product and echelon machinery except
//! for enumerating the two Hom spaces.

use std::collections::HashSet;

use crate::field::Elem;
use crate::hom::{HomSpace, TraceData};
use crate::linalg::Mat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    /// The enumeration would exceed the caps.
    Skipped,
    Computed {
        /// Every element of the additive closure, as row-major matrices.
        elements: HashSet<Vec<Elem>>,
        /// Most compositions needed to reach an element.
        summands: usize,
    },
}

fn size(q: u32, dim: usize) -> Option<u64> {
    (q as u64).checked_pow(dim as u32)
}

/// All elements of a Hom space, by enumerating coordinate vectors.
fn all_maps(h: &HomSpace) -> Vec<Mat> {
    let q = h.field().order();
    let d = h.dim();
    let mut coords = vec![0; d];
    let mut out = Vec::new();
    loop {
        out.push(h.matrix(&coords));
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            coords[i] += 1;
            if coords[i] < q {
                break;
            }
            coords[i] = 0;
            i += 1;
        }
    }
}

/// `pairs_cap` bounds `|Hom(M,N)| * |Hom(L,M)|`, `closure_cap` bounds
/// `|Hom(L,N)|`.
pub fn brute_force_trace_oracle(data: &TraceData, pairs_cap: u64, closure_cap: u64) -> OracleOutcome {
    let (x, y, t) = (data.outer(), data.inner(), data.codomain());
    let q = t.field().order();
    let pairs = size(q, x.dim() + y.dim());
    let closure = size(q, t.dim());
    match (pairs, closure) {
        (Some(p), Some(c)) if p <= pairs_cap && c <= closure_cap => {}
        _ => return OracleOutcome::Skipped,
    }
    let field = t.field();
    let inner = all_maps(y);
    let mut products: HashSet<Vec<Elem>> = HashSet::new();
    for f in all_maps(x) {
        for g in &inner {
            products.insert(f.mul_unchecked(g).into_data());
        }
    }
    let products: Vec<Vec<Elem>> = products.into_iter().collect();
    let zero = vec![0; t.space().ambient()];
    let mut elements: HashSet<Vec<Elem>> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    let mut summands = 0;
    loop {
        let mut next = Vec::new();
        for e in &frontier {
            for p in &products {
                let s: Vec<Elem> = e.iter().zip(p).map(|(&a, &b)| field.add(a, b)).collect();
                if elements.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        summands += 1;
        frontier = next;
    }
    OracleOutcome::Computed { elements, summands }
}
