use proptest::prelude::*;

use tracekernel::linalg::{Mat, Subspace};
use tracekernel::{FieldEmbedding, FieldSpec};

fn field(q: u32) -> FieldSpec {
    FieldSpec::of_order(q).unwrap()
}

/// A random matrix over `F_q` with the given shape.
fn matrix(q: u32, rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(0..q, rows * cols).prop_map(move |data| Mat::from_vec(&field(q), rows, cols, data))
}

fn shaped() -> impl Strategy<Value = Mat> {
    (prop_oneof![Just(2u32), Just(3), Just(4), Just(5)], 1usize..6, 1usize..7)
        .prop_flat_map(|(q, r, c)| matrix(q, r, c))
}

proptest! {
    #[test]
    fn rank_nullity(a in shaped()) {
        prop_assert_eq!(a.rank() + a.kernel().dim(), a.cols());
        prop_assert_eq!(a.image().dim(), a.rank());
        prop_assert_eq!(a.transpose().rank(), a.rank());
        for v in a.kernel().basis_vectors() {
            prop_assert!(a.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rref_is_canonical(a in shaped(), seed in any::<u64>()) {
        // any invertible row operation gives the same reduced form
        let f = a.field().clone();
        let n = a.rows();
        let mut g = Mat::identity(&f, n);
        let mut s = seed;
        for _ in 0..8 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let (i, j) = ((s >> 33) as usize % n, (s >> 17) as usize % n);
            let c = ((s >> 5) as u32) % f.order();
            if i != j {
                let row_j = g.row(j).to_vec();
                f.axpy(g.row_mut(i), c, &row_j);
            }
        }
        prop_assert!(g.is_invertible());
        prop_assert_eq!(g.mul_unchecked(&a).rref(), a.rref());
        prop_assert_eq!(g.mul_unchecked(&a).row_space(), a.row_space());
    }

    #[test]
    fn sum_and_intersection_dimensions(a in shaped(), b_seed in proptest::collection::vec(0u32..5, 36)) {
        let f = a.field().clone();
        let c = a.cols();
        let rows = (b_seed.len() / c).min(5);
        let data: Vec<u32> = b_seed[..rows * c].iter().map(|&x| x % f.order()).collect();
        let b = Mat::from_vec(&f, rows, c, data);
        let (u, v) = (a.row_space(), b.row_space());
        let sum = u.sum(&v).unwrap();
        let cap = u.intersection(&v).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), u.dim() + v.dim());
        prop_assert!(cap.is_subspace_of(&u).unwrap() && cap.is_subspace_of(&v).unwrap());
        prop_assert!(u.is_subspace_of(&sum).unwrap() && v.is_subspace_of(&sum).unwrap());
    }

    #[test]
    fn coordinates_round_trip(a in shaped(), coeffs in proptest::collection::vec(0u32..5, 6)) {
        let s = a.row_space();
        let f = s.field().clone();
        let c: Vec<u32> = coeffs.iter().take(s.dim()).map(|&x| x % f.order()).collect();
        if c.len() == s.dim() {
            let v = s.vector(&c);
            prop_assert!(s.contains(&v));
            prop_assert_eq!(s.coords(&v), Some(c));
        }
    }

    #[test]
    fn lifting_preserves_rank(a in (prop_oneof![Just(2u32), Just(3)], 1usize..5, 1usize..5).prop_flat_map(|(q, r, c)| matrix(q, r, c)), k in 2u32..4) {
        let f = a.field().clone();
        let big = FieldSpec::galois(f.characteristic(), k).unwrap();
        let emb = FieldEmbedding::new(&f, &big).unwrap();
        let lifted = a.lift(&emb).unwrap();
        prop_assert_eq!(lifted.rank(), a.rank());
        prop_assert_eq!(a.row_space().lift(&emb).unwrap(), lifted.row_space());
        prop_assert_eq!(a.kernel().lift(&emb).unwrap(), lifted.kernel());
    }
}

#[test]
fn zero_and_full_subspaces() {
    let f = field(3);
    let z = Subspace::zero(&f, 4);
    let full = Subspace::full(&f, 4);
    assert!(z.is_zero() && full.is_full());
    assert_eq!(z.sum(&full).unwrap(), full);
    assert_eq!(z.intersection(&full).unwrap(), z);
}
