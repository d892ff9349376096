use proptest::prelude::*;

use tracekernel::artin::{AlgebraFamily, AlgebraPresentation, Module, ModulePresentation};
use tracekernel::hom::{theta_image, trace_ideal, trace_image, HomSpace, MatrixAlgebra};
use tracekernel::{Elem, FieldSpec};

fn families() -> Vec<AlgebraFamily> {
    ["dual_numbers", "truncated(3)", "square_zero(2)", "ci_squares", "x2_xy_y3", "field_ext(2)"]
        .iter()
        .map(|s| AlgebraFamily::parse(s).unwrap())
        .collect()
}

/// A quotient of `R^2` by the submodule generated by a few random vectors.
fn module() -> impl Strategy<Value = Module> {
    (prop_oneof![Just(2u32), Just(3)], 0..families().len(), proptest::collection::vec(any::<u32>(), 0..24)).prop_map(
        |(q, fi, noise)| {
            let f = FieldSpec::prime(q).unwrap();
            let alg = AlgebraPresentation::from_family(&f, &families()[fi]).unwrap();
            let free = ModulePresentation::free(&alg, 2);
            let d = free.dim();
            let gens: Vec<Vec<Elem>> = noise.chunks(d).filter(|c| c.len() == d).map(|c| c.iter().map(|x| x % q).collect()).collect();
            let sub = free.generated_by(gens);
            free.quotient(&sub).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn units_are_the_complement_of_the_maximal_ideal(
        q in prop_oneof![Just(2u32), Just(3)],
        fi in 0..6usize,
        x in proptest::collection::vec(any::<u32>(), 8),
    ) {
        let f = FieldSpec::prime(q).unwrap();
        let alg = AlgebraPresentation::from_family(&f, &families()[fi]).unwrap();
        let x: Vec<Elem> = x.iter().take(alg.dim()).map(|v| v % q).collect();
        let inv = alg.inverse(&x);
        prop_assert_eq!(inv.is_some(), !alg.maximal_ideal().contains(&x));
        if let Some(y) = inv {
            prop_assert_eq!(alg.mul(&x, &y), alg.unit().to_vec());
        }
    }

    #[test]
    fn matlis_duality(m in module()) {
        let dual = m.matlis_dual();
        prop_assert_eq!(dual.matlis_dual().actions().to_vec(), m.actions().to_vec());
        // Hom(M, N) = Hom(N^v, M^v) for any second module N
        for n in [ModulePresentation::residue_field(m.algebra()), ModulePresentation::maximal_ideal(m.algebra())] {
            prop_assert_eq!(HomSpace::new(&m, &n).unwrap().dim(), HomSpace::new(&n.matlis_dual(), &dual).unwrap().dim());
        }
        if let Some(iso) = dual.matlis_dual().is_isomorphic(&m, 1 << 16).unwrap() {
            prop_assert!(iso);
        }
        let omega = ModulePresentation::canonical(m.algebra());
        prop_assert_eq!(HomSpace::new(&m, &omega).unwrap().dim(), m.dim());
        // dimensions over the prime field; the residue field may be larger
        let e = m.algebra().residue_degree();
        prop_assert_eq!(m.matlis_dual().socle().dim(), e * m.mu());
    }

    #[test]
    fn minimal_generators(m in module()) {
        prop_assert_eq!(m.algebra().residue_degree() * m.mu(), m.dim() - m.radical().dim());
        let gens = m.minimal_generators();
        prop_assert_eq!(gens.len(), m.mu());
        prop_assert!(m.is_generator_set(&gens));
        let cover = m.minimal_free_cover();
        prop_assert_eq!(m.syzygy().dim() + m.dim(), cover.free.dim());
    }

    #[test]
    fn trace_is_additive(a in module(), b_noise in proptest::collection::vec(any::<u32>(), 0..12)) {
        // a second quotient over the same algebra
        let free = ModulePresentation::free(a.algebra(), 1);
        let q = a.algebra().field().order();
        let d = free.dim();
        let gens: Vec<Vec<Elem>> = b_noise.chunks(d).filter(|c| c.len() == d).map(|c| c.iter().map(|x| x % q).collect()).collect();
        let b = free.quotient(&free.generated_by(gens)).unwrap();
        let ab = ModulePresentation::direct_sum(&[&a, &b]).unwrap();
        let sum = trace_ideal(&a).unwrap().sum(&trace_ideal(&b).unwrap()).unwrap();
        prop_assert_eq!(trace_ideal(&ab).unwrap(), sum);
    }

    #[test]
    fn theta_is_the_trace_of_the_ring(l in module(), n_seed in 0..3usize) {
        let alg = l.algebra().clone();
        let n = match n_seed {
            0 => ModulePresentation::residue_field(&alg),
            1 => ModulePresentation::canonical(&alg),
            _ => ModulePresentation::maximal_ideal(&alg),
        };
        let r = ModulePresentation::free(&alg, 1);
        let (_, theta) = theta_image(&l, &n).unwrap();
        let (_, tr) = trace_image(&r, &l, &n).unwrap();
        prop_assert_eq!(theta, tr);
        // a free summand makes every map factor
        let rl = ModulePresentation::direct_sum(&[&r, &l]).unwrap();
        let (t, full) = trace_image(&rl, &l, &n).unwrap();
        prop_assert_eq!(full.dim(), t.dim());
    }

    #[test]
    fn centers_commute(m in module()) {
        let end = MatrixAlgebra::endomorphisms(&m);
        let z = end.center();
        prop_assert!(z.is_commutative());
        prop_assert_eq!(z.dim() == 0, m.is_zero());
        prop_assert!(z.dim() <= end.dim());
        for x in z.basis() {
            prop_assert!(end.contains(x));
        }
        prop_assert_eq!(end.is_commutative(), z.dim() == end.dim());
    }
}
