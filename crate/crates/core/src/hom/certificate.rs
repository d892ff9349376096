use serde::Serialize;

use crate::artin::{Module, ModulePresentation};
use crate::error::ModuleError;
use crate::field::Elem;
use crate::linalg::{solve, Mat};

use super::duality::{add_membership, epsilon_map, evaluation_map, pi_map};
use super::trace::{TensorOverEnd, TraceData};
use super::{MatrixAlgebra, RingTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Variant {
    /// `End_End(L)(tr) ≅ End_End(M)(Hom(M,N))`.
    One,
    /// `End_End(N)(tr) ≅ End_End(M)(Hom(L,M))`.
    Two,
}

/// Hypotheses of the ring isomorphism, evaluated at the maximal ideal (the
/// only associated prime of an Artinian local ring).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralHypotheses {
    /// `L` or `N` is zero, so there is no prime to check.
    pub add_vacuous: bool,
    /// `L ∈ Add(M)` or `N ∈ Add(M)`.
    pub add_condition: bool,
    /// Variant one: `(M,N)` covariantly `L`-reflexive. Variant two: `(L,M)`
    /// contravariantly `N`-reflexive.
    pub reflexive: bool,
}

impl GeneralHypotheses {
    pub fn evaluate(m: &Module, l: &Module, n: &Module, variant: Variant) -> Result<Self, ModuleError> {
        let add_vacuous = l.is_zero() || n.is_zero();
        let add_condition = add_vacuous || add_membership(l, m)? || add_membership(n, m)?;
        let reflexive = match variant {
            Variant::One => epsilon_map(m, n, l)?.is_bijective(),
            Variant::Two => pi_map(l, m, n)?.is_bijective(),
        };
        Ok(GeneralHypotheses { add_vacuous, add_condition, reflexive })
    }

    pub fn satisfied(&self) -> bool {
        self.add_condition && self.reflexive
    }
}

/// A linear map between two rings given by structure constants, with the
/// verified ring-map properties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingMapCertificate {
    pub source: RingTable,
    pub target: RingTable,
    /// `target.dim x source.dim`, row by row.
    pub matrix: Vec<Vec<Elem>>,
    /// The action on generators `f . g` does not depend on the chosen
    /// presentation of an element of the trace submodule.
    pub well_defined: bool,
    /// Every induced operator commutes with the ring acting on the trace
    /// submodule.
    pub lands_in_target: bool,
    pub bijective: bool,
    pub multiplicative: bool,
    pub unital: bool,
}

impl RingMapCertificate {
    pub fn is_isomorphism(&self) -> bool {
        self.well_defined && self.lands_in_target && self.bijective && self.multiplicative && self.unital
    }
}

/// Builds the map sending each operator of `source` (acting on `Hom(L,M)`
/// for variant two, on `Hom(M,N)` for variant one) to the induced operator
/// on the trace submodule, and verifies it against `End` of the trace
/// submodule over the ring generated by `target_ops`.
pub fn certify(data: &TraceData, source: &MatrixAlgebra, variant: Variant, target_ops: &[Mat]) -> RingMapCertificate {
    let field = data.codomain().field().clone();
    let tr = data.image();
    let t_dim = tr.dim();
    let r = data.outer().dim();
    let s = data.inner().dim();
    let comp = data.compositions();
    // preimages in the ambient tensor product of the trace basis
    let rhs = Mat::from_columns(&field, comp.rows(), &tr.basis_vectors().collect::<Vec<_>>());
    let pre = solve(comp, &rhs).expect("shapes agree").expect("trace basis lies in the image");
    let ker = pre.kernel;
    let preimages = pre.particular;

    let lift = |z: &Mat| -> Mat {
        match variant {
            Variant::Two => TensorOverEnd::kron(&Mat::identity(&field, r), z),
            Variant::One => TensorOverEnd::kron(z, &Mat::identity(&field, s)),
        }
    };
    let mut well_defined = true;
    let induced: Vec<Mat> = source
        .basis()
        .iter()
        .map(|z| {
            let op = comp.mul_unchecked(&lift(z));
            if ker.basis_vectors().any(|k| op.mul_vec(&k).iter().any(|&x| x != 0)) {
                well_defined = false;
            }
            let cols: Vec<Vec<Elem>> = (0..t_dim)
                .map(|j| tr.coords_unchecked(&op.mul_vec(&preimages.col(j))))
                .collect();
            Mat::from_columns(&field, t_dim, &cols)
        })
        .collect();

    let target = MatrixAlgebra::commutant(&field, t_dim, target_ops);
    let mut lands_in_target = true;
    let mut columns = Vec::with_capacity(induced.len());
    for phi in &induced {
        match target.coords(phi) {
            Some(c) => columns.push(c),
            None => {
                lands_in_target = false;
                columns.push(vec![0; target.dim()]);
            }
        }
    }
    let matrix = Mat::from_columns(&field, target.dim(), &columns);
    let bijective = lands_in_target && source.dim() == target.dim() && matrix.rank() == source.dim();

    let combine = |coords: &[Elem]| {
        let mut acc = Mat::zeros(&field, t_dim, t_dim);
        for (c, phi) in coords.iter().zip(&induced) {
            if *c != 0 {
                acc.add_scaled(*c, phi);
            }
        }
        acc
    };
    let multiplicative = source.basis().iter().enumerate().all(|(i, a)| {
        source.basis().iter().enumerate().all(|(j, b)| {
            let prod = source.coords(&a.mul_unchecked(b)).expect("source is closed under products");
            combine(&prod) == induced[i].mul_unchecked(&induced[j])
        })
    });
    let unital = combine(&source.identity_coords()).is_identity();

    RingMapCertificate {
        source: source.table(),
        target: target.table(),
        matrix: (0..matrix.rows()).map(|i| matrix.row(i).to_vec()).collect(),
        well_defined,
        lands_in_target,
        bijective,
        multiplicative,
        unital,
    }
}

/// The ring map of the general theorem for `(M; L, N)`, with its hypotheses.
/// The certificate is built even when the hypotheses fail.
pub fn build_general_isomorphism(
    m: &Module,
    l: &Module,
    n: &Module,
    variant: Variant,
) -> Result<(GeneralHypotheses, RingMapCertificate), ModuleError> {
    let hyp = GeneralHypotheses::evaluate(m, l, n, variant)?;
    Ok((hyp, general_certificate(m, l, n, variant)?))
}

/// The certificate of [`build_general_isomorphism`] without evaluating the
/// hypotheses.
pub fn general_certificate(m: &Module, l: &Module, n: &Module, variant: Variant) -> Result<RingMapCertificate, ModuleError> {
    let data = TraceData::new(m, l, n)?;
    let field = m.algebra().field();
    let e = data.end_ring();
    let cert = match variant {
        Variant::Two => {
            let y = data.inner();
            let ops: Vec<Mat> = e.generators().iter().map(|g| y.left_action(g)).collect();
            let source = MatrixAlgebra::commutant(field, y.dim(), &ops);
            let end_n = MatrixAlgebra::endomorphisms(n);
            let target_ops: Vec<Mat> = end_n
                .generators()
                .iter()
                .map(|v| data.left_action_on_image(v).expect("trace submodule is End(N)-stable"))
                .collect();
            certify(&data, &source, variant, &target_ops)
        }
        Variant::One => {
            let x = data.outer();
            let ops: Vec<Mat> = e.generators().iter().map(|g| x.right_action(g)).collect();
            let source = MatrixAlgebra::commutant(field, x.dim(), &ops);
            let end_l = MatrixAlgebra::endomorphisms(l);
            let target_ops: Vec<Mat> = end_l
                .generators()
                .iter()
                .map(|u| data.right_action_on_image(u).expect("trace submodule is End(L)-stable"))
                .collect();
            certify(&data, &source, variant, &target_ops)
        }
    };
    Ok(cert)
}

/// `Z(End M) -> End(tr_{R,N}(M))` through the action of the center on
/// `Hom(R,M) = M`, with the gate conditions of the specialized statements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterCertificate {
    pub faithful: bool,
    /// `M` is reflexive with respect to `N`.
    pub reflexive: bool,
    /// `R ∈ Add(M)` or `N ∈ Add(M)`.
    pub add_condition: bool,
    pub center_dim: usize,
    pub end_dim: usize,
    /// The center equals `End_End(M)(M)` as a space of matrices.
    pub center_is_end_over_end: bool,
    pub certificate: RingMapCertificate,
}

pub fn check_center_certificate(m: &Module, n: &Module) -> Result<CenterCertificate, ModuleError> {
    let alg = m.algebra();
    let field = alg.field();
    let r = ModulePresentation::free(alg, 1);
    let e = MatrixAlgebra::endomorphisms(m);
    let z = e.center();
    let end_over_end = MatrixAlgebra::commutant(field, m.dim(), e.generators());
    let center_is_end_over_end = *end_over_end.space() == *z.space();
    let data = TraceData::new(m, &r, n)?;
    let y = data.inner();
    let source = z.image_under(y.dim(), |x| y.left_action(x));
    let end_n = MatrixAlgebra::endomorphisms(n);
    let target_ops: Vec<Mat> = end_n
        .generators()
        .iter()
        .map(|v| data.left_action_on_image(v).expect("trace submodule is End(N)-stable"))
        .collect();
    let mut certificate = certify(&data, &source, Variant::Two, &target_ops);
    // the center must embed in End(Hom(R,M)) before its image is compared
    if source.dim() != z.dim() {
        certificate.bijective = false;
    }
    Ok(CenterCertificate {
        faithful: m.is_faithful(),
        reflexive: evaluation_map(m, n)?.is_bijective(),
        add_condition: n.is_zero() || add_membership(&r, m)? || add_membership(n, m)?,
        center_dim: z.dim(),
        end_dim: e.dim(),
        center_is_end_over_end,
        certificate,
    })
}

/// `Z(End M) ≅ End(tr_R(M))` for faithful reflexive `M`.
pub fn check_lindo_certificate(m: &Module) -> Result<CenterCertificate, ModuleError> {
    check_center_certificate(m, &ModulePresentation::free(m.algebra(), 1))
}
