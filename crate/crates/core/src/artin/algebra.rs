use std::fmt;
use std::sync::Arc;

use crate::error::AlgebraError;
use crate::field::{Elem, FieldEmbedding, FieldSpec};
use crate::linalg::{Echelon, Mat, QuotientSpace, Subspace};

/// Shared handle to a validated algebra.
pub type Algebra = Arc<AlgebraPresentation>;

/// Above this many residue-field elements the locality test switches from
/// enumeration to counting Frobenius-fixed points.
const LOCALITY_ENUMERATION_LIMIT: u64 = 1 << 12;

/// A commutative Artinian local algebra over a finite field, given by
/// structure constants in a fixed basis.
#[derive(Clone)]
pub struct AlgebraPresentation {
    field: FieldSpec,
    labels: Vec<String>,
    // c[(i * d + j) * d + l] is the coefficient of b_l in b_i * b_j
    constants: Vec<Elem>,
    unit: Vec<Elem>,
    nilradical: Subspace,
    residue_degree: usize,
    left_mult: Vec<Mat>,
    generators: Vec<Vec<Elem>>,
    family: Option<AlgebraFamily>,
}

impl fmt::Debug for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraPresentation")
            .field("field", &self.field)
            .field("labels", &self.labels)
            .field("family", &self.family)
            .finish()
    }
}

impl PartialEq for AlgebraPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.labels == other.labels
            && self.constants == other.constants
            && self.unit == other.unit
    }
}

impl Eq for AlgebraPresentation {}

impl AlgebraPresentation {
    /// Validates raw structure constants (`d^3` entries, `c[(i*d+j)*d+l]`) and
    /// unit coordinates.
    pub fn new(
        field: &FieldSpec,
        labels: Vec<String>,
        constants: Vec<Elem>,
        unit: Vec<Elem>,
    ) -> Result<Algebra, AlgebraError> {
        Self::build(field, labels, constants, unit, None).map(Arc::new)
    }

    fn build(
        field: &FieldSpec,
        labels: Vec<String>,
        constants: Vec<Elem>,
        unit: Vec<Elem>,
        family: Option<AlgebraFamily>,
    ) -> Result<Self, AlgebraError> {
        let d = labels.len();
        if d == 0 {
            return Err(AlgebraError::Shape { expected: 1, got: 0 });
        }
        if constants.len() != d * d * d {
            return Err(AlgebraError::Shape { expected: d * d * d, got: constants.len() });
        }
        if unit.len() != d {
            return Err(AlgebraError::Shape { expected: d, got: unit.len() });
        }
        let q = field.order();
        if constants.iter().chain(&unit).any(|&x| x >= q) {
            return Err(AlgebraError::Preset(format!("entries must be elements of {}", field.name())));
        }
        let left_mult: Vec<Mat> = (0..d)
            .map(|i| {
                let mut m = Mat::zeros(field, d, d);
                for j in 0..d {
                    for l in 0..d {
                        m.set(l, j, constants[(i * d + j) * d + l]);
                    }
                }
                m
            })
            .collect();
        let mut alg = AlgebraPresentation {
            field: field.clone(),
            labels,
            constants,
            unit,
            nilradical: Subspace::zero(field, d),
            residue_degree: 0,
            left_mult,
            generators: Vec::new(),
            family,
        };
        alg.check_axioms()?;
        alg.nilradical = alg.compute_nilradical();
        alg.residue_degree = d - alg.nilradical.dim();
        alg.check_local()?;
        alg.generators = alg.compute_generators();
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<(), AlgebraError> {
        let d = self.dim();
        for i in 0..d {
            for j in (i + 1)..d {
                if self.basis_product(i, j) != self.basis_product(j, i) {
                    return Err(AlgebraError::NotCommutative {
                        left: self.labels[i].clone(),
                        right: self.labels[j].clone(),
                    });
                }
            }
        }
        let unit_mult = self.left_mult_of(&self.unit);
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            if unit_mult.mul_vec(&e) != e {
                return Err(AlgebraError::NotUnital(self.labels[i].clone()));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j).to_vec();
                for k in 0..d {
                    let mut left = vec![0; d];
                    for (l, &c) in ij.iter().enumerate() {
                        self.field.axpy(&mut left, c, self.basis_product(l, k));
                    }
                    let jk = self.basis_product(j, k);
                    let right = self.left_mult[i].mul_vec(jk);
                    if left != right {
                        return Err(AlgebraError::NotAssociative {
                            a: self.labels[i].clone(),
                            b: self.labels[j].clone(),
                            c: self.labels[k].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Kernel of `x -> x^(p^m)` for the least `m` that is a multiple of the
    /// field degree with `p^m >= d`; on a commutative algebra this map is
    /// `F_q`-linear, and every nilpotent element dies under it.
    fn compute_nilradical(&self) -> Subspace {
        let d = self.dim();
        let p = self.field.characteristic() as u64;
        let k = self.field.degree();
        let mut exponent = p.pow(k);
        while exponent < d as u64 {
            exponent = exponent.saturating_mul(p.pow(k));
        }
        let columns: Vec<Vec<Elem>> = (0..d)
            .map(|i| {
                let mut e = vec![0; d];
                e[i] = 1;
                self.pow(&e, exponent)
            })
            .collect();
        Mat::from_columns(&self.field, d, &columns).kernel()
    }

    fn check_local(&self) -> Result<(), AlgebraError> {
        let quotient = QuotientSpace::new(self.nilradical.clone());
        let r = quotient.dim();
        if r == 0 {
            return Err(AlgebraError::NotLocal { witness: "0 (zero ring)".into() });
        }
        let q = self.field.order() as u64;
        let invertible_mod_nil = |x: &[Elem]| quotient.induced(&self.left_mult_of(x)).rank() == r;
        let total = q.checked_pow(r as u32);
        if matches!(total, Some(t) if t <= LOCALITY_ENUMERATION_LIMIT) {
            let mut coords = vec![0u32; r];
            for _ in 1..total.unwrap() {
                increment(&mut coords, self.field.order());
                let x = quotient.section(&coords);
                if !invertible_mod_nil(&x) {
                    return Err(AlgebraError::NotLocal { witness: self.format_element(&x) });
                }
            }
            return Ok(());
        }
        // A reduced finite algebra is a product of t fields, and the fixed
        // points of x -> x^q form F_q^t.
        let frob = Mat::from_columns(
            &self.field,
            r,
            &(0..r)
                .map(|i| {
                    let mut c = vec![0; r];
                    c[i] = 1;
                    quotient.project(&self.pow(&quotient.section(&c), q))
                })
                .collect::<Vec<_>>(),
        );
        let fixed = frob.sub(&Mat::identity(&self.field, r)).expect("square").kernel();
        if fixed.dim() == 1 {
            return Ok(());
        }
        let one = quotient.project(&self.unit);
        for v in fixed.basis_vectors() {
            for c in self.field.elements() {
                let mut w = v.clone();
                self.field.axpy(&mut w, self.field.neg(c), &one);
                if w.iter().any(|&x| x != 0) {
                    let x = quotient.section(&w);
                    if !invertible_mod_nil(&x) {
                        return Err(AlgebraError::NotLocal { witness: self.format_element(&x) });
                    }
                }
            }
        }
        Err(AlgebraError::NotLocal { witness: "(fixed-point count)".into() })
    }

    fn compute_generators(&self) -> Vec<Vec<Elem>> {
        let d = self.dim();
        let mut gens: Vec<Vec<Elem>> = Vec::new();
        let mut sub = self.closure(&[], &gens);
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            if !sub.contains(&e) {
                gens.push(e);
                sub = self.closure(&[], &gens);
            }
        }
        gens
    }

    /// Smallest subalgebra containing `extra` and the given generators.
    fn closure(&self, extra: &[Vec<Elem>], gens: &[Vec<Elem>]) -> Subspace {
        let d = self.dim();
        let mut ech = Echelon::new(&self.field, d);
        let mut frontier: Vec<Vec<Elem>> = vec![self.unit.clone()];
        frontier.extend(extra.iter().cloned());
        frontier.extend(gens.iter().cloned());
        let mut basis: Vec<Vec<Elem>> = Vec::new();
        while let Some(v) = frontier.pop() {
            if ech.insert(v.clone()) {
                for g in gens {
                    frontier.push(self.mul(&v, g));
                }
                basis.push(v);
            }
        }
        Subspace::span(&self.field, d, basis)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn family(&self) -> Option<&AlgebraFamily> {
        self.family.as_ref()
    }

    /// Raw structure constants, `c[(i*d+j)*d+l]`.
    pub fn constants(&self) -> &[Elem] {
        &self.constants
    }

    pub fn unit(&self) -> &[Elem] {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[Elem] {
        let d = self.dim();
        &self.constants[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// Regular representation of the basis element `b_i`.
    pub fn left_mult(&self, i: usize) -> &Mat {
        &self.left_mult[i]
    }

    pub fn left_mult_of(&self, x: &[Elem]) -> Mat {
        let d = self.dim();
        let mut m = Mat::zeros(&self.field, d, d);
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                m.add_scaled(c, &self.left_mult[i]);
            }
        }
        m
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        self.left_mult_of(x).mul_vec(y)
    }

    pub fn pow(&self, x: &[Elem], mut e: u64) -> Vec<Elem> {
        let mut acc = self.unit.clone();
        let mut base = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The nilradical, which is the maximal ideal.
    pub fn nilradical(&self) -> &Subspace {
        &self.nilradical
    }

    pub fn maximal_ideal(&self) -> &Subspace {
        &self.nilradical
    }

    /// `[R/m : F_q]`.
    pub fn residue_degree(&self) -> usize {
        self.residue_degree
    }

    /// A generating set of the algebra (with the unit implied).
    pub fn generators(&self) -> &[Vec<Elem>] {
        &self.generators
    }

    /// Inverse of `x`, if it is a unit.
    pub fn inverse(&self, x: &[Elem]) -> Option<Vec<Elem>> {
        crate::linalg::solve_vec(&self.left_mult_of(x), &self.unit).ok().flatten()
    }

    /// Power of the maximal ideal, `m^k` (with `m^0 = R`).
    pub fn maximal_ideal_power(&self, k: usize) -> Subspace {
        let d = self.dim();
        let mut cur = Subspace::full(&self.field, d);
        for _ in 0..k {
            let vectors: Vec<Vec<Elem>> = self
                .nilradical
                .basis_vectors()
                .flat_map(|m| cur.basis_vectors().map(move |c| (m.clone(), c)))
                .map(|(m, c)| self.mul(&m, &c))
                .collect();
            cur = Subspace::span(&self.field, d, vectors);
        }
        cur
    }

    pub fn format_element(&self, x: &[Elem]) -> String {
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                if c == 1 {
                    self.labels[i].clone()
                } else {
                    format!("{}*{}", self.field.format(c), self.labels[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Base change along a field embedding. Fails when the lifted algebra is
    /// no longer local (residue field not equal to the base field).
    pub fn lift(&self, emb: &FieldEmbedding) -> Result<Algebra, AlgebraError> {
        if emb.source() != &self.field {
            return Err(AlgebraError::Preset("embedding source differs from the algebra field".into()));
        }
        Self::build(
            emb.target(),
            self.labels.clone(),
            self.constants.iter().map(|&x| emb.map(x)).collect(),
            self.unit.iter().map(|&x| emb.map(x)).collect(),
            self.family.clone(),
        )
        .map(Arc::new)
    }

    /// `F_q[x_1..x_n] / I` for a monomial ideal `I` given by generator exponent
    /// vectors. Every variable must have a pure power in `I`.
    pub fn monomial(
        field: &FieldSpec,
        variables: &[&str],
        relations: &[Vec<u32>],
    ) -> Result<Algebra, AlgebraError> {
        Self::monomial_with_family(field, variables, relations, None).map(Arc::new)
    }

    fn monomial_with_family(
        field: &FieldSpec,
        variables: &[&str],
        relations: &[Vec<u32>],
        family: Option<AlgebraFamily>,
    ) -> Result<Self, AlgebraError> {
        let n = variables.len();
        if relations.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::Preset("relation exponent vectors must match the variables".into()));
        }
        for v in 0..n {
            let pure = relations
                .iter()
                .any(|r| r[v] > 0 && r.iter().enumerate().all(|(w, &e)| w == v || e == 0));
            if !pure {
                return Err(AlgebraError::Preset(format!(
                    "quotient is not finite dimensional: no pure power of {}",
                    variables[v]
                )));
            }
        }
        let in_ideal = |m: &[u32]| relations.iter().any(|r| r.iter().zip(m).all(|(a, b)| a <= b));
        let mut monomials: Vec<Vec<u32>> = vec![vec![0; n]];
        let mut i = 0;
        while i < monomials.len() {
            for v in 0..n {
                let mut m = monomials[i].clone();
                m[v] += 1;
                if !in_ideal(&m) && !monomials.contains(&m) {
                    monomials.push(m);
                }
            }
            i += 1;
        }
        monomials.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let d = monomials.len();
        let labels: Vec<String> = monomials
            .iter()
            .map(|m| {
                let parts: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| if e == 1 { variables[v].to_string() } else { format!("{}{}", variables[v], e) })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("")
                }
            })
            .collect();
        let mut constants = vec![0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let prod: Vec<u32> = monomials[i].iter().zip(&monomials[j]).map(|(a, b)| a + b).collect();
                if let Some(l) = monomials.iter().position(|m| *m == prod) {
                    constants[(i * d + j) * d + l] = 1;
                }
            }
        }
        let mut unit = vec![0; d];
        unit[0] = 1;
        Self::build(field, labels, constants, unit, family)
    }

    /// `F_{q^k}` viewed as a `k`-dimensional algebra over `F_q`.
    pub fn field_extension(field: &FieldSpec, k: u32) -> Result<Algebra, AlgebraError> {
        let big = FieldSpec::galois(field.characteristic(), field.degree() * k)
            .map_err(|e| AlgebraError::Preset(e.to_string()))?;
        if !field.is_prime_field() {
            return Err(AlgebraError::Preset("field_ext presets need a prime base field".into()));
        }
        let k = k as usize;
        let d = k;
        let labels: Vec<String> = (0..d)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "a".to_string(),
                _ => format!("a{i}"),
            })
            .collect();
        let mut constants = vec![0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let mut ei = vec![0u32; d];
                ei[i] = 1;
                let mut ej = vec![0u32; d];
                ej[j] = 1;
                let prod = big.mul(big.from_coefficients(&ei), big.from_coefficients(&ej));
                for (l, c) in big.coefficients(prod).into_iter().enumerate() {
                    constants[(i * d + j) * d + l] = c;
                }
            }
        }
        let mut unit = vec![0; d];
        unit[0] = 1;
        Self::build(field, labels, constants, unit, Some(AlgebraFamily::FieldExtension(k as u32))).map(Arc::new)
    }

    pub fn from_family(field: &FieldSpec, family: &AlgebraFamily) -> Result<Algebra, AlgebraError> {
        let fam = Some(family.clone());
        let alg = match *family {
            AlgebraFamily::Truncated(n) => {
                if n == 0 {
                    return Err(AlgebraError::Preset("truncated(n) needs n >= 1".into()));
                }
                Self::monomial_with_family(field, &["x"], &[vec![n]], fam)?
            }
            AlgebraFamily::SquareZero(e) => {
                let names = variable_names(e as usize);
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let mut rels = Vec::new();
                for a in 0..e as usize {
                    for b in a..e as usize {
                        let mut r = vec![0; e as usize];
                        r[a] += 1;
                        r[b] += 1;
                        rels.push(r);
                    }
                }
                Self::monomial_with_family(field, &refs, &rels, fam)?
            }
            AlgebraFamily::CompleteIntersectionSquares => {
                Self::monomial_with_family(field, &["x", "y"], &[vec![2, 0], vec![0, 2]], fam)?
            }
            AlgebraFamily::XSquaredXyYCubed => Self::monomial_with_family(
                field,
                &["x", "y"],
                &[vec![2, 0], vec![1, 1], vec![0, 3]],
                fam,
            )?,
            AlgebraFamily::FieldExtension(k) => return Self::field_extension(field, k),
        };
        Ok(Arc::new(alg))
    }
}

fn variable_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

fn increment(coords: &mut [u32], q: u32) {
    for c in coords.iter_mut() {
        *c += 1;
        if *c < q {
            return;
        }
        *c = 0;
    }
}

/// Named algebra presets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraFamily {
    /// `k[x]/(x^n)`.
    Truncated(u32),
    /// `k[x_1..x_e]/(x_1..x_e)^2`.
    SquareZero(u32),
    /// `k[x,y]/(x^2, y^2)`.
    CompleteIntersectionSquares,
    /// `k[x,y]/(x^2, xy, y^3)`.
    XSquaredXyYCubed,
    /// `F_{q^k}` over `F_q`.
    FieldExtension(u32),
}

impl AlgebraFamily {
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let arg = |name: &str| -> Option<u32> {
            s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
        };
        match s {
            "dual_numbers" => return Some(Self::Truncated(2)),
            "ci_squares" => return Some(Self::CompleteIntersectionSquares),
            "x2_xy_y3" => return Some(Self::XSquaredXyYCubed),
            _ => {}
        }
        if let Some(n) = arg("truncated") {
            return Some(Self::Truncated(n));
        }
        if let Some(e) = arg("square_zero") {
            return Some(Self::SquareZero(e));
        }
        if let Some(k) = arg("field_ext") {
            return Some(Self::FieldExtension(k));
        }
        None
    }

    /// The family's conventional ring-theoretic description.
    pub fn describe(&self) -> String {
        match self {
            Self::Truncated(n) => format!("k[x]/(x^{n})"),
            Self::SquareZero(2) => "k[x,y]/(x,y)^2".into(),
            Self::SquareZero(3) => "k[x,y,z]/(x,y,z)^2".into(),
            Self::SquareZero(e) => format!("k[x1..x{e}]/(x1..x{e})^2"),
            Self::CompleteIntersectionSquares => "k[x,y]/(x^2,y^2)".into(),
            Self::XSquaredXyYCubed => "k[x,y]/(x^2,xy,y^3)".into(),
            Self::FieldExtension(k) => format!("F_(q^{k})"),
        }
    }
}

impl serde::Serialize for AlgebraFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for AlgebraFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Truncated(2) => write!(f, "dual_numbers"),
            Self::Truncated(n) => write!(f, "truncated({n})"),
            Self::SquareZero(e) => write!(f, "square_zero({e})"),
            Self::CompleteIntersectionSquares => write!(f, "ci_squares"),
            Self::XSquaredXyYCubed => write!(f, "x2_xy_y3"),
            Self::FieldExtension(k) => write!(f, "field_ext({k})"),
        }
    }
}
