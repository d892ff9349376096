//! Graded presentations of monomial ideals and torsion of their tensor
//! products.
//!
//! Every graded piece of `R = k[[t^S]]` and of a monomial ideal is at most one
//! dimensional, so all syzygies are spanned by binomials
//! `t^(d - a_i) e_i - t^(d - a_j) e_j` and every computation is a per-degree
//! rank over the coefficient field. The coefficients are `±1`, so the ranks do
//! not depend on the field and everything is computed over `F_2`.

use serde::Serialize;

use crate::field::FieldSpec;
use crate::linalg::Echelon;

use super::ideal::FracIdeal;
use super::semigroup::Semigroup;

/// `t^(degree - a_left) e_left - t^(degree - a_right) e_right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Binomial {
    pub degree: i64,
    pub left: usize,
    pub right: usize,
}

/// Generators of an ideal (translated to minimum 0) and its minimal syzygies
/// in degrees up to the cutoff.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedPresentation {
    pub generators: Vec<i64>,
    pub syzygies: Vec<Binomial>,
    pub cutoff: i64,
    /// No minimal syzygy in the top `c` degrees `(D - c, D]`.
    pub stable: bool,
}

fn f2() -> FieldSpec {
    FieldSpec::prime(2).expect("2 is prime")
}

fn unit(n: usize, i: usize, j: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v[j] = 1;
    v
}

/// Generators whose free summand is nonzero in degree `d`.
fn support(s: &Semigroup, gens: &[i64], d: i64) -> Vec<usize> {
    (0..gens.len()).filter(|&i| s.contains(d - gens[i])).collect()
}

/// Smallest cutoff at which syzygies (and the tensor products built from
/// them) are complete: beyond `max a + c` every generator is supported.
pub fn default_cutoff(gens_i: &[i64], gens_j: &[i64], s: &Semigroup) -> i64 {
    let top = gens_i.iter().chain(gens_j).copied().max().unwrap_or(0);
    2 * top + 2 * s.conductor()
}

impl GradedPresentation {
    /// Minimal syzygies of `I` in degrees `<= cutoff`. In degree `d` the
    /// syzygies are the differences on the supported generators; the new ones
    /// are those outside `Σ_g t^g Z_(d-g)` over the semigroup generators `g`.
    pub fn new(ideal: &FracIdeal, cutoff: i64) -> GradedPresentation {
        let s = ideal.parent();
        let gens = ideal.normalize().generators();
        let r = gens.len();
        let field = f2();
        let mut syzygies = Vec::new();
        for d in 0..=cutoff {
            let supp = support(s, &gens, d);
            if supp.len() < 2 {
                continue;
            }
            let mut span = Echelon::new(&field, r);
            for &g in s.generators() {
                let sub = support(s, &gens, d - g as i64);
                for w in sub.windows(2) {
                    span.insert(unit(r, w[0], w[1]));
                }
            }
            for (a, &i) in supp.iter().enumerate() {
                for &j in &supp[a + 1..] {
                    if span.insert(unit(r, i, j)) {
                        syzygies.push(Binomial { degree: d, left: i, right: j });
                    }
                }
            }
        }
        let c = s.conductor();
        let stable = syzygies.iter().all(|b| b.degree <= cutoff - c.max(1));
        GradedPresentation { generators: gens, syzygies, cutoff, stable }
    }
}

/// Length of the torsion of `I ⊗ J`, i.e. of the kernel of `I ⊗ J -> IJ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionLength {
    pub length: usize,
    /// Contributions by degree of `I ⊗ J` (after translating both to
    /// minimum 0), for degrees with nonzero torsion.
    pub by_degree: Vec<(i64, usize)>,
    pub cutoff: i64,
    /// No torsion in the top `c` degrees; otherwise the length is only a
    /// lower bound.
    pub stable: bool,
    /// The cutoff reaches `max a + max b + c`, past which every pair of
    /// generators is supported and the tensor product is torsion-free.
    pub exact: bool,
}

impl TorsionLength {
    pub fn is_zero(&self) -> bool {
        self.length == 0
    }
}

/// Torsion of `I ⊗_R J` in degrees `<= cutoff` (default: twice the largest
/// generator value plus `2c`). Degree `d` of `F_I ⊗ F_J` has a basis of the
/// pairs `(i, j)` with `d - a_i - b_j ∈ S`; relations come from the minimal
/// syzygies of either factor, multiplied into degree `d`.
pub fn tensor_torsion_length(i: &FracIdeal, j: &FracIdeal, cutoff: Option<i64>) -> TorsionLength {
    let s = i.parent();
    let gi = i.normalize().generators();
    let gj = j.normalize().generators();
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(&gi, &gj, s));
    let pi = GradedPresentation::new(i, cutoff);
    let pj = GradedPresentation::new(j, cutoff);
    let (r, q) = (gi.len(), gj.len());
    let field = f2();
    let mut by_degree = Vec::new();
    for d in 0..=cutoff {
        let pairs: Vec<(usize, usize)> = (0..r)
            .flat_map(|a| (0..q).map(move |b| (a, b)))
            .filter(|&(a, b)| s.contains(d - gi[a] - gj[b]))
            .collect();
        if pairs.len() < 2 {
            continue;
        }
        let index = |a: usize, b: usize| pairs.binary_search(&(a, b)).ok();
        let mut rels = Echelon::new(&field, pairs.len());
        // syzygy of I in degree e, times f_b t^(d - e - b_b)
        for syz in &pi.syzygies {
            for b in 0..q {
                if s.contains(d - syz.degree - gj[b]) {
                    let (x, y) = (index(syz.left, b), index(syz.right, b));
                    rels.insert(unit(pairs.len(), x.expect("supported"), y.expect("supported")));
                }
            }
        }
        for syz in &pj.syzygies {
            for a in 0..r {
                if s.contains(d - syz.degree - gi[a]) {
                    let (x, y) = (index(a, syz.left), index(a, syz.right));
                    rels.insert(unit(pairs.len(), x.expect("supported"), y.expect("supported")));
                }
            }
        }
        let rank = rels.rank();
        // the image in IJ is one dimensional
        let torsion = pairs.len() - rank - 1;
        if torsion > 0 {
            by_degree.push((d, torsion));
        }
    }
    let c = s.conductor().max(1);
    let max_i = gi.iter().max().copied().unwrap_or(0);
    let max_j = gj.iter().max().copied().unwrap_or(0);
    TorsionLength {
        length: by_degree.iter().map(|&(_, t)| t).sum(),
        stable: by_degree.iter().all(|&(d, _)| d <= cutoff - c),
        exact: cutoff >= max_i + max_j + s.conductor(),
        by_degree,
        cutoff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsgp::{stable_value_sets, NumericalSemigroup};

    /// Independent count: in each degree, pairs sharing a generator of
    /// either factor are identified; torsion is the number of classes minus
    /// one.
    fn union_find_torsion(i: &FracIdeal, j: &FracIdeal) -> usize {
        let s = i.parent();
        let gi = i.normalize().generators();
        let gj = j.normalize().generators();
        let top = gi.iter().max().unwrap() + gj.iter().max().unwrap() + s.conductor();
        let mut total = 0;
        for d in 0..=top {
            let pairs: Vec<(i64, i64)> = gi
                .iter()
                .flat_map(|&a| gj.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| s.contains(d - a - b))
                .collect();
            let mut parent: Vec<usize> = (0..pairs.len()).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                if p[x] != x {
                    let root = find(p, p[x]);
                    p[x] = root;
                }
                p[x]
            }
            for x in 0..pairs.len() {
                for y in x + 1..pairs.len() {
                    if pairs[x].0 == pairs[y].0 || pairs[x].1 == pairs[y].1 {
                        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                        parent[rx] = ry;
                    }
                }
            }
            let classes = (0..pairs.len()).filter(|&x| find(&mut parent, x) == x).count();
            total += classes.saturating_sub(1);
        }
        total
    }

    #[test]
    fn syzygies_of_maximal_ideal() {
        let s = NumericalSemigroup::new(&[3, 4, 5]).unwrap();
        let m = FracIdeal::maximal_ideal(&s);
        let p = GradedPresentation::new(&m, 20);
        assert_eq!(p.generators, vec![0, 1, 2]);
        let degrees: Vec<i64> = p.syzygies.iter().map(|b| b.degree).collect();
        // in the original grading: 7, 8, 8, 9, 9, 10
        assert_eq!(degrees, vec![4, 5, 5, 6, 6, 7]);
        assert!(p.stable);
        // t^4 x1 - t^3 x2, t^5 x1 - t^3 x3, t^5 x2 - t^4 x3 are syzygies of
        // the listed degrees, generated by the minimal ones found
        let field = f2();
        for (d, a, b) in [(7 - 3, 0, 1), (8 - 3, 0, 2), (9 - 3, 1, 2)] {
            let mut span = Echelon::new(&field, 3);
            for z in p.syzygies.iter().filter(|z| s.contains(d - z.degree)) {
                span.insert(unit(3, z.left, z.right));
            }
            assert!(span.contains(&unit(3, a, b)));
        }
    }

    #[test]
    fn principal_ideals_have_no_syzygies() {
        let s = NumericalSemigroup::new(&[3, 5, 7]).unwrap();
        let p = GradedPresentation::new(&FracIdeal::principal(&s, 4), 30);
        assert!(p.syzygies.is_empty() && p.generators == vec![0]);
    }

    #[test]
    fn torsion_examples() {
        let s = NumericalSemigroup::new(&[3, 4]).unwrap();
        let r = FracIdeal::ring(&s);
        let m = FracIdeal::maximal_ideal(&s);
        let t = tensor_torsion_length(&m, &m, None);
        assert!(t.length > 0 && t.stable && t.exact);
        assert_eq!(t.by_degree[0], (1, 1));
        assert_eq!(tensor_torsion_length(&r, &m, None).length, 0);
        let p = FracIdeal::principal(&s, 7);
        assert_eq!(tensor_torsion_length(&p, &p, None).length, 0);
    }

    #[test]
    fn torsion_matches_union_find() {
        for gens in [vec![3, 4, 5], vec![3, 4], vec![4, 5, 6, 7], vec![3, 7, 8], vec![5, 6, 7]] {
            let s = NumericalSemigroup::new(&gens).unwrap();
            let sets = stable_value_sets(&s);
            for i in &sets {
                for j in &sets {
                    let t = tensor_torsion_length(i, j, None);
                    assert!(t.exact && t.stable);
                    assert_eq!(t.length, union_find_torsion(i, j), "{s}: {i} ⊗ {j}");
                }
            }
        }
    }

    #[test]
    fn doubling_cutoff_changes_nothing() {
        let s = NumericalSemigroup::new(&[4, 6, 9]).unwrap();
        for i in stable_value_sets(&s) {
            let p = GradedPresentation::new(&i, 2 * i.generators().iter().max().unwrap() + 2 * s.conductor());
            let q = GradedPresentation::new(&i, 2 * p.cutoff);
            assert_eq!(p.syzygies, q.syzygies);
            let a = tensor_torsion_length(&i, &i.star(), None);
            let b = tensor_torsion_length(&i, &i.star(), Some(2 * a.cutoff));
            assert_eq!((a.length, &a.by_degree), (b.length, &b.by_degree));
        }
    }
}
