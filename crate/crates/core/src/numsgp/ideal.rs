use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::SemigroupError;

use super::semigroup::{NumericalSemigroup, Semigroup};

/// The value set of a monomial fractional ideal of `k[[t^S]]`: a subset of
/// the integers, bounded below, stable under adding `S`, and containing every
/// integer from `tail` on.
///
/// The representation is exact (no window truncation): `members` lists the
/// values in `[min, tail)` and `tail` is as small as possible.
#[derive(Clone, Debug)]
pub struct FracIdeal {
    parent: Semigroup,
    min: i64,
    tail: i64,
    members: Vec<i64>,
}

impl PartialEq for FracIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.min == other.min
            && self.tail == other.tail
            && self.members == other.members
            && self.parent.generators() == other.parent.generators()
    }
}

impl Eq for FracIdeal {}

/// Serialized form: the values below `tail`, and `tail`.
#[derive(Serialize)]
struct Repr<'a> {
    values: &'a [i64],
    tail: i64,
}

impl Serialize for FracIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Repr { values: &self.members, tail: self.tail }.serialize(s)
    }
}

impl FracIdeal {
    /// The set `values ∪ [tail, ∞)`, checked for stability under `S`.
    pub fn new(parent: &Semigroup, values: &[i64], tail: i64) -> Result<FracIdeal, SemigroupError> {
        let mut below: Vec<i64> = values.iter().copied().filter(|&v| v < tail).collect();
        below.sort_unstable();
        below.dedup();
        let ideal = Self::normalized(parent, below, tail);
        ideal.check_stable()?;
        Ok(ideal)
    }

    /// The set of integers `z` with `pred(z)`, given that `pred` holds on
    /// every `z >= tail` and fails below `lo`.
    fn from_predicate(parent: &Semigroup, lo: i64, tail: i64, pred: impl Fn(i64) -> bool) -> FracIdeal {
        let members = (lo..tail).filter(|&z| pred(z)).collect();
        Self::normalized(parent, members, tail)
    }

    fn normalized(parent: &Semigroup, mut members: Vec<i64>, mut tail: i64) -> FracIdeal {
        while members.last() == Some(&(tail - 1)) {
            members.pop();
            tail -= 1;
        }
        let min = members.first().copied().unwrap_or(tail);
        FracIdeal { parent: parent.clone(), min, tail, members }
    }

    fn check_stable(&self) -> Result<(), SemigroupError> {
        for &v in &self.members {
            for &g in self.parent.generators() {
                if !self.contains(v + g as i64) {
                    return Err(SemigroupError::NotStable(v, g as i64));
                }
            }
        }
        Ok(())
    }

    /// `R` itself.
    pub fn ring(parent: &Semigroup) -> FracIdeal {
        Self::principal(parent, 0)
    }

    /// The principal ideal `t^a R`.
    pub fn principal(parent: &Semigroup, a: i64) -> FracIdeal {
        Self::from_predicate(parent, a, a + parent.conductor(), |z| parent.contains(z - a))
    }

    /// The maximal ideal: nonzero values of `S`.
    pub fn maximal_ideal(parent: &Semigroup) -> FracIdeal {
        let c = parent.conductor().max(1);
        Self::from_predicate(parent, 1, c, |z| parent.contains(z))
    }

    /// The canonical ideal `K = {z : F - z ∉ S}`.
    pub fn canonical(parent: &Semigroup) -> FracIdeal {
        let f = parent.frobenius();
        Self::from_predicate(parent, 0, f + 1, |z| !parent.contains(f - z))
    }

    pub fn parent(&self) -> &Semigroup {
        &self.parent
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    /// Every integer from here on is a value.
    pub fn tail(&self) -> i64 {
        self.tail
    }

    /// Values below `tail`, sorted.
    pub fn members(&self) -> &[i64] {
        &self.members
    }

    pub fn contains(&self, z: i64) -> bool {
        z >= self.tail || self.members.binary_search(&z).is_ok()
    }

    /// Values in `[lo, hi]`.
    pub fn values_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&z| self.contains(z)).collect()
    }

    /// The standard window `[m0, m0 + 2c + max generator]`, beyond which
    /// every value set in play is a full tail.
    pub fn window(&self) -> (i64, i64) {
        let p = &self.parent;
        (self.min, self.min + 2 * p.conductor() + p.max_generator() as i64)
    }

    fn same_parent(&self, other: &FracIdeal) -> Result<(), SemigroupError> {
        if Arc::ptr_eq(&self.parent, &other.parent) || self.parent.generators() == other.parent.generators() {
            Ok(())
        } else {
            Err(SemigroupError::ParentMismatch)
        }
    }

    pub fn translate(&self, k: i64) -> FracIdeal {
        FracIdeal {
            parent: self.parent.clone(),
            min: self.min + k,
            tail: self.tail + k,
            members: self.members.iter().map(|v| v + k).collect(),
        }
    }

    /// The same values shifted to start at 0.
    pub fn normalize(&self) -> FracIdeal {
        self.translate(-self.min)
    }

    /// The integer `k` with `self = other + k`, if any. Parents may differ.
    pub fn translation_to(&self, other: &FracIdeal) -> Option<i64> {
        let k = self.min - other.min;
        let same = self.tail - other.tail == k
            && self.members.len() == other.members.len()
            && self.members.iter().zip(&other.members).all(|(a, b)| a - b == k);
        same.then_some(k)
    }

    /// The product ideal, whose value set is the sumset `Val(I) + Val(J)`.
    pub fn product(&self, other: &FracIdeal) -> Result<FracIdeal, SemigroupError> {
        self.same_parent(other)?;
        let lo = self.min + other.min;
        let tail = (self.tail + other.min).min(other.tail + self.min);
        let out = Self::from_predicate(&self.parent, lo, tail, |z| {
            self.members.iter().any(|&a| other.contains(z - a)) || other.members.iter().any(|&b| self.contains(z - b))
        });
        debug_assert!(out.check_stable().is_ok());
        Ok(out)
    }

    /// `(self : other) = {z : z + Val(other) ⊆ Val(self)}`, i.e.
    /// `Hom(other, self)`.
    pub fn colon(&self, other: &FracIdeal) -> Result<FracIdeal, SemigroupError> {
        self.same_parent(other)?;
        let lo = self.min - other.min;
        let tail = self.tail - other.min;
        let out = Self::from_predicate(&self.parent, lo, tail, |z| {
            other.members.iter().all(|&a| self.contains(z + a)) && (other.tail..self.tail - z).all(|a| self.contains(z + a))
        });
        debug_assert!(out.check_stable().is_ok());
        Ok(out)
    }

    pub fn contains_ideal(&self, other: &FracIdeal) -> bool {
        other.min >= self.min
            && other.members.iter().all(|&v| self.contains(v))
            && (other.tail..self.tail.max(other.tail)).all(|v| self.contains(v))
    }

    /// `I^* = (R : I)`.
    pub fn star(&self) -> FracIdeal {
        Self::ring(&self.parent).colon(self).expect("same parent")
    }

    /// `I^∨ = (K : I)`.
    pub fn vee(&self) -> FracIdeal {
        Self::canonical(&self.parent).colon(self).expect("same parent")
    }

    /// `(I : I)`, the value semigroup of `End(I)`.
    pub fn end_semigroup(&self) -> Semigroup {
        let e = self.colon(self).expect("same parent");
        NumericalSemigroup::from_members(e.tail, |z| e.contains(z)).expect("(I:I) is a numerical semigroup")
    }

    /// `tr_R(I) = I · (R : I)`.
    pub fn trace_ideal(&self) -> FracIdeal {
        self.product(&self.star()).expect("same parent")
    }

    /// `tr_ω(I) = I · (K : I)`, a submodule of `K`.
    pub fn trace_omega(&self) -> FracIdeal {
        self.product(&self.vee()).expect("same parent")
    }

    /// `(K : (K : I)) = I`.
    pub fn omega_reflexive(&self) -> bool {
        self.vee().vee() == *self
    }

    /// Minimal monomial generators: values not reachable from a smaller
    /// value by adding a nonzero element of `S`.
    pub fn generators(&self) -> Vec<i64> {
        let gens = self.parent.generators();
        (self.min..self.tail + self.parent.multiplicity() as i64)
            .filter(|&z| self.contains(z) && gens.iter().all(|&g| !self.contains(z - g as i64)))
            .collect()
    }

    pub fn is_principal(&self) -> bool {
        self.translation_to(&Self::ring(&self.parent)).is_some()
    }

    /// Isomorphic to `K`.
    pub fn is_canonical_translate(&self) -> bool {
        self.translation_to(&Self::canonical(&self.parent)).is_some()
    }

    /// Whether `(self : other)` is the largest set `X` with `X + other ⊆ self`:
    /// it satisfies the inclusion, and no integer just below its minimum or
    /// among its gaps can be added.
    pub fn colon_is_maximal(&self, other: &FracIdeal) -> bool {
        let Ok(c) = self.colon(other) else { return false };
        let fits = |z: i64| {
            other.members.iter().all(|&a| self.contains(z + a)) && (other.tail..self.tail - z).all(|a| self.contains(z + a))
        };
        let inside = c.product(other).map(|p| self.contains_ideal(&p)).unwrap_or(false);
        inside && !fits(c.min - 1) && (c.min..c.tail).all(|z| c.contains(z) || !fits(z))
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for v in &self.members {
            write!(f, "{v},")?;
        }
        write!(f, "{}..}}", self.tail)
    }
}

/// All value sets `V` with `min V = 0` that are stable under `S`: these are
/// `S ∪ A` for the `S`-stable sets of gaps `A`. Sorted by value list.
pub fn stable_value_sets(s: &Semigroup) -> Vec<FracIdeal> {
    let gaps = s.gaps();
    let gens = s.generators();
    let mut out = Vec::new();
    let mut chosen = vec![false; gaps.len()];
    // decide gaps from the largest down, so g + generator is already decided
    fn rec(
        idx: usize,
        s: &Semigroup,
        gaps: &[i64],
        gens: &[u64],
        chosen: &mut [bool],
        out: &mut Vec<FracIdeal>,
    ) {
        if idx == 0 {
            let extra: Vec<i64> = gaps.iter().zip(chosen.iter()).filter(|(_, &c)| c).map(|(&g, _)| g).collect();
            let mut values: Vec<i64> = s.small_members();
            values.extend(extra);
            out.push(FracIdeal::new(s, &values, s.conductor()).expect("stable by construction"));
            return;
        }
        let i = idx - 1;
        let g = gaps[i];
        chosen[i] = false;
        rec(i, s, gaps, gens, chosen, out);
        let ok = gens.iter().all(|&x| {
            let z = g + x as i64;
            s.contains(z) || gaps.binary_search(&z).map(|j| chosen[j]).unwrap_or(false)
        });
        if ok {
            chosen[i] = true;
            rec(i, s, gaps, gens, chosen, out);
            chosen[i] = false;
        }
    }
    rec(gaps.len(), s, gaps, gens, &mut chosen, &mut out);
    out.sort_by(|a, b| (a.tail, &a.members).cmp(&(b.tail, &b.members)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s345() -> Semigroup {
        NumericalSemigroup::new(&[3, 4, 5]).unwrap()
    }

    #[test]
    fn canonical_ideals() {
        let n = NumericalSemigroup::naturals();
        assert_eq!(FracIdeal::canonical(&n), FracIdeal::ring(&n));
        let s = NumericalSemigroup::new(&[3, 4]).unwrap();
        assert_eq!(FracIdeal::canonical(&s), FracIdeal::ring(&s));
        let s = s345();
        let k = FracIdeal::canonical(&s);
        assert_eq!((k.members(), k.tail()), (&[0, 1][..], 3));
        assert!(k.contains_ideal(&FracIdeal::ring(&s)));
        assert!(!k.is_principal() && k.is_canonical_translate());
    }

    #[test]
    fn colons_and_traces() {
        let s = s345();
        let r = FracIdeal::ring(&s);
        let k = FracIdeal::canonical(&s);
        let m = FracIdeal::maximal_ideal(&s);
        assert_eq!(m.generators(), vec![3, 4, 5]);
        assert_eq!(r.colon(&r).unwrap(), r);
        let wm = k.colon(&m).unwrap();
        assert_eq!((wm.min(), wm.tail(), wm.members().len()), (0, 0, 0));
        let rk = r.colon(&k).unwrap();
        assert_eq!(rk, m);
        assert_eq!(rk.product(&k).unwrap(), m);
        assert_eq!(k.trace_ideal(), m);
        assert_eq!(m.trace_omega(), FracIdeal::new(&s, &[], 3).unwrap());
        assert_eq!(r.trace_ideal(), r);
        assert_eq!(m.end_semigroup().generators(), &[1]);
        assert_eq!(r.end_semigroup().generators(), s.generators());
        let kk = k.end_semigroup();
        assert!(s.small_members().iter().all(|&z| kk.contains(z)));
        for i in [&r, &k, &m] {
            assert!(i.omega_reflexive());
        }
    }

    #[test]
    fn stability_is_enforced() {
        let s = s345();
        assert_eq!(FracIdeal::new(&s, &[0, 1], 3).unwrap(), FracIdeal::canonical(&s));
        assert!(matches!(FracIdeal::new(&s, &[0, 2], 4), Err(SemigroupError::NotStable(..))));
    }

    #[test]
    fn stable_sets_of_small_semigroups() {
        // over <3,4,5> every subset of {1,2} works
        assert_eq!(stable_value_sets(&s345()).len(), 4);
        // over <2,3>: S and S ∪ {1} = N
        let s = NumericalSemigroup::new(&[2, 3]).unwrap();
        assert_eq!(stable_value_sets(&s).len(), 2);
        // over <3,4>: gaps 1,2,5; 1 forces 5, 2 forces 5
        let s = NumericalSemigroup::new(&[3, 4]).unwrap();
        let sets = stable_value_sets(&s);
        assert_eq!(sets.len(), 5);
    }

    #[test]
    fn colons_are_maximal() {
        let s = NumericalSemigroup::new(&[4, 6, 9]).unwrap();
        let sets = stable_value_sets(&s);
        for a in &sets {
            for b in &sets {
                assert!(a.colon_is_maximal(b), "{a} : {b}");
                assert!(a.translate(2).colon_is_maximal(&b.translate(-3)));
            }
        }
    }
}
