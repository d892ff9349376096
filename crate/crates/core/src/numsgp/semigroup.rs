use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::SemigroupError;

pub type Semigroup = Arc<NumericalSemigroup>;

/// A cofinite submonoid of the natural numbers, with its standard invariants
/// cached at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    /// Apéry set with respect to the multiplicity, indexed by residue.
    apery: Vec<u64>,
    frobenius: i64,
    gaps: Vec<i64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl NumericalSemigroup {
    /// The semigroup generated by `gens` (not necessarily minimal).
    pub fn new(gens: &[u64]) -> Result<Semigroup, SemigroupError> {
        if gens.is_empty() || gens.contains(&0) {
            return Err(SemigroupError::Empty);
        }
        let g = gens.iter().fold(0, |acc, &x| gcd(acc, x));
        if g != 1 {
            return Err(SemigroupError::Gcd(g));
        }
        let m = *gens.iter().min().unwrap();
        // shortest paths on residues mod m: apery[r] = least member = r (mod m)
        let mut apery = vec![u64::MAX; m as usize];
        apery[0] = 0;
        let mut done = vec![false; m as usize];
        for _ in 0..m {
            let (r, w) = (0..m as usize)
                .filter(|&r| !done[r])
                .map(|r| (r, apery[r]))
                .min_by_key(|&(r, w)| (w, r))
                .expect("residues remain");
            done[r] = true;
            for &x in gens {
                let t = ((r as u64 + x) % m) as usize;
                if w + x < apery[t] {
                    apery[t] = w + x;
                }
            }
        }
        let frobenius = *apery.iter().max().unwrap() as i64 - m as i64;
        let member = |z: i64| z >= 0 && apery[(z as u64 % m) as usize] <= z as u64;
        let gaps: Vec<i64> = (0..=frobenius.max(0)).filter(|&z| z > 0 && !member(z)).collect();
        // minimal generators: nonzero members that are not sums of two nonzero members
        let mut generators = Vec::new();
        for z in 1..=(frobenius + m as i64 + 1) {
            if member(z) && !(1..z).any(|a| member(a) && member(z - a)) {
                generators.push(z as u64);
            }
        }
        Ok(Arc::new(NumericalSemigroup { generators, apery, frobenius, gaps }))
    }

    /// The semigroup with the given conductor whose members below it are
    /// exactly those accepted by `member`. Closure under addition is checked.
    pub fn from_members(conductor: i64, member: impl Fn(i64) -> bool) -> Result<Semigroup, SemigroupError> {
        let c = conductor.max(0);
        let is = |z: i64| z >= c || (z >= 0 && member(z));
        if !is(0) {
            return Err(SemigroupError::NotStable(0, 0));
        }
        let members: Vec<i64> = (1..c).filter(|&z| is(z)).collect();
        for &a in &members {
            for &b in &members {
                if !is(a + b) {
                    return Err(SemigroupError::NotStable(a, b));
                }
            }
        }
        let m = members.first().copied().unwrap_or(c.max(1));
        let gens: Vec<u64> = (m..m + c.max(1))
            .chain(members.iter().copied())
            .filter(|&z| is(z))
            .map(|z| z as u64)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let s = Self::new(&gens)?;
        debug_assert!((0..c + 1).all(|z| s.contains(z) == is(z)));
        Ok(s)
    }

    /// The natural numbers.
    pub fn naturals() -> Semigroup {
        Self::new(&[1]).expect("valid")
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn multiplicity(&self) -> u64 {
        self.generators[0]
    }

    pub fn embedding_dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn max_generator(&self) -> u64 {
        *self.generators.last().unwrap()
    }

    /// Largest integer outside the semigroup; `-1` for the naturals.
    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    pub fn conductor(&self) -> i64 {
        self.frobenius + 1
    }

    pub fn gaps(&self) -> &[i64] {
        &self.gaps
    }

    pub fn genus(&self) -> usize {
        self.gaps.len()
    }

    /// Least member in each residue class modulo the multiplicity.
    pub fn apery(&self) -> &[u64] {
        &self.apery
    }

    pub fn contains(&self, z: i64) -> bool {
        z >= 0 && self.apery[(z as u64 % self.multiplicity()) as usize] <= z as u64
    }

    /// `z ∈ S` exactly when `F - z ∉ S`, for every integer `z`.
    pub fn is_symmetric(&self) -> bool {
        (0..=self.frobenius).all(|z| self.contains(z) != self.contains(self.frobenius - z))
    }

    /// Members in `[0, c]`, where `c` is the conductor.
    pub fn small_members(&self) -> Vec<i64> {
        (0..=self.conductor()).filter(|&z| self.contains(z)).collect()
    }

    /// Semigroups obtained by removing one minimal generator above the
    /// Frobenius number; every semigroup of genus `g + 1` arises exactly
    /// once this way from a semigroup of genus `g`.
    pub fn children(&self) -> Vec<Semigroup> {
        let f = self.frobenius;
        self.generators
            .iter()
            .filter(|&&g| g as i64 > f)
            .map(|&g| {
                let g = g as i64;
                Self::from_members(g + 1, |z| z != g && self.contains(z)).expect("removing a generator keeps closure")
            })
            .collect()
    }

    /// All semigroups of genus at most `max_genus`, by increasing genus.
    pub fn up_to_genus(max_genus: usize) -> Vec<Semigroup> {
        let mut level = vec![Self::naturals()];
        let mut all = level.clone();
        for _ in 0..max_genus {
            level = level.iter().flat_map(|s| s.children()).collect();
            all.extend(level.iter().cloned());
        }
        all
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

impl Serialize for NumericalSemigroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.generators.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_invariants() {
        let n = NumericalSemigroup::new(&[1]).unwrap();
        assert_eq!((n.frobenius(), n.conductor(), n.genus()), (-1, 0, 0));
        assert!(n.is_symmetric());

        let s = NumericalSemigroup::new(&[3, 4, 5]).unwrap();
        assert_eq!(s.frobenius(), 2);
        assert_eq!(s.gaps(), &[1, 2]);
        assert!(!s.is_symmetric());
        assert_eq!(s.apery(), &[0, 4, 5]);

        let s = NumericalSemigroup::new(&[4, 3]).unwrap();
        assert_eq!(s.generators(), &[3, 4]);
        assert_eq!((s.frobenius(), s.gaps()), (5, &[1, 2, 5][..]));
        assert!(s.is_symmetric());
        assert_eq!(2 * s.genus() as i64, s.conductor());

        let s = NumericalSemigroup::new(&[6, 9, 20, 12]).unwrap();
        assert_eq!(s.generators(), &[6, 9, 20]);
        assert_eq!(s.frobenius(), 43);
    }

    #[test]
    fn rejects_bad_generators() {
        assert_eq!(NumericalSemigroup::new(&[4, 6]), Err(SemigroupError::Gcd(2)));
        assert_eq!(NumericalSemigroup::new(&[]), Err(SemigroupError::Empty));
        assert_eq!(NumericalSemigroup::new(&[0, 1]), Err(SemigroupError::Empty));
    }

    #[test]
    fn counts_by_genus() {
        let all = NumericalSemigroup::up_to_genus(8);
        let mut counts = [0usize; 9];
        for s in &all {
            counts[s.genus()] += 1;
        }
        assert_eq!(counts, [1, 1, 2, 4, 7, 12, 23, 39, 67]);
        let distinct: BTreeSet<Vec<u64>> = all.iter().map(|s| s.generators().to_vec()).collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn from_members_round_trip() {
        let s = NumericalSemigroup::new(&[5, 7, 9]).unwrap();
        let t = NumericalSemigroup::from_members(s.conductor(), |z| s.contains(z)).unwrap();
        assert_eq!(s, t);
        assert!(NumericalSemigroup::from_members(7, |z| z == 0 || z == 3).is_err());
    }
}
