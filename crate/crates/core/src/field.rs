//! Finite fields `F_{p^k}`.
//!
//! An element of `F_{p^k}` is a coefficient vector `c_0 + c_1 a + ... + c_{k-1} a^{k-1}`
//! modulo a fixed monic irreducible polynomial, packed into a `u32` as the base-`p`
//! number `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Prime fields are the case `k = 1`,
//! where the encoding is the residue itself.

use std::fmt;
use std::sync::Arc;

use crate::error::FieldError;

/// Packed field element; see the module docs for the encoding.
pub type Elem = u32;

const MAX_PRIME: u32 = 1 << 16;
const MAX_EXTENSION_ORDER: u64 = 1 << 16;
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// A finite field handle. Cloning is cheap; all tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Tables>,
}

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    // extension fields only
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

// Dense polynomials over F_p, low degree first, trailing zeros trimmed.
fn trim(poly: &mut Vec<u32>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm] as u64, p as u64 - 2, p as u64) as u32;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    poly_rem(&out, m, p)
}

fn monic_from_index(mut idx: u64, degree: usize, p: u32) -> Vec<u32> {
    let mut poly = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        poly.push((idx % p as u64) as u32);
        idx /= p as u64;
    }
    poly.push(1);
    poly
}

/// Irreducibility over `F_p` by trial division with every monic polynomial of
/// degree at most half the degree.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let n = poly.len() - 1;
    if n == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let candidate = monic_from_index(idx, d, p);
            if poly_rem(poly, &candidate, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn encode(poly: &[u32], p: u32) -> u32 {
    poly.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn decode(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(k as usize);
    for _ in 0..k {
        v.push(x % p);
        x /= p;
    }
    v
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(FieldError::BadCharacteristic(p));
        }
        Ok(FieldSpec {
            inner: Arc::new(Tables {
                p,
                k: 1,
                q: p,
                modulus: vec![0, 1],
                exp: Vec::new(),
                log: Vec::new(),
                add: Vec::new(),
                neg: Vec::new(),
            }),
        })
    }

    /// `F_{p^k}` presented by the given monic defining polynomial (low degree first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(FieldError::BadCharacteristic(p));
        }
        if modulus.len() < 2 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus("coefficients must be residues mod p".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(FieldError::BadModulus("defining polynomial must be monic".into()));
        }
        let k = (modulus.len() - 1) as u32;
        if k == 1 {
            return Self::prime(p);
        }
        let q64 = (p as u64).pow(k);
        if q64 > MAX_EXTENSION_ORDER {
            return Err(FieldError::TooLarge(q64));
        }
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus("defining polynomial is reducible".into()));
        }
        let q = q64 as u32;

        // find a primitive element by brute force
        let mut exp = Vec::new();
        for g in 2..q {
            let gp = decode(g, p, k);
            let mut cur = vec![1u32];
            let mut powers = Vec::with_capacity(q as usize - 1);
            let mut ok = true;
            for i in 0..(q - 1) {
                let e = encode(&cur, p);
                if i > 0 && e == 1 {
                    ok = false;
                    break;
                }
                powers.push(e);
                cur = poly_mulmod(&cur, &gp, &modulus, p);
            }
            if ok {
                exp = powers;
                break;
            }
        }
        debug_assert_eq!(exp.len(), q as usize - 1);
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let neg = (0..q)
            .map(|x| encode(&decode(x, p, k).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        let mut tables = Tables { p, k, q, modulus, exp, log, add: Vec::new(), neg };
        if q <= ADD_TABLE_LIMIT {
            let mut add = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = digit_add(p, k, a, b);
                }
            }
            tables.add = add;
        }
        Ok(FieldSpec { inner: Arc::new(tables) })
    }

    /// `F_{p^k}` with the lexicographically first monic irreducible of degree `k`.
    pub fn galois(p: u32, k: u32) -> Result<Self, FieldError> {
        if k == 0 {
            return Err(FieldError::BadModulus("extension degree must be at least 1".into()));
        }
        if k == 1 {
            return Self::prime(p);
        }
        if !is_prime(p) || p > MAX_PRIME {
            return Err(FieldError::BadCharacteristic(p));
        }
        let q64 = (p as u64).pow(k);
        if q64 > MAX_EXTENSION_ORDER {
            return Err(FieldError::TooLarge(q64));
        }
        for idx in 0..q64 {
            let poly = monic_from_index(idx, k as usize, p);
            if poly[0] != 0 && is_irreducible(&poly, p) {
                return Self::with_modulus(p, poly);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// The field of order `q`, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or(FieldError::BadOrder(q))?;
        let mut k = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(FieldError::BadOrder(q));
        }
        Self::galois(p, k)
    }

    /// Parses `F<q>`, `F<p>^<k>` or `GF(<q>)`.
    pub fn parse(name: &str) -> Result<Self, FieldError> {
        let s = name.trim();
        let body = if let Some(rest) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            rest
        } else if let Some(rest) = s.strip_prefix('F') {
            rest
        } else {
            return Err(FieldError::BadName(name.to_string()));
        };
        let bad = || FieldError::BadName(name.to_string());
        if let Some((p, k)) = body.split_once('^') {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            Self::galois(p, k)
        } else {
            let q: u32 = body.trim().parse().map_err(|_| bad())?;
            Self::of_order(q)
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.k == 1
    }

    /// Canonical short name, `F<q>`.
    pub fn name(&self) -> String {
        format!("F{}", self.inner.q)
    }

    /// Coefficient vector of an element over the prime field.
    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        decode(x, self.inner.p, self.inner.k)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Elem {
        let p = self.inner.p;
        let mut padded: Vec<u32> = coeffs.iter().map(|&c| c % p).collect();
        padded.resize(self.inner.k as usize, 0);
        encode(&padded, p)
    }

    /// Image of an integer under `Z -> F`.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.inner.p as i64) as u32
    }

    /// All elements, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.inner.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.inner;
        if t.k == 1 {
            let s = a + b;
            if s >= t.p {
                s - t.p
            } else {
                s
            }
        } else if !t.add.is_empty() {
            t.add[(a * t.q + b) as usize]
        } else {
            digit_add(t.p, t.k, a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let t = &*self.inner;
        if t.k == 1 {
            if a == 0 {
                0
            } else {
                t.p - a
            }
        } else {
            t.neg[a as usize]
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.inner;
        if t.k == 1 {
            ((a as u64 * b as u64) % t.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let n = t.q - 1;
            let s = t.log[a as usize] + t.log[b as usize];
            t.exp[(if s >= n { s - n } else { s }) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        let t = &*self.inner;
        if a == 0 {
            return None;
        }
        if t.k == 1 {
            Some(pow_mod(a as u64, t.p as u64 - 2, t.p as u64) as u32)
        } else {
            let n = t.q - 1;
            Some(t.exp[((n - t.log[a as usize]) % n) as usize])
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `dst[i] += c * src[i]` for all `i`.
    #[inline]
    pub fn axpy(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        if c == 0 {
            return;
        }
        let t = &*self.inner;
        if t.k == 1 {
            let p = t.p as u64;
            if t.p == 2 {
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d ^= s;
                }
            } else {
                let c = c as u64;
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d = ((*d as u64 + c * s as u64) % p) as u32;
                    }
                }
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d = self.add(*d, self.mul(c, s));
                }
            }
        }
    }

    /// `v[i] *= c` for all `i`.
    #[inline]
    pub fn scale(&self, v: &mut [Elem], c: Elem) {
        if c == 1 {
            return;
        }
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Formats an element: an integer for prime fields, `a`-polynomial otherwise.
    pub fn format(&self, x: Elem) -> String {
        if self.inner.k == 1 {
            return x.to_string();
        }
        if x == 0 {
            return "0".into();
        }
        let coeffs = self.coefficients(x);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        terms.join("+")
    }

    /// Parses the output of [`FieldSpec::format`], or a plain packed integer.
    pub fn parse_elem(&self, s: &str) -> Option<Elem> {
        let s = s.trim();
        if let Ok(n) = s.parse::<i64>() {
            if self.inner.k == 1 {
                return Some(self.from_int(n));
            }
            if n >= 0 && (n as u64) < self.inner.p as u64 {
                return Some(n as u32);
            }
            return None;
        }
        let mut coeffs = vec![0u32; self.inner.k as usize];
        for term in s.split('+') {
            let term = term.trim();
            let (c, rest) = match term.find('a') {
                Some(pos) => (&term[..pos], &term[pos + 1..]),
                None => {
                    let c: u32 = term.parse().ok()?;
                    coeffs[0] = (coeffs[0] + c) % self.inner.p;
                    continue;
                }
            };
            let c: u32 = if c.is_empty() { 1 } else { c.parse().ok()? };
            let e: usize = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')?.parse().ok()?
            };
            if e >= coeffs.len() {
                return None;
            }
            coeffs[e] = (coeffs[e] + c) % self.inner.p;
        }
        Some(self.from_coefficients(&coeffs))
    }
}

fn digit_add(p: u32, k: u32, mut a: u32, mut b: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    for _ in 0..k {
        let s = (a % p + b % p) % p;
        out += s * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

/// A field embedding `F_q -> F_{q^m}`, stored as a lookup table.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    source: FieldSpec,
    target: FieldSpec,
    table: Vec<Elem>,
}

impl FieldEmbedding {
    /// Builds the embedding sending the source generator to the first root of its
    /// defining polynomial in the target.
    pub fn new(source: &FieldSpec, target: &FieldSpec) -> Result<Self, FieldError> {
        if source.characteristic() != target.characteristic()
            || !target.degree().is_multiple_of(source.degree())
        {
            return Err(FieldError::NoEmbedding(source.name(), target.name()));
        }
        let root = if source.is_prime_field() {
            0
        } else {
            let modulus = source.modulus();
            target
                .elements()
                .find(|&r| {
                    let mut acc = 0;
                    for &c in modulus.iter().rev() {
                        acc = target.add(target.mul(acc, r), c);
                    }
                    acc == 0
                })
                .ok_or_else(|| FieldError::NoEmbedding(source.name(), target.name()))?
        };
        let table = source
            .elements()
            .map(|x| {
                if source.is_prime_field() {
                    return x;
                }
                let coeffs = source.coefficients(x);
                let mut acc = 0;
                for &c in coeffs.iter().rev() {
                    acc = target.add(target.mul(acc, root), c);
                }
                acc
            })
            .collect();
        let emb = FieldEmbedding { source: source.clone(), target: target.clone(), table };
        if !emb.is_homomorphism() {
            return Err(FieldError::NoEmbedding(source.name(), target.name()));
        }
        Ok(emb)
    }

    pub fn source(&self) -> &FieldSpec {
        &self.source
    }

    pub fn target(&self) -> &FieldSpec {
        &self.target
    }

    #[inline]
    pub fn map(&self, x: Elem) -> Elem {
        self.table[x as usize]
    }

    /// Exhaustive ring-homomorphism check (sources here are tiny).
    pub fn is_homomorphism(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if self.map(0) != 0 || self.map(1) != 1 {
            return false;
        }
        let q = s.order().min(256);
        (0..q).all(|a| {
            (0..q).all(|b| {
                self.map(s.add(a, b)) == t.add(self.map(a), self.map(b))
                    && self.map(s.mul(a, b)) == t.mul(self.map(a), self.map(b))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(65537).is_err());
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(FieldSpec::with_modulus(2, vec![1, 0, 1]).is_err());
        assert!(FieldSpec::with_modulus(2, vec![1, 1, 0]).is_err());
        assert!(FieldSpec::of_order(6).is_err());
    }

    #[test]
    fn f4_is_a_field() {
        let f = FieldSpec::parse("F4").unwrap();
        assert_eq!(f.order(), 4);
        assert_eq!(f.modulus(), &[1, 1, 1]);
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.add(a, a), 0);
        }
        // a^2 = a + 1
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn field_axioms_small_fields() {
        for name in ["F2", "F3", "F4", "F5", "F8", "F9", "F3^3"] {
            let f = FieldSpec::parse(name).unwrap();
            let q = f.order();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q.min(9) {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "{name}"
                        );
                    }
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn embeddings() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f4 = FieldSpec::galois(2, 2).unwrap();
        let f16 = FieldSpec::galois(2, 4).unwrap();
        let e = FieldEmbedding::new(&f2, &f4).unwrap();
        assert_eq!(e.map(0), 0);
        assert_eq!(e.map(1), 1);
        let e = FieldEmbedding::new(&f4, &f16).unwrap();
        assert!(e.is_homomorphism());
        let f8 = FieldSpec::galois(2, 3).unwrap();
        assert!(FieldEmbedding::new(&f4, &f8).is_err());
        let f3 = FieldSpec::prime(3).unwrap();
        assert!(FieldEmbedding::new(&f3, &f4).is_err());
    }

    #[test]
    fn element_text_round_trip() {
        let f = FieldSpec::parse("F9").unwrap();
        for x in f.elements() {
            assert_eq!(f.parse_elem(&f.format(x)), Some(x));
        }
    }
}
