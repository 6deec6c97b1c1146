//! Prime-field arithmetic and sparse linear combinations.
//!
//! Scalars are plain `u32` residues in `[0, p)`; the helpers below keep them
//! reduced. [`LinComb`] is a sorted sparse vector over any ordered key type.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Trial-division primality test; primes here are tiny.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u32;
    while q.saturating_mul(q) <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// A residue together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub value: u32,
    pub p: u32,
}

impl Scalar {
    pub fn new(value: i64, p: u32) -> Scalar {
        Scalar { value: reduce(value, p), p }
    }
}

pub fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

pub fn add(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// `(-1)^k` reduced mod `p`.
pub fn sign(k: u64, p: u32) -> u32 {
    if k % 2 == 0 {
        1 % p
    } else {
        neg(1 % p, p)
    }
}

/// Binomial coefficient `C(n, m)` mod `p` by Lucas's theorem.
pub fn binomial_mod_p(n: u64, m: u64, p: u32) -> u32 {
    if m > n {
        return 0;
    }
    let pp = p as u64;
    let (mut n, mut m) = (n, m);
    let mut r = 1u32;
    while n > 0 || m > 0 {
        let (a, b) = (n % pp, m % pp);
        if b > a {
            return 0;
        }
        r = mul(r, small_binomial(a as u32, b as u32, p), p);
        n /= pp;
        m /= pp;
    }
    r
}

fn small_binomial(a: u32, b: u32, p: u32) -> u32 {
    // a < p, so a!/(b!(a-b)!) has no factor p.
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 0..b {
        num = mul(num, a - i, p);
        den = mul(den, i + 1, p);
    }
    mul(num, pow(den, p as u64 - 2, p), p)
}

/// `n!` mod `p`.
pub fn factorial_mod_p(n: u64, p: u32) -> u32 {
    if n >= p as u64 {
        return 0;
    }
    (1..=n).fold(1 % p, |acc, i| mul(acc, i as u32, p))
}

/// Number of partitions of an `n*r`-set into `r` blocks of size `n`, mod `p`:
/// `(nr)! / ((n!)^r r!)`. This is the Composition-axiom coefficient.
pub fn composition_coeff(n: u64, r: u64, p: u32) -> u32 {
    // prod_{j=1}^{r} C(j n - 1, n - 1)
    if n == 0 {
        return 1 % p;
    }
    (1..=r).fold(1 % p, |acc, j| mul(acc, binomial_mod_p(j * n - 1, n - 1, p), p))
}

/// Koszul sign for swapping elements of total degree parities `t1`, `t2`.
pub fn koszul_sign(t1: u32, t2: u32, p: u32) -> u32 {
    if p > 2 && t1 % 2 == 1 && t2 % 2 == 1 {
        p - 1
    } else {
        1 % p
    }
}

/// Sparse F_p-linear combination with a deterministic key order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    p: u32,
    terms: BTreeMap<K, u32>,
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero(p: u32) -> Self {
        LinComb { p, terms: BTreeMap::new() }
    }

    pub fn single(p: u32, key: K, coeff: u32) -> Self {
        let mut l = Self::zero(p);
        l.add_term(key, coeff);
        l
    }

    /// Build from raw `(coefficient, key)` pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (u32, K)>>(p: u32, raw: I) -> Self {
        let mut l = Self::zero(p);
        for (c, k) in raw {
            l.add_term(k, c);
        }
        l
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn add_term(&mut self, key: K, coeff: u32) {
        let c = coeff % self.p;
        if c == 0 {
            return;
        }
        let mut remove = false;
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = add(*v, c, self.p);
                remove = *v == 0;
            }
            None => {
                self.terms.insert(key.clone(), c);
            }
        }
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb<K>, coeff: u32) {
        let c = coeff % self.p;
        if c == 0 {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), mul(*v, c, self.p));
        }
    }

    pub fn add_assign(&mut self, other: &LinComb<K>) {
        self.add_scaled(other, 1);
    }

    pub fn sum(&self, other: &LinComb<K>) -> LinComb<K> {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn scaled(&self, coeff: u32) -> LinComb<K> {
        let mut r = Self::zero(self.p);
        r.add_scaled(self, coeff);
        r
    }

    pub fn negated(&self) -> LinComb<K> {
        self.scaled(self.p - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> u32 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u32)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Apply a linear map given on basis keys.
    pub fn map_linear<K2: Ord + Clone, F: FnMut(&K) -> LinComb<K2>>(&self, mut f: F) -> LinComb<K2> {
        let mut r = LinComb::zero(self.p);
        for (k, c) in self.iter() {
            r.add_scaled(&f(k), c);
        }
        r
    }

    /// Keep only the terms whose key satisfies `keep`.
    pub fn filtered<F: Fn(&K) -> bool>(&self, keep: F) -> LinComb<K> {
        LinComb {
            p: self.p,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }
}

/// Merge raw terms into a combination over `F_p`; every scalar must live mod `p`.
pub fn normalize<K: Ord + Clone>(p: u32, raw: Vec<(Scalar, K)>) -> Result<LinComb<K>> {
    if raw.iter().any(|(s, _)| s.p != p) {
        return Err(Error::MixedPrimes);
    }
    Ok(LinComb::from_terms(p, raw.into_iter().map(|(s, k)| (s.value, k))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial_binomial(n: u64, m: u64, p: u32) -> u32 {
        // exact multiplicative formula on u128 with p-adic bookkeeping
        if m > n {
            return 0;
        }
        let mut val: u128 = 1;
        let mut p_exp = 0i64;
        let pp = p as u128;
        let strip = |mut x: u128, e: &mut i64| {
            while x % pp == 0 {
                x /= pp;
                *e += 1;
            }
            x % pp
        };
        for i in 0..m {
            val = val * strip((n - i) as u128, &mut p_exp) % pp;
        }
        let mut den: u128 = 1;
        for i in 1..=m {
            let mut e = 0;
            den = den * strip(i as u128, &mut e) % pp;
            p_exp -= e;
        }
        if p_exp > 0 {
            return 0;
        }
        let inv = pow(den as u32, p as u64 - 2, p) as u128;
        (val * inv % pp) as u32
    }

    #[test]
    fn lucas_matches_factorials() {
        for &p in &[2u32, 3, 5, 7] {
            for n in 0..200u64 {
                for m in 0..=n {
                    assert_eq!(binomial_mod_p(n, m, p), factorial_binomial(n, m, p), "C({n},{m}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_mod_p(2, 1, 2), 0);
        assert_eq!(binomial_mod_p(3, 1, 3), 0);
        assert_eq!(binomial_mod_p(4, 2, 3), 0);
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(1, 1, 3), 2);
        assert_eq!(koszul_sign(0, 1, 3), 1);
        assert_eq!(koszul_sign(1, 1, 2), 1);
    }

    #[test]
    fn composition_coeff_brute() {
        for &p in &[2u32, 3, 5] {
            for n in 1..6u64 {
                for r in 0..6u64 {
                    let num: u128 = (1..=(n * r) as u128).product();
                    let nf: u128 = (1..=n as u128).product();
                    let rf: u128 = (1..=r as u128).product();
                    let exact = num / (nf.pow(r as u32) * rf);
                    assert_eq!(composition_coeff(n, r, p) as u128, exact % p as u128);
                }
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let k = "k";
        assert!(normalize(2, vec![(Scalar::new(1, 2), k), (Scalar::new(1, 2), k)]).unwrap().is_zero());
        let l = normalize(3, vec![(Scalar::new(2, 3), k), (Scalar::new(2, 3), k)]).unwrap();
        assert_eq!(l.coeff(&k), 1);
        let l = normalize(5, vec![(Scalar::new(1, 5), "a"), (Scalar::new(0, 5), "b")]).unwrap();
        assert_eq!(l.len(), 1);
        assert!(normalize(2, vec![(Scalar::new(1, 2), k), (Scalar::new(1, 3), k)]).is_err());
    }

    #[test]
    fn primes() {
        let ps: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
