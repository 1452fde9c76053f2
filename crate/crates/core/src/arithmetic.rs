//! Prime tables, factorization and modular arithmetic.
//!
//! Everything here works in `u64`. A [`PrimeTable`] holds a smallest prime
//! factor table up to its limit; numbers above the limit fall back to trial
//! division, first by the sieved primes and then by odd candidates.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// Largest limit accepted by [`PrimeTable::new`].
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// Primes up to a fixed limit together with a smallest-prime-factor table.
///
/// Immutable after construction; share it behind an `Arc` across threads.
#[derive(Clone)]
pub struct PrimeTable {
    limit: u64,
    // spf[n] is the smallest prime factor of n, 0 for n < 2.
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl fmt::Debug for PrimeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeTable")
            .field("limit", &self.limit)
            .field("primes", &self.primes.len())
            .finish()
    }
}

impl PrimeTable {
    /// Linear sieve over `[0, limit]`.
    pub fn new(limit: u64) -> Result<Self> {
        if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
            return Err(Error::Bounds(format!(
                "sieve limit {limit} not in [2, {MAX_SIEVE_LIMIT}]"
            )));
        }
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            let si = spf[i] as u64;
            for &p in &primes {
                let m = p as usize * i;
                if p > si || m >= len {
                    break;
                }
                spf[m] = p as u32;
            }
        }
        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes `<= limit`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes in the closed range `[lo, hi]`, clipped to the table.
    pub fn primes_between(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&p| p < lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        &self.primes[start..end.max(start)]
    }

    /// Number of primes `<= x`; `x` must lie within the table.
    pub fn count_upto(&self, x: u64) -> Result<usize> {
        self.check_in_table(x)?;
        Ok(self.primes.partition_point(|&p| p <= x))
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.limit
    }

    pub(crate) fn check_in_table(&self, n: u64) -> Result<()> {
        if self.contains(n) {
            Ok(())
        } else {
            Err(Error::Bounds(format!(
                "{n} exceeds the prime table limit {}",
                self.limit
            )))
        }
    }

    /// Smallest prime factor of `n` if `2 <= n <= limit`.
    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    /// Primality for any `u64`: table lookup inside the limit, trial
    /// division outside it.
    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.limit {
            return n >= 2 && self.spf[n as usize] as u64 == n;
        }
        self.trial_divisor(n).is_none()
    }

    /// `Ok(())` if `n` is prime, `NotPrime` (or `Domain` for `n < 2`) otherwise.
    pub fn require_prime(&self, n: u64) -> Result<()> {
        if n < 2 {
            Err(Error::Domain(format!("{n} is not a prime (must be >= 2)")))
        } else if self.is_prime(n) {
            Ok(())
        } else {
            Err(Error::NotPrime(n))
        }
    }

    // Smallest prime divisor of n > limit, or None if n is prime.
    fn trial_divisor(&self, n: u64) -> Option<u64> {
        for &p in &self.primes {
            if p.saturating_mul(p) > n {
                return None;
            }
            if n.is_multiple_of(p) {
                return Some(p);
            }
        }
        let mut d = self.primes.last().copied().unwrap_or(2) + 1;
        if d % 2 == 0 {
            d += 1;
        }
        while d.saturating_mul(d) <= n {
            if n.is_multiple_of(d) {
                return Some(d);
            }
            d += 2;
        }
        None
    }

    /// Prime factorization of `n >= 1`; `factorize(1)` is empty.
    pub fn factorize(&self, n: u64) -> Result<ExponentMap> {
        if n == 0 {
            return Err(Error::Domain("cannot factorize 0".into()));
        }
        let mut out = ExponentMap::new();
        let mut rest = n;
        while rest > self.limit {
            match self.trial_divisor(rest) {
                Some(p) => {
                    let mut k = 0;
                    while rest.is_multiple_of(p) {
                        rest /= p;
                        k += 1;
                    }
                    out.add_term(p, k);
                }
                None => {
                    out.add_term(rest, 1);
                    return Ok(out);
                }
            }
        }
        while rest > 1 {
            let p = self.spf[rest as usize] as u64;
            let mut k = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                k += 1;
            }
            out.add_term(p, k);
        }
        Ok(out)
    }

    /// Exponent of the prime `p` in `n`.
    pub fn valuation(&self, p: u64, n: u64) -> Result<u32> {
        self.require_prime(p)?;
        if n == 0 {
            return Err(Error::Domain("valuation of 0 is undefined".into()));
        }
        Ok(valuation_unchecked(p, n))
    }

    /// Splits `p - 1 = 2^m * q` with `q` odd, for an odd prime `p`.
    pub fn proth(&self, p: u64) -> Result<ProthDecomposition> {
        if p == 2 {
            return Err(Error::Domain(
                "the Proth factorization is defined for odd primes only".into(),
            ));
        }
        self.require_prime(p)?;
        let m = (p - 1).trailing_zeros();
        Ok(ProthDecomposition {
            two_exponent: m,
            odd_part: (p - 1) >> m,
        })
    }

    /// Elementary-factor shape of the cyclic group `Aut(F_p, +)`:
    /// `(q, k)` for each `Z_{q^k}` summand, `q` ascending.
    pub fn aut_structure(&self, p: u64) -> Result<Vec<(u64, u32)>> {
        self.require_prime(p)?;
        let f = self.factorize(p - 1)?;
        Ok(f.iter().map(|(q, k)| (q, k as u32)).collect())
    }
}

pub(crate) fn valuation_unchecked(p: u64, mut n: u64) -> u32 {
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// `p - 1 = 2^two_exponent * odd_part`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProthDecomposition {
    pub two_exponent: u32,
    pub odd_part: u64,
}

/// `(a * b) mod m` without overflow.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod modulus` by square-and-multiply. Panics if `modulus < 2`.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 2, "modulus must be at least 2");
    let mut result = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, modulus);
        }
        b = mul_mod(b, b, modulus);
        exp >>= 1;
    }
    result
}

/// Finitely supported map from primes to nonzero integer exponents.
///
/// Factorizations of positive integers have positive exponents; the same
/// type with signed exponents represents elements of the free abelian group
/// on the primes. Zero exponents are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentMap {
    entries: BTreeMap<u64, i64>,
}

impl ExponentMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `k` to the exponent of `p`, dropping the entry if it reaches 0.
    pub fn add_term(&mut self, p: u64, k: i64) {
        if k == 0 {
            return;
        }
        match self.entries.entry(p) {
            btree_map::Entry::Vacant(e) => {
                e.insert(k);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += k;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, p: u64) -> i64 {
        self.entries.get(&p).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(prime, exponent)` pairs in ascending prime order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.entries.iter().map(|(&p, &k)| (p, k))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    /// Sum of all exponents.
    pub fn total(&self) -> i64 {
        self.entries.values().sum()
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::new();
        }
        Self {
            entries: self.entries.iter().map(|(&p, &k)| (p, k * c)).collect(),
        }
    }

    /// Splits into the positive and negated negative parts.
    pub fn split_signs(&self) -> (ExponentMap, ExponentMap) {
        let mut pos = ExponentMap::new();
        let mut neg = ExponentMap::new();
        for (p, k) in self.iter() {
            if k > 0 {
                pos.add_term(p, k);
            } else {
                neg.add_term(p, -k);
            }
        }
        (pos, neg)
    }

    /// `prod p^k`; requires all exponents positive and the product to fit.
    pub fn product(&self) -> Result<u64> {
        let mut acc: u64 = 1;
        for (p, k) in self.iter() {
            if k < 0 {
                return Err(Error::Domain(format!(
                    "negative exponent {k} at {p} has no integer product"
                )));
            }
            let term = u32::try_from(k)
                .ok()
                .and_then(|k| p.checked_pow(k))
                .ok_or_else(|| Error::Overflow(format!("{p}^{k}")))?;
            acc = acc
                .checked_mul(term)
                .ok_or_else(|| Error::Overflow("product of prime powers".into()))?;
        }
        Ok(acc)
    }
}

impl FromIterator<(u64, i64)> for ExponentMap {
    fn from_iter<I: IntoIterator<Item = (u64, i64)>>(iter: I) -> Self {
        let mut m = ExponentMap::new();
        for (p, k) in iter {
            m.add_term(p, k);
        }
        m
    }
}

impl Add for &ExponentMap {
    type Output = ExponentMap;

    fn add(self, rhs: &ExponentMap) -> ExponentMap {
        let mut out = self.clone();
        for (p, k) in rhs.iter() {
            out.add_term(p, k);
        }
        out
    }
}

impl Add for ExponentMap {
    type Output = ExponentMap;

    fn add(self, rhs: ExponentMap) -> ExponentMap {
        &self + &rhs
    }
}

impl Neg for &ExponentMap {
    type Output = ExponentMap;

    fn neg(self) -> ExponentMap {
        self.scale(-1)
    }
}

impl Sub for &ExponentMap {
    type Output = ExponentMap;

    fn sub(self, rhs: &ExponentMap) -> ExponentMap {
        self + &(-rhs)
    }
}
