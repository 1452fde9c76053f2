//! Pratt primality certificates.
//!
//! A certificate for `n` lists the full factorization `n - 1 = Π q^k`, a
//! certificate for each `q`, and a witness `g` of multiplicative order
//! `n - 1` modulo `n`. Checking one needs only modular exponentiation and
//! multiplication; no factoring.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::arithmetic::{mod_pow, PrimeTable};
use crate::error::{Error, Result};
use crate::trees::RootedTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrattCertificate {
    pub n: u64,
    /// Primitive root modulo `n`; `None` only for the base case `n = 2`.
    pub witness: Option<u64>,
    pub factors: Vec<CertifiedFactor>,
}

/// `q^k` exactly divides `n - 1`, and `cert` proves `q` prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedFactor {
    pub q: u64,
    pub k: u32,
    pub cert: PrattCertificate,
}

impl PrattCertificate {
    pub fn base() -> Self {
        PrattCertificate {
            n: 2,
            witness: None,
            factors: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn verify(&self) -> bool {
        verify_certificate(self)
    }

    /// Number of certificate nodes, this one included.
    pub fn node_count(&self) -> usize {
        1 + self
            .factors
            .iter()
            .map(|f| f.cert.node_count())
            .sum::<usize>()
    }
}

/// Builds a certificate for the prime `n`, choosing the smallest witness
/// `g >= 2` at every level.
pub fn generate_certificate(table: &PrimeTable, n: u64) -> Result<PrattCertificate> {
    table.require_prime(n)?;
    generate_memo(table, n, &mut HashMap::new())
}

fn generate_memo(
    table: &PrimeTable,
    n: u64,
    memo: &mut HashMap<u64, PrattCertificate>,
) -> Result<PrattCertificate> {
    if n == 2 {
        return Ok(PrattCertificate::base());
    }
    if let Some(c) = memo.get(&n) {
        return Ok(c.clone());
    }
    let f = table.factorize(n - 1)?;
    let qs: Vec<u64> = f.primes().collect();
    let witness = (2..n)
        .find(|&g| is_primitive_root(g, n, &qs))
        .ok_or(Error::NotPrime(n))?;
    let mut factors = Vec::with_capacity(f.len());
    for (q, k) in f.iter() {
        factors.push(CertifiedFactor {
            q,
            k: k as u32,
            cert: generate_memo(table, q, memo)?,
        });
    }
    let cert = PrattCertificate {
        n,
        witness: Some(witness),
        factors,
    };
    memo.insert(n, cert.clone());
    Ok(cert)
}

// g has order n - 1 mod n, given the distinct primes dividing n - 1.
fn is_primitive_root(g: u64, n: u64, prime_divisors: &[u64]) -> bool {
    mod_pow(g, n - 1, n) == 1
        && prime_divisors
            .iter()
            .all(|&q| mod_pow(g, (n - 1) / q, n) != 1)
}

/// Recursively checks a certificate. Total: malformed input yields `false`.
pub fn verify_certificate(cert: &PrattCertificate) -> bool {
    let n = cert.n;
    if n < 2 {
        return false;
    }
    if n == 2 {
        return cert.witness.is_none() && cert.factors.is_empty();
    }
    let Some(g) = cert.witness else {
        return false;
    };
    if g < 2 || g >= n || cert.factors.is_empty() {
        return false;
    }
    let mut seen = HashSet::new();
    let mut product: u64 = 1;
    for f in &cert.factors {
        if f.k == 0 || f.cert.n != f.q || !seen.insert(f.q) {
            return false;
        }
        match f.q.checked_pow(f.k).and_then(|t| product.checked_mul(t)) {
            Some(p) => product = p,
            None => return false,
        }
    }
    // also guarantees every q < n, so the recursion terminates
    if product != n - 1 {
        return false;
    }
    if mod_pow(g, n - 1, n) != 1 {
        return false;
    }
    if cert
        .factors
        .iter()
        .any(|f| mod_pow(g, (n - 1) / f.q, n) == 1)
    {
        return false;
    }
    cert.factors.iter().all(|f| verify_certificate(&f.cert))
}

/// Forgets the witnesses: each `q^k` becomes `k` sibling copies of the
/// stripped sub-certificate. Equals `t(n)` for a valid certificate.
pub fn strip_to_tree(cert: &PrattCertificate) -> Result<RootedTree> {
    if !verify_certificate(cert) {
        return Err(Error::Domain(format!(
            "certificate for {} does not verify",
            cert.n
        )));
    }
    Ok(strip(cert))
}

fn strip(cert: &PrattCertificate) -> RootedTree {
    let mut forest = Vec::new();
    for f in &cert.factors {
        let sub = strip(&f.cert);
        forest.extend(std::iter::repeat_n(sub, f.k as usize));
    }
    RootedTree::b_plus(forest)
}
