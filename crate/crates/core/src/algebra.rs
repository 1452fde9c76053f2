//! The free abelian group `g_P` on symbols `X_p` and the maps relating it
//! to positive rationals and to rooted trees.
//!
//! * `Exp(X_p) = p - 1`, extended multiplicatively.
//! * `Div(r)` is the signed exponent vector of `r`.
//! * `τ = Div ∘ Exp` on the basis.
//! * The fusion rule `X_p ⋆ X_q = Div((p - 1)(q - 1) + 1)`, extended
//!   bilinearly. It is not associative in general; see
//!   [`fusion_associativity_report`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::arithmetic::{ExponentMap, PrimeTable};
use crate::error::{Error, Result};
use crate::rational::PositiveRational;
use crate::trees::{PrimeTreeCache, RootedTree};

/// Element `Σ k_p X_p` of `g_P`. The zero element is the empty sum.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GpElement(ExponentMap);

impl GpElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis symbol `X_p`.
    pub fn basis(p: u64) -> Self {
        Self::from_terms([(p, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u64, i64)>) -> Self {
        GpElement(terms.into_iter().collect())
    }

    pub fn coefficients(&self) -> &ExponentMap {
        &self.0
    }

    pub fn coefficient(&self, p: u64) -> i64 {
        self.0.get(p)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.0.iter()
    }

    pub fn scale(&self, c: i64) -> Self {
        GpElement(self.0.scale(c))
    }
}

impl From<ExponentMap> for GpElement {
    fn from(m: ExponentMap) -> Self {
        GpElement(m)
    }
}

impl Add for &GpElement {
    type Output = GpElement;

    fn add(self, rhs: &GpElement) -> GpElement {
        GpElement(&self.0 + &rhs.0)
    }
}

impl Add for GpElement {
    type Output = GpElement;

    fn add(self, rhs: GpElement) -> GpElement {
        &self + &rhs
    }
}

impl Sub for &GpElement {
    type Output = GpElement;

    fn sub(self, rhs: &GpElement) -> GpElement {
        GpElement(&self.0 - &rhs.0)
    }
}

impl Neg for &GpElement {
    type Output = GpElement;

    fn neg(self) -> GpElement {
        self.scale(-1)
    }
}

/// Signed sum in ascending prime order, e.g. `X2 + 2*X3` or `-2*X2 + 2*X3`.
/// Zero prints as `0`.
impl fmt::Display for GpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (p, k)) in self.terms().enumerate() {
            let sign = match (i, k < 0) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let mag = k.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}X{p}")?;
            } else {
                write!(f, "{sign}{mag}*X{p}")?;
            }
        }
        Ok(())
    }
}

/// `Exp(Σ k_p X_p) = Π (p - 1)^{k_p}`.
pub fn exp_map(x: &GpElement) -> Result<PositiveRational> {
    let mut acc = PositiveRational::ONE;
    for (p, k) in x.terms() {
        if p < 2 {
            return Err(Error::Domain(format!("X{p} is not a prime symbol")));
        }
        let base = PositiveRational::from_integer(p - 1)?;
        let base = if k < 0 { base.recip() } else { base };
        for _ in 0..k.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
    }
    Ok(acc)
}

/// Partial inverse of [`exp_map`]: `r ↦ X_{r+1}` when `r + 1` is prime.
///
/// `Exp` is not injective (`Exp(X_2) = 1 = Exp(0)`), so this only inverts it
/// on single basis symbols.
pub fn log_map(table: &PrimeTable, r: &PositiveRational) -> Result<GpElement> {
    let p = r
        .is_integer()
        .then(|| r.numer().checked_add(1))
        .flatten()
        .filter(|&p| table.is_prime(p))
        .ok_or_else(|| Error::UndefinedLogarithm(r.to_string()))?;
    Ok(GpElement::basis(p))
}

/// Principal divisor: `Div(a/b) = Div(a) - Div(b)`.
pub fn div_map(table: &PrimeTable, r: &PositiveRational) -> GpElement {
    let num = table.factorize(r.numer()).expect("numerator is positive");
    let den = table.factorize(r.denom()).expect("denominator is positive");
    GpElement(&num - &den)
}

/// `Div` of a positive integer.
pub fn div_integer(table: &PrimeTable, n: u64) -> Result<GpElement> {
    Ok(GpElement(table.factorize(n)?))
}

/// Linear extension of `X_p ↦ Div(p - 1)`.
pub fn tau(table: &PrimeTable, x: &GpElement) -> Result<GpElement> {
    let mut out = ExponentMap::new();
    for (p, k) in x.terms() {
        if p < 2 {
            return Err(Error::Domain(format!("X{p} is not a prime symbol")));
        }
        for (q, j) in table.factorize(p - 1)?.iter() {
            out.add_term(q, k * j);
        }
    }
    Ok(GpElement(out))
}

/// `x ⋆ y` on positive rationals.
pub fn star_rational(x: &PositiveRational, y: &PositiveRational) -> Result<PositiveRational> {
    x.star(y)
}

/// Largest prime accepted by [`fuse`]; keeps `(p - 1)(q - 1) + 1` in 64 bits.
pub const FUSE_BOUND: u64 = 1 << 32;

/// Fusion of two basis symbols: `Div((p - 1)(q - 1) + 1)`.
pub fn fuse(table: &PrimeTable, p: u64, q: u64) -> Result<GpElement> {
    table.require_prime(p)?;
    table.require_prime(q)?;
    if p >= FUSE_BOUND || q >= FUSE_BOUND {
        return Err(Error::Overflow(format!(
            "X{p} ⋆ X{q}: primes must be below 2^32"
        )));
    }
    div_integer(table, (p - 1) * (q - 1) + 1)
}

/// Bilinear extension of [`fuse`]: `Σ_p Σ_q a_p b_q (X_p ⋆ X_q)`.
pub fn fuse_linear(table: &PrimeTable, a: &GpElement, b: &GpElement) -> Result<GpElement> {
    let mut out = ExponentMap::new();
    for (p, ap) in a.terms() {
        for (q, bq) in b.terms() {
            for (r, k) in fuse(table, p, q)?.terms() {
                out.add_term(r, ap * bq * k);
            }
        }
    }
    Ok(GpElement(out))
}

/// Formal integer combination of rooted trees, isomorphic trees merged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeSum(BTreeMap<RootedTree, i64>);

impl TreeSum {
    pub fn add_term(&mut self, t: RootedTree, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.0.entry(t.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(&t);
        }
    }

    pub fn coefficient(&self, t: &RootedTree) -> i64 {
        self.0.get(t).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Terms in ascending canonical-encoding order.
    pub fn iter(&self) -> impl Iterator<Item = (&RootedTree, i64)> {
        self.0.iter().map(|(t, &k)| (t, k))
    }
}

/// Linear extension `Σ k_p X_p ↦ Σ k_p t(p)`.
pub fn tree_lift(a: &GpElement, cache: &PrimeTreeCache) -> Result<TreeSum> {
    let mut out = TreeSum::default();
    for (p, k) in a.terms() {
        out.add_term(cache.prime_tree(p)?, k);
    }
    Ok(out)
}

/// One triple where the two bracketings of the fusion rule disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociativityMismatch {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    /// `(X_p ⋆ X_q) ⋆ X_r`
    pub left: GpElement,
    /// `X_p ⋆ (X_q ⋆ X_r)`
    pub right: GpElement,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssociativityReport {
    pub bound: u64,
    pub triples_checked: usize,
    pub mismatches: Vec<AssociativityMismatch>,
}

impl AssociativityReport {
    pub fn is_associative(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn find(&self, p: u64, q: u64, r: u64) -> Option<&AssociativityMismatch> {
        self.mismatches
            .iter()
            .find(|m| (m.p, m.q, m.r) == (p, q, r))
    }
}

/// Compares both bracketings of the bilinear fusion rule for every ordered
/// triple of primes `<= bound`, collecting every disagreement.
pub fn fusion_associativity_report(table: &PrimeTable, bound: u64) -> Result<AssociativityReport> {
    if bound > table.limit() {
        return Err(Error::Bounds(format!(
            "associativity scan bound {bound} exceeds the table limit {}",
            table.limit()
        )));
    }
    let primes = table.primes_between(2, bound).to_vec();
    let mut memo: HashMap<(u64, u64), GpElement> = HashMap::new();
    let mut fuse_cached = |p: u64, q: u64| -> Result<GpElement> {
        let key = (p.min(q), p.max(q));
        if let Some(v) = memo.get(&key) {
            return Ok(v.clone());
        }
        let v = fuse(table, key.0, key.1)?;
        memo.insert(key, v.clone());
        Ok(v)
    };
    let mut linear = |a: &GpElement, b: &GpElement| -> Result<GpElement> {
        let mut out = ExponentMap::new();
        for (p, ap) in a.terms() {
            for (q, bq) in b.terms() {
                for (r, k) in fuse_cached(p, q)?.terms() {
                    out.add_term(r, ap * bq * k);
                }
            }
        }
        Ok(GpElement(out))
    };

    let mut report = AssociativityReport {
        bound,
        ..Default::default()
    };
    for &p in &primes {
        for &q in &primes {
            let pq = linear(&GpElement::basis(p), &GpElement::basis(q))?;
            for &r in &primes {
                let qr = linear(&GpElement::basis(q), &GpElement::basis(r))?;
                let left = linear(&pq, &GpElement::basis(r))?;
                let right = linear(&GpElement::basis(p), &qr)?;
                report.triples_checked += 1;
                if left != right {
                    report.mismatches.push(AssociativityMismatch {
                        p,
                        q,
                        r,
                        left,
                        right,
                    });
                }
            }
        }
    }
    Ok(report)
}
