//! The generator relation `q << p` (`q` divides `p - 1`) on primes.
//!
//! The raw relation is not transitive; the partial order is its
//! reflexive-transitive closure. [`generators`] and [`is_generator`] expose
//! the raw relation, [`downset`] and [`CutoffTree`] the closure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::arithmetic::PrimeTable;
use crate::error::Result;

/// Primes `q` with `q | p - 1`, ascending. Empty for `p = 2`.
pub fn generators(table: &PrimeTable, p: u64) -> Result<Vec<u64>> {
    table.require_prime(p)?;
    Ok(table.factorize(p - 1)?.primes().collect())
}

/// `q << p`, i.e. `q` divides `p - 1`. Both arguments must be prime.
pub fn is_generator(table: &PrimeTable, q: u64, p: u64) -> Result<bool> {
    table.require_prime(q)?;
    table.require_prime(p)?;
    Ok((p - 1).is_multiple_of(q))
}

/// Length in nodes of the longest `<<`-chain from `p` down to 2.
pub fn chain_depth(table: &PrimeTable, p: u64) -> Result<u32> {
    table.require_prime(p)?;
    chain_depth_memo(table, p, &mut HashMap::new())
}

pub(crate) fn chain_depth_memo(
    table: &PrimeTable,
    p: u64,
    memo: &mut HashMap<u64, u32>,
) -> Result<u32> {
    if p == 2 {
        return Ok(1);
    }
    if let Some(&d) = memo.get(&p) {
        return Ok(d);
    }
    let mut best = 0;
    for q in table.factorize(p - 1)?.primes() {
        best = best.max(chain_depth_memo(table, q, memo)?);
    }
    memo.insert(p, best + 1);
    Ok(best + 1)
}

/// The `<<`-downset of `p` (including `p`), by breadth-first closure.
pub fn downset(table: &PrimeTable, p: u64) -> Result<BTreeSet<u64>> {
    table.require_prime(p)?;
    let mut seen = BTreeSet::from([p]);
    let mut frontier = vec![p];
    while let Some(r) = frontier.pop() {
        if r == 2 {
            continue;
        }
        for q in table.factorize(r - 1)?.primes() {
            if seen.insert(q) {
                frontier.push(q);
            }
        }
    }
    Ok(seen)
}

/// Multiplicity-free expansion of a prime: one child per distinct prime
/// divisor of `prime - 1`, children in descending prime order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutoffTree {
    pub prime: u64,
    pub children: Vec<CutoffTree>,
}

impl CutoffTree {
    pub fn build(table: &PrimeTable, p: u64) -> Result<Self> {
        table.require_prime(p)?;
        Self::build_unchecked(table, p)
    }

    fn build_unchecked(table: &PrimeTable, p: u64) -> Result<Self> {
        let mut children = Vec::new();
        if p > 2 {
            let divisors: Vec<u64> = table.factorize(p - 1)?.primes().collect();
            for &q in divisors.iter().rev() {
                children.push(Self::build_unchecked(table, q)?);
            }
        }
        Ok(CutoffTree { prime: p, children })
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Distinct prime labels occurring anywhere in the tree.
    pub fn labels(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.insert(t.prime);
            stack.extend(t.children.iter());
        }
        out
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn height(&self) -> u32 {
        1 + self
            .children
            .iter()
            .map(CutoffTree::height)
            .max()
            .unwrap_or(0)
    }
}

/// Shorthand for [`CutoffTree::build`].
pub fn cutoff_tree(table: &PrimeTable, p: u64) -> Result<CutoffTree> {
    CutoffTree::build(table, p)
}

/// The generator relation restricted to the primes of a table.
#[derive(Debug, Clone)]
pub struct PosetView {
    table: Arc<PrimeTable>,
    // odd prime -> ascending generators; 2 is minimal and has no entry
    edges: BTreeMap<u64, Vec<u64>>,
}

impl PosetView {
    pub fn build(table: Arc<PrimeTable>) -> Self {
        let mut edges = BTreeMap::new();
        for &p in table.primes().iter().skip(1) {
            let gens = table
                .factorize(p - 1)
                .expect("p - 1 >= 2 for odd primes")
                .primes()
                .collect();
            edges.insert(p, gens);
        }
        PosetView { table, edges }
    }

    pub fn table(&self) -> &PrimeTable {
        &self.table
    }

    pub fn edges(&self) -> &BTreeMap<u64, Vec<u64>> {
        &self.edges
    }

    /// Generators of `p`, or `None` if `p` is not a prime in the view.
    /// The minimal element 2 yields an empty slice.
    pub fn generators_of(&self, p: u64) -> Option<&[u64]> {
        if p == 2 {
            return Some(&[]);
        }
        self.edges.get(&p).map(Vec::as_slice)
    }

    /// Every prime in the view reaches 2 along generator edges.
    pub fn verify_connectivity(&self) -> bool {
        // Generators are strictly smaller, so ascending order is topological.
        let mut reaches: HashMap<u64, bool> = HashMap::with_capacity(self.edges.len() + 1);
        reaches.insert(2, true);
        for (&p, gens) in &self.edges {
            let ok = gens
                .iter()
                .any(|q| reaches.get(q).copied().unwrap_or(false));
            reaches.insert(p, ok);
        }
        self.table.primes().iter().all(|p| reaches[p])
    }
}

/// Shorthand for [`PosetView::build`].
pub fn build_poset(table: Arc<PrimeTable>) -> PosetView {
    PosetView::build(table)
}
