//! Primes ordered by `q << p` iff `q | p - 1`, and the structures built on
//! that relation: prime rooted trees `t(p)`, Pratt certificates, the free
//! abelian group on the primes with its fusion rule, and the Chebyshev
//! functions used to compare `ln p` with the size of `t(p)`.
//!
//! ```
//! use std::sync::Arc;
//! use primetree::{PrimeTable, PrimeTreeCache};
//!
//! let table = Arc::new(PrimeTable::new(1000).unwrap());
//! let cache = PrimeTreeCache::new(table);
//! let t47 = cache.prime_tree(47).unwrap();
//! assert_eq!(t47.degree(), 9);
//! ```

pub mod algebra;
pub mod analytic;
pub mod arithmetic;
pub mod certificates;
mod error;
pub mod poset;
pub mod rational;
pub mod trees;

pub use algebra::{AssociativityReport, GpElement, TreeSum};
pub use analytic::{ConjectureReport, PntRow, StatRow, Sweep};
pub use arithmetic::{mod_pow, ExponentMap, PrimeTable, ProthDecomposition};
pub use certificates::PrattCertificate;
pub use error::{Error, Result};
pub use poset::{CutoffTree, PosetView};
pub use rational::PositiveRational;
pub use trees::{PrimeTreeCache, RootedTree};
