//! Shared fixtures for the criterion benches.

use std::sync::Arc;

use primetree::PrimeTable;

pub fn table(limit: u64) -> Arc<PrimeTable> {
    Arc::new(PrimeTable::new(limit).expect("bench limits are valid"))
}
