use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Size caps for operations that materialize data.
///
/// The library never materializes a sequence or a matrix grid implicitly;
/// everything that allocates proportionally to a combinatorial count checks
/// against these caps first and fails with [`Error::ResourceLimit`].
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Maximum number of entries in a materialized sequence, generator
    /// window, or monomial enumeration.
    pub max_entries: usize,
    /// Maximum number of cells (rows x cols) in a single Ferrers grid
    /// position.
    pub max_cells: usize,
}

pub const DEFAULT_LIMIT: usize = 10_000_000;

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_entries: DEFAULT_LIMIT,
            max_cells: DEFAULT_LIMIT,
        }
    }
}

impl Limits {
    /// Same cap for every limit.
    pub fn uniform(v: usize) -> Self {
        Limits {
            max_entries: v,
            max_cells: v,
        }
    }

    /// Converts a count to `usize` if it is within `max_entries`.
    pub fn checked_len(&self, what: &str, needed: &BigUint) -> Result<usize> {
        let cap = BigUint::from(self.max_entries);
        if *needed > cap {
            return Err(Error::ResourceLimit(format!(
                "{what} needs {needed} entries, limit is {}",
                self.max_entries
            )));
        }
        // needed <= max_entries <= usize::MAX
        let digits = needed.to_u64_digits();
        Ok(digits.first().copied().unwrap_or(0) as usize)
    }
}
