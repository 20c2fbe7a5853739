//! Global safety cap on monomial basis sizes.
//!
//! Basis enumeration in a free graded algebra grows combinatorially; the
//! budget turns a runaway request into a clean error instead of an OOM.
//! The cap is read once from `SULLIVAN_MAX_CELLS` (default 200000).

use std::sync::OnceLock;

pub const DEFAULT_MAX_CELLS: usize = 200_000;

static MAX_CELLS: OnceLock<usize> = OnceLock::new();

/// The current basis-size cap in monomials.
pub fn max_cells() -> usize {
    *MAX_CELLS.get_or_init(|| {
        std::env::var("SULLIVAN_MAX_CELLS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_MAX_CELLS)
    })
}
