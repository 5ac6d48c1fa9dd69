//! Size caps. `PBDOM_MAX_ATOMS` may lower the atom cap, never raise it.

use std::sync::OnceLock;

/// Largest Boolean algebra (in atoms) whose subalgebra lattice we enumerate.
pub const MAX_SUBALGEBRA_ATOMS: usize = 6;

/// Largest ground set for `partition_lattice`.
pub const MAX_PARTITION_N: usize = 8;

/// Largest poset size for exhaustive enumeration.
pub const MAX_ENUMERATION_SIZE: usize = 7;

/// Largest block (in atoms) a piecewise Boolean algebra may carry.
pub const MAX_BLOCK_ATOMS: usize = 12;

pub fn max_atoms() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("PBDOM_MAX_ATOMS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.min(MAX_SUBALGEBRA_ATOMS))
            .unwrap_or(MAX_SUBALGEBRA_ATOMS)
    })
}
