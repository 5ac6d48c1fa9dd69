use std::collections::BTreeMap;

use super::partition::partition_lattice_with_partitions;
use super::{bell, poset_iso, FinPoset, Lattice, Partition};
use crate::limits::MAX_PARTITION_N;

/// Witness that a poset is isomorphic to Π_n: each element's partition of
/// `{1..n}` under the isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionLatticeCert {
    pub n: usize,
    pub iso: BTreeMap<String, Partition>,
}

/// Recognizes Π_n by direct isomorphism search against `partition_lattice(n)`,
/// with `n` read off the height of the top.
pub fn recognize_partition_lattice(p: &FinPoset) -> Option<PartitionLatticeCert> {
    let top = p.top()?;
    let n = p.height(top).ok()? + 1;
    if n > MAX_PARTITION_N || p.len() as u64 != bell(n) {
        return None;
    }
    let (target, parts) = partition_lattice_with_partitions(n);
    let map = poset_iso(p, &target)?;
    let iso = (0..p.len())
        .map(|i| (p.label(i).to_string(), parts[map[i]].clone()))
        .collect();
    Some(PartitionLatticeCert { n, iso })
}

/// Recognizes Π_n through the recursive characterisation: a geometric
/// lattice with a modular coatom whose upper intervals above atoms are all
/// Π_{n-1}, plus the atom count `n choose 2` when `n <= 4`.
///
/// Returns the ground-set size `n` on success.
pub fn recognize_partition_lattice_recursive(p: &FinPoset) -> Option<usize> {
    if p.len() == 1 {
        return Some(1);
    }
    let lattice = Lattice::new(p).ok()?;
    if !lattice.is_geometric() {
        return None;
    }
    if lattice.modular_coatoms().is_empty() {
        return None;
    }
    let n = p.height(lattice.top()).ok()? + 1;
    if n > MAX_PARTITION_N {
        return None;
    }
    let atoms = lattice.atoms();
    if n <= 4 && atoms.len() != n * (n - 1) / 2 {
        return None;
    }
    for &a in &atoms {
        let (upper, _) = p.interval(a, lattice.top());
        if recognize_partition_lattice_recursive(&upper)? != n - 1 {
            return None;
        }
    }
    Some(n)
}
