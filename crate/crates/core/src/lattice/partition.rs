use std::fmt;

use super::FinPoset;
use crate::error::{Error, Result};
use crate::limits::MAX_PARTITION_N;

/// A set partition of `{0, .., n-1}`, blocks stored as bitmasks sorted by
/// their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<u64>,
}

impl Partition {
    /// Validates that `blocks` are nonempty, disjoint, and cover `0..n`.
    pub fn from_blocks(n: usize, blocks: Vec<u64>) -> Result<Self> {
        if n > 64 {
            return Err(Error::resource("partitions are limited to 64 points"));
        }
        let full = full_mask(n);
        let mut seen = 0u64;
        for &b in &blocks {
            if b == 0 {
                return Err(Error::usage("partition has an empty block"));
            }
            if b & !full != 0 {
                return Err(Error::usage("partition block outside the ground set"));
            }
            if b & seen != 0 {
                return Err(Error::usage("partition blocks overlap"));
            }
            seen |= b;
        }
        if seen != full {
            return Err(Error::usage("partition blocks do not cover the ground set"));
        }
        Ok(Self::canonical(n, blocks))
    }

    fn canonical(n: usize, mut blocks: Vec<u64>) -> Self {
        blocks.sort_by_key(|b| b.trailing_zeros());
        Partition { n, blocks }
    }

    /// Builds from a block id per point (any ids; equal ids share a block).
    pub fn from_assignment(assign: &[usize]) -> Self {
        let mut blocks: Vec<(usize, u64)> = Vec::new();
        for (i, &id) in assign.iter().enumerate() {
            match blocks.iter_mut().find(|(b, _)| *b == id) {
                Some((_, m)) => *m |= 1 << i,
                None => blocks.push((id, 1 << i)),
            }
        }
        Self::canonical(assign.len(), blocks.into_iter().map(|(_, m)| m).collect())
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            n,
            blocks: (0..n).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn single_block(n: usize) -> Self {
        Partition {
            n,
            blocks: if n == 0 { vec![] } else { vec![full_mask(n)] },
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.blocks
            .iter()
            .position(|&b| b & (1 << i) != 0)
            .expect("point inside ground set")
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n == coarser.n
            && self
                .blocks
                .iter()
                .all(|&b| coarser.blocks.iter().any(|&c| b & c == b))
    }

    /// Common refinement (meet in the refinement order).
    pub fn common_refinement(&self, other: &Partition) -> Partition {
        let mut blocks = Vec::new();
        for &a in &self.blocks {
            for &b in &other.blocks {
                if a & b != 0 {
                    blocks.push(a & b);
                }
            }
        }
        Self::canonical(self.n, blocks)
    }

    /// Merge two blocks by position.
    pub fn merge(&self, i: usize, j: usize) -> Partition {
        let mut blocks: Vec<u64> = self
            .blocks
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, &b)| b)
            .collect();
        blocks.push(self.blocks[i] | self.blocks[j]);
        Self::canonical(self.n, blocks)
    }

    /// Label with 1-based digits, blocks separated by `/`, e.g. `13/2/4`.
    pub fn label(&self) -> String {
        self.label_with(&(1..=self.n).map(|i| i.to_string()).collect::<Vec<_>>(), "")
    }

    /// Label using point names, joined within a block by `sep`.
    pub fn label_with<S: AsRef<str>>(&self, names: &[S], sep: &str) -> String {
        self.blocks
            .iter()
            .map(|&b| {
                (0..self.n)
                    .filter(|i| b & (1 << i) != 0)
                    .map(|i| names[i].as_ref())
                    .collect::<Vec<_>>()
                    .join(sep)
            })
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Every partition of an `n`-set, in restricted-growth-string order.
    pub fn all(n: usize) -> Vec<Partition> {
        if n == 0 {
            return vec![Partition {
                n: 0,
                blocks: vec![],
            }];
        }
        let mut out = Vec::new();
        let mut rgs = vec![0usize; n];
        loop {
            out.push(Self::from_assignment(&rgs));
            // next restricted growth string
            let mut i = n - 1;
            loop {
                if i == 0 {
                    return out;
                }
                let max_prefix = rgs[..i].iter().copied().max().unwrap();
                if rgs[i] <= max_prefix {
                    rgs[i] += 1;
                    for r in rgs.iter_mut().skip(i + 1) {
                        *r = 0;
                    }
                    break;
                }
                i -= 1;
            }
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Bell number via the set-partition count, `n <= 25`.
pub fn bell(n: usize) -> u64 {
    // Stirling recurrence: sum_k S(n, k).
    let mut s = vec![vec![0u64; n + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = k as u64 * s[i - 1][k] + s[i - 1][k - 1];
        }
    }
    s[n].iter().sum()
}

/// The partition lattice Π_n ordered by refinement (all singletons at the
/// bottom, one block at the top). Covers merge two blocks.
pub fn partition_lattice(n: usize) -> Result<FinPoset> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(Error::usage(format!(
            "partition_lattice needs 1 <= n <= {MAX_PARTITION_N}, got {n}"
        )));
    }
    let (poset, _) = partition_lattice_with_partitions(n);
    Ok(poset)
}

pub(crate) fn partition_lattice_with_partitions(n: usize) -> (FinPoset, Vec<Partition>) {
    let parts = Partition::all(n);
    let index: std::collections::HashMap<&Partition, usize> =
        parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut covers = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let k = p.num_blocks();
        for a in 0..k {
            for b in a + 1..k {
                covers.push((i, index[&p.merge(a, b)]));
            }
        }
    }
    let labels = parts.iter().map(Partition::label).collect();
    let poset = FinPoset::from_covers(labels, covers).expect("partition lattice is a poset");
    (poset, parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_one_sizes() {
        assert_eq!(partition_lattice(1).unwrap().len(), 1);
        assert_eq!(partition_lattice(2).unwrap().len(), 2);
        let p3 = partition_lattice(3).unwrap();
        assert_eq!(p3.len(), 5);
        assert_eq!(p3.coatoms().len(), 3);
        let p4 = partition_lattice(4).unwrap();
        assert_eq!(p4.len(), 15);
        assert_eq!(p4.atoms().len(), 6);
        assert_eq!(p4.coatoms().len(), 7);
    }

    #[test]
    fn figure_one_labels_and_order() {
        let p3 = partition_lattice(3).unwrap();
        let bot = p3.index_of("1/2/3").unwrap();
        let top = p3.index_of("123").unwrap();
        assert_eq!(p3.bottom(), Some(bot));
        assert_eq!(p3.top(), Some(top));
        let a = p3.index_of("12/3").unwrap();
        let b = p3.index_of("13/2").unwrap();
        assert_eq!(p3.meet(&[a, b]).unwrap(), Some(bot));
        assert_eq!(p3.join(&[a, b]).unwrap(), Some(top));
        assert_eq!(p3.height(top).unwrap(), 2);

        let p4 = partition_lattice(4).unwrap();
        let x = p4.index_of("12/3/4").unwrap();
        let y = p4.index_of("1/2/34").unwrap();
        assert_eq!(p4.label(p4.join(&[x, y]).unwrap().unwrap()), "12/34");
        assert_eq!(p4.height(p4.top().unwrap()).unwrap(), 3);
    }

    #[test]
    fn figure_one_pi4_cover_edges() {
        // Atom-to-coatom edges drawn in Figure 1.
        let p4 = partition_lattice(4).unwrap();
        let edges = [
            ("12/3/4", ["123/4", "124/3", "12/34"]),
            ("13/2/4", ["123/4", "13/24", "134/2"]),
            ("14/2/3", ["124/3", "14/23", "134/2"]),
            ("1/23/4", ["123/4", "14/23", "1/234"]),
            ("1/24/3", ["124/3", "13/24", "1/234"]),
            ("1/2/34", ["12/34", "134/2", "1/234"]),
        ];
        for (lo, his) in edges {
            let lo_i = p4.index_of(lo).unwrap();
            let mut got: Vec<&str> = p4.upper_covers(lo_i).iter().map(|&h| p4.label(h)).collect();
            got.sort();
            let mut want = his.to_vec();
            want.sort();
            assert_eq!(got, want, "upper covers of {lo}");
        }
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(partition_lattice(0), Err(Error::Usage(_))));
        assert!(matches!(
            partition_lattice(MAX_PARTITION_N + 1),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::from_blocks(3, vec![0b011, 0b100]).is_ok());
        assert!(Partition::from_blocks(3, vec![0b011, 0b110]).is_err());
        assert!(Partition::from_blocks(3, vec![0b011]).is_err());
        assert!(Partition::from_blocks(3, vec![0b011, 0, 0b100]).is_err());
    }

    #[test]
    fn refinement_and_common_refinement() {
        let a = Partition::from_blocks(4, vec![0b0011, 0b1100]).unwrap();
        let b = Partition::from_blocks(4, vec![0b0101, 0b1010]).unwrap();
        let m = a.common_refinement(&b);
        assert_eq!(m, Partition::singletons(4));
        assert!(m.refines(&a) && m.refines(&b));
        assert!(!a.refines(&b));
        assert!(a.refines(&Partition::single_block(4)));
    }
}
