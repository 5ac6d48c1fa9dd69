use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{PieceBool, PieceBoolHom};
use crate::boolalg::{Elem, FinBool};
use crate::error::{Error, Result};
use crate::lattice::{FinPoset, Partition};
use crate::limits::max_atoms;

/// The commeasurable Boolean subalgebras of a piecewise Boolean algebra,
/// ordered by inclusion.
///
/// Every subalgebra sits inside some block; it is stored once, by its
/// carrier set, together with the first block it was found in and the
/// partition of that block's atoms describing it.
#[derive(Clone, Debug)]
pub struct SubPoset {
    poset: FinPoset,
    carriers: Vec<Vec<usize>>,
    homes: Vec<(usize, Partition)>,
    index: HashMap<Vec<usize>, usize>,
}

impl SubPoset {
    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.carriers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carriers.is_empty()
    }

    /// Sorted carrier elements of subalgebra `i`.
    pub fn carrier(&self, i: usize) -> &[usize] {
        &self.carriers[i]
    }

    /// A block containing subalgebra `i` and the partition of its atoms.
    pub fn home(&self, i: usize) -> (usize, &Partition) {
        (self.homes[i].0, &self.homes[i].1)
    }

    pub fn index_of_set(&self, sorted: &[usize]) -> Option<usize> {
        self.index.get(sorted).copied()
    }

    pub fn num_atoms(&self, i: usize) -> usize {
        self.homes[i].1.num_blocks()
    }

    /// Carrier element of subalgebra `i` at a mask over its own atoms.
    pub fn element(&self, p: &PieceBool, i: usize, m: Elem) -> usize {
        let (b, pi) = &self.homes[i];
        let mask = pi
            .blocks()
            .iter()
            .enumerate()
            .filter(|&(k, _)| m & (1 << k) != 0)
            .fold(0, |acc, (_, &blk)| acc | blk);
        p.block(*b).label(mask)
    }

    /// Subalgebra `i` as a Boolean algebra whose atoms carry the carrier
    /// labels, plus the carrier element of each of its elements.
    pub fn algebra(&self, p: &PieceBool, i: usize) -> (FinBool, Vec<usize>) {
        let k = self.num_atoms(i);
        let atoms = (0..k)
            .map(|a| p.label(self.element(p, i, 1 << a)).to_string())
            .collect();
        let labels = (0..1u64 << k).map(|m| self.element(p, i, m)).collect();
        (
            FinBool::new(atoms).expect("carrier labels are distinct"),
            labels,
        )
    }
}

fn set_label(p: &PieceBool, set: &[usize]) -> String {
    let names: Vec<&str> = set.iter().map(|&c| p.label(c)).collect();
    format!("{{{}}}", names.join(","))
}

/// `Sub(P)`. Node 0 is `{0, 1}`.
pub fn sub(p: &PieceBool) -> Result<SubPoset> {
    let mut carriers: Vec<Vec<usize>> = Vec::new();
    let mut homes = Vec::new();
    let mut index = HashMap::new();
    for (bi, b) in p.blocks().iter().enumerate() {
        let k = b.algebra().num_atoms();
        if k > max_atoms() {
            return Err(Error::resource(format!(
                "block {bi} has {k} atoms; subalgebra enumeration is capped at {}",
                max_atoms()
            )));
        }
        for pi in Partition::all(k) {
            let n = pi.num_blocks();
            let mut set: Vec<usize> = (0..1u64 << n)
                .map(|sel| {
                    let mask = (0..n)
                        .filter(|&j| sel & (1 << j) != 0)
                        .fold(0, |acc, j| acc | pi.blocks()[j]);
                    b.label(mask)
                })
                .collect();
            set.sort_unstable();
            if !index.contains_key(&set) {
                index.insert(set.clone(), carriers.len());
                carriers.push(set);
                homes.push((bi, pi));
            }
        }
    }
    let bits: Vec<FixedBitSet> = carriers
        .iter()
        .map(|s| {
            let mut f = FixedBitSet::with_capacity(p.len());
            s.iter().for_each(|&c| f.insert(c));
            f
        })
        .collect();
    let labels = carriers.iter().map(|s| set_label(p, s)).collect();
    let poset = FinPoset::from_relation(labels, |i, j| bits[i].is_subset(&bits[j]))?;
    Ok(SubPoset {
        poset,
        carriers,
        homes,
        index,
    })
}

/// `Sub(f)`: each subalgebra goes to its direct image.
pub fn sub_on_hom(f: &PieceBoolHom, src: &SubPoset, tgt: &SubPoset) -> Result<Vec<usize>> {
    (0..src.len())
        .map(|i| {
            let mut img: Vec<usize> = src.carrier(i).iter().map(|&c| f.apply(c)).collect();
            img.sort_unstable();
            img.dedup();
            tgt.index_of_set(&img).ok_or_else(|| {
                Error::logic(format!(
                    "image of {} is not a commeasurable subalgebra",
                    src.poset().label(i)
                ))
            })
        })
        .collect()
}
