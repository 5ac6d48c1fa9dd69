use std::collections::HashMap;

use super::{BoolHom, Elem, FinBool};
use crate::error::{Error, Result};
use crate::lattice::{FinPoset, Partition};
use crate::limits::max_atoms;

/// The lattice of Boolean subalgebras of a finite Boolean algebra.
///
/// Each subalgebra is stored by the partition of the base atoms into the
/// atoms of the subalgebra; its elements are the unions of blocks. Larger
/// subalgebras have finer partitions.
#[derive(Clone, Debug)]
pub struct SubalgebraLattice {
    base: FinBool,
    poset: FinPoset,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl SubalgebraLattice {
    pub fn base(&self) -> &FinBool {
        &self.base
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn partition(&self, i: usize) -> &Partition {
        &self.partitions[i]
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Elements of subalgebra `i`, sorted.
    pub fn carrier(&self, i: usize) -> Vec<Elem> {
        elements_of(&self.partitions[i])
    }

    /// `{0, 1}`.
    pub fn bottom(&self) -> usize {
        self.index[&Partition::single_block(self.base.num_atoms())]
    }

    /// The whole algebra.
    pub fn top(&self) -> usize {
        self.index[&Partition::singletons(self.base.num_atoms())]
    }
}

fn elements_of(p: &Partition) -> Vec<Elem> {
    let blocks = p.blocks();
    let mut out: Vec<Elem> = (0..1u64 << blocks.len())
        .map(|sel| {
            blocks
                .iter()
                .enumerate()
                .filter(|&(k, _)| sel & (1 << k) != 0)
                .fold(0, |acc, (_, &b)| acc | b)
        })
        .collect();
    out.sort_unstable();
    out
}

/// All Boolean subalgebras of `b`, ordered by inclusion.
pub fn subalgebras(b: &FinBool) -> Result<SubalgebraLattice> {
    let n = b.num_atoms();
    if n > max_atoms() {
        return Err(Error::resource(format!(
            "subalgebra enumeration is capped at {} atoms, got {n}",
            max_atoms()
        )));
    }
    let partitions = Partition::all(n);
    let index: HashMap<Partition, usize> = partitions
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    // Merging two atoms of a subalgebra gives a maximal proper subalgebra of it.
    let mut covers = Vec::new();
    for (i, p) in partitions.iter().enumerate() {
        let k = p.num_blocks();
        for x in 0..k {
            for y in x + 1..k {
                covers.push((index[&p.merge(x, y)], i));
            }
        }
    }
    let labels = partitions
        .iter()
        .map(|p| p.label_with(b.atoms(), ","))
        .collect();
    let poset = FinPoset::from_covers(labels, covers)?;
    Ok(SubalgebraLattice {
        base: b.clone(),
        poset,
        partitions,
        index,
    })
}

/// Element set of the subalgebra whose atoms are the unions of the blocks of `pi`.
pub fn subalgebra_of_partition(b: &FinBool, pi: &Partition) -> Result<Vec<Elem>> {
    if pi.ground_size() != b.num_atoms() {
        return Err(Error::usage(format!(
            "partition of {} points given for an algebra with {} atoms",
            pi.ground_size(),
            b.num_atoms()
        )));
    }
    Partition::from_blocks(b.num_atoms(), pi.blocks().to_vec())?;
    Ok(elements_of(pi))
}

/// Partition of the atoms of the subalgebra generated by `elems`: atoms are
/// grouped by which generators contain them.
pub fn generated_partition(b: &FinBool, elems: &[Elem]) -> Partition {
    let signature: Vec<Vec<bool>> = (0..b.num_atoms())
        .map(|i| elems.iter().map(|&e| e & (1 << i) != 0).collect())
        .collect();
    let mut ids: Vec<usize> = Vec::with_capacity(signature.len());
    let mut seen: Vec<&Vec<bool>> = Vec::new();
    for s in &signature {
        let id = match seen.iter().position(|t| *t == s) {
            Some(id) => id,
            None => {
                seen.push(s);
                seen.len() - 1
            }
        };
        ids.push(id);
    }
    Partition::from_assignment(&ids)
}

/// The partition describing a subalgebra given by its elements, or a usage
/// error if the set is not closed under the operations.
pub fn partition_of_elements(b: &FinBool, elems: &[Elem]) -> Result<Partition> {
    if let Some(&e) = elems.iter().find(|&&e| !b.contains(e)) {
        return Err(Error::usage(format!(
            "element {e:#b} is outside the algebra"
        )));
    }
    let mut distinct = elems.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let p = generated_partition(b, &distinct);
    // Every element is a union of signature classes, so closure is a count.
    if distinct.len() as u64 != 1u64 << p.num_blocks() {
        return Err(Error::usage("element set is not a Boolean subalgebra"));
    }
    Ok(p)
}

/// The direct image `f[A]` of a subalgebra of the source.
pub fn direct_image(f: &BoolHom, a: &Partition) -> Result<Partition> {
    if a.ground_size() != f.source().num_atoms() {
        return Err(Error::usage(
            "subalgebra does not belong to the source algebra",
        ));
    }
    let blocks: Vec<Elem> = a
        .blocks()
        .iter()
        .map(|&blk| f.apply(blk))
        .filter(|&m| m != 0)
        .collect();
    Partition::from_blocks(f.target().num_atoms(), blocks)
}

/// Subalgebra generated by the union of two subalgebras.
pub fn join_subalgebras(a: &Partition, c: &Partition) -> Partition {
    a.common_refinement(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force closure enumeration: every subset of elements containing
    /// 0 and 1 and closed under complement and meet.
    fn brute_force_subalgebra_count(b: &FinBool) -> usize {
        let size = b.size() as usize;
        let mut count = 0;
        for sel in 0u64..(1u64 << size) {
            let has = |x: Elem| sel & (1 << x) != 0;
            if !has(0) || !has(b.one()) {
                continue;
            }
            let closed = b.elements().filter(|&x| has(x)).all(|x| {
                has(b.complement(x)) && b.elements().filter(|&y| has(y)).all(|y| has(x & y))
            });
            if closed {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn subalgebra_counts_match_brute_force() {
        for n in 1..=3 {
            let b = FinBool::new((0..n).map(|i| format!("a{i}")).collect()).unwrap();
            let sub = subalgebras(&b).unwrap();
            assert_eq!(sub.len(), brute_force_subalgebra_count(&b), "n = {n}");
        }
        // frozen from the oracle above: 1, 2, 5
        let counts: Vec<usize> = (1..=3)
            .map(|n| {
                subalgebras(&FinBool::new((0..n).map(|i| format!("a{i}")).collect()).unwrap())
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(counts, vec![1, 2, 5]);
    }

    #[test]
    fn bounds_of_the_subalgebra_lattice() {
        let b = FinBool::of(&["a", "b", "c"]);
        let sub = subalgebras(&b).unwrap();
        assert_eq!(sub.carrier(sub.bottom()), vec![0, b.one()]);
        assert_eq!(sub.carrier(sub.top()).len(), 8);
        assert_eq!(sub.poset().bottom(), Some(sub.bottom()));
        assert_eq!(sub.poset().top(), Some(sub.top()));
    }

    #[test]
    fn partition_examples() {
        let b = FinBool::of(&["a", "b", "c"]);
        assert_eq!(
            subalgebra_of_partition(&b, &Partition::singletons(3))
                .unwrap()
                .len(),
            8
        );
        assert_eq!(
            subalgebra_of_partition(&b, &Partition::single_block(3)).unwrap(),
            vec![0, 0b111]
        );
        let ab_c = Partition::from_blocks(3, vec![0b011, 0b100]).unwrap();
        assert_eq!(
            subalgebra_of_partition(&b, &ab_c).unwrap(),
            vec![0, 0b011, 0b100, 0b111]
        );
        assert!(subalgebra_of_partition(&b, &Partition::singletons(2)).is_err());
    }

    #[test]
    fn closure_detection() {
        let b = FinBool::of(&["a", "b", "c"]);
        assert!(partition_of_elements(&b, &[0, 0b001, 0b110, 0b111]).is_ok());
        assert!(partition_of_elements(&b, &[0, 0b001, 0b111]).is_err());
        assert!(partition_of_elements(&b, &[0, 0b001, 0b010, 0b111]).is_err());
    }

    #[test]
    fn direct_image_examples() {
        let two = FinBool::of(&["a", "b"]);
        let three = FinBool::of(&["x", "y", "z"]);
        // a ↦ x+y, b ↦ z
        let f = BoolHom::new(two.clone(), three.clone(), vec![0b011, 0b100]).unwrap();
        let img = direct_image(&f, &Partition::singletons(2)).unwrap();
        assert_eq!(
            subalgebra_of_partition(&three, &img).unwrap(),
            vec![0, 0b011, 0b100, 0b111]
        );
        let id = BoolHom::identity(&three);
        let p = Partition::from_blocks(3, vec![0b101, 0b010]).unwrap();
        assert_eq!(direct_image(&id, &p).unwrap(), p);
        assert!(direct_image(&f, &p).is_err());
    }

    #[test]
    fn too_many_atoms() {
        let b = FinBool::new((0..7).map(|i| format!("a{i}")).collect()).unwrap();
        assert!(matches!(subalgebras(&b), Err(Error::Resource(_))));
    }
}
