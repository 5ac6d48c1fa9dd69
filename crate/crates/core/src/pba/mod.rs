//! Finite piecewise Boolean algebras stored as a family of blocks.
//!
//! A block is a finite Boolean algebra whose elements are labelled by
//! carrier identifiers. Two carrier elements are commeasurable when some
//! block holds both; meets and joins are defined blockwise. Validation
//! checks that the blockwise operations agree and that every set of
//! pairwise commeasurable elements fits inside a single block.

mod hom;
mod iso;
mod ortho;
mod sub;

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::boolalg::{Elem, FinBool};
use crate::error::{Error, Result};
use crate::limits::MAX_BLOCK_ATOMS;

pub use hom::PieceBoolHom;
pub use iso::{all_pba_isos, lift_domain_iso, pba_iso_search};
pub use ortho::{is_transitive_joined, OrthoReport};
pub use sub::{sub, sub_on_hom, SubPoset};

/// Carriers larger than this are not checked for the clique axiom.
pub const MAX_CLIQUE_CARRIER: usize = 256;

/// A block: a Boolean algebra plus a carrier label for each of its elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    algebra: FinBool,
    labels: Vec<usize>,
    masks: HashMap<usize, Elem>,
}

impl Block {
    pub fn algebra(&self) -> &FinBool {
        &self.algebra
    }

    /// Carrier element at a given element of the block algebra.
    pub fn label(&self, x: Elem) -> usize {
        self.labels[x as usize]
    }

    /// Block element holding a carrier element, if present.
    pub fn mask_of(&self, c: usize) -> Option<Elem> {
        self.masks.get(&c).copied()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.masks.contains_key(&c)
    }

    /// Carrier elements of the block, sorted.
    pub fn carrier_set(&self) -> Vec<usize> {
        let mut v = self.labels.clone();
        v.sort_unstable();
        v
    }

    /// Carrier elements at the atoms of the block.
    pub fn atom_labels(&self) -> Vec<usize> {
        (0..self.algebra.num_atoms())
            .map(|i| self.labels[1 << i])
            .collect()
    }
}

/// Unvalidated description of a piecewise Boolean algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceBoolParts {
    pub carrier: Vec<String>,
    pub zero: String,
    pub one: String,
    /// `(x, ¬x)` pairs; must be total on the carrier.
    pub negation: Vec<(String, String)>,
    pub blocks: Vec<BlockParts>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockParts {
    pub atoms: Vec<String>,
    /// Carrier label for each block element, indexed by atom bitmask.
    pub labels: Vec<String>,
}

/// One violated invariant, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, invariant: &'static str, witness: impl Into<String>) {
        self.violations.push(Violation {
            invariant,
            witness: witness.into(),
        });
    }
}

#[derive(Clone, Debug)]
pub struct PieceBool {
    carrier: Vec<String>,
    index: HashMap<String, usize>,
    zero: usize,
    one: usize,
    negation: Vec<usize>,
    blocks: Vec<Block>,
    membership: Vec<Vec<(usize, Elem)>>,
    commeasurable: Vec<FixedBitSet>,
}

impl PartialEq for PieceBool {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier
            && self.zero == other.zero
            && self.one == other.one
            && self.negation == other.negation
            && self.blocks == other.blocks
    }
}

impl Eq for PieceBool {}

impl PieceBoolParts {
    /// Checks every invariant, collecting violations with witnesses.
    pub fn validate(&self) -> ValidationReport {
        match self.assemble() {
            Ok((p, mut report)) => {
                p.check_semantics(&mut report);
                report
            }
            Err(report) => report,
        }
    }

    /// Structural assembly; semantic checks are left to the caller.
    fn assemble(&self) -> std::result::Result<(PieceBool, ValidationReport), ValidationReport> {
        let mut report = ValidationReport::default();
        let mut index = HashMap::new();
        for (i, c) in self.carrier.iter().enumerate() {
            if c.is_empty() {
                report.push("carrier identifiers are nonempty", format!("position {i}"));
            }
            if index.insert(c.clone(), i).is_some() {
                report.push("carrier identifiers are unique", c.clone());
            }
        }
        let zero = index.get(&self.zero).copied();
        let one = index.get(&self.one).copied();
        if zero.is_none() {
            report.push("0 is a carrier element", self.zero.clone());
        }
        if one.is_none() {
            report.push("1 is a carrier element", self.one.clone());
        }
        if zero.is_some() && zero == one {
            report.push("0 and 1 are distinct", self.zero.clone());
        }

        let mut negation = vec![usize::MAX; self.carrier.len()];
        for (x, nx) in &self.negation {
            match (index.get(x), index.get(nx)) {
                (Some(&i), Some(&j)) => {
                    if negation[i] != usize::MAX {
                        report.push("negation is a function", x.clone());
                    }
                    negation[i] = j;
                }
                _ => report.push("negation stays in the carrier", format!("{x} -> {nx}")),
            }
        }
        for (i, &n) in negation.iter().enumerate() {
            if n == usize::MAX {
                report.push("negation is total", self.carrier[i].clone());
            }
        }

        let mut blocks = Vec::with_capacity(self.blocks.len());
        if self.blocks.is_empty() {
            report.push("there is at least one block", "no blocks");
        }
        for (bi, raw) in self.blocks.iter().enumerate() {
            if raw.atoms.len() > MAX_BLOCK_ATOMS {
                report.push(
                    "block size within cap",
                    format!("block {bi} has {} atoms", raw.atoms.len()),
                );
                continue;
            }
            let algebra = match FinBool::new(raw.atoms.clone()) {
                Ok(a) => a,
                Err(e) => {
                    report.push(
                        "block atoms form a Boolean algebra",
                        format!("block {bi}: {e}"),
                    );
                    continue;
                }
            };
            if raw.labels.len() as u64 != algebra.size() {
                report.push(
                    "every block element is labelled",
                    format!(
                        "block {bi} has {} labels for {} elements",
                        raw.labels.len(),
                        algebra.size()
                    ),
                );
                continue;
            }
            let mut labels = Vec::with_capacity(raw.labels.len());
            let mut masks = HashMap::new();
            for (m, l) in raw.labels.iter().enumerate() {
                match index.get(l) {
                    Some(&c) => {
                        if masks.insert(c, m as Elem).is_some() {
                            report.push("block labelling is injective", format!("block {bi}: {l}"));
                        }
                        labels.push(c);
                    }
                    None => {
                        report.push(
                            "block labels are carrier elements",
                            format!("block {bi}: {l}"),
                        );
                        labels.push(usize::MAX);
                    }
                }
            }
            if zero.is_some() && labels[0] != zero.unwrap() {
                report.push("0 is the bottom of every block", format!("block {bi}"));
            }
            if one.is_some() && labels[algebra.one() as usize] != one.unwrap() {
                report.push("1 is the top of every block", format!("block {bi}"));
            }
            blocks.push(Block {
                algebra,
                labels,
                masks,
            });
        }

        if !report.is_valid() {
            return Err(report);
        }
        let p = PieceBool::from_checked(
            self.carrier.clone(),
            index,
            zero.unwrap(),
            one.unwrap(),
            negation,
            blocks,
        );
        Ok((p, report))
    }
}

impl PieceBool {
    /// Validates and builds; the error lists every violation.
    pub fn new(parts: PieceBoolParts) -> Result<Self> {
        let report = parts.validate();
        if !report.is_valid() {
            let msg = report
                .violations
                .iter()
                .map(|v| format!("{} (witness: {})", v.invariant, v.witness))
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::structural(format!(
                "invalid piecewise Boolean algebra: {msg}"
            )));
        }
        Ok(parts.assemble().expect("validated").0)
    }

    fn from_checked(
        carrier: Vec<String>,
        index: HashMap<String, usize>,
        zero: usize,
        one: usize,
        negation: Vec<usize>,
        blocks: Vec<Block>,
    ) -> Self {
        let n = carrier.len();
        let mut membership = vec![Vec::new(); n];
        for (bi, b) in blocks.iter().enumerate() {
            for (m, &c) in b.labels.iter().enumerate() {
                membership[c].push((bi, m as Elem));
            }
        }
        let mut commeasurable = vec![FixedBitSet::with_capacity(n); n];
        for b in &blocks {
            let mut set = FixedBitSet::with_capacity(n);
            for &c in &b.labels {
                set.insert(c);
            }
            for &c in &b.labels {
                commeasurable[c].union_with(&set);
            }
        }
        PieceBool {
            carrier,
            index,
            zero,
            one,
            negation,
            blocks,
            membership,
            commeasurable,
        }
    }

    fn check_semantics(&self, report: &mut ValidationReport) {
        for (c, m) in self.membership.iter().enumerate() {
            if m.is_empty() {
                report.push("every element lies in a block", self.carrier[c].clone());
            }
        }
        for (bi, b) in self.blocks.iter().enumerate() {
            let one = b.algebra.one();
            for x in b.algebra.elements() {
                if self.negation[b.label(x)] != b.label(one & !x) {
                    report.push(
                        "negation agrees with block complements",
                        format!("block {bi}: ¬{} ", self.carrier[b.label(x)]),
                    );
                }
            }
        }
        for i in 0..self.blocks.len() {
            for j in i + 1..self.blocks.len() {
                let (bi, bj) = (&self.blocks[i], &self.blocks[j]);
                let shared: Vec<(Elem, Elem)> = bi
                    .labels
                    .iter()
                    .filter_map(|&c| Some((bi.mask_of(c)?, bj.mask_of(c)?)))
                    .collect();
                for &(xi, xj) in &shared {
                    for &(yi, yj) in &shared {
                        if bi.label(xi & yi) != bj.label(xj & yj) {
                            report.push(
                                "meets agree across blocks",
                                format!(
                                    "{} ∧ {} in blocks {i} and {j}",
                                    self.carrier[bi.label(xi)],
                                    self.carrier[bi.label(yi)]
                                ),
                            );
                        }
                    }
                }
                let si: FixedBitSet = bi.labels.iter().copied().collect();
                let sj: FixedBitSet = bj.labels.iter().copied().collect();
                if si.is_subset(&sj) || sj.is_subset(&si) {
                    report.push(
                        "blocks are maximal",
                        format!("blocks {i} and {j} are nested"),
                    );
                }
            }
        }
        if !report.is_valid() {
            return;
        }
        if self.carrier.len() > MAX_CLIQUE_CARRIER {
            report.push(
                "carrier within clique-check cap",
                format!("{} elements", self.carrier.len()),
            );
            return;
        }
        for clique in self.maximal_cliques() {
            let members: Vec<usize> = clique.ones().collect();
            if self.block_containing(&members).is_none() {
                let names: Vec<&str> = members.iter().map(|&c| self.carrier[c].as_str()).collect();
                report.push(
                    "pairwise commeasurable elements lie in one block",
                    format!("{{{}}}", names.join(", ")),
                );
            }
        }
    }

    /// Maximal cliques of the commeasurability graph (Bron–Kerbosch with pivot).
    fn maximal_cliques(&self) -> Vec<FixedBitSet> {
        let n = self.carrier.len();
        let mut out = Vec::new();
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        self.bron_kerbosch(
            FixedBitSet::with_capacity(n),
            all,
            FixedBitSet::with_capacity(n),
            &mut out,
        );
        out
    }

    fn bron_kerbosch(
        &self,
        r: FixedBitSet,
        mut p: FixedBitSet,
        mut x: FixedBitSet,
        out: &mut Vec<FixedBitSet>,
    ) {
        if p.is_clear() && x.is_clear() {
            out.push(r);
            return;
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| p.intersection(&self.commeasurable[u]).count())
            .unwrap();
        let mut np = self.commeasurable[pivot].clone();
        np.set(pivot, false);
        let candidates: Vec<usize> = p.difference(&np).collect();
        for v in candidates {
            let mut r2 = r.clone();
            r2.insert(v);
            let mut nv = self.commeasurable[v].clone();
            nv.set(v, false);
            let mut p2 = p.clone();
            p2.intersect_with(&nv);
            let mut x2 = x.clone();
            x2.intersect_with(&nv);
            self.bron_kerbosch(r2, p2, x2, out);
            p.set(v, false);
            x.insert(v);
        }
    }

    /// Lossless description, suitable for serialisation.
    pub fn parts(&self) -> PieceBoolParts {
        PieceBoolParts {
            carrier: self.carrier.clone(),
            zero: self.carrier[self.zero].clone(),
            one: self.carrier[self.one].clone(),
            negation: (0..self.carrier.len())
                .map(|i| {
                    (
                        self.carrier[i].clone(),
                        self.carrier[self.negation[i]].clone(),
                    )
                })
                .collect(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockParts {
                    atoms: b.algebra.atoms().to_vec(),
                    labels: b.labels.iter().map(|&c| self.carrier[c].clone()).collect(),
                })
                .collect(),
        }
    }

    /// A Boolean algebra as a one-block piecewise Boolean algebra, carrier
    /// labels given by [`FinBool::element_name`].
    pub fn from_bool(b: &FinBool) -> Self {
        Self::glue(&[BlockSpec::new(b.atoms().to_vec())]).expect("a Boolean algebra is valid")
    }

    /// Glues blocks along equal element names.
    ///
    /// Each block element is named by [`FinBool::element_name`] unless the
    /// spec renames it; equal names across blocks denote the same carrier
    /// element. Negation is read off the blocks.
    pub fn glue(blocks: &[BlockSpec]) -> Result<Self> {
        let mut carrier: Vec<String> = vec!["0".into(), "1".into()];
        let mut negation: Vec<(String, String)> = Vec::new();
        let mut raw = Vec::new();
        for spec in blocks {
            let algebra = FinBool::new(spec.atoms.clone())?;
            let name = |x: Elem| -> String {
                spec.renames
                    .iter()
                    .find(|(m, _)| *m == x)
                    .map(|(_, n)| n.clone())
                    .unwrap_or_else(|| algebra.element_name(x))
            };
            let labels: Vec<String> = algebra.elements().map(name).collect();
            for x in algebra.elements() {
                let l = &labels[x as usize];
                if !carrier.contains(l) {
                    carrier.push(l.clone());
                }
                if !negation.iter().any(|(a, _)| a == l) {
                    negation.push((l.clone(), labels[algebra.complement(x) as usize].clone()));
                }
            }
            raw.push(BlockParts {
                atoms: spec.atoms.clone(),
                labels,
            });
        }
        PieceBool::new(PieceBoolParts {
            carrier,
            zero: "0".into(),
            one: "1".into(),
            negation,
            blocks: raw,
        })
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn label(&self, c: usize) -> &str {
        &self.carrier[c]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn neg(&self, c: usize) -> usize {
        self.negation[c]
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    /// `(block, element)` positions of a carrier element.
    pub fn membership(&self, c: usize) -> &[(usize, Elem)] {
        &self.membership[c]
    }

    pub fn commeasurable(&self, x: usize, y: usize) -> bool {
        self.commeasurable[x].contains(y)
    }

    /// Some block containing every listed element.
    pub fn block_containing(&self, elems: &[usize]) -> Option<usize> {
        (0..self.blocks.len()).find(|&b| elems.iter().all(|&c| self.blocks[b].contains(c)))
    }

    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        let b = self.block_containing(&[x, y])?;
        let blk = &self.blocks[b];
        Some(blk.label(blk.mask_of(x)? & blk.mask_of(y)?))
    }

    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let b = self.block_containing(&[x, y])?;
        let blk = &self.blocks[b];
        Some(blk.label(blk.mask_of(x)? | blk.mask_of(y)?))
    }

    /// True iff any two elements are commeasurable.
    pub fn is_boolean(&self) -> bool {
        self.blocks.len() == 1
    }
}

/// Block description for [`PieceBool::glue`].
#[derive(Clone, Debug)]
pub struct BlockSpec {
    pub atoms: Vec<String>,
    pub renames: Vec<(Elem, String)>,
}

impl BlockSpec {
    pub fn new(atoms: Vec<String>) -> Self {
        BlockSpec {
            atoms,
            renames: Vec::new(),
        }
    }

    pub fn of(atoms: &[&str]) -> Self {
        Self::new(atoms.iter().map(|s| s.to_string()).collect())
    }

    /// Name the element made of the given atoms.
    pub fn rename(mut self, atoms: &[&str], name: &str) -> Self {
        let mask = atoms
            .iter()
            .map(|a| 1u64 << self.atoms.iter().position(|x| x == a).expect("known atom"))
            .fold(0, |acc, m| acc | m);
        self.renames.push((mask, name.to_string()));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_block_is_valid() {
        let p = PieceBool::from_bool(&FinBool::of(&["a", "b", "c"]));
        assert_eq!(p.len(), 8);
        assert!(p.is_boolean());
        let a = p.index_of("a").unwrap();
        let bc = p.index_of("b+c").unwrap();
        assert_eq!(p.neg(a), bc);
        assert_eq!(p.meet(a, bc), Some(p.zero()));
    }

    #[test]
    fn two_four_element_blocks_glued_at_bounds() {
        let p =
            PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).unwrap();
        assert_eq!(p.len(), 6);
        let (a, b) = (p.index_of("a").unwrap(), p.index_of("b").unwrap());
        assert!(!p.commeasurable(a, b));
        assert_eq!(p.meet(a, b), None);
    }

    #[test]
    fn inconsistent_negation_reported() {
        // Two blocks sharing `x`, but disagreeing on its complement.
        let parts = PieceBoolParts {
            carrier: ["0", "1", "x", "y", "z"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            zero: "0".into(),
            one: "1".into(),
            negation: vec![
                ("0".into(), "1".into()),
                ("1".into(), "0".into()),
                ("x".into(), "y".into()),
                ("y".into(), "x".into()),
                ("z".into(), "x".into()),
            ],
            blocks: vec![
                BlockParts {
                    atoms: vec!["p".into(), "q".into()],
                    labels: vec!["0".into(), "x".into(), "y".into(), "1".into()],
                },
                BlockParts {
                    atoms: vec!["p".into(), "q".into()],
                    labels: vec!["0".into(), "x".into(), "z".into(), "1".into()],
                },
            ],
        };
        let report = parts.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.invariant == "negation agrees with block complements"));
        assert!(PieceBool::new(parts).is_err());
    }

    #[test]
    fn triangle_of_blocks_breaks_the_clique_axiom() {
        // Three 8-element blocks pairwise sharing one atom: the three shared
        // atoms are pairwise commeasurable but no block holds all of them.
        let b1 = BlockSpec::of(&["x", "z", "u"])
            .rename(&["z", "u"], "nx")
            .rename(&["x", "u"], "nz");
        let b2 = BlockSpec::of(&["x", "y", "v"])
            .rename(&["y", "v"], "nx")
            .rename(&["x", "v"], "ny");
        let b3 = BlockSpec::of(&["y", "z", "w"])
            .rename(&["z", "w"], "ny")
            .rename(&["y", "w"], "nz");
        let err = PieceBool::glue(&[b1, b2, b3]).unwrap_err().to_string();
        assert!(
            err.contains("pairwise commeasurable elements lie in one block"),
            "{err}"
        );
    }

    #[test]
    fn nested_blocks_are_not_maximal() {
        let big = BlockSpec::of(&["a", "b", "c"]).rename(&["b", "c"], "na");
        let small = BlockSpec::of(&["a", "na"]);
        let err = PieceBool::glue(&[big, small]).unwrap_err().to_string();
        assert!(err.contains("blocks are maximal"), "{err}");
    }

    #[test]
    fn parts_round_trip() {
        let p = PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "c", "d"])])
            .unwrap();
        assert_eq!(PieceBool::new(p.parts()).unwrap(), p);
    }
}
