//! Finite Boolean algebras as powersets of their atoms.
//!
//! An element is a bitmask over atom indices; `0` is the empty mask and `1`
//! the full one. Homomorphisms are stored by the images of source atoms.

mod lift;
mod sub;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::partition::full_mask;

pub use lift::{bool_iso_search, lift_sub_iso};
pub use sub::{
    direct_image, generated_partition, join_subalgebras, partition_of_elements,
    subalgebra_of_partition, subalgebras, SubalgebraLattice,
};

/// Element of a [`FinBool`]: the set of atoms below it.
pub type Elem = u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinBool {
    atoms: Vec<String>,
}

impl FinBool {
    pub fn new(atoms: Vec<String>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::usage("a Boolean algebra needs at least one atom"));
        }
        if atoms.len() > 63 {
            return Err(Error::resource("at most 63 atoms are supported"));
        }
        let mut seen = HashMap::new();
        for (i, a) in atoms.iter().enumerate() {
            if seen.insert(a.as_str(), i).is_some() {
                return Err(Error::usage(format!("duplicate atom label {a:?}")));
            }
        }
        Ok(FinBool { atoms })
    }

    /// Convenience constructor from string slices; panics on invalid input.
    pub fn of(atoms: &[&str]) -> Self {
        Self::new(atoms.iter().map(|s| s.to_string()).collect()).expect("valid atom labels")
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Number of elements, `2^atoms`.
    pub fn size(&self) -> u64 {
        1u64 << self.atoms.len()
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        full_mask(self.atoms.len())
    }

    pub fn complement(&self, x: Elem) -> Elem {
        self.one() & !x
    }

    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        x & y
    }

    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        x | y
    }

    pub fn contains(&self, x: Elem) -> bool {
        x & !self.one() == 0
    }

    pub fn is_atom(&self, x: Elem) -> bool {
        x.count_ones() == 1 && self.contains(x)
    }

    pub fn atom(&self, i: usize) -> Elem {
        1 << i
    }

    pub fn atom_index(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    /// All elements in mask order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size()
    }

    /// Sorted atom labels of an element.
    pub fn element_labels(&self, x: Elem) -> Vec<String> {
        let mut v: Vec<String> = (0..self.atoms.len())
            .filter(|&i| x & (1 << i) != 0)
            .map(|i| self.atoms[i].clone())
            .collect();
        v.sort();
        v
    }

    pub fn element_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Elem> {
        let mut x = 0;
        for l in labels {
            let i = self
                .atom_index(l.as_ref())
                .ok_or_else(|| Error::usage(format!("unknown atom {:?}", l.as_ref())))?;
            x |= 1 << i;
        }
        Ok(x)
    }

    /// Human-readable element name: `0`, `1`, or atom labels joined by `+`.
    pub fn element_name(&self, x: Elem) -> String {
        if x == 0 {
            "0".into()
        } else if x == self.one() {
            "1".into()
        } else {
            (0..self.atoms.len())
                .filter(|&i| x & (1 << i) != 0)
                .map(|i| self.atoms[i].as_str())
                .collect::<Vec<_>>()
                .join("+")
        }
    }
}

/// A Boolean algebra homomorphism, determined by where the source atoms go.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolHom {
    source: FinBool,
    target: FinBool,
    images: Vec<Elem>,
}

impl BoolHom {
    /// The images of source atoms must be pairwise disjoint and join to `1`;
    /// that is exactly when the induced map preserves `0, 1, ¬, ∧, ∨`.
    pub fn new(source: FinBool, target: FinBool, images: Vec<Elem>) -> Result<Self> {
        if images.len() != source.num_atoms() {
            return Err(Error::usage("one image per source atom required"));
        }
        let mut acc = 0;
        for (i, &img) in images.iter().enumerate() {
            if !target.contains(img) {
                return Err(Error::usage(format!(
                    "image of atom {} leaves the target",
                    source.atoms[i]
                )));
            }
            if acc & img != 0 {
                return Err(Error::usage(format!(
                    "image of atom {} overlaps an earlier image",
                    source.atoms[i]
                )));
            }
            acc |= img;
        }
        if acc != target.one() {
            return Err(Error::usage("atom images do not join to the top"));
        }
        Ok(BoolHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(b: &FinBool) -> Self {
        let images = (0..b.num_atoms()).map(|i| 1 << i).collect();
        BoolHom {
            source: b.clone(),
            target: b.clone(),
            images,
        }
    }

    /// The unique homomorphism out of the two-element algebra.
    pub fn from_two(source: &FinBool, target: &FinBool) -> Result<Self> {
        if source.num_atoms() != 1 {
            return Err(Error::usage("source is not the two-element algebra"));
        }
        Self::new(source.clone(), target.clone(), vec![target.one()])
    }

    pub fn source(&self) -> &FinBool {
        &self.source
    }

    pub fn target(&self) -> &FinBool {
        &self.target
    }

    pub fn atom_images(&self) -> &[Elem] {
        &self.images
    }

    pub fn apply(&self, x: Elem) -> Elem {
        let mut out = 0;
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out |= self.images[i];
            rest &= rest - 1;
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        self.images.iter().all(|&m| m != 0)
    }

    /// Atom images partition the target atoms, so onto means every nonzero
    /// image is a single atom.
    pub fn is_surjective(&self) -> bool {
        self.images.iter().all(|&m| m.count_ones() <= 1)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.num_atoms() == self.target.num_atoms() && self.is_injective()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &BoolHom) -> Result<BoolHom> {
        if self.target != other.source {
            return Err(Error::usage(
                "composing homomorphisms with mismatched algebras",
            ));
        }
        let images = self.images.iter().map(|&m| other.apply(m)).collect();
        Ok(BoolHom {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
        })
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<BoolHom> {
        if !self.is_isomorphism() {
            return Err(Error::usage("only isomorphisms have inverses"));
        }
        let mut images = vec![0; self.target.num_atoms()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img.trailing_zeros() as usize] = 1 << i;
        }
        Ok(BoolHom {
            source: self.target.clone(),
            target: self.source.clone(),
            images,
        })
    }

    /// Same map with a relabelled source or target (atom order preserved).
    pub fn with_algebras(&self, source: FinBool, target: FinBool) -> Result<BoolHom> {
        BoolHom::new(source, target, self.images.clone())
    }
}
