use super::PieceBool;
use crate::boolalg::{BoolHom, Elem};
use crate::error::{Error, Result};

/// A morphism of piecewise Boolean algebras, given on carriers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceBoolHom {
    source: PieceBool,
    target: PieceBool,
    map: Vec<usize>,
}

impl PieceBoolHom {
    /// Checks that every block of the source lands inside a block of the
    /// target and that the induced block map is a Boolean homomorphism.
    /// That covers commeasurability, bounds, negation and meets.
    pub fn new(source: PieceBool, target: PieceBool, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::usage(format!(
                "map has {} entries for {} carrier elements",
                map.len(),
                source.len()
            )));
        }
        if let Some(&y) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::usage(format!(
                "map value {y} is outside the target carrier"
            )));
        }
        for (bi, b) in source.blocks().iter().enumerate() {
            let images: Vec<usize> = b.carrier_set().iter().map(|&c| map[c]).collect();
            let tj = target.block_containing(&images).ok_or_else(|| {
                Error::usage(format!(
                    "block {bi} is not sent into a single block: commeasurability is lost"
                ))
            })?;
            let tb = target.block(tj);
            let atom_images: Vec<Elem> = b
                .atom_labels()
                .iter()
                .map(|&c| tb.mask_of(map[c]).expect("image lies in the block"))
                .collect();
            let h = BoolHom::new(b.algebra().clone(), tb.algebra().clone(), atom_images).map_err(
                |e| {
                    Error::usage(format!(
                        "block {bi}: atom images do not give a homomorphism ({e})"
                    ))
                },
            )?;
            for m in b.algebra().elements() {
                if map[b.label(m)] != tb.label(h.apply(m)) {
                    return Err(Error::usage(format!(
                        "block {bi}: {} is not sent to the join of its atoms' images",
                        source.label(b.label(m))
                    )));
                }
            }
        }
        Ok(PieceBoolHom {
            source,
            target,
            map,
        })
    }

    pub fn identity(p: &PieceBool) -> Self {
        PieceBoolHom {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.len()).collect(),
        }
    }

    /// Looks the map up by carrier labels.
    pub fn from_labels<S: AsRef<str>>(
        source: PieceBool,
        target: PieceBool,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut map = vec![usize::MAX; source.len()];
        for (x, y) in pairs {
            let (x, y) = (x.as_ref(), y.as_ref());
            let i = source
                .index_of(x)
                .ok_or_else(|| Error::usage(format!("unknown source element {x:?}")))?;
            let j = target
                .index_of(y)
                .ok_or_else(|| Error::usage(format!("unknown target element {y:?}")))?;
            if map[i] != usize::MAX && map[i] != j {
                return Err(Error::usage(format!("element {x:?} is mapped twice")));
            }
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(Error::usage(format!(
                "no image given for {:?}",
                source.label(i)
            )));
        }
        Self::new(source, target, map)
    }

    /// Inclusion of block `i` of `p`, viewed as a one-block algebra with the
    /// same carrier labels.
    pub fn block_inclusion(p: &PieceBool, i: usize) -> Result<Self> {
        let b = p.block(i);
        let names: Vec<String> = b.labels.iter().map(|&c| p.label(c).to_string()).collect();
        let mut spec = super::BlockSpec::new(b.algebra().atoms().to_vec());
        for m in b.algebra().elements() {
            spec.renames.push((m, names[m as usize].clone()));
        }
        let single = PieceBool::glue(&[spec])?;
        let map = (0..single.len())
            .map(|c| p.index_of(single.label(c)).expect("same labels"))
            .collect();
        Self::new(single, p.clone(), map)
    }

    pub fn source(&self) -> &PieceBool {
        &self.source
    }

    pub fn target(&self) -> &PieceBool {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, c: usize) -> usize {
        self.map[c]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PieceBoolHom) -> Result<Self> {
        if self.target != other.source {
            return Err(Error::usage("composing morphisms with mismatched algebras"));
        }
        let map = self.map.iter().map(|&y| other.map[y]).collect();
        Ok(PieceBoolHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map,
        })
    }

    /// Bijective with a structure-preserving inverse.
    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_ok()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.source.len() != self.target.len() {
            return Err(Error::usage("carriers differ in size"));
        }
        let mut inv = vec![usize::MAX; self.target.len()];
        for (x, &y) in self.map.iter().enumerate() {
            if inv[y] != usize::MAX {
                return Err(Error::usage("map is not injective"));
            }
            inv[y] = x;
        }
        Self::new(self.target.clone(), self.source.clone(), inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pba::BlockSpec;

    fn mo2() -> PieceBool {
        PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).unwrap()
    }

    #[test]
    fn collapsing_a_block() {
        let p = mo2();
        let four = PieceBool::glue(&[BlockSpec::of(&["a", "na"])]).unwrap();
        let f = PieceBoolHom::from_labels(
            p.clone(),
            four.clone(),
            &[
                ("0", "0"),
                ("1", "1"),
                ("a", "a"),
                ("na", "na"),
                ("b", "0"),
                ("nb", "1"),
            ],
        )
        .unwrap();
        assert!(!f.is_isomorphism());
        // sending b and nb to commeasurable but non-complementary elements fails
        assert!(PieceBoolHom::from_labels(
            p,
            four,
            &[
                ("0", "0"),
                ("1", "1"),
                ("a", "a"),
                ("na", "na"),
                ("b", "a"),
                ("nb", "a")
            ],
        )
        .is_err());
    }

    #[test]
    fn commeasurability_must_be_preserved() {
        // a four-element algebra into MO2, sending x to a and ¬x to nb: the
        // images are not commeasurable
        let four = PieceBool::glue(&[BlockSpec::of(&["x", "nx"])]).unwrap();
        let err = PieceBoolHom::from_labels(
            four,
            mo2(),
            &[("0", "0"), ("1", "1"), ("x", "a"), ("nx", "nb")],
        )
        .unwrap_err();
        assert!(err.to_string().contains("commeasurability"));
    }

    #[test]
    fn swap_is_an_isomorphism() {
        let p = mo2();
        let f = PieceBoolHom::from_labels(
            p.clone(),
            p.clone(),
            &[
                ("0", "0"),
                ("1", "1"),
                ("a", "b"),
                ("na", "nb"),
                ("b", "a"),
                ("nb", "na"),
            ],
        )
        .unwrap();
        assert!(f.is_isomorphism());
        assert_eq!(f.then(&f).unwrap(), PieceBoolHom::identity(&p));
    }

    #[test]
    fn block_inclusion_is_injective() {
        let p = mo2();
        let inc = PieceBoolHom::block_inclusion(&p, 1).unwrap();
        let mut img: Vec<&str> = inc.map().iter().map(|&c| p.label(c)).collect();
        img.sort();
        assert_eq!(img, vec!["0", "1", "b", "nb"]);
    }
}
