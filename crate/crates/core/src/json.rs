//! JSON forms of the core types. Every form round-trips:
//! `from_repr(to_repr(x)) == x`.

use std::collections::{BTreeMap, HashMap};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::boolalg::{BoolHom, Elem, FinBool};
use crate::diagram::PBDiagram;
use crate::error::{Error, Result};
use crate::lattice::FinPoset;
use crate::orient::{parse_side, Orientation, NP, P};
use crate::pba::{BlockParts, PieceBool, PieceBoolHom, PieceBoolParts};

pub trait Json: Sized {
    type Repr: Serialize + DeserializeOwned;

    fn to_repr(&self) -> Self::Repr;

    fn from_repr(repr: Self::Repr) -> Result<Self>;

    fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_repr()).expect("plain data serialises")
    }

    fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_repr()).expect("plain data serialises")
    }

    fn from_json_str(s: &str) -> Result<Self> {
        Self::from_repr(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl Json for FinPoset {
    type Repr = PosetJson;

    fn to_repr(&self) -> PosetJson {
        PosetJson {
            elements: self.labels().to_vec(),
            covers: self
                .covers()
                .iter()
                .map(|&(a, b)| (self.label(a).to_string(), self.label(b).to_string()))
                .collect(),
        }
    }

    fn from_repr(r: PosetJson) -> Result<Self> {
        FinPoset::new(r.elements, &r.covers)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoolJson {
    pub atoms: Vec<String>,
}

impl Json for FinBool {
    type Repr = BoolJson;

    fn to_repr(&self) -> BoolJson {
        BoolJson {
            atoms: self.atoms().to_vec(),
        }
    }

    fn from_repr(r: BoolJson) -> Result<Self> {
        FinBool::new(r.atoms)
    }
}

/// `atom_images` maps each source atom to the sorted target atoms below its
/// image; an atom sent to 0 maps to `[]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomJson {
    pub source: BoolJson,
    pub target: BoolJson,
    pub atom_images: BTreeMap<String, Vec<String>>,
}

impl Json for BoolHom {
    type Repr = HomJson;

    fn to_repr(&self) -> HomJson {
        let (s, t) = (self.source(), self.target());
        let atom_images = (0..s.num_atoms())
            .map(|i| {
                let mut labels = t.element_labels(self.apply(1 << i));
                labels.sort();
                (s.atoms()[i].clone(), labels)
            })
            .collect();
        HomJson {
            source: s.to_repr(),
            target: t.to_repr(),
            atom_images,
        }
    }

    fn from_repr(r: HomJson) -> Result<Self> {
        let (s, t) = (FinBool::from_repr(r.source)?, FinBool::from_repr(r.target)?);
        if r.atom_images.len() != s.num_atoms() {
            return Err(Error::usage("atom_images must list every source atom once"));
        }
        let images = s
            .atoms()
            .iter()
            .map(|a| {
                let labels = r
                    .atom_images
                    .get(a)
                    .ok_or_else(|| Error::usage(format!("no image for atom {a:?}")))?;
                t.element_from_labels(labels)
            })
            .collect::<Result<_>>()?;
        BoolHom::new(s, t, images)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockJson {
    pub atoms_of_block: Vec<String>,
    /// Sorted, comma-joined atom subset (`""` for 0) to carrier label.
    pub element_labels: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PbaJson {
    pub elements: Vec<String>,
    pub zero: String,
    pub one: String,
    pub negation: BTreeMap<String, String>,
    pub blocks: Vec<BlockJson>,
}

fn subset_key(atoms: &[String], m: Elem) -> String {
    let mut v: Vec<&str> = (0..atoms.len())
        .filter(|&i| m & (1 << i) != 0)
        .map(|i| atoms[i].as_str())
        .collect();
    v.sort_unstable();
    v.join(",")
}

impl Json for PieceBool {
    type Repr = PbaJson;

    fn to_repr(&self) -> PbaJson {
        let parts = self.parts();
        PbaJson {
            elements: parts.carrier,
            zero: parts.zero,
            one: parts.one,
            negation: parts.negation.into_iter().collect(),
            blocks: parts
                .blocks
                .into_iter()
                .map(|b| BlockJson {
                    element_labels: b
                        .labels
                        .iter()
                        .enumerate()
                        .map(|(m, l)| (subset_key(&b.atoms, m as Elem), l.clone()))
                        .collect(),
                    atoms_of_block: b.atoms,
                })
                .collect(),
        }
    }

    fn from_repr(r: PbaJson) -> Result<Self> {
        let blocks = r
            .blocks
            .into_iter()
            .map(|b| {
                let n = b.atoms_of_block.len();
                if n >= 32 {
                    return Err(Error::resource(format!("block with {n} atoms")));
                }
                let keys: HashMap<String, Elem> = (0..1u64 << n)
                    .map(|m| (subset_key(&b.atoms_of_block, m), m))
                    .collect();
                let mut labels = vec![None; 1 << n];
                for (k, v) in b.element_labels {
                    let m = *keys.get(&k).ok_or_else(|| {
                        Error::usage(format!("{k:?} is not a subset of the block's atoms"))
                    })?;
                    labels[m as usize] = Some(v);
                }
                let labels = labels
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::usage("a block must label every atom subset"))?;
                Ok(BlockParts {
                    atoms: b.atoms_of_block,
                    labels,
                })
            })
            .collect::<Result<_>>()?;
        PieceBool::new(PieceBoolParts {
            carrier: r.elements,
            zero: r.zero,
            one: r.one,
            negation: r.negation.into_iter().collect(),
            blocks,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PbaHomJson {
    pub source: PbaJson,
    pub target: PbaJson,
    pub map: BTreeMap<String, String>,
}

impl Json for PieceBoolHom {
    type Repr = PbaHomJson;

    fn to_repr(&self) -> PbaHomJson {
        let (s, t) = (self.source(), self.target());
        PbaHomJson {
            source: s.to_repr(),
            target: t.to_repr(),
            map: (0..s.len())
                .map(|c| (s.label(c).to_string(), t.label(self.apply(c)).to_string()))
                .collect(),
        }
    }

    fn from_repr(r: PbaHomJson) -> Result<Self> {
        let (s, t) = (
            PieceBool::from_repr(r.source)?,
            PieceBool::from_repr(r.target)?,
        );
        let pairs: Vec<(&str, &str)> = r
            .map
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        PieceBoolHom::from_labels(s, t, &pairs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    pub hom: HomJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub poset: PosetJson,
    pub algebras: BTreeMap<String, BoolJson>,
    pub edges: Vec<EdgeJson>,
}

impl Json for PBDiagram {
    type Repr = DiagramJson;

    fn to_repr(&self) -> DiagramJson {
        let l = self.base();
        DiagramJson {
            poset: l.to_repr(),
            algebras: (0..l.len())
                .map(|x| (l.label(x).to_string(), self.algebra(x).to_repr()))
                .collect(),
            edges: self
                .edges()
                .iter()
                .map(|(&(x, y), h)| EdgeJson {
                    from: l.label(x).into(),
                    to: l.label(y).into(),
                    hom: h.to_repr(),
                })
                .collect(),
        }
    }

    fn from_repr(r: DiagramJson) -> Result<Self> {
        let l = FinPoset::from_repr(r.poset)?;
        let mut algebras = r.algebras;
        let algs = l
            .labels()
            .iter()
            .map(|x| {
                let a = algebras
                    .remove(x)
                    .ok_or_else(|| Error::usage(format!("no algebra at {x:?}")))?;
                FinBool::from_repr(a)
            })
            .collect::<Result<_>>()?;
        if let Some(x) = algebras.keys().next() {
            return Err(Error::usage(format!(
                "algebra given at unknown point {x:?}"
            )));
        }
        let mut edges = BTreeMap::new();
        for e in r.edges {
            let key = (l.require(&e.from)?, l.require(&e.to)?);
            if edges.insert(key, BoolHom::from_repr(e.hom)?).is_some() {
                return Err(Error::usage(format!(
                    "two edges from {:?} to {:?}",
                    e.from, e.to
                )));
            }
        }
        PBDiagram::new(l, algs, edges)
    }
}

/// A choice is one element name, or, for an atom whose covers fall into
/// several groups, one name per reference cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChoiceJson {
    One(String),
    PerCover(BTreeMap<String, String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrientationJson {
    pub poset: PosetJson,
    pub choice: BTreeMap<String, ChoiceJson>,
    pub maximal_defaults: Vec<String>,
    /// Names of the two atoms of `F(a)` when they are not `p`, `np`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<BTreeMap<String, [String; 2]>>,
}

impl Json for Orientation {
    type Repr = OrientationJson;

    fn to_repr(&self) -> OrientationJson {
        let l = self.domain();
        let mut choice = BTreeMap::new();
        let mut names = BTreeMap::new();
        let mut canonical = true;
        for &a in self.atoms() {
            let n = self.names(a).expect("atom").clone();
            canonical &= n[0] == "p" && n[1] == "np";
            names.insert(l.label(a).to_string(), n);
            let groups = self.groups(a).expect("atom");
            let label = |g| self.choice_label(a, g).expect("atom").to_string();
            match groups.len() {
                0 => choice.insert(
                    l.label(a).to_string(),
                    ChoiceJson::One(self.choice_label(a, 0).unwrap_or("p").to_string()),
                ),
                1 => choice.insert(l.label(a).to_string(), ChoiceJson::One(label(0))),
                _ => choice.insert(
                    l.label(a).to_string(),
                    ChoiceJson::PerCover(
                        groups
                            .iter()
                            .enumerate()
                            .map(|(g, c)| (l.label(c[0]).to_string(), label(g)))
                            .collect(),
                    ),
                ),
            };
        }
        OrientationJson {
            poset: l.to_repr(),
            choice,
            maximal_defaults: self
                .maximal_defaults()
                .iter()
                .map(|&a| l.label(a).to_string())
                .collect(),
            elements: (!canonical).then_some(names),
        }
    }

    fn from_repr(r: OrientationJson) -> Result<Self> {
        let l = FinPoset::from_repr(r.poset)?;
        let mut atoms = l.atoms();
        atoms.sort_unstable();
        let mut given = r.elements.unwrap_or_default();
        let mut choice = r.choice;
        let mut sides = Vec::with_capacity(atoms.len());
        let mut names = Vec::with_capacity(atoms.len());
        for &a in &atoms {
            let label = l.label(a);
            let n = given
                .remove(label)
                .unwrap_or_else(|| ["p".to_string(), "np".to_string()]);
            let side = |v: &str| -> Result<Elem> {
                if v == n[0] {
                    Ok(P)
                } else if v == n[1] {
                    Ok(NP)
                } else {
                    parse_side(v)
                        .map_err(|_| Error::usage(format!("{v:?} is not an element of F({label})")))
                }
            };
            let groups = crate::orient::cover_groups(&l, a);
            let here = match (choice.remove(label), groups.len()) {
                (None, 0) => vec![P],
                (Some(ChoiceJson::One(v)), 0) => vec![side(&v)?],
                (None, _) => {
                    return Err(Error::usage(format!(
                        "orientation has no choice at atom {label}"
                    )))
                }
                (Some(ChoiceJson::One(v)), k) => vec![side(&v)?; k],
                (Some(ChoiceJson::PerCover(mut m)), _) => {
                    let v = groups
                        .iter()
                        .map(|g| {
                            let c = l.label(g[0]);
                            m.remove(c)
                                .ok_or_else(|| {
                                    Error::usage(format!(
                                        "no choice at {label} for the covers through {c}"
                                    ))
                                })
                                .and_then(|v| side(&v))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if let Some(c) = m.keys().next() {
                        return Err(Error::usage(format!(
                            "{c:?} is not a reference cover of {label}"
                        )));
                    }
                    if v.is_empty() {
                        vec![P]
                    } else {
                        v
                    }
                }
            };
            sides.push(here);
            names.push(n);
        }
        if let Some(a) = choice.keys().next().or(given.keys().next()) {
            return Err(Error::usage(format!("{a:?} is not an atom of the domain")));
        }
        for m in &r.maximal_defaults {
            let x = l.require(m)?;
            if !(l.is_atom(x) && l.is_maximal(x)) {
                return Err(Error::usage(format!("{m:?} is not a maximal atom")));
            }
        }
        Orientation::with_slots(l, sides, names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{functor_from_domain, pboold};
    use crate::lattice::partition_lattice;
    use crate::orient::{enumerate_orientations, orient_sub};
    use crate::pba::BlockSpec;

    fn roundtrip<T: Json + PartialEq + std::fmt::Debug>(x: &T) {
        let s = x.to_json_string();
        let back = T::from_json_str(&s).unwrap();
        assert_eq!(&back, x);
        assert_eq!(back.to_json_string(), s);
    }

    #[test]
    fn poset_format() {
        let p = partition_lattice(3).unwrap();
        roundtrip(&p);
        let v: serde_json::Value = serde_json::from_str(&p.to_json_string()).unwrap();
        assert_eq!(v["elements"].as_array().unwrap().len(), 5);
        assert_eq!(v["covers"][0].as_array().unwrap().len(), 2);
    }

    #[test]
    fn algebra_and_hom_formats() {
        let b = FinBool::of(&["a", "b", "c"]);
        roundtrip(&b);
        let two = FinBool::of(&["x", "y"]);
        let h = BoolHom::new(two, b.clone(), vec![0b011, 0b100]).unwrap();
        roundtrip(&h);
        assert_eq!(
            h.to_value()["atom_images"]["x"],
            serde_json::json!(["a", "b"])
        );
        let collapse = BoolHom::new(b, FinBool::of(&["1"]), vec![1, 0, 0]).unwrap();
        roundtrip(&collapse);
    }

    #[test]
    fn pba_format() {
        let mo2 =
            PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).unwrap();
        roundtrip(&mo2);
        let v = mo2.to_value();
        assert_eq!(v["blocks"][0]["element_labels"][""], "0");
        assert_eq!(v["blocks"][0]["element_labels"]["a,na"], "1");
        assert_eq!(v["negation"]["a"], "na");
        roundtrip(&PieceBool::from_bool(&FinBool::of(&["a", "b", "c", "d"])));
    }

    #[test]
    fn invalid_pba_is_rejected_on_load() {
        let mut r = PieceBool::from_bool(&FinBool::of(&["a", "b"])).to_repr();
        r.negation.insert("a".into(), "a".into());
        assert!(matches!(PieceBool::from_repr(r), Err(Error::Structural(_))));
        assert!(matches!(
            PieceBool::from_json_str("{\"elements\": 3}"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn diagram_and_orientation_formats() {
        let l = partition_lattice(3).unwrap().dual();
        for o in enumerate_orientations(&l) {
            roundtrip(&o);
            roundtrip(&functor_from_domain(&l, &o).unwrap());
        }
        let mo2 =
            PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).unwrap();
        let o = orient_sub(&mo2).unwrap();
        let v = o.to_value();
        assert_eq!(v["maximal_defaults"].as_array().unwrap().len(), 2);
        assert!(v["elements"].is_object());
        roundtrip(&o);
        roundtrip(&pboold(&mo2).unwrap().diagram);
    }

    #[test]
    fn orientation_per_cover_choices() {
        let first = BlockSpec::of(&["x", "u", "v"]).rename(&["u", "v"], "nx");
        let second = BlockSpec::of(&["nx", "s", "t"]).rename(&["s", "t"], "x");
        let p = PieceBool::glue(&[first, second]).unwrap();
        let o = orient_sub(&p).unwrap();
        let v = o.to_value();
        assert!(v["choice"]
            .as_object()
            .unwrap()
            .values()
            .any(|c| c.is_object()));
        roundtrip(&o);
    }
}
