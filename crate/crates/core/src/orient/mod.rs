//! Orientations: a pointed four-element algebra at every atom of a domain,
//! enough to rebuild the whole diagram.
//!
//! `F(a)` at an atom has two atoms; a side is the mask `0b01` or `0b10` of
//! the chosen one. Canonical diagrams use `F(a)` with atoms `p`, `np`.

mod morphism;

use std::collections::BTreeMap;

use crate::boolalg::{Elem, FinBool};
use crate::diagram::{functor_from_domain, PBDiagram};
use crate::error::{Error, Result};
use crate::lattice::FinPoset;
use crate::pba::{sub, PieceBool};

pub use morphism::{
    canonical_form, extend_morphism, restrict_morphism, verify_cat_iso, CatIsoReport,
    OrientedDomainMorphism,
};

pub const P: Elem = 0b01;
pub const NP: Elem = 0b10;

/// The canonical four-element algebra at an atom.
pub fn atom_algebra() -> FinBool {
    FinBool::of(&["p", "np"])
}

/// The canonical two-element algebra at the bottom.
pub fn bottom_algebra() -> FinBool {
    FinBool::of(&["1"])
}

/// Upper covers of an atom grouped by having common upper bounds (the
/// transitive closure thereof); each group sorted, groups ordered by their
/// first cover, which is the group's reference cover.
pub fn cover_groups(l: &FinPoset, a: usize) -> Vec<Vec<usize>> {
    let mut covers = l.upper_covers(a).to_vec();
    covers.sort_unstable();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for y in covers {
        let meets: Vec<usize> = (0..groups.len())
            .filter(|&g| {
                groups[g]
                    .iter()
                    .any(|&w| l.up_set(w).intersection(l.up_set(y)).next().is_some())
            })
            .collect();
        let mut merged = vec![y];
        for &g in meets.iter().rev() {
            merged.extend(groups.remove(g));
        }
        merged.sort_unstable();
        groups.push(merged);
    }
    groups.sort_unstable_by_key(|g| g[0]);
    groups
}

/// A chosen atom of `F(a)` for every atom `a` and every group of its upper
/// covers: the element sent to an atom of `F(y)` at the group's reference
/// cover `y`. Maximal atoms have no covers and carry a flagged default.
#[derive(Clone, Debug)]
pub struct Orientation {
    domain: FinPoset,
    atoms: Vec<usize>,
    groups: Vec<Vec<Vec<usize>>>,
    /// One side per group, or one default at a maximal atom.
    sides: Vec<Vec<Elem>>,
    /// Names of the two atoms of `F(a)`, for display only.
    names: Vec<[String; 2]>,
}

/// Equality ignores display names and the values stored at maximal atoms,
/// which carry no information.
impl PartialEq for Orientation {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.atoms == other.atoms
            && (0..self.atoms.len())
                .all(|i| self.groups[i].is_empty() || self.sides[i] == other.sides[i])
    }
}

impl Eq for Orientation {}

fn canonical_names() -> [String; 2] {
    ["p".to_string(), "np".to_string()]
}

impl Orientation {
    /// `sides[i]` belongs to the i-th atom in index order and is used for
    /// every group of its covers.
    pub fn new(domain: FinPoset, sides: Vec<Elem>) -> Result<Self> {
        let mut atoms = domain.atoms();
        atoms.sort_unstable();
        if sides.len() != atoms.len() {
            return Err(Error::usage(format!(
                "orientation has {} choices for {} atoms",
                sides.len(),
                atoms.len()
            )));
        }
        let slots = atoms
            .iter()
            .zip(sides)
            .map(|(&a, s)| vec![s; cover_groups(&domain, a).len().max(1)])
            .collect();
        let n = atoms.len();
        Self::with_slots(domain, slots, vec![canonical_names(); n])
    }

    /// One side per group of covers of each atom, one at maximal atoms.
    pub fn with_slots(
        domain: FinPoset,
        sides: Vec<Vec<Elem>>,
        names: Vec<[String; 2]>,
    ) -> Result<Self> {
        let mut atoms = domain.atoms();
        atoms.sort_unstable();
        if sides.len() != atoms.len() || names.len() != atoms.len() {
            return Err(Error::usage(format!(
                "orientation has {} choices for {} atoms",
                sides.len(),
                atoms.len()
            )));
        }
        let groups: Vec<_> = atoms.iter().map(|&a| cover_groups(&domain, a)).collect();
        for (i, &a) in atoms.iter().enumerate() {
            if sides[i].len() != groups[i].len().max(1) {
                return Err(Error::usage(format!(
                    "atom {} needs {} choices, one per group of covers",
                    domain.label(a),
                    groups[i].len().max(1)
                )));
            }
            if sides[i].iter().any(|&s| s != P && s != NP) {
                return Err(Error::usage(format!(
                    "choice at {} is not an atom of the four-element algebra",
                    domain.label(a)
                )));
            }
        }
        Ok(Orientation {
            domain,
            atoms,
            groups,
            sides,
            names,
        })
    }

    /// Choices by labels, `p` or `np` for every atom; maximal atoms may be
    /// omitted and default to `p`.
    pub fn from_labels<S: AsRef<str>>(domain: FinPoset, choice: &[(S, S)]) -> Result<Self> {
        let mut atoms = domain.atoms();
        atoms.sort_unstable();
        let mut sides = vec![None; atoms.len()];
        for (a, v) in choice {
            let x = domain.require(a.as_ref())?;
            let i = atoms
                .iter()
                .position(|&t| t == x)
                .ok_or_else(|| Error::usage(format!("{} is not an atom", a.as_ref())))?;
            sides[i] = Some(parse_side(v.as_ref())?);
        }
        let sides = sides
            .iter()
            .zip(&atoms)
            .map(|(s, &a)| match s {
                Some(s) => Ok(*s),
                None if domain.is_maximal(a) => Ok(P),
                None => Err(Error::usage(format!(
                    "orientation has no choice at atom {}",
                    domain.label(a)
                ))),
            })
            .collect::<Result<_>>()?;
        Self::new(domain, sides)
    }

    pub fn domain(&self) -> &FinPoset {
        &self.domain
    }

    /// Atoms of the domain in index order.
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    fn position(&self, atom: usize) -> Result<usize> {
        self.atoms
            .iter()
            .position(|&a| a == atom)
            .ok_or_else(|| Error::usage(format!("{} is not an atom", self.domain.label(atom))))
    }

    pub fn groups(&self, atom: usize) -> Result<&[Vec<usize>]> {
        Ok(&self.groups[self.position(atom)?])
    }

    /// The side for group `g` of the covers of `atom`.
    pub fn side_in(&self, atom: usize, g: usize) -> Result<Elem> {
        self.sides[self.position(atom)?]
            .get(g)
            .copied()
            .ok_or_else(|| Error::usage(format!("{} has no group {g}", self.domain.label(atom))))
    }

    /// The side for the group containing `cover`.
    pub fn side_at(&self, atom: usize, cover: usize) -> Result<Elem> {
        let i = self.position(atom)?;
        let g = self.groups[i]
            .iter()
            .position(|g| g.contains(&cover))
            .ok_or_else(|| {
                Error::usage(format!(
                    "{} does not cover {}",
                    self.domain.label(cover),
                    self.domain.label(atom)
                ))
            })?;
        Ok(self.sides[i][g])
    }

    pub fn sides(&self, atom: usize) -> Result<&[Elem]> {
        Ok(&self.sides[self.position(atom)?])
    }

    /// Total number of binary choices.
    pub fn num_slots(&self) -> usize {
        self.sides.iter().map(Vec::len).sum()
    }

    /// Name of the chosen element of `F(atom)` for group `g`.
    pub fn choice_label(&self, atom: usize, g: usize) -> Result<&str> {
        let i = self.position(atom)?;
        let s = self.side_in(atom, g)?;
        Ok(&self.names[i][(s >> 1) as usize])
    }

    pub fn names(&self, atom: usize) -> Result<&[String; 2]> {
        Ok(&self.names[self.position(atom)?])
    }

    /// Maximal atoms: the choice there is an arbitrary flagged default.
    pub fn is_default(&self, atom: usize) -> bool {
        self.position(atom)
            .map(|i| self.groups[i].is_empty())
            .unwrap_or(false)
    }

    pub fn maximal_defaults(&self) -> Vec<usize> {
        self.atoms
            .iter()
            .zip(&self.groups)
            .filter(|(_, g)| g.is_empty())
            .map(|(&a, _)| a)
            .collect()
    }

    /// Same choices with names `p`, `np`.
    pub fn canonical(&self) -> Self {
        Orientation {
            names: vec![canonical_names(); self.atoms.len()],
            ..self.clone()
        }
    }
}

pub fn parse_side(v: &str) -> Result<Elem> {
    match v {
        "p" => Ok(P),
        "np" => Ok(NP),
        other => Err(Error::usage(format!(
            "unknown choice {other:?}; expected p or np"
        ))),
    }
}

/// All orientations, `2^slots` of them; bit `i` of the counter picks `np`
/// in slot `i`, slots running through atoms in index order and then groups.
pub fn enumerate_orientations(l: &FinPoset) -> impl Iterator<Item = Orientation> + '_ {
    let mut atoms = l.atoms();
    atoms.sort_unstable();
    let shape: Vec<usize> = atoms
        .iter()
        .map(|&a| cover_groups(l, a).len().max(1))
        .collect();
    let k: usize = shape.iter().sum();
    let n = atoms.len();
    (0u64..1 << k).map(move |bits| {
        let mut next = 0;
        let sides = shape
            .iter()
            .map(|&m| {
                (0..m)
                    .map(|_| {
                        next += 1;
                        if bits & (1 << (next - 1)) != 0 {
                            NP
                        } else {
                            P
                        }
                    })
                    .collect()
            })
            .collect();
        Orientation::with_slots(l.clone(), sides, vec![canonical_names(); n])
            .expect("every slot gets a side")
    })
}

/// The orientation of `Sub(P)`: at an atom `{0, x, ¬x, 1}`, for each group,
/// whichever of `x`, `¬x` is an atom of the reference cover.
pub fn orient_sub(p: &PieceBool) -> Result<Orientation> {
    let s = sub(p)?;
    let l = s.poset();
    let mut atoms = l.atoms();
    atoms.sort_unstable();
    let mut sides = Vec::with_capacity(atoms.len());
    let mut names = Vec::with_capacity(atoms.len());
    for &b in &atoms {
        let pair = [s.element(p, b, P), s.element(p, b, NP)];
        names.push(pair.map(|c| p.label(c).to_string()));
        let groups = cover_groups(l, b);
        let mut here = Vec::with_capacity(groups.len().max(1));
        for g in &groups {
            let c = g[0];
            let atoms_of_c: Vec<usize> = (0..s.num_atoms(c))
                .map(|i| s.element(p, c, 1 << i))
                .collect();
            here.push(
                match (atoms_of_c.contains(&pair[0]), atoms_of_c.contains(&pair[1])) {
                    (true, false) => P,
                    (false, true) => NP,
                    _ => {
                        return Err(Error::logic(format!(
                            "exactly one of the elements of {} must be an atom of {}",
                            l.label(b),
                            l.label(c)
                        )))
                    }
                },
            );
        }
        if groups.is_empty() {
            here.push(P);
        }
        sides.push(here);
    }
    Orientation::with_slots(l.clone(), sides, names)
}

/// The canonical diagram of an oriented domain. Built by
/// [`functor_from_domain`], which also checks that the other choice at each
/// atom edge breaks the orientation or fails to commute.
pub fn extend_to_diagram(l: &FinPoset, o: &Orientation) -> Result<PBDiagram> {
    functor_from_domain(l, o)
}

/// For every cover `a ⋖ y` of an atom, the atom of `F(a)` sent to an atom of
/// `F(y)`.
pub fn cover_sides(f: &PBDiagram) -> Result<BTreeMap<(usize, usize), Elem>> {
    let l = f.base();
    let mut out = BTreeMap::new();
    for a in (0..l.len()).filter(|&a| l.is_atom(a)) {
        if f.algebra(a).num_atoms() != 2 {
            return Err(Error::logic(format!(
                "F({}) is not a four-element algebra",
                l.label(a)
            )));
        }
        for &y in l.upper_covers(a) {
            let e = f.edge(a, y).expect("covers carry edges");
            let side = match (
                f.algebra(y).is_atom(e.apply(P)),
                f.algebra(y).is_atom(e.apply(NP)),
            ) {
                (true, false) => P,
                (false, true) => NP,
                _ => {
                    return Err(Error::logic(format!(
                        "exactly one atom of F({}) must map to an atom of F({})",
                        l.label(a),
                        l.label(y)
                    )))
                }
            };
            out.insert((a, y), side);
        }
    }
    Ok(out)
}

/// Atoms `a` with covers `y`, `y'` where different elements of `F(a)` become
/// atoms: no single element of `F(a)` is an atom in every cover.
pub fn cover_dependent_atoms(f: &PBDiagram) -> Result<Vec<(usize, usize, usize)>> {
    let sides = cover_sides(f)?;
    let mut out = Vec::new();
    for (&(a, y), &s) in &sides {
        if let Some((&(_, y2), _)) = sides.range((a, y + 1)..(a + 1, 0)).find(|(_, &s2)| s2 != s) {
            out.push((a, y, y2));
        }
    }
    Ok(out)
}

/// Reads the orientation off a diagram: for each group of covers of a
/// nonmaximal atom, the atom of `F(a)` sent to an atom of the reference cover.
pub fn restrict_to_orientation(f: &PBDiagram) -> Result<Orientation> {
    let l = f.base();
    let cs = cover_sides(f)?;
    let mut atoms = l.atoms();
    atoms.sort_unstable();
    let mut sides = Vec::with_capacity(atoms.len());
    let mut names = Vec::with_capacity(atoms.len());
    for &a in &atoms {
        let fa = f.algebra(a);
        names.push([fa.element_name(P), fa.element_name(NP)]);
        let groups = cover_groups(l, a);
        let mut here: Vec<Elem> = groups.iter().map(|g| cs[&(a, g[0])]).collect();
        if here.is_empty() {
            here.push(P);
        }
        sides.push(here);
    }
    Orientation::with_slots(l.clone(), sides, names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::FinBool;
    use crate::lattice::{partition_lattice, Lattice};
    use crate::pba::BlockSpec;

    #[test]
    fn orientation_counts() {
        let point = FinPoset::new(vec!["0".into()], &[] as &[(&str, &str)]).unwrap();
        assert_eq!(enumerate_orientations(&point).count(), 1);
        let v = FinPoset::new(
            vec!["0".into(), "a".into(), "b".into()],
            &[("0", "a"), ("0", "b")],
        )
        .unwrap();
        assert_eq!(enumerate_orientations(&v).count(), 4);
        assert_eq!(
            enumerate_orientations(&partition_lattice(3).unwrap().dual()).count(),
            8
        );
    }

    #[test]
    fn sub_of_eight_points_at_atoms() {
        let p = PieceBool::from_bool(&FinBool::of(&["a", "b", "c"]));
        let o = orient_sub(&p).unwrap();
        assert_eq!(o.atoms().len(), 3);
        let mut chosen: Vec<&str> = o
            .atoms()
            .iter()
            .map(|&a| o.choice_label(a, 0).unwrap())
            .collect();
        chosen.sort();
        assert_eq!(chosen, vec!["a", "b", "c"]);
        assert!(o.maximal_defaults().is_empty());
    }

    #[test]
    fn maximal_atoms_are_flagged() {
        let four = PieceBool::from_bool(&FinBool::of(&["x", "nx"]));
        let o = orient_sub(&four).unwrap();
        assert_eq!(o.maximal_defaults(), o.atoms().to_vec());
        let mo2 =
            PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).unwrap();
        assert_eq!(orient_sub(&mo2).unwrap().maximal_defaults().len(), 2);
    }

    /// Two eight-element blocks sharing `{0, x, ¬x, 1}`: `x` an atom of both,
    /// or an atom of one and a coatom of the other.
    pub(crate) fn shared_atom(twisted: bool) -> PieceBool {
        let first = BlockSpec::of(&["x", "u", "v"]).rename(&["u", "v"], "nx");
        let second = if twisted {
            BlockSpec::of(&["nx", "s", "t"]).rename(&["s", "t"], "x")
        } else {
            BlockSpec::of(&["x", "s", "t"]).rename(&["s", "t"], "nx")
        };
        PieceBool::glue(&[first, second]).unwrap()
    }

    #[test]
    fn separate_blocks_give_separate_choices() {
        let (plain, twisted) = (shared_atom(false), shared_atom(true));
        let (o1, o2) = (orient_sub(&plain).unwrap(), orient_sub(&twisted).unwrap());
        let l = o1.domain();
        let x = *l
            .atoms()
            .iter()
            .find(|&&a| o1.groups(a).unwrap().len() == 2)
            .unwrap();
        assert_eq!(o1.sides(x).unwrap().len(), 2);
        assert_eq!(enumerate_orientations(l).count(), 1 << o1.num_slots());
        let s1 = o1.sides(x).unwrap();
        assert_eq!(s1[0], s1[1]);
        let s2 = o2.sides(x).unwrap();
        assert_ne!(s2[0], s2[1]);
    }

    /// In the sixteen-element algebra a subalgebra `{0, a+b, c+d, 1}` has
    /// `a+b` as an atom in one cover and as a coatom in another.
    #[test]
    fn sixteen_elements_need_reference_covers() {
        let l = partition_lattice(4).unwrap().dual();
        let o = enumerate_orientations(&l).next().unwrap();
        assert_eq!(o.num_slots(), 7);
        let f = functor_from_domain(&l, &o).unwrap();
        let bad = cover_dependent_atoms(&f).unwrap();
        let mut atoms: Vec<usize> = bad.iter().map(|w| w.0).collect();
        atoms.dedup();
        assert_eq!(atoms.len(), 3);
        assert!(atoms
            .iter()
            .all(|&a| !Lattice::new(&l).unwrap().is_modular_element(a)));
        assert_eq!(restrict_to_orientation(&f).unwrap(), o);
    }

    #[test]
    fn equality_ignores_maximal_atoms() {
        let v = FinPoset::new(
            vec!["0".into(), "a".into(), "b".into()],
            &[("0", "a"), ("0", "b")],
        )
        .unwrap();
        let all: Vec<_> = enumerate_orientations(&v).collect();
        assert!(all.iter().all(|o| *o == all[0]));
        assert!(Orientation::from_labels(v.clone(), &[("a", "q")]).is_err());
        assert_eq!(Orientation::from_labels(v, &[("a", "np")]).unwrap(), all[0]);
    }
}
