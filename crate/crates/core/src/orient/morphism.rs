use std::collections::BTreeMap;

use super::{cover_sides, restrict_to_orientation, Orientation};
use crate::boolalg::{BoolHom, Elem};
use crate::diagram::{functor_from_domain, DiagramMorphism, PBDiagram};
use crate::error::{Error, Result};
use crate::lattice::{FinPoset, Lattice};

/// A morphism of oriented domains: a monotone map sending atoms to atoms or
/// the bottom and preserving modular atoms of ideals, with `η_a` at atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedDomainMorphism {
    source: Orientation,
    target: Orientation,
    phi: Vec<usize>,
    eta: BTreeMap<usize, BoolHom>,
}

fn modular_in_ideal(l: &FinPoset, a: usize, x: usize) -> Result<bool> {
    let (ideal, global) = l.ideal(x);
    let local = global.iter().position(|&g| g == a).expect("a lies below x");
    Ok(Lattice::new(&ideal)?.is_modular_element(local))
}

impl OrientedDomainMorphism {
    /// `eta` holds one homomorphism per atom of the source, from a
    /// four-element algebra to a four- or two-element one.
    pub fn new(
        source: Orientation,
        target: Orientation,
        phi: Vec<usize>,
        eta: BTreeMap<usize, BoolHom>,
    ) -> Result<Self> {
        let (l, l2) = (source.domain(), target.domain());
        if phi.len() != l.len() || phi.iter().any(|&y| y >= l2.len()) {
            return Err(Error::usage(
                "base map must send every point into the target domain",
            ));
        }
        for &(x, y) in l.covers() {
            if !l2.leq(phi[x], phi[y]) {
                return Err(Error::usage(format!(
                    "base map is not monotone at {} ≤ {}",
                    l.label(x),
                    l.label(y)
                )));
            }
        }
        let bottom2 = l2.bottom();
        let sides = cover_sides(&functor_from_domain(l, &source)?)?;
        let sides2 = cover_sides(&functor_from_domain(l2, &target)?)?;
        for &a in source.atoms() {
            let fa = phi[a];
            let to_atom = l2.is_atom(fa);
            if !to_atom && Some(fa) != bottom2 {
                return Err(Error::usage(format!(
                    "atom {} goes to {}, neither an atom nor the bottom",
                    l.label(a),
                    l2.label(fa)
                )));
            }
            let h = eta
                .get(&a)
                .ok_or_else(|| Error::usage(format!("no homomorphism at atom {}", l.label(a))))?;
            let want = if to_atom { 2 } else { 1 };
            if h.source().num_atoms() != 2 || h.target().num_atoms() != want {
                return Err(Error::usage(format!(
                    "η at {} has the wrong algebras",
                    l.label(a)
                )));
            }
            for x in l.up_set(a).ones() {
                if modular_in_ideal(l, a, x)? && !modular_in_ideal(l2, fa, phi[x])? {
                    return Err(Error::usage(format!(
                        "{} is modular below {} but its image is not modular below {}",
                        l.label(a),
                        l.label(x),
                        l2.label(phi[x])
                    )));
                }
            }
        }
        // Where an atom cover survives as a cover, the element becoming an
        // atom above must be sent to the element becoming an atom above.
        for (&(a, y), &s) in &sides {
            let (fa, fy) = (phi[a], phi[y]);
            if let Some(&s2) = sides2.get(&(fa, fy)) {
                if eta[&a].apply(s) != s2 {
                    return Err(Error::usage(format!(
                        "η at {} does not send the element that is an atom in {} to the one that is an atom in {}",
                        l.label(a),
                        l.label(y),
                        l2.label(fy)
                    )));
                }
            }
        }
        if let Some(&a) = eta.keys().find(|&&a| !source.atoms().contains(&a)) {
            return Err(Error::usage(format!(
                "η given at {a}, which is not an atom"
            )));
        }
        Ok(OrientedDomainMorphism {
            source,
            target,
            phi,
            eta,
        })
    }

    pub fn source(&self) -> &Orientation {
        &self.source
    }

    pub fn target(&self) -> &Orientation {
        &self.target
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn eta(&self) -> &BTreeMap<usize, BoolHom> {
        &self.eta
    }
}

/// The unique diagram morphism `F → F'` extending `m`: `η_x(F(a ≤ x)(b)) =
/// F'(φa ≤ φx)(η_a(b))`, checked to be well defined, a homomorphism at
/// every point, and natural.
pub fn extend_morphism(
    m: &OrientedDomainMorphism,
    f: &PBDiagram,
    f2: &PBDiagram,
) -> Result<DiagramMorphism> {
    let l = f.base();
    if l != m.source.domain() || f2.base() != m.target.domain() {
        return Err(Error::usage("the morphism is between other domains"));
    }
    if restrict_to_orientation(f)? != m.source || restrict_to_orientation(f2)? != m.target {
        return Err(Error::usage("the morphism is between other orientations"));
    }
    let mut etas = Vec::with_capacity(l.len());
    for x in 0..l.len() {
        let (src, tgt) = (f.algebra(x), f2.algebra(m.phi[x]));
        if Some(x) == l.bottom() {
            etas.push(BoolHom::from_two(src, tgt).map_err(Error::into_logic)?);
            continue;
        }
        let mut table: Vec<Option<Elem>> = vec![None; src.size() as usize];
        table[0] = Some(0);
        table[src.one() as usize] = Some(tgt.one());
        for a in l.down_set(x).ones().filter(|&a| l.is_atom(a)) {
            let up = f.hom(a, x).expect("a ≤ x");
            let down = f2.hom(m.phi[a], m.phi[x]).expect("φ is monotone");
            for b in [0b01, 0b10] {
                let here = up.apply(b) as usize;
                let value = down.apply(m.eta[&a].apply(b));
                match table[here] {
                    Some(v) if v != value => {
                        return Err(Error::logic(format!(
                            "η at {} is not well defined on {}",
                            l.label(x),
                            src.element_name(here as Elem)
                        )))
                    }
                    _ => table[here] = Some(value),
                }
            }
        }
        let table: Vec<Elem> = table.into_iter().collect::<Option<_>>().ok_or_else(|| {
            Error::logic(format!(
                "F({}) has elements from no atom below it",
                l.label(x)
            ))
        })?;
        let images = (0..src.num_atoms()).map(|i| table[1 << i]).collect();
        let h = BoolHom::new(src.clone(), tgt.clone(), images)
            .map_err(|e| Error::logic(format!("η at {} is not a homomorphism: {e}", l.label(x))))?;
        if let Some(b) = src.elements().find(|&b| h.apply(b) != table[b as usize]) {
            return Err(Error::logic(format!(
                "η at {} does not preserve meets at {}",
                l.label(x),
                src.element_name(b)
            )));
        }
        etas.push(h);
    }
    DiagramMorphism::new(f, f2, m.phi.clone(), etas).map_err(Error::into_logic)
}

/// The oriented morphism underlying a diagram morphism.
pub fn restrict_morphism(
    d: &DiagramMorphism,
    f: &PBDiagram,
    f2: &PBDiagram,
) -> Result<OrientedDomainMorphism> {
    let source = restrict_to_orientation(f)?;
    let target = restrict_to_orientation(f2)?;
    let eta = source
        .atoms()
        .iter()
        .map(|&a| (a, d.eta(a).clone()))
        .collect();
    OrientedDomainMorphism::new(source, target, d.phi().to_vec(), eta).map_err(Error::into_logic)
}

/// The canonical diagram with the same orientation, and the isomorphism onto
/// it that is the identity on points and on atom masks.
pub fn canonical_form(f: &PBDiagram) -> Result<(PBDiagram, DiagramMorphism)> {
    let o = restrict_to_orientation(f)?;
    let g = functor_from_domain(f.base(), &o)?;
    let eta = o
        .atoms()
        .iter()
        .map(|&a| {
            Ok((
                a,
                BoolHom::new(f.algebra(a).clone(), g.algebra(a).clone(), vec![0b01, 0b10])?,
            ))
        })
        .collect::<Result<_>>()?;
    let id: Vec<usize> = (0..f.base().len()).collect();
    let m = OrientedDomainMorphism::new(o.clone(), o.canonical(), id, eta)
        .map_err(Error::into_logic)?;
    let iso = extend_morphism(&m, f, &g)?;
    if !iso.is_isomorphism() {
        return Err(Error::logic(
            "the diagram is not isomorphic to its canonical form",
        ));
    }
    Ok((g, iso))
}

/// Counts of what [`verify_cat_iso`] checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CatIsoReport {
    pub oriented_domains: usize,
    pub diagrams: usize,
    pub diagram_morphisms: usize,
    pub oriented_morphisms: usize,
}

/// Extension followed by restriction, and restriction followed by
/// extension, are identities on the nose. Morphisms carry the indices of
/// their source and target in `diagrams`, which must be canonical.
pub fn verify_cat_iso(
    orientations: &[Orientation],
    diagrams: &[PBDiagram],
    morphisms: &[(usize, usize, DiagramMorphism)],
) -> Result<CatIsoReport> {
    for o in orientations {
        let f = functor_from_domain(o.domain(), o)?;
        if restrict_to_orientation(&f)? != *o {
            return Err(Error::logic(
                "restricting the extension changes the orientation",
            ));
        }
    }
    for f in diagrams {
        let o = restrict_to_orientation(f)?;
        if functor_from_domain(f.base(), &o)? != *f {
            return Err(Error::logic(
                "extending the restriction changes the diagram",
            ));
        }
    }
    for (s, t, d) in morphisms {
        let (f, f2) = (&diagrams[*s], &diagrams[*t]);
        let r = restrict_morphism(d, f, f2)?;
        if extend_morphism(&r, f, f2)? != *d {
            return Err(Error::logic(
                "extending the restriction changes a diagram morphism",
            ));
        }
        // the other composite, starting from the oriented morphism r
        if restrict_morphism(&extend_morphism(&r, f, f2)?, f, f2)? != r {
            return Err(Error::logic(
                "restricting the extension changes an oriented morphism",
            ));
        }
    }
    Ok(CatIsoReport {
        oriented_domains: orientations.len(),
        diagrams: diagrams.len(),
        diagram_morphisms: morphisms.len(),
        oriented_morphisms: morphisms.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::FinBool;
    use crate::diagram::{pboold, pboold_on_hom};
    use crate::lattice::partition_lattice;
    use crate::orient::{atom_algebra, bottom_algebra, enumerate_orientations, NP, P};
    use crate::pba::{BlockSpec, PieceBool, PieceBoolHom};

    fn identity(o: &Orientation) -> OrientedDomainMorphism {
        let eta = o
            .atoms()
            .iter()
            .map(|&a| (a, BoolHom::identity(&atom_algebra())))
            .collect();
        OrientedDomainMorphism::new(o.clone(), o.clone(), (0..o.domain().len()).collect(), eta)
            .unwrap()
    }

    #[test]
    fn identity_extends_to_identity() {
        let l = partition_lattice(3).unwrap().dual();
        for o in enumerate_orientations(&l) {
            let f = functor_from_domain(&l, &o).unwrap();
            assert_eq!(
                extend_morphism(&identity(&o), &f, &f).unwrap(),
                DiagramMorphism::identity(&f)
            );
        }
    }

    #[test]
    fn orientation_condition_is_enforced() {
        let l = partition_lattice(3).unwrap().dual();
        let o = enumerate_orientations(&l).next().unwrap();
        let swap = BoolHom::new(atom_algebra(), atom_algebra(), vec![NP, P]).unwrap();
        let mut eta: BTreeMap<_, _> = o
            .atoms()
            .iter()
            .map(|&a| (a, BoolHom::identity(&atom_algebra())))
            .collect();
        eta.insert(o.atoms()[0], swap);
        let err = OrientedDomainMorphism::new(o.clone(), o.clone(), (0..l.len()).collect(), eta)
            .unwrap_err();
        assert!(err.to_string().contains("atom in"), "{err}");
    }

    #[test]
    fn non_atom_image_is_rejected() {
        let l = partition_lattice(3).unwrap().dual();
        let o = enumerate_orientations(&l).next().unwrap();
        let top = l.top().unwrap();
        let mut phi: Vec<usize> = (0..l.len()).collect();
        phi[o.atoms()[0]] = top;
        let eta = o
            .atoms()
            .iter()
            .map(|&a| (a, BoolHom::identity(&atom_algebra())))
            .collect();
        assert!(OrientedDomainMorphism::new(o.clone(), o, phi, eta).is_err());
    }

    /// Collapsing one atom of the eight-element algebra: `x = a ∨ a'` with
    /// both kinds of pairs `(b_a, b_a')`, `(b_a, ¬b_a')`, ... checked on meets.
    #[test]
    fn collapse_through_height_two() {
        let eight = PieceBool::from_bool(&FinBool::of(&["a", "b", "c"]));
        let four = PieceBool::from_bool(&FinBool::of(&["a", "nb"]));
        let f = PieceBoolHom::from_labels(
            eight.clone(),
            four.clone(),
            &[
                ("0", "0"),
                ("1", "1"),
                ("a", "a"),
                ("b", "0"),
                ("c", "nb"),
                ("a+b", "a"),
                ("a+c", "1"),
                ("b+c", "nb"),
            ],
        )
        .unwrap();
        let (d8, d4) = (pboold(&eight).unwrap(), pboold(&four).unwrap());
        let m = pboold_on_hom(&f, &d8, &d4).unwrap();
        let r = restrict_morphism(&m, &d8.diagram, &d4.diagram).unwrap();
        let collapsed = r
            .eta()
            .values()
            .filter(|h| h.target().num_atoms() == 1)
            .count();
        assert_eq!(collapsed, 1);
        assert_eq!(extend_morphism(&r, &d8.diagram, &d4.diagram).unwrap(), m);
    }

    /// `a ↦ a'+b'`, `b ↦ c'`, `c ↦ 0`: `{0, a, ¬a, 1}` lands on a nonmaximal
    /// atom whose chosen element is `c'`, yet `a` goes to `a'+b'`. The
    /// morphism is still a restriction of a diagram morphism.
    #[test]
    fn chosen_elements_need_not_be_preserved() {
        let p = PieceBool::from_bool(&FinBool::of(&["a", "b", "c"]));
        let q = PieceBool::from_bool(&FinBool::of(&["a'", "b'", "c'"]));
        let f = PieceBoolHom::from_labels(
            p.clone(),
            q.clone(),
            &[
                ("0", "0"),
                ("1", "1"),
                ("a", "a'+b'"),
                ("b", "c'"),
                ("c", "0"),
                ("a+b", "1"),
                ("a+c", "a'+b'"),
                ("b+c", "c'"),
            ],
        )
        .unwrap();
        let (dp, dq) = (pboold(&p).unwrap(), pboold(&q).unwrap());
        let m = pboold_on_hom(&f, &dp, &dq).unwrap();
        let r = restrict_morphism(&m, &dp.diagram, &dq.diagram).unwrap();
        let a = p.index_of("a").unwrap();
        let ba = dp.sub.index_of_set(&{
            let mut v = vec![0, 1, a, p.neg(a)];
            v.sort_unstable();
            v
        });
        let ba = ba.unwrap();
        let image = r.phi()[ba];
        assert!(dq.diagram.base().is_atom(image) && !dq.diagram.base().is_maximal(image));
        let side = r.source().side_in(ba, 0).unwrap();
        let chosen = r.target().side_in(image, 0).unwrap();
        assert_ne!(r.eta()[&ba].apply(side), chosen);
        assert_eq!(extend_morphism(&r, &dp.diagram, &dq.diagram).unwrap(), m);
    }

    /// Sending every atom to the bottom with η_a all collapsing works only
    /// when the collapses agree; unrelated choices leave η_x undefined.
    #[test]
    fn incoherent_collapse_does_not_extend() {
        let l = partition_lattice(3).unwrap().dual();
        let o = enumerate_orientations(&l).next().unwrap();
        let point = FinPoset::new(vec!["0".into()], &[] as &[(&str, &str)]).unwrap();
        let o2 = Orientation::new(point.clone(), vec![]).unwrap();
        let phi = vec![0; l.len()];
        let eta = o
            .atoms()
            .iter()
            .map(|&a| {
                (
                    a,
                    BoolHom::new(atom_algebra(), bottom_algebra(), vec![1, 0]).unwrap(),
                )
            })
            .collect();
        let m = OrientedDomainMorphism::new(o.clone(), o2.clone(), phi, eta).unwrap();
        let f = functor_from_domain(&l, &o).unwrap();
        let g = functor_from_domain(&point, &o2).unwrap();
        assert!(matches!(extend_morphism(&m, &f, &g), Err(Error::Logic(_))));
    }

    #[test]
    fn canonical_forms_and_cat_iso() {
        let mo2 =
            PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).unwrap();
        let eight = PieceBool::from_bool(&FinBool::of(&["a", "b", "c"]));
        let mut diagrams = Vec::new();
        let mut isos = Vec::new();
        for p in [&mo2, &eight] {
            let d = pboold(p).unwrap();
            let (g, iso) = canonical_form(&d.diagram).unwrap();
            assert_eq!(iso.phi(), (0..g.base().len()).collect::<Vec<_>>());
            diagrams.push(g);
            isos.push((d, iso));
        }
        let id = PieceBoolHom::identity(&eight);
        let m = pboold_on_hom(&id, &isos[1].0, &isos[1].0).unwrap();
        let canonical = isos[1]
            .1
            .inverse()
            .unwrap()
            .then(&m)
            .unwrap()
            .then(&isos[1].1)
            .unwrap();
        let l = partition_lattice(3).unwrap().dual();
        let orientations: Vec<_> = enumerate_orientations(&l).collect();
        let report = verify_cat_iso(&orientations, &diagrams, &[(1, 1, canonical)]).unwrap();
        assert_eq!(report.oriented_domains, 8);
    }
}
