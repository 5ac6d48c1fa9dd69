use std::collections::BTreeMap;

use super::{colim, colim_on_morphism, Colimit, DiagramMorphism, PBDiagram};
use crate::boolalg::{BoolHom, Elem};
use crate::error::{Error, Result};
use crate::pba::{sub, sub_on_hom, PieceBool, PieceBoolHom, SubPoset};

/// `PBoolD(P)`: the diagram `B ↦ B` over `Sub(P)`, with inclusions.
#[derive(Clone, Debug)]
pub struct Pboold {
    pub diagram: PBDiagram,
    pub sub: SubPoset,
    /// `embed[B][m]`: the carrier element at mask `m` of the algebra at `B`.
    pub embed: Vec<Vec<usize>>,
}

impl Pboold {
    fn mask(&self, node: usize, c: usize) -> Option<Elem> {
        self.embed[node]
            .iter()
            .position(|&k| k == c)
            .map(|m| m as Elem)
    }
}

pub fn pboold(p: &PieceBool) -> Result<Pboold> {
    let s = sub(p)?;
    let (algebras, embed): (Vec<_>, Vec<_>) = (0..s.len()).map(|i| s.algebra(p, i)).unzip();
    let mut edges = BTreeMap::new();
    for &(i, j) in s.poset().covers() {
        let images = (0..algebras[i].num_atoms())
            .map(|k| {
                let c = embed[i][1 << k];
                embed[j].iter().position(|&e| e == c).map(|m| m as Elem)
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::logic("a subalgebra is not contained in a cover"))?;
        edges.insert(
            (i, j),
            BoolHom::new(algebras[i].clone(), algebras[j].clone(), images)?,
        );
    }
    let diagram = PBDiagram::new(s.poset().clone(), algebras, edges).map_err(Error::into_logic)?;
    Ok(Pboold {
        diagram,
        sub: s,
        embed,
    })
}

/// `PBoolD(f)`: `φ = Sub(f)`, `η_B = f` restricted to `B`, landing in `f[B]`.
pub fn pboold_on_hom(f: &PieceBoolHom, src: &Pboold, tgt: &Pboold) -> Result<DiagramMorphism> {
    let phi = sub_on_hom(f, &src.sub, &tgt.sub)?;
    let eta = (0..src.sub.len())
        .map(|i| {
            let a = src.diagram.algebra(i);
            let images = (0..a.num_atoms())
                .map(|k| tgt.mask(phi[i], f.apply(src.embed[i][1 << k])))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::logic("f[B] does not contain the image of B"))?;
            BoolHom::new(a.clone(), tgt.diagram.algebra(phi[i]).clone(), images)
                .map_err(Error::into_logic)
        })
        .collect::<Result<_>>()?;
    DiagramMorphism::new(&src.diagram, &tgt.diagram, phi, eta).map_err(Error::into_logic)
}

/// `b ↦ [b]`, checked to be an isomorphism `P ≅ colim PBoolD(P)`.
pub fn verify_pba_roundtrip(p: &PieceBool) -> Result<(Pboold, Colimit, PieceBoolHom)> {
    let d = pboold(p)?;
    let c = colim(&d.diagram)?;
    let mut map = vec![usize::MAX; p.len()];
    for (i, embed) in d.embed.iter().enumerate() {
        for (m, &e) in embed.iter().enumerate() {
            let class = c.cocone(i)[m];
            if map[e] != usize::MAX && map[e] != class {
                return Err(Error::logic(format!("{} lands in two classes", p.label(e))));
            }
            map[e] = class;
        }
    }
    let iso = PieceBoolHom::new(p.clone(), c.pba().clone(), map).map_err(Error::into_logic)?;
    if !iso.is_isomorphism() {
        return Err(Error::logic(
            "b ↦ [b] is not an isomorphism onto the colimit",
        ));
    }
    Ok((d, c, iso))
}

/// `(x ↦ p_x[F(x)], p_x)`, checked to be an isomorphism `F ≅ PBoolD(colim F)`.
pub fn verify_diagram_roundtrip(f: &PBDiagram) -> Result<(Colimit, Pboold, DiagramMorphism)> {
    let c = colim(f)?;
    let d = pboold(c.pba())?;
    let l = f.base();
    let phi: Vec<usize> = (0..l.len())
        .map(|x| {
            d.sub.index_of_set(&c.image(x)).ok_or_else(|| {
                Error::logic(format!("p_x[F(x)] is not a subalgebra at {}", l.label(x)))
            })
        })
        .collect::<Result<_>>()?;
    let eta = (0..l.len())
        .map(|x| {
            let images = (0..f.algebra(x).num_atoms())
                .map(|k| d.mask(phi[x], c.cocone(x)[1 << k]))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::logic("p_x does not land in p_x[F(x)]"))?;
            BoolHom::new(
                f.algebra(x).clone(),
                d.diagram.algebra(phi[x]).clone(),
                images,
            )
            .map_err(Error::into_logic)
        })
        .collect::<Result<_>>()?;
    let m = DiagramMorphism::new(f, &d.diagram, phi, eta).map_err(Error::into_logic)?;
    if !m.is_isomorphism() {
        return Err(Error::logic("(φ, η) is not an isomorphism of diagrams"));
    }
    Ok((c, d, m))
}

/// Counts of what [`verify_equivalence`] checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct EquivalenceReport {
    pub algebras: usize,
    pub algebra_morphisms: usize,
    pub diagrams: usize,
    pub diagram_morphisms: usize,
}

/// Both roundtrips on objects, and naturality of both on morphisms.
/// Diagram morphisms are given with the indices of their source and target.
pub fn verify_equivalence(
    algebras: &[PieceBool],
    homs: &[PieceBoolHom],
    diagrams: &[PBDiagram],
    morphisms: &[(usize, usize, DiagramMorphism)],
) -> Result<EquivalenceReport> {
    for p in algebras {
        verify_pba_roundtrip(p)?;
    }
    for f in homs {
        let (ds, _, is) = verify_pba_roundtrip(f.source())?;
        let (dt, _, it) = verify_pba_roundtrip(f.target())?;
        let (cs, ct) = (colim(&ds.diagram)?, colim(&dt.diagram)?);
        let m = pboold_on_hom(f, &ds, &dt)?;
        let g = colim_on_morphism(&m, &ds.diagram, &cs, &ct)?;
        // colim(PBoolD(f)) ∘ iso_P = iso_P' ∘ f
        if (0..f.source().len()).any(|b| g.apply(is.apply(b)) != it.apply(f.apply(b))) {
            return Err(Error::logic("b ↦ [b] is not natural along a morphism"));
        }
    }
    let mut units = Vec::with_capacity(diagrams.len());
    for f in diagrams {
        units.push(verify_diagram_roundtrip(f)?);
    }
    for (s, t, m) in morphisms {
        let (cs, ds, us) = &units[*s];
        let (ct, dt, ut) = &units[*t];
        let g = colim_on_morphism(m, &diagrams[*s], cs, ct)?;
        let back = pboold_on_hom(&g, ds, dt)?;
        if m.then(ut)? != us.then(&back)? {
            return Err(Error::logic(
                "(φ, η) is not natural along a diagram morphism",
            ));
        }
    }
    Ok(EquivalenceReport {
        algebras: algebras.len(),
        algebra_morphisms: homs.len(),
        diagrams: diagrams.len(),
        diagram_morphisms: morphisms.len(),
    })
}
