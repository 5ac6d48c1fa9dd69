//! Piecewise Boolean diagrams: a Boolean algebra at each point of a domain,
//! with injective homomorphisms along covers, such that each `F(y)` has
//! exactly the subalgebras coming from the points below `y`.

mod build;
mod colim;
mod pboold;

use std::collections::{BTreeMap, HashMap};

use crate::boolalg::{direct_image, BoolHom, FinBool};
use crate::domain::check_def31;
use crate::error::{Error, Result};
use crate::lattice::{bell, FinPoset, Partition};

pub use build::functor_from_domain;
pub use colim::{colim, colim_on_morphism, reconstruct_and_verify, Colimit, Reconstruction};
pub use pboold::{
    pboold, pboold_on_hom, verify_diagram_roundtrip, verify_equivalence, verify_pba_roundtrip,
    EquivalenceReport, Pboold,
};

#[derive(Clone, Debug)]
pub struct PBDiagram {
    base: FinPoset,
    algebras: Vec<FinBool>,
    edges: BTreeMap<(usize, usize), BoolHom>,
    /// `F(x ≤ y)` for every comparable pair, identities included.
    composites: HashMap<(usize, usize), BoolHom>,
}

impl PartialEq for PBDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.algebras == other.algebras && self.edges == other.edges
    }
}

impl Eq for PBDiagram {}

impl PBDiagram {
    /// Validates functoriality and subobject preservation; both failures
    /// are structural errors naming the offending points.
    pub fn new(
        base: FinPoset,
        algebras: Vec<FinBool>,
        edges: BTreeMap<(usize, usize), BoolHom>,
    ) -> Result<Self> {
        if !check_def31(&base).verdict {
            return Err(Error::structural(
                "diagram base is not a piecewise Boolean domain",
            ));
        }
        if algebras.len() != base.len() {
            return Err(Error::structural(format!(
                "{} algebras given for {} points",
                algebras.len(),
                base.len()
            )));
        }
        for &(x, y) in edges.keys() {
            if x >= base.len() || y >= base.len() || !base.covers_pair(x, y) {
                return Err(Error::structural(format!(
                    "edge ({x}, {y}) is not a cover of the base"
                )));
            }
        }
        for &(x, y) in base.covers() {
            let name = || format!("{} ≤ {}", base.label(x), base.label(y));
            let e = edges
                .get(&(x, y))
                .ok_or_else(|| Error::structural(format!("no homomorphism along {}", name())))?;
            if e.source() != &algebras[x] || e.target() != &algebras[y] {
                return Err(Error::structural(format!(
                    "homomorphism along {} has the wrong algebras",
                    name()
                )));
            }
            if !e.is_injective() {
                return Err(Error::structural(format!(
                    "homomorphism along {} is not injective",
                    name()
                )));
            }
        }

        let mut composites: HashMap<(usize, usize), BoolHom> = HashMap::new();
        for &y in base.topological_order() {
            composites.insert((y, y), BoolHom::identity(&algebras[y]));
            for &z in base.lower_covers(y) {
                let e = &edges[&(z, y)];
                for x in base.down_set(z).ones() {
                    let path = composites[&(x, z)].then(e)?;
                    match composites.get(&(x, y)) {
                        Some(other) if *other != path => {
                            return Err(Error::structural(format!(
                                "paths from {} to {} give different homomorphisms",
                                base.label(x),
                                base.label(y)
                            )))
                        }
                        Some(_) => {}
                        None => {
                            composites.insert((x, y), path);
                        }
                    }
                }
            }
        }

        let d = PBDiagram {
            base,
            algebras,
            edges,
            composites,
        };
        for y in 0..d.base.len() {
            d.check_subobjects(y)?;
        }
        Ok(d)
    }

    /// `x ↦ F(x ≤ y)[F(x)]` must be an order isomorphism `↓y ≅ Sub(F(y))`.
    fn check_subobjects(&self, y: usize) -> Result<()> {
        let below: Vec<usize> = self.base.down_set(y).ones().collect();
        let k = self.algebras[y].num_atoms();
        if k > 20 || bell(k) != below.len() as u64 {
            return Err(Error::structural(format!(
                "F({}) has {k} atoms, wrong for {} points below it",
                self.base.label(y),
                below.len()
            )));
        }
        let images: Vec<Partition> = below.iter().map(|&x| self.image(x, y)).collect();
        for (i, &x) in below.iter().enumerate() {
            for (j, &x2) in below.iter().enumerate() {
                if self.base.leq(x, x2) != images[j].refines(&images[i]) {
                    return Err(Error::structural(format!(
                        "subalgebras of F({}) from {} and {} are not ordered like the points",
                        self.base.label(y),
                        self.base.label(x),
                        self.base.label(x2)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &FinPoset {
        &self.base
    }

    pub fn algebra(&self, x: usize) -> &FinBool {
        &self.algebras[x]
    }

    pub fn algebras(&self) -> &[FinBool] {
        &self.algebras
    }

    pub fn edge(&self, x: usize, y: usize) -> Option<&BoolHom> {
        self.edges.get(&(x, y))
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), BoolHom> {
        &self.edges
    }

    /// `F(x ≤ y)`, if `x ≤ y`.
    pub fn hom(&self, x: usize, y: usize) -> Option<&BoolHom> {
        self.composites.get(&(x, y))
    }

    /// The subalgebra `F(x ≤ y)[F(x)]` of `F(y)`, as a partition of its atoms.
    pub fn image(&self, x: usize, y: usize) -> Partition {
        let h = &self.composites[&(x, y)];
        direct_image(h, &Partition::singletons(h.source().num_atoms())).expect("matching algebras")
    }
}

/// A morphism of diagrams: a monotone map of bases and a natural family of
/// homomorphisms `η_x: F(x) → F'(φ(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramMorphism {
    phi: Vec<usize>,
    eta: Vec<BoolHom>,
}

impl DiagramMorphism {
    pub fn new(
        src: &PBDiagram,
        tgt: &PBDiagram,
        phi: Vec<usize>,
        eta: Vec<BoolHom>,
    ) -> Result<Self> {
        let (l, l2) = (src.base(), tgt.base());
        if phi.len() != l.len() || eta.len() != l.len() {
            return Err(Error::usage(
                "morphism needs one image and one homomorphism per point",
            ));
        }
        if let Some(&y) = phi.iter().find(|&&y| y >= l2.len()) {
            return Err(Error::usage(format!(
                "point image {y} is outside the target base"
            )));
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
        for x in 0..l.len() {
            if eta[x].source() != src.algebra(x) || eta[x].target() != tgt.algebra(phi[x]) {
                return Err(Error::usage(format!(
                    "η at {} has the wrong algebras",
                    l.label(x)
                )));
            }
            // φ(x) must be the image of F(x), else φ is not determined by η
            if !eta[x].is_surjective() {
                return Err(Error::usage(format!(
                    "η at {} is not onto F'(φ({}))",
                    l.label(x),
                    l.label(x)
                )));
            }
        }
        for &(x, y) in l.covers() {
            let left = src.edge(x, y).unwrap().then(&eta[y])?;
            let right = eta[x].then(tgt.hom(phi[x], phi[y]).unwrap())?;
            if left != right {
                return Err(Error::usage(format!(
                    "naturality fails on {} ≤ {}",
                    l.label(x),
                    l.label(y)
                )));
            }
        }
        Ok(DiagramMorphism { phi, eta })
    }

    pub fn identity(d: &PBDiagram) -> Self {
        DiagramMorphism {
            phi: (0..d.base().len()).collect(),
            eta: d.algebras().iter().map(BoolHom::identity).collect(),
        }
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn eta(&self, x: usize) -> &BoolHom {
        &self.eta[x]
    }

    pub fn etas(&self) -> &[BoolHom] {
        &self.eta
    }

    /// `other ∘ self`: `(ψ, θ) ∘ (φ, η) = (ψ ∘ φ, θφ · η)`.
    pub fn then(&self, other: &DiagramMorphism) -> Result<Self> {
        let phi = self.phi.iter().map(|&y| other.phi[y]).collect();
        let eta = self
            .eta
            .iter()
            .zip(&self.phi)
            .map(|(h, &y)| h.then(&other.eta[y]))
            .collect::<Result<_>>()?;
        Ok(DiagramMorphism { phi, eta })
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_isomorphism() {
            return Err(Error::usage("only isomorphisms of diagrams have inverses"));
        }
        let mut phi = vec![0; self.phi.len()];
        for (x, &y) in self.phi.iter().enumerate() {
            phi[y] = x;
        }
        let eta = phi
            .iter()
            .map(|&x| self.eta[x].inverse())
            .collect::<Result<_>>()?;
        Ok(DiagramMorphism { phi, eta })
    }

    /// Bijective on points with every component an isomorphism.
    pub fn is_isomorphism(&self) -> bool {
        let mut seen = vec![false; self.phi.len()];
        self.phi
            .iter()
            .all(|&y| y < seen.len() && !std::mem::replace(&mut seen[y], true))
            && self.eta.iter().all(BoolHom::is_isomorphism)
    }
}
