use std::collections::HashSet;

use super::{functor_from_domain, DiagramMorphism, PBDiagram};
use crate::error::{Error, Result};
use crate::lattice::FinPoset;
use crate::orient::Orientation;
use crate::pba::{sub, BlockParts, PieceBool, PieceBoolHom, PieceBoolParts, SubPoset};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A colimit with its cocone: `cocone[x][m]` is the carrier element `[m]`
/// for `m ∈ F(x)`.
#[derive(Clone, Debug)]
pub struct Colimit {
    pba: PieceBool,
    cocone: Vec<Vec<usize>>,
}

impl Colimit {
    pub fn pba(&self) -> &PieceBool {
        &self.pba
    }

    pub fn cocone(&self, x: usize) -> &[usize] {
        &self.cocone[x]
    }

    /// `p_x[F(x)]`, sorted.
    pub fn image(&self, x: usize) -> Vec<usize> {
        let mut v = self.cocone[x].clone();
        v.sort_unstable();
        v
    }
}

/// Disjoint sum of the algebras modulo `b ~ F(x ⋖ y)(b)`, blocks at the
/// maximal points.
pub fn colim(f: &PBDiagram) -> Result<Colimit> {
    let l = f.base();
    let mut offset = Vec::with_capacity(l.len());
    let mut total = 0usize;
    for x in 0..l.len() {
        offset.push(total);
        total += f.algebra(x).size() as usize;
    }
    let mut uf = UnionFind::new(total);
    for (&(x, y), e) in f.edges() {
        for m in f.algebra(x).elements() {
            uf.union(offset[x] + m as usize, offset[y] + e.apply(m) as usize);
        }
    }

    // Classes are numbered in topological order of first appearance, so the
    // bottom contributes 0 and 1 first.
    let mut class_id = vec![usize::MAX; total];
    let mut labels: Vec<String> = Vec::new();
    let mut cocone = vec![Vec::new(); l.len()];
    for &x in l.topological_order() {
        let alg = f.algebra(x);
        for m in alg.elements() {
            let root = uf.find(offset[x] + m as usize);
            if class_id[root] == usize::MAX {
                class_id[root] = labels.len();
                labels.push(match alg.element_name(m).as_str() {
                    n @ ("0" | "1") => n.to_string(),
                    n => format!("{}:{n}", l.label(x)),
                });
            }
            cocone[x].push(class_id[root]);
        }
    }
    let mut seen = HashSet::new();
    for (i, lab) in labels.iter_mut().enumerate() {
        if !seen.insert(lab.clone()) {
            *lab = format!("{lab}~{i}");
            seen.insert(lab.clone());
        }
    }

    for x in 0..l.len() {
        let distinct: HashSet<usize> = cocone[x].iter().copied().collect();
        if distinct.len() != cocone[x].len() {
            return Err(Error::logic(format!(
                "the colimit map at {} is not injective",
                l.label(x)
            )));
        }
    }

    let mut negation = vec![usize::MAX; labels.len()];
    for x in 0..l.len() {
        let alg = f.algebra(x);
        for m in alg.elements() {
            negation[cocone[x][m as usize]] = cocone[x][alg.complement(m) as usize];
        }
    }
    let mut maximal = l.maximal_elements();
    maximal.sort_unstable();
    let parts = PieceBoolParts {
        carrier: labels.clone(),
        zero: "0".into(),
        one: "1".into(),
        negation: (0..labels.len())
            .map(|c| (labels[c].clone(), labels[negation[c]].clone()))
            .collect(),
        blocks: maximal
            .iter()
            .map(|&x| BlockParts {
                atoms: f.algebra(x).atoms().to_vec(),
                labels: cocone[x].iter().map(|&c| labels[c].clone()).collect(),
            })
            .collect(),
    };
    let pba = PieceBool::new(parts).map_err(|e| {
        Error::logic(format!(
            "the colimit is not a piecewise Boolean algebra: {e}"
        ))
    })?;
    // `PieceBool::new` keeps carrier order, so class ids are carrier indices.
    Ok(Colimit { pba, cocone })
}

/// The map `[b] ↦ [η_x(b)]` induced by a diagram morphism.
pub fn colim_on_morphism(
    m: &DiagramMorphism,
    src: &PBDiagram,
    csrc: &Colimit,
    ctgt: &Colimit,
) -> Result<PieceBoolHom> {
    let mut map = vec![usize::MAX; csrc.pba.len()];
    for x in 0..src.base().len() {
        let y = m.phi()[x];
        for b in src.algebra(x).elements() {
            let c = csrc.cocone[x][b as usize];
            let image = ctgt.cocone[y][m.eta(x).apply(b) as usize];
            if map[c] != usize::MAX && map[c] != image {
                return Err(Error::logic(format!(
                    "{} has two images under the induced map",
                    csrc.pba.label(c)
                )));
            }
            map[c] = image;
        }
    }
    PieceBoolHom::new(csrc.pba.clone(), ctgt.pba.clone(), map).map_err(Error::into_logic)
}

/// A reconstructed algebra with the verified isomorphism `L ≅ Sub(P)`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub diagram: PBDiagram,
    pub colimit: Colimit,
    pub sub: SubPoset,
    /// `iso[x]` is the node of `Sub(P)` for `p_x[F(x)]`.
    pub iso: Vec<usize>,
}

fn check_reconstruction(l: &FinPoset, c: &Colimit, s: &SubPoset) -> Result<Vec<usize>> {
    let f: Vec<usize> = (0..l.len())
        .map(|x| {
            s.index_of_set(&c.image(x)).ok_or_else(|| {
                Error::logic(format!(
                    "the image of F({}) is not a subalgebra of the colimit",
                    l.label(x)
                ))
            })
        })
        .collect::<Result<_>>()?;
    if s.len() != l.len() {
        return Err(Error::logic(format!(
            "the colimit has {} subalgebras for {} points",
            s.len(),
            l.len()
        )));
    }
    let q = s.poset();
    for x in 0..l.len() {
        for y in 0..l.len() {
            if l.leq(x, y) != q.leq(f[x], f[y]) {
                return Err(Error::logic(format!(
                    "x ↦ p_x[F(x)] is not an order isomorphism at ({}, {})",
                    l.label(x),
                    l.label(y)
                )));
            }
        }
    }
    // g(B) = ⋀{x | B ⊆ f(x)} is a two-sided inverse.
    for b in 0..s.len() {
        let above: Vec<usize> = (0..l.len()).filter(|&x| q.leq(b, f[x])).collect();
        let g =
            l.meet(&above).ok().flatten().ok_or_else(|| {
                Error::logic(format!("no meet of the points above {}", q.label(b)))
            })?;
        if f[g] != b {
            return Err(Error::logic(format!("f(g(B)) ≠ B at {}", q.label(b))));
        }
    }
    for x in 0..l.len() {
        let above: Vec<usize> = (0..l.len()).filter(|&y| q.leq(f[x], f[y])).collect();
        if l.meet(&above).ok().flatten() != Some(x) {
            return Err(Error::logic(format!("g(f(x)) ≠ x at {}", l.label(x))));
        }
    }
    Ok(f)
}

/// Builds `P = colim F` for the oriented domain and verifies `L ≅ Sub(P)`.
pub fn reconstruct_and_verify(l: &FinPoset, o: &Orientation) -> Result<Reconstruction> {
    let diagram = functor_from_domain(l, o)?;
    let colimit = colim(&diagram)?;
    let s = sub(colimit.pba())?;
    let iso = check_reconstruction(l, &colimit, &s)?;
    Ok(Reconstruction {
        diagram,
        colimit,
        sub: s,
        iso,
    })
}
