use std::collections::{BTreeMap, HashMap};

use super::PBDiagram;
use crate::boolalg::{lift_sub_iso, subalgebras, BoolHom, Elem, FinBool, SubalgebraLattice};
use crate::domain::check_def31;
use crate::error::{Error, Result};
use crate::lattice::{poset_iso_pinned, FinPoset, Lattice, Partition};
use crate::orient::{atom_algebra, bottom_algebra, Orientation, P};

/// `F(x)` with its subalgebra lattice and the identification `↓x ≅ Sub(F(x))`.
struct Point {
    algebra: FinBool,
    sub: SubalgebraLattice,
    /// Point below `x` to its subalgebra.
    alpha: HashMap<usize, usize>,
    /// Subalgebra to the point below `x`.
    alpha_inv: Vec<usize>,
}

fn point(l: &FinPoset, x: usize, height: usize) -> Result<Point> {
    let (algebra, sub, alpha) = match height {
        0 | 1 => {
            let algebra = if height == 0 {
                bottom_algebra()
            } else {
                atom_algebra()
            };
            let sub = subalgebras(&algebra)?;
            (algebra, sub, None)
        }
        _ => {
            let (ideal, global) = l.ideal(x);
            let lat = Lattice::new(&ideal)?;
            let mut mods = lat.modular_atoms();
            mods.sort_by_key(|&a| global[a]);
            let algebra = FinBool::new(mods.iter().map(|&a| ideal.label(a).to_string()).collect())?;
            let k = mods.len();
            let sub = subalgebras(&algebra)?;
            let full = algebra.one();
            let pins: Vec<(usize, usize)> = mods
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    let t = Partition::from_blocks(k, vec![1 << i, full & !(1 << i)])
                        .expect("two blocks");
                    (a, sub.index_of(&t).expect("listed"))
                })
                .collect();
            let iso = poset_iso_pinned(&ideal, sub.poset(), &pins).ok_or_else(|| {
                Error::logic(format!(
                    "the ideal below {} is not the subalgebra lattice of its modular atoms",
                    l.label(x)
                ))
            })?;
            (algebra, sub, Some((global, iso)))
        }
    };
    let alpha: HashMap<usize, usize> = match alpha {
        Some((global, iso)) => global.into_iter().zip(iso).collect(),
        // the two-element and four-element cases are chains
        None => l
            .down_set(x)
            .ones()
            .map(|z| (z, if z == x { sub.top() } else { sub.bottom() }))
            .collect(),
    };
    if alpha.len() != sub.len() {
        return Err(Error::logic(format!(
            "F({}) has the wrong number of subalgebras",
            l.label(x)
        )));
    }
    let mut alpha_inv = vec![0; sub.len()];
    for (&z, &s) in &alpha {
        alpha_inv[s] = z;
    }
    Ok(Point {
        algebra,
        sub,
        alpha,
        alpha_inv,
    })
}

/// Every homomorphism `F(x) → F(y)` inducing `↓x ⊆ ↓y` through the
/// identifications: one, or two when `F(x)` has four elements.
fn lifts(l: &FinPoset, px: &Point, py: &Point, x: usize, y: usize) -> Result<Vec<BoolHom>> {
    let kx = px.algebra.num_atoms();
    let pi = py.sub.partition(py.alpha[&x]).clone();
    if pi.num_blocks() != kx {
        return Err(Error::logic(format!(
            "F({}) does not sit in F({}) as a subalgebra of the right size",
            l.label(x),
            l.label(y)
        )));
    }
    // B = the image subalgebra, with the blocks of pi as atoms.
    let b = FinBool::new((0..kx).map(|j| format!("b{j}")).collect())?;
    let sub_b = subalgebras(&b)?;
    let mut psi = Vec::with_capacity(px.sub.len());
    for s in 0..px.sub.len() {
        let tau = py.sub.partition(py.alpha[&px.alpha_inv[s]]);
        let blocks = tau
            .blocks()
            .iter()
            .map(|&t| {
                let mut m = 0;
                for (j, &pb) in pi.blocks().iter().enumerate() {
                    if pb & t != 0 {
                        if pb & !t != 0 {
                            return Err(Error::logic(
                                "a subalgebra below does not lie in the image",
                            ));
                        }
                        m |= 1 << j;
                    }
                }
                Ok(m)
            })
            .collect::<Result<Vec<Elem>>>()?;
        psi.push(
            sub_b
                .index_of(&Partition::from_blocks(kx, blocks)?)
                .expect("listed"),
        );
    }

    let include = |f: &BoolHom| -> Result<BoolHom> {
        let images = (0..kx)
            .map(|i| {
                let m = f.apply(1 << i);
                (0..kx)
                    .filter(|&j| m & (1 << j) != 0)
                    .fold(0, |acc, j| acc | pi.blocks()[j])
            })
            .collect();
        BoolHom::new(px.algebra.clone(), py.algebra.clone(), images)
    };
    let tiebreaks = if kx == 2 {
        vec![Some((P, 0b01)), Some((P, 0b10))]
    } else {
        vec![None]
    };
    tiebreaks
        .into_iter()
        .map(|t| include(&lift_sub_iso(&px.sub, &sub_b, &psi, t)?))
        .collect::<Result<_>>()
        .map_err(Error::into_logic)
}

fn unique_lift(l: &FinPoset, points: &[Point], x: usize, y: usize) -> Result<BoolHom> {
    let mut v = lifts(l, &points[x], &points[y], x, y)?;
    if v.len() != 1 {
        return Err(Error::logic(format!(
            "the lift along {} ≤ {} is not unique",
            l.label(x),
            l.label(y)
        )));
    }
    Ok(v.remove(0))
}

/// The edges out of an atom `a`, one group of covers at a time. At the
/// reference cover the orientation picks the lift sending the chosen element
/// to an atom; every other cover `y'` of the group is reached from a fixed
/// `y` through a common upper bound `z`, and `F(a ⋖ y')` is the one lift
/// with `F(y' ≤ z) F(a ⋖ y') = F(y ≤ z) F(a ⋖ y)`.
fn atom_edges(
    l: &FinPoset,
    o: &Orientation,
    points: &[Point],
    a: usize,
    edges: &mut BTreeMap<(usize, usize), BoolHom>,
) -> Result<()> {
    let groups = o.groups(a)?;
    for (g, group) in groups.iter().enumerate() {
        let side = o.side_in(a, g)?;
        let y0 = group[0];
        let at_ref: Vec<BoolHom> = lifts(l, &points[a], &points[y0], a, y0)?
            .into_iter()
            .filter(|f| points[y0].algebra.is_atom(f.apply(side)))
            .collect();
        let [first] = &at_ref[..] else {
            return Err(Error::logic(format!(
                "exactly one lift along {} ≤ {} should send the chosen element to an atom",
                l.label(a),
                l.label(y0)
            )));
        };
        edges.insert((a, y0), first.clone());
        let mut fixed = vec![y0];
        while fixed.len() < group.len() {
            let (y, y2, z) = group
                .iter()
                .filter(|c| !fixed.contains(c))
                .find_map(|&y2| {
                    fixed
                        .iter()
                        .find_map(|&y| common_bound(l, y, y2).map(|z| (y, y2, z)))
                })
                .ok_or_else(|| Error::logic(format!("the covers of {} fall apart", l.label(a))))?;
            let path = edges[&(a, y)].then(&unique_lift(l, points, y, z)?)?;
            let up = unique_lift(l, points, y2, z)?;
            let forced: Vec<BoolHom> = lifts(l, &points[a], &points[y2], a, y2)?
                .into_iter()
                .filter(|f| f.then(&up).map(|h| h == path).unwrap_or(false))
                .collect();
            let [f] = &forced[..] else {
                return Err(Error::logic(format!(
                    "{} lifts along {} ≤ {} commute through {}",
                    forced.len(),
                    l.label(a),
                    l.label(y2),
                    l.label(z)
                )));
            };
            edges.insert((a, y2), f.clone());
            fixed.push(y2);
        }
    }
    Ok(())
}

/// The least-index minimal common upper bound, if any.
pub(crate) fn common_bound(l: &FinPoset, y: usize, y2: usize) -> Option<usize> {
    let mut both = l.up_set(y).clone();
    both.intersect_with(l.up_set(y2));
    both.ones()
        .find(|&z| l.down_set(z).ones().all(|w| w == z || !both.contains(w)))
}

/// The diagram of an oriented domain: `F(⊥)` two elements, `F(a)` the
/// four-element algebra on `p`, `np`, and otherwise the power set of the
/// modular atoms below. Edges out of atoms follow the orientation; all other
/// edges are the unique lifts.
pub fn functor_from_domain(l: &FinPoset, o: &Orientation) -> Result<PBDiagram> {
    if !check_def31(l).verdict {
        return Err(Error::usage("not a piecewise Boolean domain"));
    }
    if o.domain() != l {
        return Err(Error::usage(
            "the orientation belongs to a different domain",
        ));
    }
    let heights = l.heights()?;
    let points: Vec<Point> = (0..l.len())
        .map(|x| point(l, x, heights[x]))
        .collect::<Result<_>>()?;
    let mut edges = BTreeMap::new();
    for &(x, y) in l.covers() {
        if heights[x] != 1 {
            edges.insert((x, y), unique_lift(l, &points, x, y)?);
        }
    }
    for &a in o.atoms() {
        atom_edges(l, o, &points, a, &mut edges)?;
    }
    let algebras = points.into_iter().map(|p| p.algebra).collect();
    PBDiagram::new(l.clone(), algebras, edges).map_err(Error::into_logic)
}
