use super::{direct_image, BoolHom, Elem, FinBool, SubalgebraLattice};
use crate::error::{Error, Result};
use crate::lattice::Partition;

fn check_order_iso(a: &SubalgebraLattice, b: &SubalgebraLattice, psi: &[usize]) -> Result<()> {
    if psi.len() != a.len() || a.len() != b.len() {
        return Err(Error::usage("subalgebra map has the wrong size"));
    }
    let mut hit = vec![false; b.len()];
    for &j in psi {
        if j >= b.len() || std::mem::replace(&mut hit[j], true) {
            return Err(Error::usage("subalgebra map is not a bijection"));
        }
    }
    let (pa, pb) = (a.poset(), b.poset());
    for x in 0..a.len() {
        for y in 0..a.len() {
            if pa.leq(x, y) != pb.leq(psi[x], psi[y]) {
                return Err(Error::usage(format!(
                    "subalgebra map is not an order isomorphism at ({}, {})",
                    pa.label(x),
                    pa.label(y)
                )));
            }
        }
    }
    Ok(())
}

/// Lifts an isomorphism of subalgebra lattices `Sub(A) -> Sub(B)` to an
/// algebra isomorphism `f` with `f[C] = psi(C)` for every subalgebra `C`.
///
/// The lift is unique unless `A` has four elements; then there are two, and
/// `tiebreak = Some((x, y))` selects the one with `f(x) = y`. Without a
/// tiebreak the first atom of `A` goes to the first atom of `B`.
pub fn lift_sub_iso(
    a: &SubalgebraLattice,
    b: &SubalgebraLattice,
    psi: &[usize],
    tiebreak: Option<(Elem, Elem)>,
) -> Result<BoolHom> {
    check_order_iso(a, b, psi)?;
    let (src, tgt) = (a.base(), b.base());
    let n = src.num_atoms();
    if tgt.num_atoms() != n {
        return Err(Error::logic(
            "isomorphic subalgebra lattices over algebras of different size",
        ));
    }

    let images: Vec<Elem> = match n {
        1 => vec![tgt.one()],
        2 => {
            let straight = vec![0b01, 0b10];
            let swapped = vec![0b10, 0b01];
            let (x, y) = tiebreak.unwrap_or((0b01, 0b01));
            let pick = [straight, swapped].into_iter().find(|imgs| {
                let f =
                    BoolHom::new(src.clone(), tgt.clone(), imgs.clone()).expect("atom permutation");
                f.apply(x) == y
            });
            pick.ok_or_else(|| Error::usage("tiebreak names no lift of the four-element case"))?
        }
        _ => {
            // Each atom x spans the four-element subalgebra {0, x, ¬x, 1}; its
            // image {0, y, ¬y, 1} has exactly one atom among y, ¬y.
            let mut images = Vec::with_capacity(n);
            for i in 0..n {
                let rest = src.one() & !(1 << i);
                let t = Partition::from_blocks(n, vec![1 << i, rest]).expect("two-block partition");
                let image = b.partition(psi[a.index_of(&t).expect("every partition is listed")]);
                let singles: Vec<Elem> = image
                    .blocks()
                    .iter()
                    .copied()
                    .filter(|m| m.count_ones() == 1)
                    .collect();
                match (image.num_blocks(), singles.as_slice()) {
                    (2, [atom]) => images.push(*atom),
                    _ => {
                        return Err(Error::logic(format!(
                            "subalgebra of atom {} maps to {}, which is not spanned by an atom",
                            src.atoms()[i],
                            b.poset().label(psi[a.index_of(&t).unwrap()])
                        )))
                    }
                }
            }
            images
        }
    };

    let f = BoolHom::new(src.clone(), tgt.clone(), images)
        .map_err(|e| Error::logic(format!("lifted atom map is not a homomorphism: {e}")))?;
    if !f.is_isomorphism() {
        return Err(Error::logic("lifted atom map is not a bijection"));
    }
    for (k, p) in a.partitions().iter().enumerate() {
        if &direct_image(&f, p)? != b.partition(psi[k]) {
            return Err(Error::logic(format!(
                "lift disagrees with the lattice map at {}",
                a.poset().label(k)
            )));
        }
    }
    Ok(f)
}

/// Some isomorphism `A -> B` if the atom counts agree: the i-th atom in
/// sorted label order of `A` goes to the i-th of `B`.
pub fn bool_iso_search(a: &FinBool, b: &FinBool) -> Option<BoolHom> {
    if a.num_atoms() != b.num_atoms() {
        return None;
    }
    let mut order_a: Vec<usize> = (0..a.num_atoms()).collect();
    order_a.sort_by(|&x, &y| a.atoms()[x].cmp(&a.atoms()[y]));
    let mut order_b: Vec<usize> = (0..b.num_atoms()).collect();
    order_b.sort_by(|&x, &y| b.atoms()[x].cmp(&b.atoms()[y]));
    let mut images = vec![0; a.num_atoms()];
    for (ia, ib) in order_a.into_iter().zip(order_b) {
        images[ia] = 1 << ib;
    }
    BoolHom::new(a.clone(), b.clone(), images).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::subalgebras;

    fn induced_map(f: &BoolHom, a: &SubalgebraLattice, b: &SubalgebraLattice) -> Vec<usize> {
        a.partitions()
            .iter()
            .map(|p| b.index_of(&direct_image(f, p).unwrap()).unwrap())
            .collect()
    }

    /// Every atom permutation, as candidate isomorphisms.
    fn all_atom_bijections(a: &FinBool, b: &FinBool) -> Vec<BoolHom> {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        perms(a.num_atoms())
            .into_iter()
            .map(|p| {
                BoolHom::new(a.clone(), b.clone(), p.iter().map(|&i| 1 << i).collect()).unwrap()
            })
            .collect()
    }

    #[test]
    fn identity_lifts_to_identity() {
        let b = FinBool::of(&["a", "b", "c"]);
        let sub = subalgebras(&b).unwrap();
        let psi: Vec<usize> = (0..sub.len()).collect();
        assert_eq!(
            lift_sub_iso(&sub, &sub, &psi, None).unwrap(),
            BoolHom::identity(&b)
        );
    }

    #[test]
    fn four_element_case_has_two_lifts() {
        let b = FinBool::of(&["p", "np"]);
        let sub = subalgebras(&b).unwrap();
        let psi: Vec<usize> = (0..sub.len()).collect();
        let straight = lift_sub_iso(&sub, &sub, &psi, Some((0b01, 0b01))).unwrap();
        let swapped = lift_sub_iso(&sub, &sub, &psi, Some((0b01, 0b10))).unwrap();
        assert_eq!(straight, BoolHom::identity(&b));
        assert_eq!(swapped.atom_images(), &[0b10, 0b01]);
        // both candidates induce the identity on subalgebras
        let inducing: Vec<_> = all_atom_bijections(&b, &b)
            .into_iter()
            .filter(|f| induced_map(f, &sub, &sub) == psi)
            .collect();
        assert_eq!(inducing.len(), 2);
        assert!(lift_sub_iso(&sub, &sub, &psi, Some((0b01, 0b11))).is_err());
    }

    #[test]
    fn three_cycle_lifts_uniquely() {
        let b = FinBool::of(&["a", "b", "c"]);
        let sub = subalgebras(&b).unwrap();
        let cycle = BoolHom::new(b.clone(), b.clone(), vec![0b010, 0b100, 0b001]).unwrap();
        let psi = induced_map(&cycle, &sub, &sub);
        assert_eq!(lift_sub_iso(&sub, &sub, &psi, None).unwrap(), cycle);
        let inducing: Vec<_> = all_atom_bijections(&b, &b)
            .into_iter()
            .filter(|f| induced_map(f, &sub, &sub) == psi)
            .collect();
        assert_eq!(inducing, vec![cycle]);
    }

    #[test]
    fn non_isomorphism_rejected() {
        let b = FinBool::of(&["a", "b", "c"]);
        let sub = subalgebras(&b).unwrap();
        let psi = vec![0; sub.len()];
        assert!(matches!(
            lift_sub_iso(&sub, &sub, &psi, None),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn iso_search() {
        let a = FinBool::of(&["a", "b", "c"]);
        let b = FinBool::of(&["z", "y", "x"]);
        let f = bool_iso_search(&a, &b).unwrap();
        assert_eq!(f.atom_images(), &[0b100, 0b010, 0b001]);
        assert!(bool_iso_search(&FinBool::of(&["a", "b"]), &a).is_none());
        assert_eq!(bool_iso_search(&a, &a).unwrap(), BoolHom::identity(&a));
    }
}
