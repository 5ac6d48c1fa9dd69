use std::ops::ControlFlow;

use super::{sub, sub_on_hom, PieceBool, PieceBoolHom, SubPoset};
use crate::boolalg::{lift_sub_iso, partition_of_elements, subalgebras, BoolHom, Elem};
use crate::error::{Error, Result};

const UNSET: usize = usize::MAX;

/// Partial carrier bijection built block by block, with an undo log.
struct Matching {
    fwd: Vec<usize>,
    back: Vec<usize>,
    log: Vec<usize>,
}

impl Matching {
    fn new(n: usize, m: usize) -> Self {
        Matching {
            fwd: vec![UNSET; n],
            back: vec![UNSET; m],
            log: Vec::new(),
        }
    }

    fn assign(&mut self, x: usize, y: usize) -> bool {
        match (self.fwd[x], self.back[y]) {
            (UNSET, UNSET) => {
                self.fwd[x] = y;
                self.back[y] = x;
                self.log.push(x);
                true
            }
            (a, b) => a == y && b == x,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.log.len() > mark {
            let x = self.log.pop().unwrap();
            self.back[self.fwd[x]] = UNSET;
            self.fwd[x] = UNSET;
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    heap_permute(k, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        cur.swap(j, k - 1);
    }
}

/// Blocks ordered so each one overlaps the earlier ones as much as possible,
/// which pins down the matching early.
fn block_order(p: &PieceBool) -> Vec<usize> {
    let n = p.blocks().len();
    let mut placed = vec![false; n];
    let mut seen = vec![false; p.len()];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&b| !placed[b])
            .max_by_key(|&b| {
                let overlap = p
                    .block(b)
                    .carrier_set()
                    .iter()
                    .filter(|&&c| seen[c])
                    .count();
                (overlap, std::cmp::Reverse(b))
            })
            .unwrap();
        placed[next] = true;
        p.block(next)
            .carrier_set()
            .iter()
            .for_each(|&c| seen[c] = true);
        order.push(next);
    }
    order
}

fn search(
    p: &PieceBool,
    q: &PieceBool,
    order: &[usize],
    perms: &[Vec<Vec<usize>>],
    used: &mut [bool],
    m: &mut Matching,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let Some((&bi, rest)) = order.split_first() else {
        return visit(&m.fwd);
    };
    let b = p.block(bi);
    let k = b.algebra().num_atoms();
    for bj in 0..q.blocks().len() {
        let c = q.block(bj);
        if used[bj] || c.algebra().num_atoms() != k {
            continue;
        }
        used[bj] = true;
        for sigma in &perms[k] {
            let mark = m.log.len();
            let images: Vec<Elem> = sigma.iter().map(|&t| 1 << t).collect();
            let h = BoolHom::new(b.algebra().clone(), c.algebra().clone(), images)
                .expect("atom permutation");
            let ok = b
                .algebra()
                .elements()
                .all(|x| m.assign(b.label(x), c.label(h.apply(x))));
            if ok {
                search(p, q, rest, perms, used, m, visit)?;
            }
            m.undo_to(mark);
        }
        used[bj] = false;
    }
    ControlFlow::Continue(())
}

fn size_profile(p: &PieceBool) -> Vec<usize> {
    let mut v: Vec<usize> = p.blocks().iter().map(|b| b.algebra().num_atoms()).collect();
    v.sort_unstable();
    v
}

/// Visits every isomorphism `p -> q` as a carrier map.
fn for_each_pba_iso(
    p: &PieceBool,
    q: &PieceBool,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) {
    if p.len() != q.len() || size_profile(p) != size_profile(q) {
        return;
    }
    let max_k = size_profile(p).last().copied().unwrap_or(0);
    let perms: Vec<Vec<Vec<usize>>> = (0..=max_k).map(permutations).collect();
    let order = block_order(p);
    let mut used = vec![false; q.blocks().len()];
    let mut m = Matching::new(p.len(), q.len());
    let _ = search(p, q, &order, &perms, &mut used, &mut m, &mut visit);
}

/// Some isomorphism, if the algebras are isomorphic.
pub fn pba_iso_search(p: &PieceBool, q: &PieceBool) -> Option<PieceBoolHom> {
    let mut found = None;
    for_each_pba_iso(p, q, |map| {
        // a block bijection matching all elements preserves everything; the
        // constructor re-checks it
        match PieceBoolHom::new(p.clone(), q.clone(), map.to_vec()) {
            Ok(f) if f.is_isomorphism() => {
                found = Some(f);
                ControlFlow::Break(())
            }
            _ => ControlFlow::Continue(()),
        }
    });
    found
}

/// Every isomorphism `p -> q`.
pub fn all_pba_isos(p: &PieceBool, q: &PieceBool) -> Vec<PieceBoolHom> {
    let mut out = Vec::new();
    for_each_pba_iso(p, q, |map| {
        if let Ok(f) = PieceBoolHom::new(p.clone(), q.clone(), map.to_vec()) {
            if f.is_isomorphism() {
                out.push(f);
            }
        }
        ControlFlow::Continue(())
    });
    out
}

fn check_order_iso(sp: &SubPoset, sq: &SubPoset, phi: &[usize]) -> Result<()> {
    let (a, b) = (sp.poset(), sq.poset());
    if phi.len() != a.len() || a.len() != b.len() {
        return Err(Error::usage("domain map has the wrong size"));
    }
    let mut hit = vec![false; b.len()];
    for &y in phi {
        if y >= b.len() || std::mem::replace(&mut hit[y], true) {
            return Err(Error::usage("domain map is not a bijection"));
        }
    }
    for x in 0..a.len() {
        for y in 0..a.len() {
            if a.leq(x, y) != b.leq(phi[x], phi[y]) {
                return Err(Error::usage(format!(
                    "domain map is not an order isomorphism at ({}, {})",
                    a.label(x),
                    a.label(y)
                )));
            }
        }
    }
    Ok(())
}

/// Carrier pairs of one candidate lift on one block.
type BlockLift = Vec<(usize, usize)>;

/// Candidate lifts of `phi` on block `bi` of `p`: one, or two when the
/// block has four elements.
fn block_lifts(
    p: &PieceBool,
    q: &PieceBool,
    sp: &SubPoset,
    sq: &SubPoset,
    phi: &[usize],
    bi: usize,
) -> Result<Vec<BlockLift>> {
    let b = p.block(bi);
    let node = sp
        .index_of_set(&b.carrier_set())
        .expect("blocks are subalgebras");
    let target_set = sq.carrier(phi[node]);
    let bj = (0..q.blocks().len())
        .find(|&j| q.block(j).carrier_set() == target_set)
        .ok_or_else(|| {
            Error::logic(format!(
                "block {} is not sent to a block",
                sp.poset().label(node)
            ))
        })?;
    let c = q.block(bj);

    let sa = subalgebras(b.algebra())?;
    let sb = subalgebras(c.algebra())?;
    let mut psi = Vec::with_capacity(sa.len());
    for k in 0..sa.len() {
        let mut set: Vec<usize> = sa.carrier(k).iter().map(|&m| b.label(m)).collect();
        set.sort_unstable();
        let image = sq.carrier(phi[sp.index_of_set(&set).expect("subalgebra of a block")]);
        let masks: Vec<Elem> = image
            .iter()
            .map(|&y| c.mask_of(y))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::logic("a subalgebra of a block leaves the image block"))?;
        let pi = partition_of_elements(c.algebra(), &masks)
            .map_err(|e| Error::logic(format!("image is not a subalgebra of the block: {e}")))?;
        psi.push(sb.index_of(&pi).expect("every partition is listed"));
    }

    let tiebreaks: Vec<Option<(Elem, Elem)>> = if b.algebra().num_atoms() == 2 {
        vec![Some((0b01, 0b01)), Some((0b01, 0b10))]
    } else {
        vec![None]
    };
    tiebreaks
        .into_iter()
        .map(|t| {
            let f = lift_sub_iso(&sa, &sb, &psi, t).map_err(|e| match e {
                Error::Usage(m) => Error::logic(m),
                e => e,
            })?;
            Ok(b.algebra()
                .elements()
                .map(|m| (b.label(m), c.label(f.apply(m))))
                .collect())
        })
        .collect()
}

/// Every isomorphism `f: p -> q` with `Sub(f) = phi`, where `phi` indexes
/// the nodes of [`sub`].
///
/// Each block lifts by the Boolean case; the lifts are then glued where
/// they agree on shared elements.
pub fn lift_domain_iso(p: &PieceBool, q: &PieceBool, phi: &[usize]) -> Result<Vec<PieceBoolHom>> {
    let (sp, sq) = (sub(p)?, sub(q)?);
    check_order_iso(&sp, &sq, phi)?;
    if p.len() != q.len() {
        return Err(Error::logic(
            "isomorphic domains over carriers of different size",
        ));
    }
    let per_block: Vec<Vec<BlockLift>> = (0..p.blocks().len())
        .map(|bi| block_lifts(p, q, &sp, &sq, phi, bi))
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    let mut m = Matching::new(p.len(), q.len());
    glue(&per_block, &mut m, &mut |map| {
        if let Ok(f) = PieceBoolHom::new(p.clone(), q.clone(), map.to_vec()) {
            if f.is_isomorphism() && sub_on_hom(&f, &sp, &sq).ok().as_deref() == Some(phi) {
                out.push(f);
            }
        }
    });
    if out.is_empty() {
        return Err(Error::logic("no isomorphism lifts the domain map"));
    }
    Ok(out)
}

fn glue(per_block: &[Vec<BlockLift>], m: &mut Matching, visit: &mut dyn FnMut(&[usize])) {
    let Some((choices, rest)) = per_block.split_first() else {
        visit(&m.fwd);
        return;
    };
    for pairs in choices {
        let mark = m.log.len();
        if pairs.iter().all(|&(x, y)| m.assign(x, y)) {
            glue(rest, m, visit);
        }
        m.undo_to(mark);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::FinBool;
    use crate::pba::BlockSpec;

    fn shared_atom(twisted: bool) -> PieceBool {
        let first = BlockSpec::of(&["x", "u", "v"]).rename(&["u", "v"], "nx");
        let second = if twisted {
            BlockSpec::of(&["nx", "s", "t"]).rename(&["s", "t"], "x")
        } else {
            BlockSpec::of(&["x", "s", "t"]).rename(&["s", "t"], "nx")
        };
        PieceBool::glue(&[first, second]).unwrap()
    }

    /// Same domain, different algebras: `x` is an atom of both blocks in
    /// one and of only one block in the other, so no isomorphism lifts.
    #[test]
    fn domain_does_not_determine_twisted_gluing() {
        let (plain, twisted) = (shared_atom(false), shared_atom(true));
        let (s1, s2) = (sub(&plain).unwrap(), sub(&twisted).unwrap());
        let isos = crate::lattice::all_isos(s1.poset(), s2.poset());
        assert!(!isos.is_empty());
        assert!(pba_iso_search(&plain, &twisted).is_none());
        for phi in isos {
            assert!(matches!(
                lift_domain_iso(&plain, &twisted, &phi),
                Err(Error::Logic(_))
            ));
        }
    }

    fn identity_phi(p: &PieceBool) -> Vec<usize> {
        (0..sub(p).unwrap().len()).collect()
    }

    #[test]
    fn permutations_are_complete() {
        let mut ps = permutations(4);
        assert_eq!(ps.len(), 24);
        ps.sort();
        ps.dedup();
        assert_eq!(ps.len(), 24);
    }

    #[test]
    fn identity_is_found() {
        let p = PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "c", "d"])])
            .unwrap();
        let f = pba_iso_search(&p, &p).unwrap();
        assert!(f.is_isomorphism());
        // Aut = Aut(4-element) × Aut(8-element) = 2 × 6
        assert_eq!(all_pba_isos(&p, &p).len(), 12);
    }

    #[test]
    fn different_block_sizes_are_not_isomorphic() {
        let p =
            PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).unwrap();
        let q = PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "c", "d"])])
            .unwrap();
        assert!(pba_iso_search(&p, &q).is_none());
    }

    #[test]
    fn relabelled_gluing_is_isomorphic() {
        let p = PieceBool::glue(&[
            BlockSpec::of(&["a", "b", "c"]),
            BlockSpec::of(&["a", "d", "e"]).rename(&["d", "e"], "b+c"),
        ])
        .unwrap();
        let q = PieceBool::glue(&[
            BlockSpec::of(&["u", "v", "w"]).rename(&["u", "v"], "x"),
            BlockSpec::of(&["s", "t", "x"])
                .rename(&["x"], "w")
                .rename(&["s", "t"], "x"),
        ]);
        // the second gluing shares `w` and `x` = ¬w
        let q = q.unwrap();
        let f = pba_iso_search(&p, &q).unwrap();
        assert_eq!(f.apply(p.index_of("a").unwrap()), q.index_of("w").unwrap());
    }

    #[test]
    fn lift_counts() {
        let eight = PieceBool::from_bool(&FinBool::of(&["a", "b", "c"]));
        assert_eq!(
            lift_domain_iso(&eight, &eight, &identity_phi(&eight))
                .unwrap()
                .len(),
            1
        );

        let four = PieceBool::from_bool(&FinBool::of(&["p", "np"]));
        assert_eq!(
            lift_domain_iso(&four, &four, &identity_phi(&four))
                .unwrap()
                .len(),
            2
        );

        let mo2 =
            PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).unwrap();
        assert_eq!(
            lift_domain_iso(&mo2, &mo2, &identity_phi(&mo2))
                .unwrap()
                .len(),
            4
        );
    }

    #[test]
    fn lifts_agree_with_exhaustive_search() {
        let p = PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "c", "d"])])
            .unwrap();
        let s = sub(&p).unwrap();
        for g in all_pba_isos(&p, &p) {
            let phi = sub_on_hom(&g, &s, &s).unwrap();
            let lifts = lift_domain_iso(&p, &p, &phi).unwrap();
            let oracle: Vec<_> = all_pba_isos(&p, &p)
                .into_iter()
                .filter(|f| sub_on_hom(f, &s, &s).unwrap() == phi)
                .collect();
            assert_eq!(lifts.len(), oracle.len());
            assert!(lifts.contains(&g));
        }
    }

    #[test]
    fn non_iso_phi_is_rejected() {
        let p = PieceBool::from_bool(&FinBool::of(&["a", "b", "c"]));
        let phi = vec![0; 5];
        assert!(matches!(
            lift_domain_iso(&p, &p, &phi),
            Err(Error::Usage(_))
        ));
    }
}
