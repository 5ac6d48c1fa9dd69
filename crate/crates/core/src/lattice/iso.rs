//! Order isomorphisms by backtracking over invariant-refined candidate lists.

use std::ops::ControlFlow;

use super::FinPoset;

/// Per-element invariant preserved by every order isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(super) struct Signature {
    below: usize,
    above: usize,
    lower_covers: usize,
    upper_covers: usize,
    depth: usize,
    rise: usize,
}

/// Sorted multiset of element signatures; equal for isomorphic posets.
pub(super) fn invariant_key(p: &FinPoset) -> Vec<Signature> {
    let mut s = signatures(p);
    s.sort();
    s
}

fn signatures(p: &FinPoset) -> Vec<Signature> {
    let n = p.len();
    let mut depth = vec![0usize; n];
    for &v in p.topological_order() {
        depth[v] = p
            .lower_covers(v)
            .iter()
            .map(|&w| depth[w] + 1)
            .max()
            .unwrap_or(0);
    }
    let mut rise = vec![0usize; n];
    for &v in p.topological_order().iter().rev() {
        rise[v] = p
            .upper_covers(v)
            .iter()
            .map(|&w| rise[w] + 1)
            .max()
            .unwrap_or(0);
    }
    (0..n)
        .map(|i| Signature {
            below: p.down_set(i).count_ones(..),
            above: p.up_set(i).count_ones(..),
            lower_covers: p.lower_covers(i).len(),
            upper_covers: p.upper_covers(i).len(),
            depth: depth[i],
            rise: rise[i],
        })
        .collect()
}

struct Search<'a> {
    p: &'a FinPoset,
    q: &'a FinPoset,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self, v: usize, w: usize) -> bool {
        self.order.iter().all(|&u| match self.map[u] {
            Some(u2) => {
                self.p.leq(u, v) == self.q.leq(u2, w) && self.p.leq(v, u) == self.q.leq(w, u2)
            }
            None => true,
        })
    }

    fn run<F: FnMut(&[usize]) -> ControlFlow<()>>(
        &mut self,
        depth: usize,
        visit: &mut F,
    ) -> ControlFlow<()> {
        if depth == self.order.len() {
            let full: Vec<usize> = self.map.iter().map(|m| m.unwrap()).collect();
            return visit(&full);
        }
        let v = self.order[depth];
        if self.map[v].is_some() {
            // pinned
            return self.run(depth + 1, visit);
        }
        for ci in 0..self.candidates[v].len() {
            let w = self.candidates[v][ci];
            if self.used[w] || !self.consistent(v, w) {
                continue;
            }
            self.map[v] = Some(w);
            self.used[w] = true;
            let flow = self.run(depth + 1, visit);
            self.map[v] = None;
            self.used[w] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` with every order isomorphism `p -> q` (as an index map)
/// extending `pinned`, in a fixed search order; stop early by returning
/// `ControlFlow::Break`.
pub fn for_each_iso<F>(p: &FinPoset, q: &FinPoset, pinned: &[(usize, usize)], mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = p.len();
    if n != q.len() || p.covers().len() != q.covers().len() {
        return;
    }
    let sp = signatures(p);
    let sq = signatures(q);
    let mut sorted_p = sp.clone();
    let mut sorted_q = sq.clone();
    sorted_p.sort();
    sorted_q.sort();
    if sorted_p != sorted_q {
        return;
    }

    // Candidates: same signature; same-label candidate first so identical
    // posets yield the identity before anything else.
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut c: Vec<usize> = (0..n).filter(|&w| sq[w] == sp[v]).collect();
            if let Some(pos) = c.iter().position(|&w| q.label(w) == p.label(v)) {
                let same = c.remove(pos);
                c.insert(0, same);
            }
            c
        })
        .collect();

    let mut map = vec![None; n];
    let mut used = vec![false; n];
    for &(v, w) in pinned {
        if v >= n || w >= n || sp[v] != sq[w] || used[w] || map[v].is_some() {
            return;
        }
        map[v] = Some(w);
        used[w] = true;
    }
    for &(v, w) in pinned {
        for &(u, u2) in pinned {
            if p.leq(u, v) != q.leq(u2, w) {
                return;
            }
        }
    }

    // Variable order: pinned first, then grow along covers preferring few candidates.
    let mut order: Vec<usize> = pinned.iter().map(|&(v, _)| v).collect();
    let mut placed = vec![false; n];
    for &v in &order {
        placed[v] = true;
    }
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let touches = p
                    .lower_covers(v)
                    .iter()
                    .chain(p.upper_covers(v))
                    .any(|&u| placed[u]);
                (!touches, candidates[v].len(), v)
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }

    let mut search = Search {
        p,
        q,
        order,
        candidates,
        map,
        used,
    };
    let _ = search.run(0, &mut visit);
}

/// First order isomorphism found, if any.
pub fn poset_iso(p: &FinPoset, q: &FinPoset) -> Option<Vec<usize>> {
    poset_iso_pinned(p, q, &[])
}

/// First order isomorphism extending a partial assignment.
pub fn poset_iso_pinned(
    p: &FinPoset,
    q: &FinPoset,
    pinned: &[(usize, usize)],
) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_iso(p, q, pinned, |m| {
        found = Some(m.to_vec());
        ControlFlow::Break(())
    });
    found
}

/// Every order isomorphism `p -> q`.
pub fn all_isos(p: &FinPoset, q: &FinPoset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_iso(p, q, &[], |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::partition_lattice;

    fn is_order_iso(p: &FinPoset, q: &FinPoset, m: &[usize]) -> bool {
        let mut seen = vec![false; q.len()];
        for &w in m {
            if seen[w] {
                return false;
            }
            seen[w] = true;
        }
        (0..p.len()).all(|a| (0..p.len()).all(|b| p.leq(a, b) == q.leq(m[a], m[b])))
    }

    #[test]
    fn identity_found_first() {
        let p = partition_lattice(3).unwrap();
        let m = poset_iso(&p, &p).unwrap();
        assert_eq!(m, (0..p.len()).collect::<Vec<_>>());
    }

    #[test]
    fn pi4_not_self_dual() {
        let p = partition_lattice(4).unwrap();
        assert!(poset_iso(&p, &p.dual()).is_none());
    }

    #[test]
    fn chain_vs_antichain() {
        let c = FinPoset::from_covers(vec!["a".into(), "b".into()], vec![(0, 1)]).unwrap();
        let a = FinPoset::from_covers(vec!["a".into(), "b".into()], vec![]).unwrap();
        assert!(poset_iso(&c, &a).is_none());
    }

    #[test]
    fn automorphisms_of_small_partition_lattices() {
        // Aut(Π_n) is the symmetric group for n >= 3 (and trivial below).
        let counts: Vec<usize> = (1..=4)
            .map(|n| {
                let p = partition_lattice(n).unwrap();
                let all = all_isos(&p, &p);
                assert!(all.iter().all(|m| is_order_iso(&p, &p, m)));
                all.len()
            })
            .collect();
        assert_eq!(counts, vec![1, 1, 6, 24]);
    }

    #[test]
    fn pinned_search_respects_pins() {
        let p = partition_lattice(3).unwrap();
        let a = p.index_of("12/3").unwrap();
        let b = p.index_of("13/2").unwrap();
        let m = poset_iso_pinned(&p, &p, &[(a, b)]).unwrap();
        assert_eq!(m[a], b);
        assert!(is_order_iso(&p, &p, &m));
        // bottom cannot go to an atom
        let bot = p.bottom().unwrap();
        assert!(poset_iso_pinned(&p, &p, &[(bot, a)]).is_none());
    }
}
