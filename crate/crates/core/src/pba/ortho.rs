use fixedbitset::FixedBitSet;

use super::PieceBool;

/// Outcome of the orthomodularity test on the union of the block orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoReport {
    pub transitive: bool,
    pub joined: bool,
    /// `x ≤ y ≤ z` in blocks, but `x ≤ z` in none.
    pub non_transitive: Option<(usize, usize, usize)>,
    /// A pair with no least upper bound.
    pub unjoined: Option<(usize, usize)>,
    /// The union order, `above[x]` holding every `y ≥ x`.
    pub above: Vec<FixedBitSet>,
}

impl OrthoReport {
    /// When true, the union order makes the carrier an orthomodular lattice.
    pub fn holds(&self) -> bool {
        self.transitive && self.joined
    }
}

/// Is the union of the block orders transitive, with all pairwise joins?
pub fn is_transitive_joined(p: &PieceBool) -> OrthoReport {
    let n = p.len();
    let mut above = vec![FixedBitSet::with_capacity(n); n];
    for b in p.blocks() {
        for x in b.algebra().elements() {
            for y in b.algebra().elements().filter(|&y| x & !y == 0) {
                above[b.label(x)].insert(b.label(y));
            }
        }
    }

    let mut non_transitive = None;
    'outer: for x in 0..n {
        for y in above[x].ones() {
            if !above[y].is_subset(&above[x]) {
                let z = above[y].difference(&above[x]).next().unwrap();
                non_transitive = Some((x, y, z));
                break 'outer;
            }
        }
    }

    // Least upper bounds only make sense once the relation is an order.
    let mut unjoined = None;
    if non_transitive.is_none() {
        'pairs: for x in 0..n {
            for y in x + 1..n {
                let mut ub = above[x].clone();
                ub.intersect_with(&above[y]);
                if !ub.ones().any(|u| ub.is_subset(&above[u])) {
                    unjoined = Some((x, y));
                    break 'pairs;
                }
            }
        }
    }

    OrthoReport {
        transitive: non_transitive.is_none(),
        joined: non_transitive.is_none() && unjoined.is_none(),
        non_transitive,
        unjoined,
        above,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::FinBool;
    use crate::pba::BlockSpec;

    /// Brute-force transitivity of the union order, from the block meets.
    fn brute_transitive(p: &PieceBool) -> bool {
        let leq = |x, y| p.meet(x, y) == Some(x);
        let n = p.len();
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(leq(x, y) && leq(y, z)) || leq(x, z))))
    }

    #[test]
    fn boolean_algebra_is_orthomodular() {
        let p = PieceBool::from_bool(&FinBool::of(&["a", "b", "c"]));
        assert!(is_transitive_joined(&p).holds());
    }

    #[test]
    fn mo2_is_orthomodular() {
        let p =
            PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).unwrap();
        let r = is_transitive_joined(&p);
        assert!(r.holds());
        assert!(brute_transitive(&p));
        // a ∨ b is 1 in the union order
        let (a, b) = (p.index_of("a").unwrap(), p.index_of("b").unwrap());
        let mut ub = r.above[a].clone();
        ub.intersect_with(&r.above[b]);
        assert_eq!(ub.ones().collect::<Vec<_>>(), vec![p.one()]);
    }

    #[test]
    fn chained_blocks_break_transitivity() {
        // x ≤ y in the first block, y ≤ z in the second; x and z share no block.
        let b1 = BlockSpec::of(&["x", "a", "n"]).rename(&["x", "a"], "y");
        let b2 = BlockSpec::of(&["c", "d", "e"])
            .rename(&["c"], "y")
            .rename(&["c", "d"], "z")
            .rename(&["d", "e"], "n");
        let b3 = BlockSpec::of(&["w", "nw"]);
        let p = PieceBool::glue(&[b1, b2, b3]).unwrap();
        let r = is_transitive_joined(&p);
        assert!(!r.transitive && !r.holds());
        assert!(!brute_transitive(&p));
        let (x, y, z) = r.non_transitive.unwrap();
        assert!(p.meet(x, y) == Some(x) && p.meet(y, z) == Some(y));
        assert!(!r.above[x].contains(z));
    }
}
