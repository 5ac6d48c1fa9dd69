//! Finite posets and lattices.
//!
//! A [`FinPoset`] is given by its cover relation. The full order is computed
//! once at construction and kept as one bitset per element, so `leq` is a
//! constant-time lookup afterwards.

mod enumerate;
mod iso;
mod ops;
pub(crate) mod partition;
mod recognize;

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub use enumerate::{
    boolean_lattice, enumerate_posets, enumerate_posets_upto, random_lattice, random_lattices,
};
pub use iso::{all_isos, for_each_iso, poset_iso, poset_iso_pinned};
pub use ops::Lattice;
pub use partition::{bell, partition_lattice, Partition};
pub use recognize::{
    recognize_partition_lattice, recognize_partition_lattice_recursive, PartitionLatticeCert,
};

#[derive(Clone, Debug)]
pub struct FinPoset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    /// `above[i]` holds every `j` with `i <= j`.
    above: Vec<FixedBitSet>,
    /// `below[i]` holds every `j` with `j <= i`.
    below: Vec<FixedBitSet>,
    topo: Vec<usize>,
}

impl PartialEq for FinPoset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.above == other.above
    }
}

impl Eq for FinPoset {}

impl FinPoset {
    /// Builds a poset from labelled elements and labelled cover pairs.
    pub fn new<S: AsRef<str>>(labels: Vec<String>, covers: &[(S, S)]) -> Result<Self> {
        let index = index_labels(&labels)?;
        let mut idx_covers = Vec::with_capacity(covers.len());
        for (lo, hi) in covers {
            let lo = *index.get(lo.as_ref()).ok_or_else(|| {
                Error::structural(format!("unknown element {:?} in covers", lo.as_ref()))
            })?;
            let hi = *index.get(hi.as_ref()).ok_or_else(|| {
                Error::structural(format!("unknown element {:?} in covers", hi.as_ref()))
            })?;
            idx_covers.push((lo, hi));
        }
        Self::build(labels, index, idx_covers)
    }

    /// Builds a poset from index-based cover pairs.
    pub fn from_covers(labels: Vec<String>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let index = index_labels(&labels)?;
        if let Some(&(a, b)) = covers
            .iter()
            .find(|&&(a, b)| a >= labels.len() || b >= labels.len())
        {
            return Err(Error::structural(format!("cover ({a}, {b}) out of range")));
        }
        Self::build(labels, index, covers)
    }

    /// Builds a poset from an order predicate; covers are its transitive reduction.
    pub fn from_relation(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                if i == j || leq(i, j) {
                    above[i].insert(j);
                }
            }
        }
        for i in 0..n {
            for j in above[i].ones() {
                if i != j && above[j].contains(i) {
                    return Err(Error::structural(format!(
                        "relation is not antisymmetric on {} and {}",
                        labels[i], labels[j]
                    )));
                }
                if !above[j].is_subset(&above[i]) {
                    return Err(Error::structural(format!(
                        "relation is not transitive through {}",
                        labels[j]
                    )));
                }
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            for j in above[i].ones() {
                if i == j {
                    continue;
                }
                let between = above[i]
                    .ones()
                    .any(|k| k != i && k != j && above[k].contains(j));
                if !between {
                    covers.push((i, j));
                }
            }
        }
        Self::from_covers(labels, covers)
    }

    fn build(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        covers: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::structural("poset has no elements"));
        }
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(lo, hi) in &covers {
            if lo == hi {
                return Err(Error::structural(format!("self-cover on {}", labels[lo])));
            }
            if upper[lo].contains(&hi) {
                return Err(Error::structural(format!(
                    "duplicate cover ({}, {})",
                    labels[lo], labels[hi]
                )));
            }
            upper[lo].push(hi);
            lower[hi].push(lo);
        }

        // Kahn's algorithm; a leftover element means a cycle.
        let mut indeg: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..n).rev().filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            topo.push(v);
            for &w in upper[v].iter().rev() {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if topo.len() != n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap();
            return Err(Error::structural(format!(
                "cover relation has a cycle through {}",
                labels[stuck]
            )));
        }

        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for &v in topo.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(v);
            for &w in &upper[v] {
                set.union_with(&above[w]);
            }
            above[v] = set;
        }
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in above[i].ones() {
                below[j].insert(i);
            }
        }

        for &(lo, hi) in &covers {
            let shortcut = upper[lo]
                .iter()
                .any(|&mid| mid != hi && above[mid].contains(hi));
            if shortcut {
                return Err(Error::structural(format!(
                    "cover ({}, {}) is implied by a longer chain",
                    labels[lo], labels[hi]
                )));
            }
        }

        Ok(FinPoset {
            labels,
            index,
            covers,
            upper,
            lower,
            above,
            below,
            topo,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::usage(format!("no element labelled {label:?}")))
    }

    /// Cover pairs `(lower, upper)` in construction order.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    pub fn covers_pair(&self, lo: usize, hi: usize) -> bool {
        self.upper[lo].contains(&hi)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn up_set(&self, i: usize) -> &FixedBitSet {
        &self.above[i]
    }

    pub fn down_set(&self, i: usize) -> &FixedBitSet {
        &self.below[i]
    }

    /// A linear extension: every element appears after all elements below it.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// The full order as `(a, b)` pairs with `a <= b`, in index order.
    pub fn order(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for a in 0..self.len() {
            for b in self.above[a].ones() {
                pairs.push((a, b));
            }
        }
        pairs
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.lower[i].is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.upper[i].is_empty())
            .collect()
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        self.upper[i].is_empty()
    }

    pub fn bottom(&self) -> Option<usize> {
        match self.minimal_elements()[..] {
            [b] => Some(b),
            _ => None,
        }
    }

    pub fn top(&self) -> Option<usize> {
        match self.maximal_elements()[..] {
            [t] => Some(t),
            _ => None,
        }
    }

    /// Elements covering the least element (empty if there is none).
    pub fn atoms(&self) -> Vec<usize> {
        match self.bottom() {
            Some(b) => self.upper[b].clone(),
            None => Vec::new(),
        }
    }

    pub fn coatoms(&self) -> Vec<usize> {
        match self.top() {
            Some(t) => self.lower[t].clone(),
            None => Vec::new(),
        }
    }

    pub fn is_atom(&self, i: usize) -> bool {
        matches!(self.lower[i][..], [b] if self.lower[b].is_empty() && self.bottom() == Some(b))
    }

    fn bounds_of(&self, set: &[usize], sets: &[FixedBitSet]) -> Result<FixedBitSet> {
        let (&first, rest) = set
            .split_first()
            .ok_or_else(|| Error::usage("bound of an empty set requested"))?;
        let mut acc = sets[first].clone();
        for &x in rest {
            acc.intersect_with(&sets[x]);
        }
        Ok(acc)
    }

    /// Greatest lower bound of a nonempty set, if it exists.
    pub fn meet(&self, set: &[usize]) -> Result<Option<usize>> {
        let lower = self.bounds_of(set, &self.below)?;
        Ok(lower.ones().find(|&c| lower.is_subset(&self.below[c])))
    }

    /// Least upper bound of a nonempty set, if it exists.
    pub fn join(&self, set: &[usize]) -> Result<Option<usize>> {
        let upper = self.bounds_of(set, &self.above)?;
        Ok(upper.ones().find(|&c| upper.is_subset(&self.above[c])))
    }

    /// The least element of the principal ideal of `x`, if any.
    pub fn least_below(&self, x: usize) -> Option<usize> {
        let down = &self.below[x];
        down.ones().find(|&c| down.is_subset(&self.above[c]))
    }

    /// Length of the longest chain from the least element below `x` up to `x`.
    pub fn height(&self, x: usize) -> Result<usize> {
        let b = self.least_below(x).ok_or_else(|| {
            Error::structural(format!("no least element below {}", self.labels[x]))
        })?;
        Ok(self.longest_chain(b, x))
    }

    /// Heights of every element; requires a global least element.
    pub fn heights(&self) -> Result<Vec<usize>> {
        let b = self
            .bottom()
            .ok_or_else(|| Error::structural("poset has no least element"))?;
        let mut h = vec![0usize; self.len()];
        for &v in &self.topo {
            if v != b {
                h[v] = self.lower[v].iter().map(|&w| h[w] + 1).max().unwrap_or(0);
            }
        }
        Ok(h)
    }

    fn longest_chain(&self, from: usize, to: usize) -> usize {
        let mut dist: Vec<Option<usize>> = vec![None; self.len()];
        dist[from] = Some(0);
        for &v in &self.topo {
            let Some(d) = dist[v] else { continue };
            if v == to {
                break;
            }
            for &w in &self.upper[v] {
                if self.above[w].contains(to) {
                    dist[w] = Some(dist[w].map_or(d + 1, |e| e.max(d + 1)));
                }
            }
        }
        dist[to].unwrap_or(0)
    }

    /// The order dual, with the same labels.
    pub fn dual(&self) -> FinPoset {
        let covers = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        Self::from_covers(self.labels.clone(), covers).expect("dual of a valid poset")
    }

    /// The induced subposet on `elements`, listed in the given order.
    pub fn restrict(&self, elements: &[usize]) -> FinPoset {
        let labels = elements.iter().map(|&i| self.labels[i].clone()).collect();
        FinPoset::from_relation(labels, |a, b| self.leq(elements[a], elements[b]))
            .expect("restriction of a valid poset")
    }

    /// The principal ideal of `x`, with a map back to the ambient indices.
    pub fn ideal(&self, x: usize) -> (FinPoset, Vec<usize>) {
        let members: Vec<usize> = self.below[x].ones().collect();
        (self.restrict(&members), members)
    }

    /// The interval `[a, b]`, with a map back to the ambient indices.
    pub fn interval(&self, a: usize, b: usize) -> (FinPoset, Vec<usize>) {
        let mut set = self.above[a].clone();
        set.intersect_with(&self.below[b]);
        let members: Vec<usize> = set.ones().collect();
        (self.restrict(&members), members)
    }

    /// True iff every pair has a meet and a join.
    pub fn is_lattice(&self) -> bool {
        Lattice::new(self).is_ok()
    }

    /// True iff every pair has a meet (hence every nonempty finite subset does).
    pub fn has_pairwise_meets(&self) -> bool {
        self.first_missing_meet().is_none()
    }

    pub fn first_missing_meet(&self) -> Option<(usize, usize)> {
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.meet(&[a, b]).ok().flatten().is_none() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Relabels elements (same order, same covers).
    pub fn relabel(&self, labels: Vec<String>) -> Result<FinPoset> {
        if labels.len() != self.len() {
            return Err(Error::usage("relabel: wrong number of labels"));
        }
        Self::from_covers(labels, self.covers.clone())
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() {
            return Err(Error::structural("element identifiers must be nonempty"));
        }
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::structural(format!(
                "duplicate element identifier {l:?}"
            )));
        }
    }
    Ok(index)
}
