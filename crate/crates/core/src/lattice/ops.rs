use super::FinPoset;
use crate::error::{Error, Result};

/// A poset known to be a lattice, with meet and join tables.
#[derive(Clone, Debug)]
pub struct Lattice<'a> {
    poset: &'a FinPoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl<'a> Lattice<'a> {
    /// Fails with a usage error naming a pair without meet or join.
    pub fn new(poset: &'a FinPoset) -> Result<Self> {
        let n = poset.len();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let m = poset.meet(&[a, b])?.ok_or_else(|| {
                    Error::usage(format!(
                        "{} and {} have no meet",
                        poset.label(a),
                        poset.label(b)
                    ))
                })?;
                let j = poset.join(&[a, b])?.ok_or_else(|| {
                    Error::usage(format!(
                        "{} and {} have no join",
                        poset.label(a),
                        poset.label(b)
                    ))
                })?;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        let bottom = poset.bottom().expect("finite lattice has a bottom");
        let top = poset.top().expect("finite lattice has a top");
        Ok(Lattice {
            poset,
            meet,
            join,
            bottom,
            top,
        })
    }

    pub fn poset(&self) -> &FinPoset {
        self.poset
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.poset.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.poset.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.poset.upper_covers(self.bottom).to_vec()
    }

    pub fn coatoms(&self) -> Vec<usize> {
        self.poset.lower_covers(self.top).to_vec()
    }

    /// Returns a pair `(a, y)` with `a <= y` violating
    /// `a ∨ (x ∧ y) = (a ∨ x) ∧ y`, or `None` if `x` is modular.
    pub fn modularity_witness(&self, x: usize) -> Option<(usize, usize)> {
        let n = self.poset.len();
        for y in 0..n {
            let xy = self.meet(x, y);
            for a in self.poset.down_set(y).ones() {
                if self.join(a, xy) != self.meet(self.join(a, x), y) {
                    return Some((a, y));
                }
            }
        }
        None
    }

    pub fn is_modular_element(&self, x: usize) -> bool {
        self.modularity_witness(x).is_none()
    }

    pub fn modular_atoms(&self) -> Vec<usize> {
        self.atoms()
            .into_iter()
            .filter(|&a| self.is_modular_element(a))
            .collect()
    }

    pub fn modular_coatoms(&self) -> Vec<usize> {
        self.coatoms()
            .into_iter()
            .filter(|&c| self.is_modular_element(c))
            .collect()
    }

    /// `x` covers `x ∧ y` implies `x ∨ y` covers `y`.
    pub fn is_upper_semimodular(&self) -> bool {
        let n = self.poset.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                !self.poset.covers_pair(self.meet(x, y), x)
                    || self.poset.covers_pair(y, self.join(x, y))
            })
        })
    }

    /// `x ∨ y` covers `x` implies `y` covers `x ∧ y`.
    pub fn is_lower_semimodular(&self) -> bool {
        let n = self.poset.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                !self.poset.covers_pair(x, self.join(x, y))
                    || self.poset.covers_pair(self.meet(x, y), y)
            })
        })
    }

    /// Every element is the join of the atoms below it.
    pub fn is_atomistic(&self) -> bool {
        let atoms = self.atoms();
        (0..self.poset.len()).all(|x| {
            let j = atoms
                .iter()
                .filter(|&&a| self.poset.leq(a, x))
                .fold(self.bottom, |acc, &a| self.join(acc, a));
            j == x
        })
    }

    /// Every element is the meet of the coatoms above it.
    pub fn is_coatomistic(&self) -> bool {
        let coatoms = self.coatoms();
        (0..self.poset.len()).all(|x| {
            let m = coatoms
                .iter()
                .filter(|&&c| self.poset.leq(x, c))
                .fold(self.top, |acc, &c| self.meet(acc, c));
            m == x
        })
    }

    pub fn is_geometric(&self) -> bool {
        self.is_atomistic() && self.is_upper_semimodular()
    }

    pub fn is_cogeometric(&self) -> bool {
        self.is_coatomistic() && self.is_lower_semimodular()
    }
}

impl FinPoset {
    /// Usage error if the poset is not a lattice.
    pub fn is_modular_element(&self, x: usize) -> Result<bool> {
        Ok(Lattice::new(self)?.is_modular_element(x))
    }

    /// Finite, atomistic, upper semimodular lattice. Non-lattices are not geometric.
    pub fn is_geometric(&self) -> bool {
        Lattice::new(self)
            .map(|l| l.is_geometric())
            .unwrap_or(false)
    }

    /// Dual of a geometric lattice.
    pub fn is_cogeometric(&self) -> bool {
        Lattice::new(self)
            .map(|l| l.is_cogeometric())
            .unwrap_or(false)
    }
}
