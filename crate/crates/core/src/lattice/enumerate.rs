use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::iso::invariant_key;
use super::{poset_iso, FinPoset};
use crate::error::{Error, Result};
use crate::limits::MAX_ENUMERATION_SIZE;

/// All posets on exactly `k` elements, one per isomorphism class.
///
/// Every poset arises from one on `k - 1` elements by adjoining a maximal
/// element above some down-closed set, so we grow level by level and keep
/// the first representative of each class.
pub fn enumerate_posets(k: usize) -> Result<Vec<FinPoset>> {
    if k == 0 || k > MAX_ENUMERATION_SIZE {
        return Err(Error::usage(format!(
            "exhaustive enumeration needs 1 <= k <= {MAX_ENUMERATION_SIZE}, got {k}"
        )));
    }
    Ok(levels(k).pop().unwrap())
}

/// All posets on `1..=k` elements up to isomorphism, smallest first.
pub fn enumerate_posets_upto(k: usize) -> Result<Vec<FinPoset>> {
    if k == 0 || k > MAX_ENUMERATION_SIZE {
        return Err(Error::usage(format!(
            "exhaustive enumeration needs 1 <= k <= {MAX_ENUMERATION_SIZE}, got {k}"
        )));
    }
    Ok(levels(k).into_iter().flatten().collect())
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

fn levels(k: usize) -> Vec<Vec<FinPoset>> {
    let mut out: Vec<Vec<FinPoset>> = vec![vec![FinPoset::from_covers(labels(1), vec![]).unwrap()]];
    for n in 2..=k {
        let prev = out.last().unwrap();
        let mut level: Vec<FinPoset> = Vec::new();
        let mut buckets: HashMap<Vec<_>, Vec<usize>> = HashMap::new();
        for q in prev {
            let m = n - 1;
            for mask in 0u32..(1 << m) {
                let down_closed = (0..m)
                    .filter(|&i| mask & (1 << i) != 0)
                    .all(|i| q.down_set(i).ones().all(|j| mask & (1 << j) != 0));
                if !down_closed {
                    continue;
                }
                let cand = FinPoset::from_relation(labels(n), |a, b| {
                    if b == m {
                        a == m || mask & (1 << a) != 0
                    } else if a == m {
                        false
                    } else {
                        q.leq(a, b)
                    }
                })
                .expect("extension of a poset is a poset");
                let key = invariant_key(&cand);
                let bucket = buckets.entry(key).or_default();
                if bucket
                    .iter()
                    .any(|&i| poset_iso(&level[i], &cand).is_some())
                {
                    continue;
                }
                bucket.push(level.len());
                level.push(cand);
            }
        }
        out.push(level);
    }
    out
}

/// The Boolean lattice of subsets of a `k`-set, labelled by bit strings.
pub fn boolean_lattice(k: usize) -> FinPoset {
    let labels = (0..1u32 << k)
        .map(|m| format!("{:0width$b}", m, width = k.max(1)))
        .collect();
    FinPoset::from_relation(labels, |a, b| a & !b == 0).unwrap()
}

/// A random finite lattice: an intersection-closed family of subsets of a
/// small ground set (including the full set), ordered by inclusion.
pub fn random_lattice<R: Rng>(rng: &mut R) -> FinPoset {
    let ground = rng.gen_range(2..=5usize);
    let full: u32 = (1 << ground) - 1;
    let picks = rng.gen_range(1..=2 * ground);
    let mut family: Vec<u32> = vec![full];
    for _ in 0..picks {
        let s = rng.gen_range(0..=full);
        if !family.contains(&s) {
            family.push(s);
        }
    }
    loop {
        let mut grew = false;
        for i in 0..family.len() {
            for j in i + 1..family.len() {
                let m = family[i] & family[j];
                if !family.contains(&m) {
                    family.push(m);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    family.sort_by_key(|s| (s.count_ones(), *s));
    let labels = family
        .iter()
        .map(|s| format!("s{s:0width$b}", width = ground))
        .collect();
    FinPoset::from_relation(labels, |a, b| family[a] & !family[b] == 0).unwrap()
}

/// `count` random lattices from a fixed seed.
pub fn random_lattices(seed: u64, count: usize) -> Vec<FinPoset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_lattice(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_posets(1).unwrap().len(), 1);
        assert_eq!(enumerate_posets(2).unwrap().len(), 2);
        assert_eq!(enumerate_posets(3).unwrap().len(), 5);
    }

    #[test]
    fn random_lattices_are_lattices_and_deterministic() {
        let a = random_lattices(7, 20);
        let b = random_lattices(7, 20);
        assert_eq!(a, b);
        assert!(a.iter().all(FinPoset::is_lattice));
    }

    #[test]
    fn boolean_lattice_shape() {
        let b = boolean_lattice(3);
        assert_eq!(b.len(), 8);
        assert_eq!(b.atoms().len(), 3);
        assert_eq!(b.height(b.top().unwrap()).unwrap(), 3);
    }
}
