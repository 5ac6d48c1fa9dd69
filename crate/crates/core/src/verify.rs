//! The acceptance suite: ten numbered checks over the corpus, each reporting
//! how many items it looked at and which ones failed.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::boolalg::{subalgebra_of_partition, subalgebras, FinBool};
use crate::corpus;
use crate::diagram::{
    colim, functor_from_domain, pboold, pboold_on_hom, reconstruct_and_verify, verify_equivalence,
    verify_pba_roundtrip, PBDiagram,
};
use crate::domain::{check_def31, check_prop42};
use crate::error::Result;
use crate::lattice::{
    all_isos, boolean_lattice, enumerate_posets_upto, partition_lattice, poset_iso,
    random_lattices, FinPoset, Lattice, Partition,
};
use crate::limits::MAX_ENUMERATION_SIZE;
use crate::orient::{canonical_form, enumerate_orientations, verify_cat_iso};
use crate::pba::{lift_domain_iso, sub};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Largest poset size for the exhaustive parts.
    pub max_size: usize,
    pub seed: u64,
    pub random_lattices: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_size: MAX_ENUMERATION_SIZE,
            seed: 0,
            random_lattices: 100,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub failed: usize,
    /// The first few failures, in order.
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_ms: Option<u128>,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let limit = self
            .limit_ms
            .map(|l| format!(" (limit {l} ms)"))
            .unwrap_or_default();
        let mut s = format!(
            "{verdict} criterion {:>2} {}: {} checked, {} failed, {} ms{limit}",
            self.id, self.name, self.checked, self.failed, self.elapsed_ms
        );
        if let Some(f) = self.failures.first() {
            s.push_str(&format!("; first failure: {f}"));
        }
        s
    }
}

const SHOWN_FAILURES: usize = 10;

#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < SHOWN_FAILURES {
            self.failures.push(msg);
        }
    }

    /// Records `r`, returning its value when it succeeded.
    fn ok<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        self.checked += 1;
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{}: {e}", what()));
                None
            }
        }
    }
}

pub const CRITERIA: [(u8, &str, Option<u64>); 10] = [
    (1, "partition lattice sizes", Some(1)),
    (2, "modular elements of partition lattices", Some(1)),
    (3, "subalgebras dual to partitions", Some(30)),
    (4, "recogniser routes agree", Some(300)),
    (5, "cover counts in low heights", None),
    (6, "reconstruction from oriented domains", Some(300)),
    (7, "equivalence roundtrips", None),
    (8, "domain isomorphisms lift", None),
    (9, "orientation isomorphism on the nose", None),
    (10, "cocone injectivity and blocks", None),
];

pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> CriterionOutcome {
    let (_, name, limit) = CRITERIA
        .iter()
        .copied()
        .find(|c| c.0 == id)
        .expect("criterion id in 1..=10");
    let start = Instant::now();
    let mut t = Tally::default();
    match id {
        1 => partition_sizes(&mut t),
        2 => modularity(&mut t),
        3 => subalgebra_correspondence(&mut t),
        4 => recogniser_agreement(&mut t, cfg),
        5 => low_height_covers(&mut t),
        6 => reconstruction(&mut t, cfg),
        7 => equivalence(&mut t),
        8 => domain_isos(&mut t),
        9 => orientation_iso(&mut t),
        _ => cocones(&mut t, cfg),
    }
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    CriterionOutcome {
        id,
        name,
        passed: t.failed == 0 && limit.is_none_or(|l| elapsed <= l),
        checked: t.checked,
        failed: t.failed,
        failures: t.failures,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.map(|l| l.as_millis()),
    }
}

pub fn verify_all(cfg: &VerifyConfig) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.0, cfg)).collect()
}

/// Bell numbers `B_0..=B_n` from the Bell triangle.
pub fn bell_triangle(n: usize) -> Vec<u64> {
    let mut out = vec![1];
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &v in &row {
            next.push(next.last().unwrap() + v);
        }
        out.push(next[0]);
        row = next;
    }
    out
}

fn partition_sizes(t: &mut Tally) {
    let oracle = bell_triangle(6);
    for (n, expected) in [(1, 1), (2, 2), (3, 5), (4, 15)] {
        let got = partition_lattice(n).map(|p| p.len()).unwrap_or(0);
        t.check(got == expected, || {
            format!("|Π_{n}| = {got}, expected {expected}")
        });
    }
    for n in 1..=6 {
        let p = partition_lattice(n).expect("n in range");
        t.check(p.len() as u64 == oracle[n], || {
            format!(
                "|Π_{n}| = {} but the Bell triangle gives {}",
                p.len(),
                oracle[n]
            )
        });
        let (atoms, coatoms) = (p.atoms().len(), p.coatoms().len());
        t.check(atoms == n * (n - 1) / 2, || {
            format!("Π_{n} has {atoms} atoms")
        });
        if n >= 2 {
            t.check(coatoms == (1 << (n - 1)) - 1, || {
                format!("Π_{n} has {coatoms} coatoms")
            });
        }
    }
    let p4 = partition_lattice(4).expect("n in range");
    t.check(p4.atoms().len() == 6 && p4.coatoms().len() == 7, || {
        "Π_4 should have 6 atoms and 7 coatoms".into()
    });
}

fn labelled(l: &FinPoset, xs: impl IntoIterator<Item = usize>) -> BTreeSet<String> {
    xs.into_iter().map(|x| l.label(x).to_string()).collect()
}

fn modularity(t: &mut Tally) {
    let p4 = partition_lattice(4).expect("n in range");
    let lat = Lattice::new(&p4).expect("a lattice");
    let idx = |s: &str| p4.index_of(s).expect("canonical partition label");
    let modular = labelled(&p4, lat.modular_coatoms());
    let expected: BTreeSet<String> = ["123/4", "124/3", "134/2", "1/234"]
        .map(String::from)
        .into();
    t.check(modular == expected, || {
        format!("modular coatoms of Π_4 are {modular:?}")
    });
    for y in ["12/34", "13/24", "14/23"] {
        t.check(!lat.is_modular_element(idx(y)), || {
            format!("{y} should not be modular")
        });
    }
    // x = 13/2/4, z = 13/24: x ∨ (y ∧ z) = x but (x ∨ y) ∧ z = z
    let (x, y, z) = (idx("13/2/4"), idx("12/34"), idx("13/24"));
    t.check(p4.leq(x, z), || "13/2/4 should lie below 13/24".into());
    t.check(lat.join(x, lat.meet(y, z)) == x, || {
        "x ∨ (y ∧ z) should be x".into()
    });
    t.check(lat.meet(lat.join(x, y), z) == z, || {
        "(x ∨ y) ∧ z should be z".into()
    });
    let p3 = partition_lattice(3).expect("n in range");
    let lat3 = Lattice::new(&p3).expect("a lattice");
    t.check(
        lat3.modular_coatoms().len() == 3 && p3.coatoms().len() == 3,
        || "all three coatoms of Π_3 should be modular".into(),
    );
    for n in 3..=5 {
        let p = partition_lattice(n).expect("n in range");
        let lat = Lattice::new(&p).expect("a lattice");
        let got = lat.modular_coatoms();
        let shape = |c: usize| {
            let mut sizes: Vec<usize> = p.label(c).split('/').map(str::len).collect();
            sizes.sort_unstable();
            sizes == [1, n - 1]
        };
        t.check(got.len() == n && got.iter().all(|&c| shape(c)), || {
            format!(
                "modular coatoms of Π_{n} are {:?}",
                labelled(&p, got.iter().copied())
            )
        });
    }
}

/// Closed under complement and meet, with both bounds.
fn is_subalgebra(b: &FinBool, elems: &[u64]) -> bool {
    let set: BTreeSet<u64> = elems.iter().copied().collect();
    set.contains(&b.zero())
        && set.contains(&b.one())
        && set.iter().all(|&x| {
            set.contains(&b.complement(x)) && set.iter().all(|&y| set.contains(&b.meet(x, y)))
        })
}

fn subalgebra_correspondence(t: &mut Tally) {
    let oracle = bell_triangle(5);
    for n in 1..=5 {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let b = FinBool::new(names).expect("distinct atoms");
        let Some(s) = t.ok(subalgebras(&b), || format!("subalgebras of 2^{n}")) else {
            continue;
        };
        t.check(s.len() as u64 == oracle[n], || {
            format!("2^{n} has {} subalgebras, expected {}", s.len(), oracle[n])
        });
        let parts = Partition::all(n);
        let mut carriers = Vec::with_capacity(parts.len());
        for pi in &parts {
            let Some(mut c) = t.ok(subalgebra_of_partition(&b, pi), || {
                format!("subalgebra of {}", pi.label())
            }) else {
                return;
            };
            c.sort_unstable();
            t.check(is_subalgebra(&b, &c), || {
                format!("elements of {} are not a subalgebra", pi.label())
            });
            let node = s.index_of(pi);
            t.check(
                node.is_some_and(|i| {
                    s.carrier(i).iter().copied().collect::<BTreeSet<_>>()
                        == c.iter().copied().collect()
                }),
                || format!("subalgebras(2^{n}) misses {}", pi.label()),
            );
            carriers.push(c);
        }
        let distinct: BTreeSet<&Vec<u64>> = carriers.iter().collect();
        t.check(distinct.len() == parts.len(), || {
            format!("two partitions of {n} give one subalgebra")
        });
        for (i, p) in parts.iter().enumerate() {
            for (j, q) in parts.iter().enumerate() {
                let contained = carriers[j]
                    .iter()
                    .all(|x| carriers[i].binary_search(x).is_ok());
                t.check(p.refines(q) == contained, || {
                    format!("{} ≤ {} is not reversed", p.label(), q.label())
                });
            }
        }
        let dual = partition_lattice(n).expect("n in range").dual();
        t.check(poset_iso(s.poset(), &dual).is_some(), || {
            format!("Sub(2^{n}) is not dual to Π_{n}")
        });
    }
}

fn recogniser_agreement(t: &mut Tally, cfg: &VerifyConfig) {
    let mut items: Vec<(String, FinPoset)> = Vec::new();
    match enumerate_posets_upto(cfg.max_size.min(MAX_ENUMERATION_SIZE)) {
        Ok(ps) => items.extend(
            ps.into_iter()
                .enumerate()
                .map(|(i, l)| (format!("enumerated poset {i}"), l)),
        ),
        Err(e) => t.fail(format!("enumeration: {e}")),
    }
    for n in 1..=5 {
        items.push((
            format!("dual of Π_{n}"),
            partition_lattice(n).expect("n in range").dual(),
        ));
    }
    for k in 0..=4 {
        items.push((format!("Boolean lattice 2^{k}"), boolean_lattice(k)));
    }
    let random = random_lattices(cfg.seed, cfg.random_lattices);
    items.extend(
        random
            .into_iter()
            .enumerate()
            .map(|(i, l)| (format!("random lattice {i} (seed {})", cfg.seed), l)),
    );
    for (name, l) in &items {
        let (a, b) = (check_def31(l).verdict, check_prop42(l).verdict);
        t.check(a == b, || {
            format!("{name}: defining route says {a}, local route says {b}")
        });
    }
}

fn low_height_covers(t: &mut Tally) {
    let b = FinBool::of(&["a", "b", "c", "d"]);
    let s = subalgebras(&b).expect("4 atoms is within the cap");
    let l = s.poset();
    let heights = l.heights().expect("a bounded poset");
    for h in 1..=3 {
        let at: Vec<usize> = (0..l.len()).filter(|&x| heights[x] == h).collect();
        t.check(!at.is_empty(), || format!("no element of height {h}"));
        let want = [1, 3, 6][h - 1];
        for x in at {
            let got = l.lower_covers(x).len();
            t.check(got == want, || {
                format!("{} has height {h} but covers {got} elements", l.label(x))
            });
        }
    }
}

fn domains(t: &mut Tally, max_size: Option<usize>) -> Vec<(String, FinPoset)> {
    let mut out = t
        .ok(corpus::named_domains(), || "corpus domains".into())
        .unwrap_or_default();
    if let Some(k) = max_size {
        if let Some(ls) = t.ok(
            corpus::enumerated_domains(k.min(MAX_ENUMERATION_SIZE)),
            || "enumeration".into(),
        ) {
            out.extend(
                ls.into_iter()
                    .enumerate()
                    .map(|(i, l)| (format!("enumerated domain {i}"), l)),
            );
        }
    }
    out
}

fn reconstruction(t: &mut Tally, cfg: &VerifyConfig) {
    for (name, l) in domains(t, Some(cfg.max_size)) {
        for (k, o) in enumerate_orientations(&l).enumerate() {
            t.ok(reconstruct_and_verify(&l, &o), || {
                format!("{name}, orientation {k}")
            });
        }
    }
}

/// Diagrams built by extension from every orientation of every named
/// domain.
fn extended_diagrams(t: &mut Tally, max_size: Option<usize>) -> Vec<(String, PBDiagram)> {
    let mut out = Vec::new();
    for (name, l) in domains(t, max_size) {
        for (k, o) in enumerate_orientations(&l).enumerate() {
            if let Some(f) = t.ok(functor_from_domain(&l, &o), || {
                format!("extending {name}, orientation {k}")
            }) {
                out.push((format!("{name}, orientation {k}"), f));
            }
        }
    }
    out
}

fn equivalence(t: &mut Tally) {
    let pbas = corpus::pbas();
    for (name, p) in &pbas {
        t.ok(verify_pba_roundtrip(p), || {
            format!("colim(PBoolD({name})) ≅ {name}")
        });
    }
    let Some(homs) = t.ok(corpus::homs(), || "corpus morphisms".into()) else {
        return;
    };
    for (name, f) in &homs {
        t.ok(
            verify_equivalence(&[], std::slice::from_ref(f), &[], &[]),
            || format!("naturality of b ↦ [b] along {name}"),
        );
        let r = pboold(f.source()).and_then(|ds| {
            let dt = pboold(f.target())?;
            let m = pboold_on_hom(f, &ds, &dt)?;
            verify_equivalence(&[], &[], &[ds.diagram, dt.diagram], &[(0, 1, m)])
        });
        t.ok(r, || format!("naturality of (φ, η) along PBoolD({name})"));
    }
    for (name, f) in extended_diagrams(t, None) {
        let id = crate::diagram::DiagramMorphism::identity(&f);
        t.ok(verify_equivalence(&[], &[], &[f], &[(0, 0, id)]), || {
            format!("PBoolD(colim F) ≅ F for {name}")
        });
    }
}

fn domain_isos(t: &mut Tally) {
    let pbas = corpus::pbas();
    let subs: Vec<_> = pbas
        .iter()
        .map(|(n, p)| t.ok(sub(p), || format!("Sub({n})")))
        .collect();
    for (i, (ni, p)) in pbas.iter().enumerate() {
        let Some(si) = &subs[i] else { continue };
        let l = si.poset();
        let maximal_atom = l.atoms().iter().any(|&a| l.is_maximal(a));
        for (j, (nj, q)) in pbas.iter().enumerate() {
            let Some(sj) = &subs[j] else { continue };
            if poset_iso(l, sj.poset()).is_none() {
                continue;
            }
            for phi in all_isos(l, sj.poset()) {
                let Some(lifts) = t.ok(lift_domain_iso(p, q, &phi), || {
                    format!("lifting Sub({ni}) ≅ Sub({nj}) via {phi:?}")
                }) else {
                    continue;
                };
                t.check(
                    !lifts.is_empty() && (lifts.len() == 1) == !maximal_atom,
                    || {
                        format!(
                            "Sub({ni}) ≅ Sub({nj}) via {phi:?} has {} lifts",
                            lifts.len()
                        )
                    },
                );
            }
        }
    }
}

fn orientation_iso(t: &mut Tally) {
    let extended = extended_diagrams(t, None);
    let orientations: Vec<_> = extended
        .iter()
        .filter_map(|(_, f)| crate::orient::restrict_to_orientation(f).ok())
        .collect();
    for (k, o) in orientations.iter().enumerate() {
        t.ok(verify_cat_iso(std::slice::from_ref(o), &[], &[]), || {
            format!("restrict(extend(o)) = o for orientation {k}")
        });
    }
    for (name, f) in &extended {
        let id = crate::diagram::DiagramMorphism::identity(f);
        t.ok(
            verify_cat_iso(&[], std::slice::from_ref(f), &[(0, 0, id)]),
            || format!("extend(restrict(F)) = F for {name}"),
        );
    }
    for (name, p) in corpus::pbas() {
        let r = pboold(&p)
            .and_then(|d| canonical_form(&d.diagram))
            .and_then(|(g, _)| verify_cat_iso(&[], &[g], &[]));
        t.ok(r, || format!("canonical PBoolD({name})"));
    }
    let Some(homs) = t.ok(corpus::homs(), || "corpus morphisms".into()) else {
        return;
    };
    for (name, f) in &homs {
        let r = (|| {
            let (ds, dt) = (pboold(f.source())?, pboold(f.target())?);
            let m = pboold_on_hom(f, &ds, &dt)?;
            let (gs, is) = canonical_form(&ds.diagram)?;
            let (gt, it) = canonical_form(&dt.diagram)?;
            let cm = is.inverse()?.then(&m)?.then(&it)?;
            verify_cat_iso(&[], &[gs, gt], &[(0, 1, cm)])
        })();
        t.ok(r, || format!("morphism PBoolD({name}) in canonical form"));
    }
}

fn cocones(t: &mut Tally, cfg: &VerifyConfig) {
    let mut diagrams = extended_diagrams(t, Some(cfg.max_size));
    for (name, p) in corpus::pbas() {
        if let Some(d) = t.ok(pboold(&p), || format!("PBoolD({name})")) {
            diagrams.push((format!("PBoolD({name})"), d.diagram));
        }
    }
    for (name, f) in diagrams {
        let Some(c) = t.ok(colim(&f), || format!("colimit of {name}")) else {
            continue;
        };
        let l = f.base();
        for x in 0..l.len() {
            let image = c.image(x);
            t.check(image.windows(2).all(|w| w[0] != w[1]), || {
                format!("{name}: p_{} is not injective", l.label(x))
            });
        }
        let blocks: Vec<Vec<usize>> = c
            .pba()
            .blocks()
            .iter()
            .map(|b| {
                let mut v = b.carrier_set();
                v.sort_unstable();
                v
            })
            .collect();
        let mut hit = vec![false; blocks.len()];
        let maximal = l.maximal_elements();
        for &x in &maximal {
            match blocks.iter().position(|b| *b == c.image(x)) {
                Some(i) => t.check(!std::mem::replace(&mut hit[i], true), || {
                    format!("{name}: two maximal points give one block")
                }),
                None => t.fail(format!(
                    "{name}: the image of maximal {} is not a block",
                    l.label(x)
                )),
            }
        }
        t.check(maximal.len() == blocks.len(), || {
            format!(
                "{name}: {} maximal points but {} blocks",
                maximal.len(),
                blocks.len()
            )
        });
    }
}
