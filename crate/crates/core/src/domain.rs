//! Recognising piecewise Boolean domains among finite posets.
//!
//! Two routes: the defining one (every principal ideal is dual to a
//! partition lattice) and the local one (every principal ideal is
//! cogeometric with a modular atom, and elements of height at most three
//! cover the right number of elements).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{recognize_partition_lattice, FinPoset, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Def31,
    Prop42,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Condition {
    fn trivial(name: &'static str, note: &str) -> Self {
        Condition {
            name,
            holds: true,
            note: Some(note.into()),
            witness: None,
        }
    }

    fn from_witness(name: &'static str, witness: Option<String>) -> Self {
        Condition {
            name,
            holds: witness.is_none(),
            note: None,
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DomainReport {
    pub route: Route,
    pub verdict: bool,
    pub conditions: Vec<Condition>,
}

impl DomainReport {
    fn new(route: Route, conditions: Vec<Condition>) -> Self {
        let verdict = conditions.iter().all(|c| c.holds);
        DomainReport {
            route,
            verdict,
            conditions,
        }
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn common_conditions(l: &FinPoset) -> Vec<Condition> {
    let infima = match l.first_missing_meet() {
        Some((a, b)) => Some(format!("{} and {} have no meet", l.label(a), l.label(b))),
        None if l.bottom().is_none() => Some("no least element".into()),
        None => None,
    };
    vec![
        Condition::trivial(
            "(1)",
            "finite: every directed subset has a greatest element",
        ),
        Condition::from_witness("(2)", infima),
        Condition::trivial("(3)", "finite: every element is compact"),
    ]
}

/// Decides condition (4): every principal ideal is dual to a partition lattice.
pub fn check_def31(l: &FinPoset) -> DomainReport {
    let mut conditions = common_conditions(l);
    let witness = l.topological_order().iter().find_map(|&x| {
        let (ideal, _) = l.ideal(x);
        recognize_partition_lattice(&ideal.dual())
            .is_none()
            .then(|| {
                format!(
                    "the ideal below {} is not dual to a partition lattice",
                    l.label(x)
                )
            })
    });
    conditions.push(Condition::from_witness("(4)", witness));
    DomainReport::new(Route::Def31, conditions)
}

fn binomial2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Decides (4') and (4'') in place of (4).
pub fn check_prop42(l: &FinPoset) -> DomainReport {
    let mut conditions = common_conditions(l);

    let four_prime = l.topological_order().iter().find_map(|&x| {
        let (ideal, _) = l.ideal(x);
        let name = l.label(x);
        let Ok(lat) = Lattice::new(&ideal) else {
            return Some(format!("the ideal below {name} is not a lattice"));
        };
        if !lat.is_cogeometric() {
            return Some(format!("the ideal below {name} is not cogeometric"));
        }
        if lat.bottom() != lat.top() && lat.modular_atoms().is_empty() {
            return Some(format!("the ideal below {name} has no modular atom"));
        }
        None
    });
    conditions.push(Condition::from_witness("(4')", four_prime));

    let four_second = l
        .topological_order()
        .iter()
        .find_map(|&x| match l.height(x) {
            Err(_) => Some(format!("{} has no least element below it", l.label(x))),
            Ok(h) if h <= 3 && l.lower_covers(x).len() != binomial2(h + 1) => Some(format!(
                "{} has height {h} but covers {} elements, not {}",
                l.label(x),
                l.lower_covers(x).len(),
                binomial2(h + 1)
            )),
            Ok(_) => None,
        });
    conditions.push(Condition::from_witness("(4'')", four_second));
    DomainReport::new(Route::Prop42, conditions)
}

/// Runs both routes; they must agree.
pub fn agree(l: &FinPoset) -> Result<bool> {
    let (a, b) = (check_def31(l), check_prop42(l));
    if a.verdict != b.verdict {
        return Err(Error::logic(format!(
            "recognition routes disagree: {} vs {}",
            serde_json::to_string(&a)?,
            serde_json::to_string(&b)?
        )));
    }
    Ok(a.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{boolean_lattice, partition_lattice};

    fn dual_pi(n: usize) -> FinPoset {
        partition_lattice(n).unwrap().dual()
    }

    #[test]
    fn duals_of_partition_lattices_are_domains() {
        for n in 1..=5 {
            let l = dual_pi(n);
            assert!(check_def31(&l).verdict, "n = {n}");
            assert!(check_prop42(&l).verdict, "n = {n}");
            assert!(agree(&l).unwrap());
        }
        let l = dual_pi(4);
        let top = l.top().unwrap();
        assert_eq!(l.height(top).unwrap(), 3);
        assert_eq!(l.lower_covers(top).len(), 6);
    }

    #[test]
    fn two_maximal_atoms() {
        let l = FinPoset::new(
            vec!["0".into(), "a".into(), "b".into()],
            &[("0", "a"), ("0", "b")],
        )
        .unwrap();
        assert!(check_def31(&l).verdict);
        assert!(agree(&l).unwrap());
    }

    #[test]
    fn boolean_lattices() {
        assert!(agree(&boolean_lattice(1)).unwrap());
        for k in 2..=4 {
            let l = boolean_lattice(k);
            let r = check_def31(&l);
            assert!(!r.verdict);
            assert!(r.condition("(4)").unwrap().witness.is_some());
            assert!(!agree(&l).unwrap());
        }
    }

    #[test]
    fn missing_meet_is_reported() {
        let l = FinPoset::new(vec!["a".into(), "b".into()], &[] as &[(&str, &str)]).unwrap();
        let r = check_def31(&l);
        assert!(!r.condition("(2)").unwrap().holds);
        assert!(!check_prop42(&l).verdict);
    }

    /// Flats of the uniform matroid of rank 3 on four points: a geometric
    /// lattice in which no two-point line meets the opposite line, so no
    /// coatom is modular.
    fn uniform_rank3_on_4() -> FinPoset {
        let mut labels = vec!["0".to_string()];
        let mut covers = Vec::new();
        let pts = ["1", "2", "3", "4"];
        labels.extend(pts.iter().map(|s| s.to_string()));
        for i in 0..4 {
            covers.push(("0".to_string(), pts[i].to_string()));
            for j in i + 1..4 {
                let line = format!("{}{}", pts[i], pts[j]);
                labels.push(line.clone());
                covers.push((pts[i].to_string(), line.clone()));
                covers.push((pts[j].to_string(), line.clone()));
                covers.push((line, "1234".to_string()));
            }
        }
        labels.push("1234".into());
        FinPoset::new(labels, &covers).unwrap()
    }

    #[test]
    fn cogeometric_without_modular_atom() {
        let g = uniform_rank3_on_4();
        let lat = Lattice::new(&g).unwrap();
        assert!(lat.is_geometric());
        assert!(lat.modular_coatoms().is_empty());
        let l = g.dual();
        let r = check_prop42(&l);
        assert!(!r.verdict);
        let w = r.condition("(4')").unwrap().witness.clone().unwrap();
        assert!(w.contains("no modular atom"), "{w}");
        assert!(!agree(&l).unwrap());
    }
}
