use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn pbdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbdom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn save(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let out = pbdom(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = dir.join(name);
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_partition_lattice_four() {
    let out = pbdom(&["gen", "partition-lattice", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["elements"].as_array().unwrap().len(), 15);
}

#[test]
fn check_domain_exit_codes() {
    let dir = TempDir::new().unwrap();
    let dual = save(
        dir.path(),
        "d3.json",
        &["gen", "dual-partition-lattice", "3"],
    );
    let out = pbdom(&["check-domain", s(&dual)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], true);

    // Π_4 itself has an ideal that is not a dual partition lattice
    let p4 = save(dir.path(), "p4.json", &["gen", "partition-lattice", "4"]);
    for route in ["def31", "prop42", "both"] {
        let out = pbdom(&["check-domain", s(&p4), "--route", route]);
        assert_eq!(out.status.code(), Some(1), "{route}");
    }
    let v = json(&pbdom(&["check-domain", s(&p4), "--route", "prop42"]));
    let failed: Vec<&str> = v["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["holds"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
}

#[test]
fn bad_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\"elements\": [\"a\"], \"covers\": [[\"a\", \"b\"]]}",
    )
    .unwrap();
    let out = pbdom(&["check-domain", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["message"].as_str().unwrap().contains('b'));

    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(pbdom(&["sub", s(&bad)]).status.code(), Some(2));
    assert_eq!(
        pbdom(&["sub", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pbdom(&["verify-all", "--max-size", "8"]).status.code(),
        Some(2)
    );
    assert_eq!(pbdom(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn orient_reconstruct_extend() {
    let dir = TempDir::new().unwrap();
    let eight = save(dir.path(), "eight.json", &["gen", "corpus", "eight"]);
    let o = save(dir.path(), "o.json", &["orient", s(&eight)]);
    let ov: Value = serde_json::from_slice(&std::fs::read(&o).unwrap()).unwrap();
    assert_eq!(ov["choice"].as_object().unwrap().len(), 3);
    let poset = dir.path().join("sub.json");
    std::fs::write(&poset, ov["poset"].to_string()).unwrap();

    let out = pbdom(&["reconstruct", s(&poset), "--orientation", s(&o)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["pba"]["elements"].as_array().unwrap().len(), 8);
    assert_eq!(v["iso"].as_object().unwrap().len(), 5);

    let out = pbdom(&["extend", s(&poset), s(&o)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["algebras"].as_object().unwrap().len(), 5);

    let other = save(
        dir.path(),
        "d2.json",
        &["gen", "dual-partition-lattice", "2"],
    );
    assert_eq!(pbdom(&["extend", s(&other), s(&o)]).status.code(), Some(2));
}

#[test]
fn every_orientation_reconstructs() {
    let dir = TempDir::new().unwrap();
    let d3 = save(
        dir.path(),
        "d3.json",
        &["gen", "dual-partition-lattice", "3"],
    );
    let all = json(&pbdom(&["gen", "orientations", s(&d3)]));
    let all = all.as_array().unwrap();
    assert_eq!(all.len(), 8);
    for (i, o) in all.iter().enumerate() {
        let path = dir.path().join(format!("o{i}.json"));
        std::fs::write(&path, o.to_string()).unwrap();
        let out = pbdom(&["reconstruct", s(&d3), "--orientation", s(&path)]);
        assert_eq!(out.status.code(), Some(0));
    }
}

#[test]
fn roundtrip_and_sub() {
    let dir = TempDir::new().unwrap();
    let mo2 = save(dir.path(), "mo2.json", &["gen", "corpus", "mo2"]);
    let v = json(&pbdom(&["roundtrip", s(&mo2)]));
    assert_eq!(v["iso"].as_object().unwrap().len(), 6);
    assert_eq!(v["domain_size"], 3);
    let v = json(&pbdom(&["sub", s(&mo2)]));
    assert_eq!(v["poset"]["elements"].as_array().unwrap().len(), 3);
    assert_eq!(v["carriers"]["{0,1}"], serde_json::json!(["0", "1"]));
}

#[test]
fn iso_reports_lifts() {
    let dir = TempDir::new().unwrap();
    let a = save(dir.path(), "a.json", &["gen", "corpus", "mo2"]);
    let b = save(dir.path(), "b.json", &["gen", "corpus", "mo2_relabelled"]);
    let out = pbdom(&["iso", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["isomorphic"], true);
    // both atoms of Sub are maximal: each domain isomorphism lifts four ways
    let isos = v["domain_isos"].as_array().unwrap();
    assert_eq!(isos.len(), 2);
    assert!(isos.iter().all(|i| i["lifts"] == 4));

    let plain = save(dir.path(), "p.json", &["gen", "corpus", "shared_atom"]);
    let twisted = save(
        dir.path(),
        "t.json",
        &["gen", "corpus", "shared_atom_twisted"],
    );
    let out = pbdom(&["iso", s(&plain), s(&twisted)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(!v["domain_isos"].as_array().unwrap().is_empty());
}

#[test]
fn gen_posets_and_random_lattices_are_deterministic() {
    let v = json(&pbdom(&["gen", "posets", "3"]));
    assert_eq!(v.as_array().unwrap().len(), 5);
    let a = pbdom(&["gen", "random-lattice", "--seed", "7"]).stdout;
    let b = pbdom(&["gen", "random-lattice", "--seed", "7"]).stdout;
    assert_eq!(a, b);
    let names = json(&pbdom(&["gen", "corpus"]));
    assert!(names.as_array().unwrap().iter().any(|n| n == "mo3"));
    assert_eq!(pbdom(&["gen", "corpus", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_all_selected_criteria() {
    let out = pbdom(&["verify-all", "--only", "1", "--only", "2", "--only", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 3);
    assert_eq!(v["passed"], true);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().filter(|l| l.starts_with("PASS")).count(), 3);
}

#[test]
fn verify_all_reports_the_known_counterexample() {
    let out = pbdom(&["verify-all", "--only", "8"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["criteria"][0]["passed"], false);
    assert!(v["criteria"][0]["failures"][0]
        .as_str()
        .unwrap()
        .contains("shared_atom_twisted"));
}
