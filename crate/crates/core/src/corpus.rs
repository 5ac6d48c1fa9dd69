//! Named examples shared by the verification suite, the CLI and the tests.

use crate::boolalg::{BoolHom, FinBool};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_posets_upto, partition_lattice, FinPoset};
use crate::pba::{sub, BlockSpec, PieceBool, PieceBoolHom};

pub fn boolean(atoms: &[&str]) -> PieceBool {
    PieceBool::from_bool(&FinBool::of(atoms))
}

/// Two 4-element blocks sharing only the bounds.
pub fn mo2() -> PieceBool {
    PieceBool::glue(&[BlockSpec::of(&["a", "na"]), BlockSpec::of(&["b", "nb"])]).expect("valid")
}

/// The same shape as [`mo2`] under other names.
pub fn mo2_relabelled() -> PieceBool {
    PieceBool::glue(&[BlockSpec::of(&["p", "np"]), BlockSpec::of(&["q", "nq"])]).expect("valid")
}

pub fn mo3() -> PieceBool {
    PieceBool::glue(&[
        BlockSpec::of(&["a", "na"]),
        BlockSpec::of(&["b", "nb"]),
        BlockSpec::of(&["c", "nc"]),
    ])
    .expect("valid")
}

/// An 8-element block and a 4-element block sharing only the bounds.
pub fn eight_plus_four() -> PieceBool {
    PieceBool::glue(&[BlockSpec::of(&["a", "b", "c"]), BlockSpec::of(&["d", "nd"])]).expect("valid")
}

/// Two 8-element blocks sharing `{0, x, ¬x, 1}`. In the twisted variant
/// `x` is an atom of the first block and `¬x` an atom of the second.
pub fn shared_atom(twisted: bool) -> PieceBool {
    let first = BlockSpec::of(&["x", "u", "v"]).rename(&["u", "v"], "nx");
    let second = if twisted {
        BlockSpec::of(&["nx", "s", "t"]).rename(&["s", "t"], "x")
    } else {
        BlockSpec::of(&["x", "s", "t"]).rename(&["s", "t"], "nx")
    };
    PieceBool::glue(&[first, second]).expect("valid")
}

/// Three blocks whose union order is not transitive.
pub fn non_transitive() -> PieceBool {
    let b1 = BlockSpec::of(&["x", "a", "n"]).rename(&["x", "a"], "y");
    let b2 = BlockSpec::of(&["c", "d", "e"])
        .rename(&["c"], "y")
        .rename(&["c", "d"], "z")
        .rename(&["d", "e"], "n");
    let b3 = BlockSpec::of(&["w", "nw"]);
    PieceBool::glue(&[b1, b2, b3]).expect("valid")
}

/// Three 8-element blocks pairwise sharing an atom: `x`, `y`, `z` are
/// pairwise commeasurable but no block holds all three.
pub fn triangle_blocks() -> Vec<BlockSpec> {
    vec![
        BlockSpec::of(&["x", "y", "r"]),
        BlockSpec::of(&["y", "z", "s"]),
        BlockSpec::of(&["x", "z", "t"]),
    ]
}

/// The valid corpus algebras, by name.
pub fn pbas() -> Vec<(&'static str, PieceBool)> {
    vec![
        ("two", boolean(&["1"])),
        ("four", boolean(&["a", "na"])),
        ("eight", boolean(&["a", "b", "c"])),
        ("sixteen", boolean(&["a", "b", "c", "d"])),
        ("mo2", mo2()),
        ("mo2_relabelled", mo2_relabelled()),
        ("mo3", mo3()),
        ("eight_plus_four", eight_plus_four()),
        ("shared_atom", shared_atom(false)),
        ("shared_atom_twisted", shared_atom(true)),
        ("non_transitive", non_transitive()),
    ]
}

pub fn pba(name: &str) -> Result<PieceBool> {
    pbas()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p)
        .ok_or_else(|| Error::usage(format!("no corpus algebra named {name:?}")))
}

/// A Boolean homomorphism between one-block algebras, as a carrier map.
pub fn lift_bool_hom(src: &PieceBool, tgt: &PieceBool, h: &BoolHom) -> Result<PieceBoolHom> {
    if !src.is_boolean() || !tgt.is_boolean() {
        return Err(Error::usage("both algebras must have a single block"));
    }
    let (bs, bt) = (src.block(0), tgt.block(0));
    let h = h.with_algebras(bs.algebra().clone(), bt.algebra().clone())?;
    let map = (0..src.len())
        .map(|c| bt.label(h.apply(bs.mask_of(c).expect("one block"))))
        .collect();
    PieceBoolHom::new(src.clone(), tgt.clone(), map)
}

/// Corpus morphisms with their names. Identities are included.
pub fn homs() -> Result<Vec<(String, PieceBoolHom)>> {
    let mut out: Vec<(String, PieceBoolHom)> = pbas()
        .iter()
        .map(|(n, p)| (format!("id_{n}"), PieceBoolHom::identity(p)))
        .collect();
    let (eight, sixteen, four) = (pba("eight")?, pba("sixteen")?, pba("four")?);
    let lift = |s: &PieceBool, t: &PieceBool, images: Vec<u64>| -> Result<PieceBoolHom> {
        let h = BoolHom::new(
            s.block(0).algebra().clone(),
            t.block(0).algebra().clone(),
            images,
        )?;
        lift_bool_hom(s, t, &h)
    };
    out.push((
        "eight_into_sixteen".into(),
        lift(&eight, &sixteen, vec![0b0001, 0b0010, 0b1100])?,
    ));
    out.push((
        "sixteen_onto_eight".into(),
        lift(&sixteen, &eight, vec![0b001, 0b010, 0b100, 0b000])?,
    ));
    out.push((
        "eight_onto_four".into(),
        lift(&eight, &four, vec![0b01, 0b10, 0b00])?,
    ));
    // a ↦ a'+b', b ↦ c', c ↦ 0: a chosen atom need not stay an atom
    out.push((
        "eight_fold".into(),
        lift(&eight, &eight, vec![0b011, 0b100, 0b000])?,
    ));
    let m = mo2();
    out.push((
        "mo2_collapse_b".into(),
        PieceBoolHom::from_labels(
            m.clone(),
            four.clone(),
            &[
                ("0", "0"),
                ("1", "1"),
                ("a", "a"),
                ("na", "na"),
                ("b", "0"),
                ("nb", "1"),
            ],
        )?,
    ));
    out.push(("mo2_block_a".into(), PieceBoolHom::block_inclusion(&m, 0)?));
    out.push((
        "mo2_rename".into(),
        PieceBoolHom::from_labels(
            m.clone(),
            mo2_relabelled(),
            &[
                ("0", "0"),
                ("1", "1"),
                ("a", "q"),
                ("na", "nq"),
                ("b", "np"),
                ("nb", "p"),
            ],
        )?,
    ));
    let e = eight_plus_four();
    out.push((
        "eight_plus_four_block".into(),
        PieceBoolHom::block_inclusion(&e, 0)?,
    ));
    out.push((
        "shared_atom_block".into(),
        PieceBoolHom::block_inclusion(&shared_atom(false), 1)?,
    ));
    Ok(out)
}

/// Domains that need no search: duals of `Π_n` for `n <= 4` and `Sub(P)` for
/// every corpus algebra.
pub fn named_domains() -> Result<Vec<(String, FinPoset)>> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("dual_partition_{n}"), partition_lattice(n)?.dual()));
    }
    for (name, p) in pbas() {
        out.push((format!("sub_{name}"), sub(&p)?.poset().clone()));
    }
    Ok(out)
}

/// Every poset with at most `k` elements that the defining recogniser
/// accepts.
pub fn enumerated_domains(k: usize) -> Result<Vec<FinPoset>> {
    Ok(enumerate_posets_upto(k)?
        .into_iter()
        .filter(|l| crate::domain::check_def31(l).verdict)
        .collect())
}
