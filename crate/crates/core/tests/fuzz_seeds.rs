//! Replays the fuzz corpora and random mutations of them through the
//! properties the fuzz targets assert.

use std::path::PathBuf;

use proptest::prelude::*;
use qbv_core::bv::BVBasisElem;
use qbv_core::feyn::{graphs_to_text, parse_graphs, DimsTable};
use qbv_core::psi::{tau_bracket, MultiIndex};

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|f| std::fs::read(f).unwrap())
        .collect()
}

fn graphs(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(gs) = parse_graphs(text) {
        assert_eq!(parse_graphs(&graphs_to_text(&gs)).unwrap(), gs);
    }
}

fn bv_elem(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = text.parse::<BVBasisElem>() {
        assert_eq!(x.to_string().parse::<BVBasisElem>().unwrap(), x);
    }
}

fn multi_index(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(i) = text.parse::<MultiIndex>() {
        assert_eq!(i.to_string().parse::<MultiIndex>().unwrap(), i);
        let _ = tau_bracket(&i);
    }
}

fn dims_table(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = DimsTable::from_json(text) {
        assert_eq!(DimsTable::from_json(&t.to_json()).unwrap(), t);
    }
}

const TARGETS: [(&str, fn(&[u8])); 4] = [
    ("parse_graphs", graphs),
    ("bv_basis_elem", bv_elem),
    ("multi_index", multi_index),
    ("dims_table", dims_table),
];

#[test]
fn seeds_are_accepted_or_rejected_cleanly() {
    for (name, check) in TARGETS {
        let seeds = corpus(name);
        assert!(!seeds.is_empty(), "{name} has no seeds");
        for s in seeds {
            check(&s);
        }
    }
}

#[test]
fn valid_seeds_parse() {
    assert!(
        corpus("parse_graphs")
            .iter()
            .filter(|s| parse_graphs(std::str::from_utf8(s).unwrap()).is_ok())
            .count()
            >= 3
    );
    assert!(DimsTable::from_json(std::str::from_utf8(&corpus("dims_table")[1]).unwrap()).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn mutated_seeds(target in 0usize..4, seed in any::<prop::sample::Index>(), edits in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 0..6)) {
        let (name, check) = TARGETS[target];
        let seeds = corpus(name);
        let mut data = seeds[seed.index(seeds.len())].clone();
        for (at, byte) in edits {
            if data.is_empty() {
                data.push(byte);
            } else {
                let i = at.index(data.len());
                match byte % 3 {
                    0 => data[i] = byte,
                    1 => { data.remove(i); }
                    _ => data.insert(i, b"0123456789,;{}()-\n E"[byte as usize % 20]),
                }
            }
        }
        check(&data);
    }

    #[test]
    fn arbitrary_text(s in "\\PC{0,40}") {
        for (_, check) in TARGETS {
            check(s.as_bytes());
        }
    }
}
