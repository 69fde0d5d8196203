use std::path::Path;
use std::process::{Command, Output};

fn qbv(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbv"))
        .args(args)
        .arg("--cache")
        .arg(cache)
        .env_remove("QBV_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn psi_printed_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = qbv(dir.path(), &["psi", "--tau", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");
    let o = qbv(dir.path(), &["psi", "--pn", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-(v1+v2+v3+v4)\n");
    let o = qbv(dir.path(), &["psi", "--pn", "3"]);
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn psi_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = qbv(dir.path(), &["psi", "--pn", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);
    assert_eq!(v["terms"][0]["coeff"], "-1");
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["psi", "--pn", "2"][..],
        &["psi", "--tau", "x"],
        &["psi"],
        &["feyn", "compare", "--g", "0", "--n", "2", "--weight", "0"],
        &["feyn", "dims", "--g", "0", "--n", "4", "--weight", "1"],
        &["verify", "f", "--max-arity", "2"],
        &["nonsense"],
    ] {
        assert_eq!(qbv(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn compare_reports_equal() {
    let dir = tempfile::tempdir().unwrap();
    let o = qbv(
        dir.path(),
        &["feyn", "compare", "--g", "0", "--n", "4", "--weight", "0"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("EQUAL"));
}

#[test]
fn dims_emit_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = qbv(
        dir.path(),
        &[
            "feyn",
            "dims",
            "--g",
            "1",
            "--n",
            "1",
            "--weight",
            "0",
            "--side",
            "feyn_bv",
            "--emit",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let t = qbv_core::feyn::DimsTable::from_json(&text).unwrap();
    assert_eq!(t.dims().unwrap().get(&-1), Some(&1));
    assert_eq!(t.euler, -1);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "feyn", "compare", "--g", "1", "--n", "2", "--weight", "2", "--format", "json",
    ];
    let cold = qbv(dir.path(), &args);
    let warm = qbv(dir.path(), &args);
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert!(
        std::fs::read_dir(dir.path()).unwrap().count() > 0,
        "cache was written"
    );
    let g1 = qbv(dir.path(), &["feyn", "graphs", "--g", "1", "--n", "2"]);
    let g2 = qbv(dir.path(), &["feyn", "graphs", "--g", "1", "--n", "2"]);
    assert_eq!(g1.stdout, g2.stdout);
}

#[test]
fn verify_subcommands_pass_small_bounds() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "f", "--max-arity", "5"][..],
        &["verify", "recursion", "--max-n", "6", "--max-set", "5"],
        &["verify", "phie", "-N", "3"],
        &[
            "verify",
            "axioms",
            "--max-arity",
            "4",
            "--max-vdeg",
            "1",
            "--max-upow",
            "1",
        ],
        &["feyn", "phi", "--g", "0", "--n", "5", "--weight", "2"],
    ] {
        let o = qbv(dir.path(), args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}
