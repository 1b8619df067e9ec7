use std::collections::BTreeSet;
use std::process::{Command, Output};

fn swcalc(cache: Option<&std::path::Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_swcalc"));
    cmd.arg("--quiet");
    match cache {
        Some(dir) => cmd.arg("--cache-dir").arg(dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.args(args).output().expect("run swcalc")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn terms(text: &str) -> BTreeSet<String> {
    text.trim().split(" + ").map(str::to_string).collect()
}

#[test]
fn ring_examples() {
    let six = stdout(&swcalc(None, &["ring", "--n", "6"]));
    assert!(six.contains("generators: y_4 (4), y_6 (6), u_8 (8)"), "{six}");
    assert!(six.contains("relations: none"));

    let ten = stdout(&swcalc(None, &["ring", "--n", "10"]));
    assert!(ten.lines().any(|l| l.trim() == "y_7*y_10"), "{ten}");

    let eleven = stdout(&swcalc(None, &["ring", "--n", "11", "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&eleven).unwrap();
    let leads: Vec<&str> = doc["relations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["leading"].as_str().unwrap())
        .collect();
    assert_eq!(leads, ["y_7*y_10", "y_11^3"]);
}

#[test]
fn groebner_lists_the_full_basis() {
    let out = stdout(&swcalc(None, &["groebner", "--n", "10"]));
    // Four eliminated generators and one relation.
    assert!(out.lines().count() >= 5, "{out}");
    assert!(out.lines().any(|l| l == "y_7*y_10"));
}

#[test]
fn sw_examples() {
    let spin7 = stdout(&swcalc(None, &["sw", "spin", "--n", "7", "--total"]));
    assert_eq!(spin7, "1 + y_4 + y_6 + y_7 + u_8\n");

    let w16 = stdout(&swcalc(None, &["sw", "lambda2", "--n", "15", "--degree", "16"]));
    assert_eq!(terms(&w16), terms("y_8^2 + y_4^2*y_8 + y_4*y_6^2"));

    let several = stdout(&swcalc(None, &["sw", "spin", "--n", "9", "--degree", "1", "16"]));
    assert!(several.starts_with("w_1 = 0\nw_16 = "), "{several}");

    let json = stdout(&swcalc(None, &["sw", "spin", "--n", "7", "--degree", "8", "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["degree"], 8);
    assert_eq!(doc["ring"], "BSpin(7)");
    assert_eq!(doc["terms"][0], serde_json::json!([["u_8", 1]]));
}

#[test]
fn adjoint_low_degree_vanishes() {
    assert_eq!(stdout(&swcalc(None, &["sw", "adjoint", "--degree", "4"])), "0\n");
}

#[test]
fn sq_chern_and_kernel() {
    assert_eq!(stdout(&swcalc(None, &["sq", "--n", "8", "--j", "4", "u_8"])), "y_4*u_8\n");
    assert_eq!(stdout(&swcalc(None, &["sq", "--ring", "bso", "--n", "5", "--j", "1", "y_2"])), "y_3\n");
    // Instability: Sq^d x = x^2.
    assert_eq!(stdout(&swcalc(None, &["sq", "--n", "6", "--j", "6", "y_6"])), "y_6^2\n");

    let c = stdout(&swcalc(None, &["chern", "--n", "6", "--i", "5"]));
    let c1 = stdout(&swcalc(None, &["chern", "--n", "6", "--i", "1"]));
    assert_eq!(c, c1);

    let k = stdout(&swcalc(None, &["kernel", "--n", "12", "--degree", "32"]));
    assert!(k.contains("kernel dimension 1"), "{k}");
    assert!(k.contains("[y_6*y_7^2*y_12]"), "{k}");
}

#[test]
fn verify_examples() {
    let out = stdout(&swcalc(None, &["verify", "--suite", "paper", "--only", "groebner-n13"]));
    assert!(out.starts_with("PASS groebner-n13"), "{out}");
    let out = stdout(&swcalc(None, &["verify", "--suite", "paper", "--only", "delta11-w32"]));
    assert!(out.contains("(1,1,1,1,0)"), "{out}");
}

#[test]
fn warm_cache_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["ring", "--n", "12", "--format", "json"][..],
        &["sw", "spin", "--n", "10", "--variant", "plus", "--total"],
        &["kernel", "--n", "11", "--degree", "32"],
    ] {
        let fresh = stdout(&swcalc(None, args));
        let cold = stdout(&swcalc(Some(dir.path()), args));
        let warm = stdout(&swcalc(Some(dir.path()), args));
        assert_eq!(fresh, cold);
        assert_eq!(cold, warm);
    }
    let entries = std::fs::read_dir(dir.path().join("v1")).unwrap().count();
    assert_eq!(entries, 3);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_swcalc"))
        .args(["--quiet", "ring", "--n", "9"])
        .env("SWCALC_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(dir.path().join("v1")).unwrap().count(), 1);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| swcalc(None, args).status.code().unwrap();
    assert_eq!(code(&["ring", "--n", "6"]), 0);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["sw", "spin", "--n", "99"]), 2);
    assert_eq!(code(&["sq", "--n", "9", "--j", "1", "z_3"]), 2);
    assert_eq!(code(&["verify", "--only", "no-such-check"]), 2);
    assert_eq!(code(&["sw", "adjoint", "--degree", "100"]), 2);
    assert_eq!(code(&["sw", "lambda2", "--n", "9", "--budget-terms", "10"]), 3);
}
