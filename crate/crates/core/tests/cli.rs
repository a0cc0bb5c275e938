//! Golden reports and exit codes of the command-line driver.

use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn fmat(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fmat")).args(args).output().expect("run fmat");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

#[test]
fn verify_accepts_and_refutes() {
    assert_eq!(fmat(&["verify", &data("u23.mat")]).0, 0);
    let (code, out, _) = fmat(&["verify", &data("u24_bad.mat")]);
    assert_eq!(code, 1);
    assert_eq!(out, "not a matroid: GP2 fails at x=(a,b,c) y=(d)\n");
}

#[test]
fn hn_of_the_split_sheaf() {
    let (code, out, _) = fmat(&["trs", "hn", &data("split_2_0.trs")]);
    assert_eq!(code, 0);
    assert_eq!(out, "step 1: {e1} slope 2\nstep 2: {e1,e2} slope 0\n");
    let (code, out, _) = fmat(&["--format", "json-lines", "trs", "hn", &data("split_2_0.trs")]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"flat\":[\"e1\"],\"slope\":\"2\",\"step\":1}\n{\"flat\":[\"e1\",\"e2\"],\"slope\":\"0\",\"step\":2}\n");
}

#[test]
fn hall_products() {
    assert_eq!(fmat(&["hall", "product", &data("u11.mat"), &data("u11.mat")]).1, "2 * [U22]\n");
    assert_eq!(
        fmat(&["hall", "product", &data("u12.mat"), &data("u11.mat")]).1,
        "1 * [K r2 n3 12,13]\n3 * [U23]\n"
    );
    assert_eq!(fmat(&["hall", "g", &data("u22.mat"), &data("u11.mat"), &data("u11.mat")]).1, "2\n");
    let (code, _, err) = fmat(&["--bound", "2", "hall", "product", &data("u12.mat"), &data("u11.mat")]);
    assert_eq!(code, 2);
    assert!(err.contains("bound"), "{err}");
}

#[test]
fn sheaf_verbs() {
    let split = data("split_2_0.trs");
    assert_eq!(fmat(&["trs", "degree", &split]).1, "2\n");
    assert_eq!(fmat(&["trs", "slope", &split]).1, "1\n");
    let (code, out, _) = fmat(&["trs", "semistable", &split]);
    assert_eq!((code, out.as_str()), (1, "not semistable: {e1} has slope 2\n"));
    assert_eq!(fmat(&["trs", "semistable", &data("split_1_1.trs")]).0, 0);
    assert_eq!(fmat(&["trs", "validate", &split]).0, 0);
    let (code, out, _) = fmat(&["trs", "vb", &data("not_bundle.trs")]);
    assert_eq!((code, out.as_str()), (1, "not a vector bundle: cone 0, ray r1, j=1\n"));
    let (code, out, _) = fmat(&["trs", "contract", &split, "--flat", "e1"]);
    assert_eq!(code, 0);
    assert!(out.contains("ground * e2\n"), "{out}");
}

#[test]
fn matroid_verbs() {
    let (_, out, _) = fmat(&["dual", &data("u23.mat")]);
    assert_eq!(out, "idyll K\nrank 1\nground * a b c\n{a} = K:1\n{b} = K:1\n{c} = K:1\n");
    let (_, out, _) = fmat(&["minor", &data("u23.mat"), "--contract", "a"]);
    assert_eq!(out, "idyll K\nrank 1\nground * b c\n{b} = K:1\n{c} = K:1\n");
    let (_, out, _) = fmat(&["minor", &data("u34.mat"), "--contract", "a", "--restrict", "a,b,c"]);
    assert_eq!(out, "idyll K\nrank 2\nground * b c\n{b,c} = K:1\n");
    assert_eq!(fmat(&["k0", &data("u34.mat")]).1, "(3,1)\n");
    assert_eq!(fmat(&["flats", &data("u23.mat")]).1, "rank 0: {}\nrank 1: {a}\nrank 1: {b}\nrank 1: {c}\nrank 2: {a,b,c}\n");
    assert_eq!(fmat(&["modular", &data("u23.mat")]).0, 0);
    let (code, out, _) = fmat(&["modular", &data("u34.mat")]);
    assert_eq!((code, out.as_str()), (1, "not modular: {a,b} and {c,d} are not a modular pair\n"));
    let (code, out, _) = fmat(&["sum", &data("u11.mat"), &data("u11.mat")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("idyll K\nrank 2\n"), "{out}");
}

#[test]
fn morphism_verbs() {
    let (u22, u23, u12, u11) = (data("u22.mat"), data("u23.mat"), data("u12.mat"), data("u11.mat"));
    let (inc, proj) = (data("u22_into_u23.map"), data("u23_onto_u12.map"));
    assert_eq!(fmat(&["morphism", "check", &u22, &u23, &inc]).1, "morphism\n");
    assert_eq!(fmat(&["morphism", "factor", &u22, &u23, &inc]).1, "admissible mono: image {a,b}\n");
    assert_eq!(fmat(&["morphism", "factor", &u23, &u12, &proj]).1, "admissible epi: kernel {c}\n");
    let (_, out, _) = fmat(&["morphism", "kernel", &u23, &u12, &proj]);
    assert!(out.starts_with("kernel: restriction to {c}\n"), "{out}");
    let (_, out, _) = fmat(&["morphism", "cokernel", &u22, &u23, &inc]);
    assert!(out.starts_with("cokernel: contraction of {a,b}\n"), "{out}");
    let (code, out, _) = fmat(&["morphism", "pushout", &u22, &u23, &inc, &u11, &data("u22_onto_u11.map")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# completed object\nidyll K\nrank 1\nground * a c\n"), "{out}");
    let (code, out, _) = fmat(&["morphism", "pullback", &u11, &u12, &data("u11_into_u12.map"), &u23, &proj]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# completed object\nidyll K\nrank 2\nground * a c\n"), "{out}");
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(fmat(&["bogus"]).0, 2);
    assert_eq!(fmat(&["verify", &data("u23.mat"), "--frobnicate"]).0, 2);
    assert_eq!(fmat(&["verify", &data("missing.mat")]).0, 2);
    let (code, _, err) = fmat(&["trs", "hn", &data("u23.mat")]);
    assert_eq!(code, 2);
    assert!(err.contains("missing `dim`"), "{err}");
    assert_eq!(fmat(&["minor", &data("u23.mat"), "--contract", "z"]).0, 2);
    assert_eq!(fmat(&["--help"]).0, 0);
}

#[test]
fn bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_fmat"))
        .args(["hall", "product", &data("u12.mat"), &data("u11.mat")])
        .env("FMAT_BOUND", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_single_criterion() {
    let (code, out, _) = fmat(&["selftest", "--criterion", "7", "--seed", "11"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS criterion  7"), "{out}");
    assert_eq!(fmat(&["selftest", "--criterion", "11"]).0, 2);
}
