//! One PASS/FAIL line per acceptance criterion. Criteria 1 to 9 come from
//! the shipped binary's `selftest`; criterion 10 adds determinism and
//! round-trip checks through the binary.

use std::path::PathBuf;
use std::process::{Command, ExitCode};

use fmat::selftest;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn fmat(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fmat")).args(args).output().expect("run fmat");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 report"))
}

fn cli_determinism(selftest_ok: bool) -> Result<String, String> {
    if !selftest_ok {
        return Err("selftest did not exit 0".into());
    }
    let runs: [&[&str]; 4] = [
        &["hall", "product", &data("u12.mat"), &data("u11.mat")],
        &["trs", "hn", &data("split_2_0.trs")],
        &["--format", "json-lines", "flats", &data("u34.mat")],
        &["trs", "vb", &data("split_2_0.trs")],
    ];
    for args in runs {
        let first = fmat(args);
        let mut threaded = vec!["--threads", "1"];
        threaded.extend_from_slice(args);
        if fmat(args) != first || fmat(&threaded) != first {
            return Err(format!("report for {args:?} differs between runs"));
        }
    }
    // serialize∘parse is idempotent through the binary
    for file in ["u23.mat", "u24_sign.mat", "u34.mat"] {
        let (_, once) = fmat(&["minor", &data(file)]);
        let tmp = std::env::temp_dir().join(format!("fmat-acceptance-{}-{file}", std::process::id()));
        std::fs::write(&tmp, &once).map_err(|e| e.to_string())?;
        let (_, twice) = fmat(&["minor", tmp.to_str().unwrap()]);
        let _ = std::fs::remove_file(&tmp);
        if once != twice {
            return Err(format!("{file} does not round-trip"));
        }
    }
    let o = selftest::run(10, &selftest::Config::default());
    if o.passed {
        Ok(format!("{}; binary reports byte-identical across runs and thread counts", o.detail))
    } else {
        Err(o.detail)
    }
}

fn main() -> ExitCode {
    let (code, report) = fmat(&["selftest"]);
    let mut all = true;
    for id in 1..=9u8 {
        let tag = format!("criterion {id:>2}:");
        match report.lines().find(|l| l.contains(&tag)) {
            Some(line) => {
                all &= line.starts_with("PASS");
                println!("{line}");
            }
            None => {
                all = false;
                println!("FAIL criterion {id:>2}: missing from the selftest report");
            }
        }
    }
    let title = selftest::TITLES[9];
    match cli_determinism(code == 0) {
        Ok(d) => println!("PASS criterion 10: {title} ({d})"),
        Err(e) => {
            all = false;
            println!("FAIL criterion 10: {title} ({e})");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
