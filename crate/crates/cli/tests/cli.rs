use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
}

fn mcs(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_mcs"))
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
    }
}

fn json(run: &Run) -> Value {
    serde_json::from_str(run.stdout.trim()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const P3: &str = "p mcs 3 2 2\nv 1 1\nv 2 2\nv 3 1\ne 1 2\ne 2 3\n";
const K4: &str =
    "p mcs 4 6 1\nv 1 1\nv 2 1\nv 3 1\nv 4 1\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";
const STAR: &str = "p mcs 4 3 2\nv 1 1\nv 2 2\nv 3 2\nv 4 2\ne 1 2\ne 1 3\ne 1 4\n";

#[test]
fn solve_p3_with_each_method() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.txt", P3);
    for method in ["auto", "brute", "vc", "nd"] {
        let run = mcs(&["solve", "--input", p3.to_str().unwrap(), "--method", method]);
        assert_eq!(run.code, 0, "{method}");
        let report = json(&run);
        assert_eq!(report["size"], 3);
        assert_eq!(report["vertices"], serde_json::json!([1, 2, 3]));
        assert_eq!(report["verified"], true);
        assert!(report.get("elapsed_ms").is_none());
    }
    let run = mcs(&[
        "solve",
        "--input",
        p3.to_str().unwrap(),
        "--method",
        "vc",
        "--timing",
        "--compare-oracle",
    ]);
    let report = json(&run);
    assert!(report["elapsed_ms"].is_u64());
    assert_eq!(report["oracle_size"], 3);
}

#[test]
fn solved_vertices_check_as_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    let f = file.to_str().unwrap();
    let gen = mcs(&[
        "generate", "--model", "gnp", "--n", "13", "--p", "0.3", "--c", "3", "--seed", "17",
        "--out", f,
    ]);
    assert_eq!(gen.code, 0);
    let brute = json(&mcs(&["solve", "--input", f, "--method", "brute"]));
    let vc = mcs(&["solve", "--input", f, "--method", "vc"]);
    if vc.code == 0 {
        assert_eq!(json(&vc)["size"], brute["size"]);
    } else {
        assert_eq!(vc.code, 3);
    }
    let ids: Vec<String> = brute["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.to_string())
        .collect();
    assert_eq!(
        mcs(&["check", "--input", f, "--subset", &ids.join(",")]).code,
        0
    );
}

#[test]
fn nd_limit_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r5.txt");
    let f = file.to_str().unwrap();
    let gen = mcs(&[
        "generate",
        "--model",
        "planted-nd",
        "--sizes",
        "3,3,3,2,2",
        "--kinds",
        "clique,independent,clique,independent,clique",
        "--c",
        "3",
        "--density",
        "0.5",
        "--seed",
        "1",
        "--out",
        f,
    ]);
    assert_eq!(gen.code, 0);
    assert_eq!(json(&mcs(&["params", "--input", f]))["r"], 5);
    let run = mcs(&["solve", "--input", f, "--method", "nd"]);
    assert_eq!(run.code, 3);
    assert_eq!(json(&run)["r"], 5);
}

#[test]
fn check_command() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.txt", P3);
    let p3 = p3.to_str().unwrap();
    assert_eq!(mcs(&["check", "--input", p3, "--subset", "1,2,3"]).code, 0);
    let run = mcs(&["check", "--input", p3, "--subset", "2"]);
    assert_eq!(run.code, 1);
    assert_eq!(json(&run)["witness"], 1);
    assert_eq!(mcs(&["check", "--input", p3, "--subset", "9"]).code, 2);
    assert_eq!(mcs(&["check", "--input", p3, "--subset", "a"]).code, 2);
}

#[test]
fn params_command() {
    let dir = tempfile::tempdir().unwrap();
    for (text, k, r) in [(P3, 1, 2), (K4, 3, 1), (STAR, 1, 2)] {
        let file = write(dir.path(), "g.txt", text);
        let report = json(&mcs(&["params", "--input", file.to_str().unwrap()]));
        assert_eq!(
            (report["k"].as_u64(), report["r"].as_u64()),
            (Some(k), Some(r))
        );
    }
}

#[test]
fn generate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = dir.path().join("k5.txt");
    let args = [
        "generate",
        "--model",
        "planted-nd",
        "--sizes",
        "5",
        "--kinds",
        "clique",
        "--c",
        "1",
        "--seed",
        "0",
    ];
    assert_eq!(
        mcs(&[&args[..], &["--out", k5.to_str().unwrap()]].concat()).code,
        0
    );
    let report = json(&mcs(&["params", "--input", k5.to_str().unwrap()]));
    assert_eq!(
        (
            report["n"].as_u64(),
            report["m"].as_u64(),
            report["r"].as_u64()
        ),
        (Some(5), Some(10), Some(1))
    );

    let star = dir.path().join("star.txt");
    let run = mcs(&[
        "generate",
        "--model",
        "planted-vc",
        "--k",
        "1",
        "--n",
        "4",
        "--seed",
        "5",
        "--out",
        star.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0);
    let report = json(&mcs(&["params", "--input", star.to_str().unwrap()]));
    assert_eq!(
        (report["m"].as_u64(), report["k"].as_u64()),
        (Some(3), Some(1))
    );

    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for out in [&a, &b] {
        let run = mcs(&[
            "generate",
            "--model",
            "gnp",
            "--n",
            "10",
            "--p",
            "0.3",
            "--c",
            "3",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(run.code, 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let bad = mcs(&[
        "generate",
        "--model",
        "gnp",
        "--n",
        "5",
        "--p",
        "1.5",
        "--seed",
        "1",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(bad.code, 2);
}

#[test]
fn input_errors_and_timeouts() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "bad.txt", "p mcs 3 2 2\nv 1 1\n");
    assert_eq!(mcs(&["solve", "--input", broken.to_str().unwrap()]).code, 2);
    assert_eq!(mcs(&["params", "--input", "/nonexistent/file"]).code, 2);

    let file = dir.path().join("v.txt");
    let f = file.to_str().unwrap();
    mcs(&[
        "generate",
        "--model",
        "planted-vc",
        "--k",
        "5",
        "--n",
        "40",
        "--c",
        "3",
        "--seed",
        "2",
        "--out",
        f,
    ]);
    assert_eq!(
        mcs(&["solve", "--input", f, "--method", "vc", "--timeout-ms", "0"]).code,
        5
    );
}
