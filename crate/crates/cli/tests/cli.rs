use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tree_core::LabeledTree;

fn tc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tc"))
        .args(args)
        .env_remove("TC_THREADS")
        .output()
        .expect("tc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("tc-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn matching_on_a_two_path_with_report_and_log() {
    let d = scratch("mwm");
    let input = write(&d, "p.tree", "3 0\n0 -\n1 0 ew=5\n2 1 ew=3\n");
    let report = d.join("r.json");
    let log = d.join("run.log");
    let o = tc(&[
        "solve",
        "--problem",
        "mwm",
        "--input",
        &input,
        "--strict",
        "--report",
        report.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).starts_with("value 5\n"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let m = v.get("metrics").unwrap_or(&v);
    assert!(m["rounds"].as_u64().unwrap() >= 1);
    for key in [
        "phases",
        "peak_machine_words",
        "total_words",
        "dht_reads",
        "dht_writes",
        "violations",
    ] {
        assert!(m.get(key).is_some(), "{key}");
    }
    assert!(std::fs::metadata(log).unwrap().len() > 0);
}

#[test]
fn expression_literal() {
    let o = tc(&["solve", "--problem", "expr", "--input", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("7"));
    let o = tc(&["solve", "--problem", "expr", "--input", "1/(2-2)"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn independent_set_of_a_star_is_its_leaves() {
    let d = scratch("mis");
    let o = tc(&[
        "gen",
        "star",
        "10",
        "--out",
        d.join("s.tree").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = tc(&[
        "solve",
        "--problem",
        "mis",
        "--input",
        d.join("s.tree").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("size 9\n"), "{text}");
    assert!(!text.lines().skip(1).any(|l| l.trim() == "0"));
}

#[test]
fn verify_agrees_with_the_oracles() {
    let d = scratch("verify");
    let path = d.join("r.tree");
    let o = tc(&[
        "gen",
        "random",
        "60",
        "--seed",
        "3",
        "--ew",
        "1:9",
        "--vw",
        "0:9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for problem in ["mwm", "mis", "matching", "mwis", "height"] {
        let o = tc(&[
            "verify",
            "--problem",
            problem,
            "--input",
            path.to_str().unwrap(),
            "--strict",
        ]);
        assert_eq!(o.status.code(), Some(0), "{problem}: {}", stdout(&o));
        for line in stdout(&o).lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["equal"], true, "{problem}: {line}");
        }
    }
}

#[test]
fn generated_files_reparse_and_repeat() {
    let d = scratch("gen");
    let a = tc(&["gen", "random", "100", "--seed", "7"]);
    let b = tc(&["gen", "random", "100", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(LabeledTree::parse(&text).unwrap().to_text(), text);
    let p = tc(&["gen", "path", "5"]);
    let lt = LabeledTree::parse(&stdout(&p)).unwrap();
    assert_eq!((lt.tree.len(), lt.tree.height()), (5, 4));
    let o = tc(&["gen", "all-shapes", "5", "--out", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&d).unwrap().count(), 9);
}

#[test]
fn isomorphism_verdicts() {
    let d = scratch("iso");
    let a = write(&d, "a.tree", "4 0\n0 -\n1 0\n2 1\n3 0\n");
    let b = write(&d, "b.tree", "4 3\n0 3\n1 3\n2 1\n3 -\n");
    let c = write(&d, "c.tree", "4 0\n0 -\n1 0\n2 0\n3 0\n");
    assert_eq!(
        tc(&["solve", "--problem", "iso", "--input", &a, "--input", &b])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        tc(&["solve", "--problem", "iso", "--input", &a, "--input", &c])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bench_writes_the_csv_header_and_rows() {
    let o = tc(&["bench", "--family", "path", "--sizes", "1,64,256"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n,epsilon,rounds,peak_words"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("path,1,"));
}

#[test]
fn input_errors_exit_three() {
    assert_eq!(
        tc(&[
            "solve",
            "--problem",
            "mwm",
            "--input",
            "/nonexistent/x.tree"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        tc(&[
            "solve",
            "--problem",
            "mwm",
            "--input",
            "x",
            "--epsilon",
            "1.5"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        tc(&["solve", "--problem", "nope", "--input", "x"])
            .status
            .code(),
        Some(3)
    );
    let d = scratch("bad");
    let bad = write(&d, "cycle.tree", "2 0\n0 -\n1 1\n");
    assert_eq!(
        tc(&["solve", "--problem", "mis", "--input", &bad])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(tc(&["--help"]).status.code(), Some(0));
}
