use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dualbench::generators::kleene_k;
use dualbench::io::{algebra_to_json, read_algebra, read_space};
use tempfile::TempDir;

const CLAUSE: &str = "~x <= x, x /\\ ~y <= ~x \\/ y => ~y <= y";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualbench"))
        .arg("--no-cache")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_k(dir: &Path) -> PathBuf {
    let p = dir.join("K.json");
    std::fs::write(&p, algebra_to_json(&kleene_k())).unwrap();
    p
}

#[test]
fn check_reports_the_witness() {
    let dir = TempDir::new().unwrap();
    let k = write_k(dir.path());
    let o = run(&["check", "--variety", "ka", "--clause", CLAUSE, "--algebra", k.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "false; witness x:=a, y:=0\n");

    let again = run(&["check", "--variety", "ka", "--clause", CLAUSE, "--algebra", k.to_str().unwrap()]);
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn check_json_and_clause_file() {
    let dir = TempDir::new().unwrap();
    let clause = dir.path().join("c.txt");
    std::fs::write(&clause, format!("{CLAUSE}\n")).unwrap();
    let o = run(&["--json", "check", "--variety", "ka", "--clause-file", clause.to_str().unwrap(), "--algebra", "K"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"], "x:=a, y:=0");
}

#[test]
fn free_size_only() {
    let o = run(&["free", "--variety", "bdl", "-n", "2", "--size-only"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "6\n");
    let o = run(&["free", "--variety", "ka", "-n", "1", "--size-only"]);
    assert_eq!(stdout(&o), "6\n");
}

#[test]
fn free_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("f.json");
    let dot = dir.path().join("f.dot");
    let o = run(&[
        "free",
        "--variety",
        "st",
        "-n",
        "1",
        "--output",
        out.to_str().unwrap(),
        "--emit-dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let a = read_algebra(&out).unwrap();
    assert_eq!(a.size(), 6);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"), "{text}");
    assert!(text.contains("p1"), "{text}");
}

#[test]
fn verify_dma_has_no_disagreements() {
    let o = run(&["verify", "--variety", "dma", "--max-power", "2", "--max-size", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("0 disagreements\n"), "{}", stdout(&o));
}

#[test]
fn verify_random_clauses() {
    let o = run(&["--seed", "7", "verify", "--variety", "kl", "--n-cap", "3", "--random", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("random clauses: 40 checked, 0 inconsistent (seed 7)"), "{}", stdout(&o));
}

#[test]
fn dual_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let k = write_k(dir.path());
    let space = dir.path().join("x.json");
    let dot = dir.path().join("x.dot");
    let o = run(&[
        "dual",
        "--variety",
        "dma",
        "--algebra",
        "D",
        "--output",
        space.to_str().unwrap(),
        "--emit-dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert!(read_space(&space).is_ok());
    assert!(std::fs::read_to_string(&dot).unwrap().contains("label=\"f\""));

    let back = dir.path().join("a.json");
    let o = run(&["dual", "--variety", "dma", "--space", space.to_str().unwrap(), "--output", back.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(read_algebra(&back).unwrap().size(), 4);

    let o = run(&["dual", "--variety", "ka", "--algebra", k.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"kind\": \"kleene\""));
}

#[test]
fn admissible_verdicts() {
    let o = run(&["admissible", "--variety", "ka", "--clause", CLAUSE]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("admissible;"), "{}", stdout(&o));

    let o = run(&["--json", "admissible", "--variety", "bdl", "--clause", "x = y => false"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "not_admissible");
    assert_eq!(v["counterexample"]["assignment"], "x:=0, y:=0");

    let o = run(&["admissible", "--variety", "bdl", "--clause", "x /\\ y = bot => x = bot", "--quasi-exact"]);
    assert_eq!(stdout(&o), "not_admissible\n");
}

#[test]
fn classify_and_enumerate() {
    let o = run(&["classify", "--variety", "st"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("non-negative universally complete: true"));

    let dir = TempDir::new().unwrap();
    let o = run(&["--json", "enumerate", "--variety", "ka", "--output", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let listed: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!listed.is_empty());
    for i in 0..listed.len() {
        let a = read_algebra(&dir.path().join(format!("member-{i}.json"))).unwrap();
        assert_eq!(listed[i]["size"], a.size());
    }
}

#[test]
fn member_reports_every_route() {
    let o = run(&["member", "--variety", "ka", "--algebra", "K"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("ISP(F): false"), "{text}");
    for route in ["clause:", "dual:", "witness:"] {
        assert!(text.contains(route), "{text}");
    }
}

#[test]
fn exit_codes() {
    let o = run(&["bogus"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(stderr(&o).lines().count(), 1);

    let o = run(&["check", "--variety", "ka", "--clause", "x = ", "--algebra", "K"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).contains("column 5"), "{}", stderr(&o));

    let o = run(&["check", "--variety", "ka", "--clause", CLAUSE, "--algebra", "/nonexistent/K.json"]);
    assert_eq!(o.status.code(), Some(74), "{}", stderr(&o));

    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"name\": \"x\"").unwrap();
    let o = run(&["check", "--variety", "ka", "--clause", CLAUSE, "--algebra", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
    assert_eq!(stderr(&o).lines().count(), 1);

    let o = run(&["admissible", "--variety", "ka", "--clause", CLAUSE, "--quasi-exact"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}
