use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multicut"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const PATH4: &str = "p multicut vertex 4 3 1\ne 1 2\ne 2 3\ne 3 4\nt 1 4\n";

fn grid(rows: usize, cols: usize) -> String {
    let id = |r: usize, c: usize| r * cols + c + 1;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let pairs = [
        (id(0, 0), id(rows - 1, cols - 1)),
        (id(0, cols - 1), id(rows - 1, 0)),
        (id(1, 2), id(2, 4)),
    ];
    let mut s = format!(
        "p multicut vertex {} {} {}\n",
        rows * cols,
        edges.len(),
        pairs.len()
    );
    for (u, v) in edges {
        s += &format!("e {u} {v}\n");
    }
    for (a, b) in pairs {
        s += &format!("t {a} {b}\n");
    }
    s
}

#[test]
fn solved_json_has_the_documented_schema() {
    let f = file(PATH4);
    let o = run(&[
        "solve",
        f.path().to_str().unwrap(),
        "--budget",
        "1",
        "--json",
        "--no-timing",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = doc
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(
        keys,
        [
            "status",
            "cutset",
            "size",
            "certificate",
            "stats",
            "mode",
            "seed"
        ]
    );
    assert_eq!(doc["status"], "solved");
    assert_eq!(doc["size"], 1);
    let cut = doc["cutset"].as_array().unwrap()[0].as_u64().unwrap();
    assert!((1..=4).contains(&cut));
    assert_eq!(doc["certificate"]["all_pass"], true);
    assert_eq!(doc["mode"], "sampled");
    assert_eq!(doc["seed"], 7);
    for k in [
        "flow_calls",
        "instances_emitted",
        "restarts_used",
        "wall_ms",
    ] {
        assert!(doc["stats"][k].is_u64(), "{k}");
    }
    assert_eq!(doc["stats"]["wall_ms"], 0);
}

#[test]
fn exit_codes() {
    let f = file(PATH4);
    let path = f.path().to_str().unwrap();
    assert_eq!(code(&run(&["solve", path, "--budget", "0"])), 1);
    assert_eq!(
        code(&run(&[
            "solve",
            path,
            "--budget",
            "1",
            "--mode",
            "exhaustive-z"
        ])),
        0
    );
    assert_eq!(
        code(&run(&["solve", path, "--budget", "1", "--mode", "bogus"])),
        3
    );
    assert_eq!(
        code(&run(&[
            "solve",
            "/nonexistent/instance.txt",
            "--budget",
            "1"
        ])),
        3
    );
    assert_eq!(code(&run(&["--help"])), 0);

    let g = file(&grid(4, 6));
    let o = run(&[
        "solve",
        g.path().to_str().unwrap(),
        "--budget",
        "1",
        "--restarts",
        "3",
        "--json",
    ]);
    assert_eq!(code(&o), 2);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["status"], "inconclusive");
    assert!(doc["cutset"].is_null());
}

#[test]
fn parse_errors_report_the_line() {
    let f = file("p multicut vertex 3 2 0\ne 1 2\ne 2 2\n");
    let o = run(&["solve", f.path().to_str().unwrap(), "--budget", "1"]);
    assert_eq!(code(&o), 3);
    let err = stderr(&o);
    assert!(err.contains("line 3") && err.contains("self-loop"), "{err}");

    let f = file("p multicut vertex 4 2 1\ne 1 2\ne 2 3\nt 1 3\nw 4\n");
    let o = run(&["solve", f.path().to_str().unwrap(), "--budget", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("W does not separate"));
}

#[test]
fn star_files_are_solved_as_star_instances() {
    // W = {1, 4} on the path: either inner vertex splits them and the pair
    let f = file("p multicut vertex 4 3 1\ne 1 2\ne 2 3\ne 3 4\nt 2 4\nw 1\nw 4\n");
    let o = run(&[
        "solve",
        f.path().to_str().unwrap(),
        "--budget",
        "1",
        "--json",
        "--mode",
        "exhaustive-z",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["cutset"] == serde_json::json!([2]) || doc["cutset"] == serde_json::json!([3]));
    assert_eq!(doc["certificate"]["checks"]["w_disjoint"], true);
}

#[test]
fn edge_instances_report_edges() {
    let f = file("p multicut edge 3 3 1\ne 1 2\ne 2 3\ne 1 3\nt 1 2\n");
    let path = f.path().to_str().unwrap();
    let o = run(&[
        "solve-edge",
        path,
        "--budget",
        "2",
        "--json",
        "--mode",
        "exhaustive-z",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["size"], 2);
    assert!(doc["cutset"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e.as_array().unwrap().len() == 2));
    assert_eq!(doc["certificate"]["checks"]["is_edge_multicut"], true);
    assert_eq!(
        code(&run(&[
            "solve",
            path,
            "--budget",
            "1",
            "--mode",
            "exhaustive-z"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "solve-edge",
            path,
            "--budget",
            "2",
            "--vertex-cap",
            "4"
        ])),
        3
    );
}

#[test]
fn gen_is_deterministic_and_parseable() {
    let args = [
        "gen", "planted", "--n", "20", "--cut", "2", "--pairs", "4", "--seed", "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let other = run(&[
        "gen", "planted", "--n", "20", "--cut", "2", "--pairs", "4", "--seed", "12",
    ]);
    assert_ne!(a.stdout, other.stdout);

    let f = file(&stdout(&a));
    let o = run(&[
        "solve",
        f.path().to_str().unwrap(),
        "--budget",
        "2",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let r = run(&[
        "gen", "random", "--n", "8", "--pairs", "3", "--prob", "0.3", "--edge", "--seed", "2",
    ]);
    assert!(stdout(&r).starts_with("p multicut edge 8 "));
}

#[test]
fn debug_subcommands() {
    let f = file(PATH4);
    let path = f.path().to_str().unwrap();

    let o = run(&[
        "important-seps",
        path,
        "--source",
        "1",
        "--sink",
        "4",
        "--budget",
        "1",
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["count"], 1);
    assert_eq!(doc["separators"], serde_json::json!([[3]]));

    let o = run(&["shadows", path, "--w", "1", "--cut", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("shadow: 3 4\n"), "{}", stdout(&o));

    let o = run(&["oracle", path, "--budget", "1", "--query", "multicut"]);
    assert!(stdout(&o).contains("size 1"));
    let o = run(&["oracle", path, "--budget", "1", "--query", "closest"]);
    assert_eq!(code(&o), 3, "closest sets need W: {}", stdout(&o));

    let cnf = file("p cnf 2 4\n1 0\n-1 0\n2 0\n-2 0\n");
    let cnf_path = cnf.path().to_str().unwrap();
    assert_eq!(code(&run(&["almost2sat", cnf_path, "--budget", "1"])), 1);
    let o = run(&["almost2sat", cnf_path, "--budget", "2"]);
    assert_eq!(code(&o), 0);
    assert!(
        stdout(&o).contains("delete 2 variables: 1 2"),
        "{}",
        stdout(&o)
    );

    let star = file("p multicut vertex 5 4 0\ne 1 4\ne 2 4\ne 3 4\ne 4 5\nw 1\nw 2\nw 3\n");
    let o = run(&["bipedal", star.path().to_str().unwrap(), "--budget", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(
        stdout(&o).contains("solved base cases: 1"),
        "{}",
        stdout(&o)
    );

    let o = run(&[
        "sample-z", path, "--w", "1", "--budget", "1", "--count", "3", "--seed", "5",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 3);
}
