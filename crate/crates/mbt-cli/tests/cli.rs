use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn workdir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn mbt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbt")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn digest_of(texts: &[&str]) -> String {
    let mut h = Sha256::new();
    for t in texts {
        h.update((t.len() as u64).to_le_bytes());
        h.update(t.as_bytes());
    }
    hex::encode(h.finalize())
}

#[test]
fn solve_output_is_deterministic_and_digested() {
    let dir = workdir("determinism");
    let g = dir.join("g.mbt");
    let g = g.to_str().unwrap();
    assert!(mbt(&["gen", "--kind", "undir", "--n", "8", "--m", "12", "--seed", "4", "--out", g]).status.success());
    let a = mbt(&["solve", "--in", g, "--algo", "treewidth"]);
    let b = mbt(&["solve", "--in", g, "--algo", "treewidth"]);
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(report["subcommand"], "solve");
    assert_eq!(report["inputs_digest"], digest_of(&[&std::fs::read_to_string(g).unwrap()]));
    assert_eq!(report["seed"], 0x5EED);
}

#[test]
fn algorithms_agree_on_a_small_graph() {
    let dir = workdir("agree");
    // a 2x3 grid is bipartite and a permutation graph
    let g = write(&dir, "grid.mbt", "mbt undir 6 7\n0 1\n1 2\n3 4\n4 5\n0 3\n1 4\n2 5\n");
    let sizes: Vec<Value> = ["brute", "biperm", "treewidth", "fpt"].iter().map(|a| json(&mbt(&["solve", "--in", &g, "--algo", a]))["result"]["size"].clone()).collect();
    assert!(sizes.iter().all(|s| *s == sizes[0]), "{sizes:?}");
    assert_eq!(sizes[0], 6);
}

#[test]
fn solver_output_verifies_and_tampering_is_caught() {
    let dir = workdir("verify");
    let g = write(&dir, "g.mbt", "mbt dir 4 4\n1 0\n2 0\n3 1\n3 2\n");
    let report = json(&mbt(&["solve", "--in", &g, "--root", "0"]));
    assert_eq!(report["result"]["size"], 4);
    let tree = write(&dir, "t.json", &report["result"]["tree"].to_string());
    assert_eq!(json(&mbt(&["verify-tree", "--in", &g, "--tree", &tree]))["result"]["valid"], true);
    let bad = write(&dir, "bad.json", r#"{"root":0,"edges":[[1,0],[2,0],[3,1],[3,2]]}"#);
    assert_eq!(mbt(&["verify-tree", "--in", &g, "--tree", &bad]).status.code(), Some(4));
}

#[test]
fn exit_codes() {
    let dir = workdir("codes");
    assert_eq!(mbt(&["solve"]).status.code(), Some(2));
    assert_eq!(mbt(&["solve", "--in", "/nonexistent/file"]).status.code(), Some(2));
    let big = dir.join("big.mbt");
    assert!(mbt(&["gen", "--kind", "undir", "--n", "30", "--m", "40", "--out", big.to_str().unwrap()]).status.success());
    assert_eq!(mbt(&["solve", "--in", big.to_str().unwrap(), "--algo", "brute"]).status.code(), Some(3));
    let path = write(&dir, "p.mbt", "mbt undir 3 2\n0 1\n1 2\n");
    let td = write(&dir, "bad.td", "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n");
    assert_eq!(mbt(&["td-check", "--in", &path, "--td", &td]).status.code(), Some(4));
}

#[test]
fn lp_round_trip_and_gap_ratio() {
    let dir = workdir("lp");
    let g = write(&dir, "gap.mbt", "mbt dir 10 13\n1 0\n2 0\n3 0\n4 1\n4 3\n5 0\n6 1\n6 5\n7 3\n7 5\n8 2\n8 4\n9 2\n");
    let lp = mbt(&["lp-emit", "--in", &g, "--root", "0"]);
    assert!(lp.status.success());
    let text = String::from_utf8(lp.stdout).unwrap();
    assert!(text.starts_with('\\') && text.contains("Subject To") && text.trim_end().ends_with("End"));

    let y: Vec<String> = [0, 1, 1, 1, 2, 1, 2, 2, 2, 1].iter().enumerate().map(|(u, &d)| if u == 0 { "1".into() } else { format!("{d}/2") }).collect();
    let arcs = [(1, 0), (2, 0), (3, 0), (4, 1), (4, 3), (5, 0), (6, 1), (6, 5), (7, 3), (7, 5), (8, 2), (8, 4), (9, 2)];
    let x: Vec<Value> = arcs.iter().map(|&(u, v)| serde_json::json!({"arc": [u, v], "value": "1/2"})).collect();
    let sol = write(&dir, "half.json", &serde_json::json!({"y": y, "x": x}).to_string());
    let report = json(&mbt(&["lp-verify", "--in", &g, "--root", "0", "--sol", &sol, "--opt", "7"]));
    assert_eq!(report["result"]["feasible"], true);
    assert_eq!(report["result"]["objective"], "15/2");
    assert_eq!(report["result"]["gap_ratio"], "15/14");

    let broken = write(&dir, "broken.json", &serde_json::json!({"y": y, "x": []}).to_string());
    assert_eq!(mbt(&["lp-verify", "--in", &g, "--root", "0", "--sol", &broken]).status.code(), Some(3));
}

#[test]
fn heapable_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mbt")).arg("heapable").stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(b"5 1 3 2 4 6\n").unwrap();
    let out = child.wait_with_output().unwrap();
    let report = json(&out);
    assert_eq!(report["result"]["length"], 5);
    assert_eq!(report["result"]["input_heapable"], false);
}

#[test]
fn gadget_and_color_extract_round_trip() {
    let dir = workdir("gadget");
    let g = write(&dir, "k3.mbt", "mbt undir 3 3\n0 1\n0 2\n1 2\n");
    let col = write(&dir, "c.json", r#"["R","G","B"]"#);
    let dag = dir.join("dag.mbt");
    let report = json(&mbt(&["gadget-3col", "--in", &g, "--coloring", &col, "--out", dag.to_str().unwrap()]));
    assert_eq!(report["result"]["big_n"], 213);
    assert_eq!(report["result"]["size"], 204);
    assert!(std::fs::read_to_string(&dag).unwrap().starts_with("mbt dir 213"));
    let tree = write(&dir, "t.json", &report["result"]["tree"].to_string());
    let back = json(&mbt(&["color-extract", "--in", &g, "--tree", &tree]));
    assert_eq!(back["result"]["coloring"], serde_json::json!(["R", "G", "B"]));
    assert_eq!(back["result"]["monochromatic_edges"], 0);
}

#[test]
fn square_boost_extract_pipeline() {
    let dir = workdir("square");
    let g = write(&dir, "p3.mbt", "mbt undir 3 2\n0 1\n1 2\n");
    let sq = json(&mbt(&["square", "--in", &g, "--out", dir.join("sq.mbt").to_str().unwrap()]));
    assert_eq!(sq["result"]["squared_n"], 3 + (2 + 6) * 3);
    let t1 = write(&dir, "t1.json", r#"{"edges":[[0,1],[1,2]]}"#);
    let boosted = json(&mbt(&["boost", "--in", &g, "--tree", &t1]));
    assert_eq!(boosted["result"]["size"], 2 * 9 + 2 * 3);
    let t2 = write(&dir, "t2.json", &boosted["result"]["tree"].to_string());
    let back = json(&mbt(&["extract", "--in", &g, "--tree", &t2]));
    assert!(back["result"]["size"].as_u64().unwrap() >= 3);
}

#[test]
fn tsp_tour_visits_every_city() {
    let dir = workdir("tsp");
    let out = mbt(&["gen", "--kind", "tsp12", "--n", "6", "--m", "5", "--seed", "2"]);
    assert!(out.status.success());
    let inst = write(&dir, "t.txt", &String::from_utf8(out.stdout).unwrap());
    let report = json(&mbt(&["tsp12-tour", "--in", &inst]));
    let order = report["result"]["order"].as_array().unwrap();
    assert_eq!(order.len(), 6);
    assert!(report["result"]["weight"].as_u64().unwrap() <= 12);
}
